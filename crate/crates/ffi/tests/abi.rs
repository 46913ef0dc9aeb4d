use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use nosil_ffi::*;

fn last_error() -> String {
    let p = nosil_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn circle_region_round_trip() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(nosil_curve_circle(1.0, &mut c), NosilStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(nosil_region(c, std::f64::consts::FRAC_PI_4, 2048, 32, &mut r), NosilStatus::Ok);
        let mut area = 0.0;
        let mut diameter = 0.0;
        assert_eq!(
            nosil_region_summary(
                r,
                &mut area,
                &mut diameter,
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut()
            ),
            NosilStatus::Ok
        );
        assert!((area - std::f64::consts::FRAC_PI_2).abs() < 1e-2);
        assert!((diameter - 2f64.sqrt()).abs() < 1e-2);

        let mut count = 0;
        assert_eq!(nosil_region_vertices(r, ptr::null_mut(), 0, &mut count), NosilStatus::Ok);
        let mut small = vec![0.0; 2];
        assert_eq!(nosil_region_vertices(r, small.as_mut_ptr(), 1, &mut count), NosilStatus::BufferTooSmall);
        let mut xy = vec![0.0; 2 * count];
        assert_eq!(nosil_region_vertices(r, xy.as_mut_ptr(), count, &mut count), NosilStatus::Ok);
        assert!(xy.chunks(2).all(|p| (p[0].hypot(p[1]) - 0.5f64.sqrt()).abs() < 1e-3));

        let mut empty = ptr::NonNull::dangling().as_ptr();
        assert_eq!(nosil_region(c, std::f64::consts::FRAC_PI_2, 2048, 32, &mut empty), NosilStatus::Empty);
        assert!(empty.is_null());
        let (mut x, mut y, mut m) = (0.0, 0.0, 0.0);
        assert_eq!(
            nosil_find_seed(c, std::f64::consts::FRAC_PI_2, 32, 2048, &mut x, &mut y, &mut m),
            NosilStatus::Empty
        );

        nosil_region_free(r);
        nosil_curve_free(c);
    }
}

#[test]
fn constructions_agree_through_the_abi() {
    unsafe {
        let spec = CString::new("ellipse:2,1").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(nosil_curve_from_spec(spec.as_ptr(), &mut c), NosilStatus::Ok);
        let (mut x, mut y, mut m) = (0.0, 0.0, 0.0);
        assert_eq!(nosil_find_seed(c, 0.3, 32, 2048, &mut x, &mut y, &mut m), NosilStatus::Ok);
        let (mut inside, mut margin) = (false, 0.0);
        assert_eq!(nosil_membership(c, 0.3, x, y, 2048, &mut inside, &mut margin), NosilStatus::Ok);
        assert!(inside && margin > 0.0);

        let (mut a, mut s, mut b) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(nosil_region_by_clipping(c, 0.3, x, y, 2048, &mut a), NosilStatus::Ok);
        assert_eq!(nosil_support_function(c, 0.3, x, y, 2048, 1024, &mut s), NosilStatus::Ok);
        assert_eq!(nosil_region_by_support(s, &mut b), NosilStatus::Ok);
        let mut d = 0.0;
        assert_eq!(nosil_hausdorff(a, b, 1e-3, &mut d), NosilStatus::Ok);
        assert!(d < 1e-3, "{d}");
        assert_eq!(nosil_hausdorff(a, b, 0.0, &mut d), NosilStatus::InvalidArgument);

        let mut count = 0;
        assert_eq!(nosil_support_values(s, ptr::null_mut(), 0, &mut count), NosilStatus::Ok);
        assert_eq!(count, 1024);

        nosil_region_free(a);
        nosil_region_free(b);
        nosil_support_free(s);
        nosil_curve_free(c);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(nosil_curve_ellipse(-1.0, 1.0, &mut c), NosilStatus::InvalidCurve);
        assert!(last_error().contains("ellipse"), "{}", last_error());
        assert_eq!(nosil_curve_circle(1.0, ptr::null_mut()), NosilStatus::NullPointer);
        let mut scale = 0.0;
        assert_eq!(nosil_curve_scale(ptr::null(), &mut scale), NosilStatus::NullPointer);

        let mut values = vec![1.0; 512];
        values[7] = -1.0;
        let mut s = ptr::null_mut();
        assert_eq!(nosil_support_new(values.as_ptr(), 512, 0.0, 0.0, 0.0, &mut s), NosilStatus::InvalidSupport);
        assert!(s.is_null());
        assert!(last_error().contains("-1"));

        assert_eq!(nosil_curve_circle(1.0, &mut c), NosilStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(nosil_region_by_clipping(c, 0.3, 5.0, 5.0, 2048, &mut r), NosilStatus::InvalidArgument);
        assert!(r.is_null());
        nosil_curve_free(c);
        nosil_curve_free(ptr::null_mut());
    }
}

#[test]
fn tabulated_curve_and_aperture() {
    unsafe {
        let n = 128;
        let xs: Vec<f64> = (0..n).map(|i| (std::f64::consts::TAU * i as f64 / n as f64).cos()).collect();
        let ys: Vec<f64> = (0..n).map(|i| (std::f64::consts::TAU * i as f64 / n as f64).sin()).collect();
        let mut c = ptr::null_mut();
        assert_eq!(nosil_curve_from_points(xs.as_ptr(), ys.as_ptr(), n, &mut c), NosilStatus::Ok);
        let (mut lo, mut hi, mut px, mut py) = (0.0, 0.0, 1.0, 1.0);
        let status = nosil_aperture(c, 1e-3, 1024, &mut lo, &mut hi, &mut px, &mut py, ptr::null_mut());
        assert_eq!(status, NosilStatus::Ok);
        assert!(hi - lo <= 1e-3 && (lo - std::f64::consts::FRAC_PI_2).abs() < 5e-3);
        assert!(px.hypot(py) < 1e-3);
        nosil_curve_free(c);
    }
}

#[test]
fn header_declares_the_abi_and_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nosil.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["nosil_region", "nosil_support_function", "nosil_aperture", "nosil_last_error", "NOSIL_STATUS_EMPTY"] {
        assert!(text.contains(name), "{name}");
    }
    // compilers are optional on build machines; only check when one exists
    if let Ok(o) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).output() {
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
}
