//! C ABI over `nosil`.
//!
//! Curves, regions and support functions are opaque handles created by
//! `nosil_*_new`-style constructors and released with the matching `_free`.
//! Every fallible call returns a `NosilStatus`; on failure the message is
//! kept per thread and read with `nosil_last_error`. An empty no-silhouette
//! is not an error: it comes back as `NOSIL_STATUS_EMPTY` with the output
//! handle set to null.

// `!(x > y)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nosil::aperture::{aperture, region_at};
use nosil::curve::{parse_curve_spec, TableCurve};
use nosil::metric::hausdorff_polygons;
use nosil::silhouette::{find_seed_with, membership, region_by_clipping, region_by_support, support_function};
use nosil::{Error, ParametricCurve, Point2, RegionApprox, SupportFn};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NosilStatus {
    Ok = 0,
    /// The requested region is empty; output handles are null.
    Empty = 1,
    NullPointer = -1,
    InvalidArgument = -2,
    InvalidCurve = -3,
    Degenerate = -4,
    Inconsistent = -5,
    InvalidSupport = -6,
    Sphere = -7,
    BufferTooSmall = -8,
    Panic = -99,
}

/// Closed plane curve.
pub struct NosilCurve(ParametricCurve);

/// No-silhouette region: a convex polygon with its seed and margin.
pub struct NosilRegion(RegionApprox);

/// Support function sampled at uniform directions about a center.
pub struct NosilSupport(SupportFn);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NosilStatus {
    match e {
        Error::InvalidParameter(_) => NosilStatus::InvalidArgument,
        Error::InvalidCurve(_) | Error::Immersion { .. } => NosilStatus::InvalidCurve,
        Error::Degenerate(_) | Error::EmptyIntersection(_) => NosilStatus::Degenerate,
        Error::Inconsistent(_) => NosilStatus::Inconsistent,
        Error::InvalidSupport(_) => NosilStatus::InvalidSupport,
        Error::OutsideChart(_) | Error::Pole | Error::NotHemispherical => NosilStatus::Sphere,
        Error::EmptyAtStart { .. } => NosilStatus::Empty,
    }
}

enum Failure {
    Status(NosilStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn null() -> Failure {
    Failure::Status(NosilStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, recording any error or panic for `nosil_last_error`.
fn guard(f: impl FnOnce() -> Result<NosilStatus, Failure>) -> NosilStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            NosilStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn write_opt<T>(out: *mut T, v: T) {
    if !out.is_null() {
        out.write(v);
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nosil_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

unsafe fn emit_curve(c: ParametricCurve, out: *mut *mut NosilCurve) -> Result<NosilStatus, Failure> {
    write(out, Box::into_raw(Box::new(NosilCurve(c))))?;
    Ok(NosilStatus::Ok)
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_curve_circle(radius: f64, out: *mut *mut NosilCurve) -> NosilStatus {
    guard(|| emit_curve(ParametricCurve::circle(radius)?, out))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_curve_ellipse(a: f64, b: f64, out: *mut *mut NosilCurve) -> NosilStatus {
    guard(|| emit_curve(ParametricCurve::ellipse(a, b)?, out))
}

/// `r(s) = (1 - eps cos(k s)) (cos s, sin s)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_curve_flower(k: u32, eps: f64, out: *mut *mut NosilCurve) -> NosilStatus {
    guard(|| emit_curve(ParametricCurve::flower(k, eps)?, out))
}

/// Parses `circle:R`, `ellipse:A,B`, `flower:K,EPS` or `table:PATH`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_curve_from_spec(spec: *const c_char, out: *mut *mut NosilCurve) -> NosilStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| Failure::Status(NosilStatus::InvalidArgument, "curve spec is not UTF-8".into()))?;
        emit_curve(parse_curve_spec(s)?, out)
    })
}

/// Periodic spline through `n` points given at uniform parameters.
///
/// # Safety
/// `xs` and `ys` must point to `n` doubles each; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_curve_from_points(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    out: *mut *mut NosilCurve,
) -> NosilStatus {
    guard(|| {
        if xs.is_null() || ys.is_null() {
            return Err(null());
        }
        let (xs, ys) = (std::slice::from_raw_parts(xs, n), std::slice::from_raw_parts(ys, n));
        let pts = xs.iter().zip(ys).map(|(&x, &y)| Point2::new(x, y)).collect();
        emit_curve(ParametricCurve::table(TableCurve::uniform(pts)?)?, out)
    })
}

/// # Safety
/// `curve` must come from a `nosil_curve_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn nosil_curve_free(curve: *mut NosilCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Bounding-box diagonal, the unit of relative tolerances.
///
/// # Safety
/// `curve` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_curve_scale(curve: *const NosilCurve, out: *mut f64) -> NosilStatus {
    guard(|| {
        write(out, as_ref(curve)?.0.scale())?;
        Ok(NosilStatus::Ok)
    })
}

/// Whether `(x, y)` avoids every rotated tangent line, and its margin.
///
/// # Safety
/// `curve` must be a live handle; `inside` and `margin` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_membership(
    curve: *const NosilCurve,
    theta: f64,
    x: f64,
    y: f64,
    n: usize,
    inside: *mut bool,
    margin: *mut f64,
) -> NosilStatus {
    guard(|| {
        let (ok, m) = membership(&as_ref(curve)?.0, theta, Point2::new(x, y), n)?;
        write(inside, ok)?;
        write(margin, m)?;
        Ok(NosilStatus::Ok)
    })
}

/// A point of the region with its margin, or `NOSIL_STATUS_EMPTY`.
///
/// # Safety
/// `curve` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_find_seed(
    curve: *const NosilCurve,
    theta: f64,
    grid: usize,
    n: usize,
    x: *mut f64,
    y: *mut f64,
    margin: *mut f64,
) -> NosilStatus {
    guard(|| match find_seed_with(&as_ref(curve)?.0, theta, grid, n)? {
        None => Ok(NosilStatus::Empty),
        Some((p, m)) => {
            write(x, p.x)?;
            write(y, p.y)?;
            write(margin, m)?;
            Ok(NosilStatus::Ok)
        }
    })
}

unsafe fn emit_region(r: RegionApprox, out: *mut *mut NosilRegion) -> Result<NosilStatus, Failure> {
    write(out, Box::into_raw(Box::new(NosilRegion(r))))?;
    Ok(NosilStatus::Ok)
}

/// Seed search followed by clipping with `n` rotated tangent lines.
///
/// # Safety
/// `curve` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_region(
    curve: *const NosilCurve,
    theta: f64,
    n: usize,
    grid: usize,
    out: *mut *mut NosilRegion,
) -> NosilStatus {
    guard(|| {
        write(out, ptr::null_mut())?;
        match region_at(&as_ref(curve)?.0, theta, n, grid)? {
            None => Ok(NosilStatus::Empty),
            Some(r) => emit_region(r, out),
        }
    })
}

/// Clips a large square around a known interior seed.
///
/// # Safety
/// `curve` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_region_by_clipping(
    curve: *const NosilCurve,
    theta: f64,
    seed_x: f64,
    seed_y: f64,
    n: usize,
    out: *mut *mut NosilRegion,
) -> NosilStatus {
    guard(|| {
        write(out, ptr::null_mut())?;
        let r = region_by_clipping(&as_ref(curve)?.0, theta, Point2::new(seed_x, seed_y), n)?;
        emit_region(r, out)
    })
}

/// Wulff shape of a support function, placed at its center.
///
/// # Safety
/// `support` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_region_by_support(
    support: *const NosilSupport,
    out: *mut *mut NosilRegion,
) -> NosilStatus {
    guard(|| {
        write(out, ptr::null_mut())?;
        emit_region(region_by_support(&as_ref(support)?.0)?, out)
    })
}

/// # Safety
/// `region` must come from a region constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn nosil_region_free(region: *mut NosilRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// Copies up to `capacity` vertices as interleaved `x, y` pairs into `xy`
/// (which holds `2 * capacity` doubles) and stores the vertex count in
/// `count`. Pass `xy = NULL` to query the count alone.
///
/// # Safety
/// `region` must be a live handle; `xy` must hold `2 * capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn nosil_region_vertices(
    region: *const NosilRegion,
    xy: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> NosilStatus {
    guard(|| {
        let v = as_ref(region)?.0.polygon.vertices();
        write(count, v.len())?;
        if xy.is_null() {
            return Ok(NosilStatus::Ok);
        }
        if capacity < v.len() {
            return Err(Failure::Status(
                NosilStatus::BufferTooSmall,
                format!("region has {} vertices, buffer holds {capacity}", v.len()),
            ));
        }
        let buf = std::slice::from_raw_parts_mut(xy, 2 * v.len());
        for (i, p) in v.iter().enumerate() {
            buf[2 * i] = p.x;
            buf[2 * i + 1] = p.y;
        }
        Ok(NosilStatus::Ok)
    })
}

/// Area, diameter, centroid, seed and seed margin. Any output may be null.
///
/// # Safety
/// `region` must be a live handle; non-null outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_region_summary(
    region: *const NosilRegion,
    area: *mut f64,
    diameter: *mut f64,
    centroid_x: *mut f64,
    centroid_y: *mut f64,
    seed_x: *mut f64,
    seed_y: *mut f64,
    margin: *mut f64,
) -> NosilStatus {
    guard(|| {
        let r = &as_ref(region)?.0;
        let c = r.polygon.centroid();
        write_opt(area, r.polygon.area());
        write_opt(diameter, r.polygon.diameter());
        write_opt(centroid_x, c.x);
        write_opt(centroid_y, c.y);
        write_opt(seed_x, r.seed.x);
        write_opt(seed_y, r.seed.y);
        write_opt(margin, r.margin);
        Ok(NosilStatus::Ok)
    })
}

/// Hausdorff distance between two regions, boundaries subdivided at `step`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_hausdorff(
    a: *const NosilRegion,
    b: *const NosilRegion,
    step: f64,
    out: *mut f64,
) -> NosilStatus {
    guard(|| {
        if !(step > 0.0) {
            return Err(Failure::Status(NosilStatus::InvalidArgument, format!("step must be positive, got {step}")));
        }
        write(out, hausdorff_polygons(&as_ref(a)?.0.polygon, &as_ref(b)?.0.polygon, step))?;
        Ok(NosilStatus::Ok)
    })
}

unsafe fn emit_support(s: SupportFn, out: *mut *mut NosilSupport) -> Result<NosilStatus, Failure> {
    write(out, Box::into_raw(Box::new(NosilSupport(s))))?;
    Ok(NosilStatus::Ok)
}

/// Support function of the region about `seed`, at `m` uniform directions,
/// through pedal points, inversion and convex hull.
///
/// # Safety
/// `curve` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_support_function(
    curve: *const NosilCurve,
    theta: f64,
    seed_x: f64,
    seed_y: f64,
    n: usize,
    m: usize,
    out: *mut *mut NosilSupport,
) -> NosilStatus {
    guard(|| {
        write(out, ptr::null_mut())?;
        let s = support_function(&as_ref(curve)?.0, theta, Point2::new(seed_x, seed_y), n, m)?;
        emit_support(s, out)
    })
}

/// Support values `values[i]` at angle `2 pi i / m` about `(center_x,
/// center_y)`; every value must be positive and finite.
///
/// # Safety
/// `values` must point to `m` doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_support_new(
    values: *const f64,
    m: usize,
    center_x: f64,
    center_y: f64,
    theta: f64,
    out: *mut *mut NosilSupport,
) -> NosilStatus {
    guard(|| {
        write(out, ptr::null_mut())?;
        if values.is_null() {
            return Err(null());
        }
        let v = std::slice::from_raw_parts(values, m).to_vec();
        emit_support(SupportFn::new(Point2::new(center_x, center_y), theta, v)?, out)
    })
}

/// Copies the support values; semantics as `nosil_region_vertices`.
///
/// # Safety
/// `support` must be a live handle; `values` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn nosil_support_values(
    support: *const NosilSupport,
    values: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> NosilStatus {
    guard(|| {
        let v = as_ref(support)?.0.values();
        write(count, v.len())?;
        if values.is_null() {
            return Ok(NosilStatus::Ok);
        }
        if capacity < v.len() {
            return Err(Failure::Status(
                NosilStatus::BufferTooSmall,
                format!("support has {} values, buffer holds {capacity}", v.len()),
            ));
        }
        std::slice::from_raw_parts_mut(values, v.len()).copy_from_slice(v);
        Ok(NosilStatus::Ok)
    })
}

/// # Safety
/// `support` must come from a support constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn nosil_support_free(support: *mut NosilSupport) {
    if !support.is_null() {
        drop(Box::from_raw(support));
    }
}

/// Aperture angle bracket `[lo, hi]` no wider than `tol`, and the aperture
/// point with the diameter of the last region on the approach schedule.
/// Any output may be null.
///
/// # Safety
/// `curve` must be a live handle; non-null outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nosil_aperture(
    curve: *const NosilCurve,
    tol: f64,
    n: usize,
    theta_lo: *mut f64,
    theta_hi: *mut f64,
    point_x: *mut f64,
    point_y: *mut f64,
    final_diameter: *mut f64,
) -> NosilStatus {
    guard(|| {
        let a = aperture(&as_ref(curve)?.0, tol, n)?;
        write_opt(theta_lo, a.theta_r_bracket.0);
        write_opt(theta_hi, a.theta_r_bracket.1);
        write_opt(point_x, a.aperture_point.x);
        write_opt(point_y, a.aperture_point.y);
        write_opt(final_diameter, a.final_diameter);
        Ok(NosilStatus::Ok)
    })
}
