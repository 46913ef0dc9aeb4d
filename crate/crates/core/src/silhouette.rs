//! The no-silhouette `NS(theta)`: the set of points that lie on no rotated
//! tangent line.
//!
//! With `d(s) = R_theta t(s)` and `n(s) = (d.y, -d.x)`, every rotated line is
//! the zero set of `f_s(P) = n(s).P - c(s)`. The orientation is continuous in
//! `s`, so a point misses every line iff `f_s(P)` keeps one sign over the
//! whole curve, and `NS` is the union of the two convex sets `{f_s > 0}` and
//! `{f_s < 0}`.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{tangent_line, ParametricCurve};
use crate::error::{Error, Result};
use crate::geom2d::{
    clip, convex_hull, foot_of_perpendicular, invert, signed_distance, ConvexPolygon, HalfPlane, Line2, Point2, Side,
};

pub const DEFAULT_CURVE_SAMPLES: usize = 2048;
pub const DEFAULT_DIRECTIONS: usize = 1024;
pub const DEFAULT_GRID: usize = 32;

/// Membership threshold, relative to the curve scale.
pub const EPS_MEMBER: f64 = 1e-7;
/// Below this refined margin (relative to scale) a region is declared empty.
pub const EPS_EMPTY: f64 = 1e-4;

const GOLDEN_ITERS: usize = 60;
const PATTERN_HALVINGS: usize = 40;
const PATTERN_DIRS: usize = 16;

/// A polygonal approximation of the closure of `NS(theta)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionApprox {
    pub theta: f64,
    /// A certified interior point.
    pub seed: Point2,
    pub polygon: ConvexPolygon,
    /// Distance from `seed` to the nearest rotated line.
    pub margin: f64,
}

/// Uniform samples of a support function about `center`; sample `i` belongs
/// to the direction at angle `2 pi i / M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportFn {
    pub center: Point2,
    pub theta: f64,
    values: Vec<f64>,
}

impl SupportFn {
    pub fn new(center: Point2, theta: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 256 {
            return Err(Error::InvalidSupport(format!("support needs at least 256 samples, got {}", values.len())));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidSupport(format!("support sample {i} is {v}, must be positive")));
        }
        if !center.is_finite() {
            return Err(Error::InvalidSupport("support center is not finite".into()));
        }
        Ok(Self { center, theta, values })
    }

    /// Samples `h(phi)` at `m` uniform directions about `center`.
    pub fn from_fn(center: Point2, theta: f64, m: usize, h: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..m).map(|i| h(TAU * i as f64 / m as f64)).collect();
        Self::new(center, theta, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn direction(&self, i: usize) -> Point2 {
        Point2::from_angle(TAU * i as f64 / self.values.len() as f64)
    }
}

/// The `N` sampled rotated lines, as `(normal, offset)` with
/// `f(P) = normal.P - offset`.
#[derive(Clone, Debug)]
pub struct LineFamily {
    pub theta: f64,
    pub lines: Vec<Line2>,
    scale: f64,
}

impl LineFamily {
    pub fn new(curve: &ParametricCurve, theta: f64, n: usize) -> Result<Self> {
        let lines = (0..n)
            .into_par_iter()
            .map(|i| tangent_line(curve, TAU * i as f64 / n as f64, theta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { theta, lines, scale: curve.scale() })
    }

    /// `(min_s f_s(P), min_s -f_s(P))`.
    pub fn signed_mins(&self, p: Point2) -> (f64, f64) {
        let mut pos = f64::INFINITY;
        let mut neg = f64::INFINITY;
        for l in &self.lines {
            let f = signed_distance(l, p);
            pos = pos.min(f);
            neg = neg.min(-f);
        }
        (pos, neg)
    }

    /// Positive inside `NS` (where it equals the sampled margin), negative
    /// outside. Each branch is concave.
    pub fn objective(&self, p: Point2) -> f64 {
        let (pos, neg) = self.signed_mins(p);
        pos.max(neg)
    }

    /// Sampled region `{sign * f_s >= level}` clipped from a square of side
    /// `8 * scale` about `center`.
    pub fn level_set(&self, center: Point2, sign: Side, level: f64) -> Option<ConvexPolygon> {
        let mut poly = ConvexPolygon::square(center, 8.0 * self.scale);
        for l in &self.lines {
            let shifted = Line2::from_normal(l.normal(), l.offset() + sign.sign() * level).ok()?;
            poly = clip(&poly, &HalfPlane::new(shifted, sign))?;
        }
        Some(poly)
    }
}

/// Distance from `p` to the nearest rotated line, minimized over the
/// continuous parameter. Returns `(inside, margin)`.
pub fn membership(curve: &ParametricCurve, theta: f64, p: Point2, n: usize) -> Result<(bool, f64)> {
    if n < 512 {
        return Err(Error::InvalidParameter(format!("membership needs N >= 512, got {n}")));
    }
    let signed = |s: f64| -> Result<f64> { Ok(signed_distance(&tangent_line(curve, s, theta)?, p)) };
    let dist = |s: f64| -> Result<f64> { Ok(signed(s)?.abs()) };
    let values = (0..n).into_par_iter().map(|i| signed(TAU * i as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
    let h = TAU / n as f64;
    // The orientation is continuous in s, so a sign change brackets a line
    // through p; a steep crossing can hide between samples from the
    // smallest-|f| refinement below.
    if let Some(i) = (0..n).find(|&i| values[i] * values[(i + 1) % n] <= 0.0) {
        let (mut lo, mut hi) = (TAU * i as f64 / n as f64, TAU * i as f64 / n as f64 + h);
        let lo_sign = values[i].signum();
        for _ in 0..GOLDEN_ITERS {
            let mid = 0.5 * (lo + hi);
            if signed(mid)?.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let margin = dist(lo)?.min(dist(hi)?);
        return Ok((margin > EPS_MEMBER * curve.scale(), margin));
    }
    let samples: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| samples[a].total_cmp(&samples[b]).then(a.cmp(&b)));
    let mut margin = samples[order[0]];
    for &i in order.iter().take(5) {
        let s0 = TAU * i as f64 / n as f64;
        margin = margin.min(golden_min(&dist, s0 - h, s0 + h)?);
    }
    Ok((margin > EPS_MEMBER * curve.scale(), margin))
}

fn golden_min(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = fc.min(fd);
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
        best = best.min(fc).min(fd);
    }
    Ok(best)
}

/// A certified interior point of `NS(theta)` and its refined margin, or
/// `None` when the region is empty at the `EPS_EMPTY` resolution.
pub fn find_seed(curve: &ParametricCurve, theta: f64, grid: usize) -> Result<Option<(Point2, f64)>> {
    find_seed_with(curve, theta, grid, DEFAULT_CURVE_SAMPLES)
}

pub fn find_seed_with(curve: &ParametricCurve, theta: f64, grid: usize, n: usize) -> Result<Option<(Point2, f64)>> {
    if grid < 32 {
        return Err(Error::InvalidParameter(format!("seed grid must be >= 32, got {grid}")));
    }
    let family = LineFamily::new(curve, theta, n)?;
    let scale = curve.scale();
    let threshold = EPS_EMPTY * scale;
    let (lo, hi) = curve.bbox();

    let lattice: Vec<Point2> = (0..grid * grid)
        .map(|k| {
            let (i, j) = (k % grid, k / grid);
            Point2::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / grid as f64,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / grid as f64,
            )
        })
        .collect();
    let values: Vec<f64> = lattice.par_iter().map(|&p| family.objective(p)).collect();
    let best = (0..values.len())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]).then(b.cmp(&a)))
        .expect("lattice is non-empty");
    let step = (hi.x - lo.x).max(hi.y - lo.y) / grid as f64;
    let p = pattern_search(&family, lattice[best], step);
    let (_, margin) = membership(curve, theta, p, n)?;
    if margin >= threshold {
        return Ok(Some((p, margin)));
    }

    // The lattice can straddle a thin region; decide emptiness exactly on the
    // sampled lines by clipping the level set at the emptiness threshold.
    let center = (lo + hi) * 0.5;
    for side in [Side::Positive, Side::Negative] {
        if let Some(poly) = family.level_set(center, side, threshold) {
            let p = pattern_search(&family, poly.centroid(), poly.scale().max(threshold));
            let (_, margin) = membership(curve, theta, p, n)?;
            if margin >= threshold {
                return Ok(Some((p, margin)));
            }
        }
    }
    Ok(None)
}

/// Compass search on the signed objective: 16 directions, halving the step
/// whenever no direction improves.
fn pattern_search(family: &LineFamily, start: Point2, step: f64) -> Point2 {
    let dirs: Vec<Point2> =
        (0..PATTERN_DIRS).map(|k| Point2::from_angle(TAU * k as f64 / PATTERN_DIRS as f64)).collect();
    let mut p = start;
    let mut val = family.objective(p);
    let mut step = step;
    let mut halvings = 0;
    let mut iters = 0;
    while halvings < PATTERN_HALVINGS && iters < 20_000 {
        iters += 1;
        let mut improved = false;
        for d in &dirs {
            let q = p + *d * step;
            let v = family.objective(q);
            if v > val {
                p = q;
                val = v;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
            halvings += 1;
        }
    }
    p
}

/// Intersects the half-planes of all `n` sampled rotated lines that contain
/// `seed`, starting from a square of side `8 * scale`.
pub fn region_by_clipping(curve: &ParametricCurve, theta: f64, seed: Point2, n: usize) -> Result<RegionApprox> {
    let (inside, margin) = membership(curve, theta, seed, n.max(512))?;
    if !inside {
        return Err(Error::InvalidParameter(format!(
            "seed ({}, {}) is not inside the no-silhouette at theta = {theta}",
            seed.x, seed.y
        )));
    }
    let family = LineFamily::new(curve, theta, n)?;
    let mut poly = ConvexPolygon::square(seed, 8.0 * curve.scale());
    for line in &family.lines {
        poly = clip(&poly, &HalfPlane::containing(*line, seed))
            .ok_or_else(|| Error::Inconsistent("half-plane clipping emptied the region around the seed".into()))?;
    }
    Ok(RegionApprox { theta, seed, polygon: poly, margin })
}

/// Post-hoc connectivity check: the centroid and the midpoints from the
/// centroid toward every vertex must pass membership.
pub fn verify_region(curve: &ParametricCurve, region: &RegionApprox, n: usize) -> Result<()> {
    let c = region.polygon.centroid();
    let mut probes = vec![c];
    probes.extend(region.polygon.vertices().iter().map(|v| c.lerp(*v, 0.5)));
    for p in probes {
        if !membership(curve, region.theta, p, n)?.0 {
            return Err(Error::Inconsistent(format!("interior probe ({}, {}) lies on a rotated line", p.x, p.y)));
        }
    }
    Ok(())
}

/// Feet of the perpendiculars from `seed` to the `n` sampled rotated lines.
pub fn pedal_curve(curve: &ParametricCurve, theta: f64, seed: Point2, n: usize) -> Result<Vec<Point2>> {
    let family = LineFamily::new(curve, theta, n)?;
    let tiny = 1e-12 * curve.scale();
    family
        .lines
        .iter()
        .map(|l| {
            let f = foot_of_perpendicular(l, seed);
            if f.distance(seed) <= tiny {
                Err(Error::Degenerate(format!("pedal point coincides with the seed ({}, {})", seed.x, seed.y)))
            } else {
                Ok(f)
            }
        })
        .collect()
}

/// Pedal points inverted in the unit circle about `seed`.
pub fn dual_curve(curve: &ParametricCurve, theta: f64, seed: Point2, n: usize) -> Result<Vec<Point2>> {
    pedal_curve(curve, theta, seed, n)?.into_iter().map(|f| invert(f, seed)).collect()
}

/// Support function of `NS(theta) - seed` from the hull of the dual points.
///
/// Inversion about the seed sends the ray `seed + t u` to the ray in
/// direction `-u` with distance `1/t`, so the ray meets the inverted hull
/// boundary exactly where the opposite ray leaves the hull.
pub fn support_function(curve: &ParametricCurve, theta: f64, seed: Point2, n: usize, m: usize) -> Result<SupportFn> {
    if m < 256 {
        return Err(Error::InvalidParameter(format!("support needs M >= 256, got {m}")));
    }
    let dual = dual_curve(curve, theta, seed, n)?;
    let hull = convex_hull(&dual);
    if hull.is_degenerate() {
        return Err(Error::Inconsistent("dual points have a degenerate hull".into()));
    }
    let edges: Vec<(Point2, Point2)> = hull.edges().map(|(a, b)| (a - seed, b - seed)).collect();
    let values = (0..m)
        .into_par_iter()
        .map(|i| {
            let u = Point2::from_angle(TAU * i as f64 / m as f64);
            let rho = ray_exit(&edges, -u)?;
            Ok(1.0 / rho)
        })
        .collect::<Result<Vec<_>>>()?;
    SupportFn::new(seed, theta, values)
}

/// Distance along `w` from the origin to the boundary of a polygon given by
/// its edges. Edges are half-open so a ray through a vertex counts once.
fn ray_exit(edges: &[(Point2, Point2)], w: Point2) -> Result<f64> {
    let mut hits = Vec::new();
    for &(a, b) in edges {
        let ca = w.cross(a);
        let cb = w.cross(b);
        // Counterclockwise edges cross the forward ray from its right to its
        // left; the start vertex is included and the end vertex is not.
        if !(ca <= 0.0 && cb > 0.0) {
            continue;
        }
        let lambda = ca / (ca - cb);
        let x = a.lerp(b, lambda);
        let t = x.dot(w);
        if t > 0.0 {
            hits.push(t);
        }
    }
    match hits.as_slice() {
        [t] => Ok(*t),
        _ => Err(Error::Inconsistent(format!("ray meets the inverted hull boundary {} times", hits.len()))),
    }
}

/// The Wulff shape of `sf`, translated to its center.
pub fn region_by_support(sf: &SupportFn) -> Result<RegionApprox> {
    let values = sf.values();
    let hmax = values.iter().cloned().fold(0.0, f64::max);
    let mut poly = ConvexPolygon::square(Point2::ORIGIN, 4.0 * hmax);
    for (i, &h) in values.iter().enumerate() {
        let line = Line2::from_normal(sf.direction(i), h)?;
        let hp = HalfPlane::containing(line, Point2::ORIGIN);
        poly = clip(&poly, &hp)
            .ok_or_else(|| Error::EmptyIntersection("support half-planes have empty intersection".into()))?;
    }
    let margin = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(RegionApprox { theta: sf.theta, seed: sf.center, polygon: poly.translated(sf.center), margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::hausdorff_polygons;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn circle() -> ParametricCurve {
        ParametricCurve::circle(1.0).unwrap()
    }

    fn disk(r: f64) -> ConvexPolygon {
        ConvexPolygon::regular(4096, r)
    }

    #[test]
    fn membership_examples() {
        let (inside, m) = membership(&circle(), 0.0, Point2::ORIGIN, 2048).unwrap();
        assert!(inside && (m - 1.0).abs() < 1e-12);
        assert!(!membership(&circle(), 0.0, Point2::new(2.0, 0.0), 2048).unwrap().0);
        let (inside, m) = membership(&circle(), FRAC_PI_3, Point2::ORIGIN, 2048).unwrap();
        assert!(inside && (m - 0.5).abs() < 1e-12);
        assert!(membership(&circle(), 0.0, Point2::ORIGIN, 100).is_err());
    }

    #[test]
    fn membership_refines_between_samples() {
        // (cos a, sin a) * 1.0001 with a halfway between samples: the
        // nearest line passes at distance 1e-4 only at the unsampled angle.
        let n = 512;
        let a = TAU * 0.5 / n as f64;
        let p = Point2::from_angle(a) * 0.9999;
        let (_, m) = membership(&circle(), 0.0, p, n).unwrap();
        assert!((m - 1e-4).abs() < 1e-10, "margin {m}");
    }

    #[test]
    fn seed_examples() {
        let (p, m) = find_seed(&circle(), 0.0, 32).unwrap().unwrap();
        assert!(p.norm() < 1e-3 && (m - 1.0).abs() < 1e-3);
        assert!(find_seed(&circle(), FRAC_PI_2, 32).unwrap().is_none());
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        let (p, m) = find_seed(&e, 0.0, 32).unwrap().unwrap();
        assert!(m > 0.0 && membership(&e, 0.0, p, 2048).unwrap().0);
    }

    #[test]
    fn seed_on_flower_near_aperture() {
        // aperture angle atan(sqrt(1 - e^2) / (e k)) for this flower
        let f = ParametricCurve::flower(4, 0.35).unwrap();
        let theta_r = ((1.0f64 - 0.35 * 0.35).sqrt() / 1.4).atan();
        assert!(find_seed(&f, theta_r - 0.02, 32).unwrap().is_some());
        assert!(find_seed(&f, theta_r + 0.02, 32).unwrap().is_none());
    }

    #[test]
    fn clipping_matches_disk_oracle() {
        for theta in [0.0, FRAC_PI_4] {
            let r = region_by_clipping(&circle(), theta, Point2::ORIGIN, 2048).unwrap();
            let d = hausdorff_polygons(&r.polygon, &disk(theta.cos()), 1e-3);
            assert!(d < 1e-3, "theta {theta}: d_H {d}");
            assert!(r.polygon.contains(r.seed, 0.0));
        }
        assert!(region_by_clipping(&circle(), 0.0, Point2::new(2.0, 0.0), 2048).is_err());
    }

    #[test]
    fn clipped_flower_passes_post_hoc_check() {
        let f = ParametricCurve::flower(4, 0.35).unwrap();
        let (seed, _) = find_seed(&f, 0.0, 32).unwrap().unwrap();
        let r = region_by_clipping(&f, 0.0, seed, 2048).unwrap();
        verify_region(&f, &r, 2048).unwrap();
        for v in r.polygon.vertices() {
            let (_, m) = membership(&f, 0.0, *v, 2048).unwrap();
            assert!(m < 1e-6 * f.scale() || r.polygon.contains(*v, 0.0));
        }
    }

    #[test]
    fn pedal_and_dual_examples() {
        for p in pedal_curve(&circle(), 0.0, Point2::ORIGIN, 512).unwrap() {
            assert!((p.norm() - 1.0).abs() < 1e-14);
        }
        for p in pedal_curve(&circle(), FRAC_PI_4, Point2::ORIGIN, 512).unwrap() {
            assert!((p.norm() - FRAC_PI_4.cos()).abs() < 1e-14);
        }
        for p in dual_curve(&circle(), FRAC_PI_3, Point2::ORIGIN, 512).unwrap() {
            assert!((p.norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_pedal_matches_classical_formula() {
        let (a, b) = (2.0, 1.0);
        let e = ParametricCurve::ellipse(a, b).unwrap();
        for p in pedal_curve(&e, 0.0, Point2::ORIGIN, 1024).unwrap() {
            let phi = p.angle();
            let expected = (a * a * phi.cos().powi(2) + b * b * phi.sin().powi(2)).sqrt();
            assert!((p.norm() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn off_center_pedal_is_a_limacon() {
        let seed = Point2::new(0.5, 0.0);
        for (f, d) in pedal_curve(&circle(), 0.0, seed, 1024)
            .unwrap()
            .into_iter()
            .zip(dual_curve(&circle(), 0.0, seed, 1024).unwrap())
        {
            // the foot along normal u sits at distance 1 - 0.5 cos(phi)
            let v = f - seed;
            let u = Point2::from_angle(v.angle());
            assert!((v.norm() - (1.0 - 0.5 * u.x)).abs() < 1e-12);
            let w = d - seed;
            assert!((w.norm() - 1.0 / (1.0 - 0.5 * u.x)).abs() < 1e-10);
            assert!(w.normalized().unwrap().distance(-u) < 1e-12);
        }
    }

    #[test]
    fn support_function_examples() {
        let sf = support_function(&circle(), 0.0, Point2::ORIGIN, 2048, 1024).unwrap();
        assert!(sf.values().iter().all(|h| (h - 1.0).abs() < 1e-5));
        let sf = support_function(&circle(), FRAC_PI_4, Point2::ORIGIN, 2048, 1024).unwrap();
        assert!(sf.values().iter().all(|h| (h - FRAC_PI_4.cos()).abs() < 1e-5));
        let sf = support_function(&circle(), FRAC_PI_6, Point2::ORIGIN, 2048, 1024).unwrap();
        let r = region_by_support(&sf).unwrap();
        assert!(hausdorff_polygons(&r.polygon, &disk(FRAC_PI_6.cos()), 1e-3) < 1e-3);
    }

    #[test]
    fn off_center_support_is_the_disk_support() {
        // NS(0) of the unit circle is the unit disk; from seed c its support
        // function is 1 - c.u.
        let seed = Point2::new(0.5, 0.0);
        let sf = support_function(&circle(), 0.0, seed, 4096, 512).unwrap();
        for (i, h) in sf.values().iter().enumerate() {
            let u = sf.direction(i);
            assert!((h - (1.0 - 0.5 * u.x)).abs() < 1e-5);
        }
    }

    #[test]
    fn support_region_examples() {
        let sf = SupportFn::from_fn(Point2::ORIGIN, 0.0, 2048, |_| 1.0).unwrap();
        let r = region_by_support(&sf).unwrap();
        assert!(hausdorff_polygons(&r.polygon, &disk(1.0), 1e-3) < 1e-3);
        let sf = SupportFn::from_fn(Point2::new(1.0, 2.0), 0.0, 512, |s| 1.0 + 0.1 * s.cos()).unwrap();
        let r = region_by_support(&sf).unwrap();
        assert!(r.polygon.contains(Point2::new(1.0, 2.0), 0.0));
        assert!(SupportFn::from_fn(Point2::ORIGIN, 0.0, 100, |_| 1.0).is_err());
        assert!(SupportFn::from_fn(Point2::ORIGIN, 0.0, 512, |s| s.cos()).is_err());
    }

    #[test]
    fn cross_construction_on_the_flower() {
        let f = ParametricCurve::flower(4, 0.35).unwrap();
        let (seed, _) = find_seed(&f, 0.0, 32).unwrap().unwrap();
        let a = region_by_clipping(&f, 0.0, seed, 2048).unwrap();
        let sf = support_function(&f, 0.0, seed, 2048, 2048).unwrap();
        let b = region_by_support(&sf).unwrap();
        let d = hausdorff_polygons(&a.polygon, &b.polygon, 1e-3 * f.scale());
        assert!(d <= 1e-3 * f.scale(), "d_H {d}");
    }
}
