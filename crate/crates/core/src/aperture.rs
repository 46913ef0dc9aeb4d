//! How `NS(theta)` evolves with `theta`: sweeps, nesting, the aperture angle
//! where the region vanishes, and the point it shrinks to.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::ParametricCurve;
use crate::error::{Error, Result};
use crate::geom2d::{ConvexPolygon, Point2};
use crate::metric::hausdorff_polygons;
use crate::silhouette::{find_seed_with, membership, region_by_clipping, RegionApprox, DEFAULT_GRID};
use crate::wulff::{diagnose_polygon, ShapeDiagnostics};

/// Angular step of the coarse emptiness scan.
pub const SCAN_STEP: f64 = std::f64::consts::PI / 180.0;
/// Seed grid used close to the aperture angle, where regions are slivers.
pub const FINE_GRID: usize = 64;
/// Number of angles in the aperture-point schedule.
pub const POINT_SCHEDULE: usize = 12;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub thetas: Vec<f64>,
    /// `None` marks an empty region.
    pub regions: Vec<Option<RegionApprox>>,
    pub areas: Vec<f64>,
    pub diameters: Vec<f64>,
    /// Hausdorff distance to the previous region when both are non-empty.
    pub consecutive_dh: Vec<Option<f64>>,
}

impl SweepResult {
    pub fn max_consecutive_dh(&self) -> f64 {
        self.consecutive_dh.iter().flatten().cloned().fold(0.0, f64::max)
    }
}

/// `count` evenly spaced angles from `start` to `stop` inclusive.
pub fn theta_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// The region at `theta`, or `None` when it is empty.
pub fn region_at(curve: &ParametricCurve, theta: f64, n: usize, grid: usize) -> Result<Option<RegionApprox>> {
    match find_seed_with(curve, theta, grid, n)? {
        None => Ok(None),
        Some((seed, _)) => region_by_clipping(curve, theta, seed, n).map(Some),
    }
}

pub fn sweep(curve: &ParametricCurve, thetas: &[f64], n: usize) -> Result<SweepResult> {
    sweep_with(curve, thetas, n, DEFAULT_GRID)
}

pub fn sweep_with(curve: &ParametricCurve, thetas: &[f64], n: usize, grid: usize) -> Result<SweepResult> {
    if thetas.iter().any(|t| !(0.0..=FRAC_PI_2 + 1e-12).contains(t)) {
        return Err(Error::InvalidParameter("sweep angles must lie in [0, pi/2]".into()));
    }
    if thetas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("sweep angles must be strictly increasing".into()));
    }
    if find_seed_with(curve, 0.0, grid, n)?.is_none() {
        return Err(Error::EmptyAtStart { theta: 0.0 });
    }
    let regions = thetas.par_iter().map(|&t| region_at(curve, t, n, grid)).collect::<Result<Vec<_>>>()?;
    let step = 1e-3 * curve.scale();
    let consecutive_dh = (0..regions.len())
        .into_par_iter()
        .map(|i| match (i.checked_sub(1).and_then(|j| regions[j].as_ref()), regions[i].as_ref()) {
            (Some(a), Some(b)) => Some(hausdorff_polygons(&a.polygon, &b.polygon, step)),
            _ => None,
        })
        .collect();
    let areas = regions.iter().map(|r| r.as_ref().map_or(0.0, |r| r.polygon.area())).collect();
    let diameters = regions.iter().map(|r| r.as_ref().map_or(0.0, |r| r.polygon.diameter())).collect();
    Ok(SweepResult { thetas: thetas.to_vec(), regions, areas, diameters, consecutive_dh })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NestingReport {
    pub holds: bool,
    /// False when the curve has inflections, where nesting is not promised.
    pub guaranteed: bool,
    /// Largest distance by which a later region leaves an earlier one.
    pub worst_excess: f64,
}

/// Every region must lie inside every earlier one, vertex by vertex, within
/// `1e-6 * scale`.
pub fn nesting_check(curve: &ParametricCurve, sweep: &SweepResult) -> Result<NestingReport> {
    let guaranteed = crate::curve::inflection_points(curve, 4096)?.is_empty();
    let tol = 1e-6 * curve.scale();
    let present: Vec<&RegionApprox> = sweep.regions.iter().flatten().collect();
    let worst_excess = (0..present.len())
        .into_par_iter()
        .map(|j| {
            (0..j)
                .map(|i| {
                    present[j]
                        .polygon
                        .vertices()
                        .iter()
                        .map(|v| {
                            let earlier = &present[i].polygon;
                            if earlier.contains_point(*v) {
                                0.0
                            } else {
                                earlier.distance_to_boundary(*v)
                            }
                        })
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(NestingReport { holds: worst_excess <= tol, guaranteed, worst_excess: worst_excess.max(0.0) })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApertureAngle {
    pub theta_r: f64,
    pub bracket: (f64, f64),
    /// `(theta, non-empty)` on the coarse scan.
    pub scan: Vec<(f64, bool)>,
    /// A non-empty scan angle after the first empty one.
    pub non_monotone: bool,
}

/// Scans `[0, pi/2]` in steps of one degree for the first empty angle and
/// bisects down to a bracket no wider than `tol`.
pub fn aperture_angle(curve: &ParametricCurve, tol: f64, n: usize) -> Result<ApertureAngle> {
    if !(tol >= 1e-6) {
        return Err(Error::InvalidParameter(format!("aperture tolerance must be >= 1e-6, got {tol}")));
    }
    let steps = (FRAC_PI_2 / SCAN_STEP).round() as usize;
    let thetas: Vec<f64> = (0..=steps).map(|k| (k as f64 * SCAN_STEP).min(FRAC_PI_2)).collect();
    let flags = thetas
        .par_iter()
        .map(|&t| Ok(find_seed_with(curve, t, DEFAULT_GRID, n)?.is_some()))
        .collect::<Result<Vec<bool>>>()?;
    if !flags[0] {
        return Err(Error::EmptyAtStart { theta: 0.0 });
    }
    let scan: Vec<(f64, bool)> = thetas.iter().cloned().zip(flags.iter().cloned()).collect();
    let Some(first_empty) = flags.iter().position(|&f| !f) else {
        return Ok(ApertureAngle { theta_r: FRAC_PI_2, bracket: (FRAC_PI_2, FRAC_PI_2), scan, non_monotone: false });
    };
    let non_monotone = flags[first_empty..].iter().any(|&f| f);
    let (mut lo, mut hi) = (thetas[first_empty - 1], thetas[first_empty]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if find_seed_with(curve, mid, FINE_GRID, n)?.is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ApertureAngle { theta_r: 0.5 * (lo + hi), bracket: (lo, hi), scan, non_monotone })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AperturePoint {
    pub point: Point2,
    pub final_diameter: f64,
    pub thetas: Vec<f64>,
    pub centroids: Vec<Option<Point2>>,
    pub diameters: Vec<Option<f64>>,
    /// Diameters grew by more than 10% somewhere along the schedule.
    pub non_shrinking: bool,
}

/// Follows `theta_i = lo - 2^-i * delta` for `i = 1..12` with
/// `delta = max(4 * bracket width, 1e-5)` and reports the centroid of the
/// last non-empty region.
pub fn aperture_point(curve: &ParametricCurve, angle: &ApertureAngle, n: usize) -> Result<AperturePoint> {
    let (lo, hi) = angle.bracket;
    let delta = (4.0 * (hi - lo)).max(1e-5);
    let thetas: Vec<f64> = (1..=POINT_SCHEDULE).map(|i| (lo - delta * 0.5f64.powi(i as i32)).max(0.0)).collect();
    let regions = thetas.par_iter().map(|&t| region_at(curve, t, n, FINE_GRID)).collect::<Result<Vec<_>>>()?;
    let centroids: Vec<Option<Point2>> = regions.iter().map(|r| r.as_ref().map(|r| r.polygon.centroid())).collect();
    let diameters: Vec<Option<f64>> = regions.iter().map(|r| r.as_ref().map(|r| r.polygon.diameter())).collect();
    let last = regions
        .iter()
        .rposition(Option::is_some)
        .ok_or_else(|| Error::Inconsistent("every region on the aperture schedule is empty".into()))?;
    let ds: Vec<f64> = diameters.iter().flatten().cloned().collect();
    let non_shrinking = ds.windows(2).any(|w| w[1] > 1.1 * w[0]);
    Ok(AperturePoint {
        point: centroids[last].unwrap(),
        final_diameter: diameters[last].unwrap(),
        thetas,
        centroids,
        diameters,
        non_shrinking,
    })
}

/// Same schedule as [`aperture_point`], but once the seed search gives up
/// the previous centroid is tried as a clipping seed, so slivers thinner than
/// the emptiness threshold are still followed while membership accepts them.
pub fn aperture_point_tracked(curve: &ParametricCurve, angle: &ApertureAngle, n: usize) -> Result<AperturePoint> {
    let (lo, hi) = angle.bracket;
    let delta = (4.0 * (hi - lo)).max(1e-5);
    let thetas: Vec<f64> = (1..=POINT_SCHEDULE).map(|i| (lo - delta * 0.5f64.powi(i as i32)).max(0.0)).collect();
    let mut prev: Option<Point2> = None;
    let (mut centroids, mut diameters) = (Vec::new(), Vec::new());
    for &t in &thetas {
        let mut seed = None;
        if let Some(c) = prev {
            if membership(curve, t, c, n.max(512))?.0 {
                seed = Some(c);
            }
        }
        if seed.is_none() {
            seed = find_seed_with(curve, t, FINE_GRID, n)?.map(|(s, _)| s);
        }
        let region = match seed {
            Some(s) => Some(region_by_clipping(curve, t, s, n)?),
            None => None,
        };
        prev = region.as_ref().map(|r| r.polygon.centroid()).or(prev);
        centroids.push(region.as_ref().map(|r| r.polygon.centroid()));
        diameters.push(region.as_ref().map(|r| r.polygon.diameter()));
    }
    let last = centroids
        .iter()
        .rposition(Option::is_some)
        .ok_or_else(|| Error::Inconsistent("every region on the aperture schedule is empty".into()))?;
    let ds: Vec<f64> = diameters.iter().flatten().cloned().collect();
    let non_shrinking = ds.windows(2).any(|w| w[1] > 1.1 * w[0]);
    Ok(AperturePoint {
        point: centroids[last].unwrap(),
        final_diameter: diameters[last].unwrap(),
        thetas,
        centroids,
        diameters,
        non_shrinking,
    })
}

/// Pushes past the seed-search bracket: bisects on `[lo, hi + SCAN_STEP]`
/// with the tracked centroid as the only candidate point, so the region is
/// followed down to the membership threshold instead of the emptiness one.
/// Returns the last accepted angle and the region there.
pub fn aperture_point_refined(
    curve: &ParametricCurve,
    angle: &ApertureAngle,
    n: usize,
    iterations: usize,
) -> Result<(f64, RegionApprox)> {
    let tracked = aperture_point_tracked(curve, angle, n)?;
    let start = *tracked.thetas.iter().zip(&tracked.centroids).rev().find(|(_, c)| c.is_some()).unwrap().0;
    let mut best = region_by_clipping(curve, start, tracked.point, n)?;
    let (mut lo, mut hi) = (start, (angle.bracket.1 + SCAN_STEP).min(FRAC_PI_2));
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        let c = best.polygon.centroid();
        if membership(curve, mid, c, n.max(512))?.0 {
            best = region_by_clipping(curve, mid, c, n)?;
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, best))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApertureEstimate {
    pub theta_r: f64,
    pub theta_r_bracket: (f64, f64),
    pub aperture_point: Point2,
    pub final_diameter: f64,
    pub non_monotone: bool,
    pub angle: ApertureAngle,
    pub point: AperturePoint,
}

pub fn aperture(curve: &ParametricCurve, tol: f64, n: usize) -> Result<ApertureEstimate> {
    let angle = aperture_angle(curve, tol, n)?;
    let point = aperture_point(curve, &angle, n)?;
    Ok(ApertureEstimate {
        theta_r: angle.theta_r,
        theta_r_bracket: angle.bracket,
        aperture_point: point.point,
        final_diameter: point.final_diameter,
        non_monotone: angle.non_monotone,
        angle,
        point,
    })
}

/// The union of the regions over `[0, theta_r)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApertureSet {
    pub thetas: Vec<f64>,
    /// Vertices of every swept region.
    pub cloud: Vec<Point2>,
    /// The region at `theta = 0`.
    pub base: ConvexPolygon,
    /// Every later region lies inside the base, so the union is the base.
    pub nested: bool,
    /// Area of the union, rasterized.
    pub area: f64,
}

pub fn aperture_set(curve: &ParametricCurve, theta_r: f64, n: usize, steps: usize) -> Result<ApertureSet> {
    let thetas: Vec<f64> = (0..steps.max(1)).map(|k| theta_r * k as f64 / steps.max(1) as f64).collect();
    let sw = sweep(curve, &thetas, n)?;
    let polys: Vec<&ConvexPolygon> = sw.regions.iter().flatten().map(|r| &r.polygon).collect();
    let base = polys[0].clone();
    let tol = 1e-6 * curve.scale();
    let nested = polys[1..].iter().all(|p| p.vertices().iter().all(|v| base.contains(*v, tol)));
    let cloud: Vec<Point2> = polys.iter().flat_map(|p| p.vertices().iter().cloned()).collect();
    let area = union_area(&polys, 512);
    Ok(ApertureSet { thetas, cloud, base, nested, area })
}

/// Area of a union of convex polygons on a `res x res` raster of their
/// common bounding box.
fn union_area(polys: &[&ConvexPolygon], res: usize) -> f64 {
    let pts: Vec<Point2> = polys.iter().flat_map(|p| p.vertices().iter().cloned()).collect();
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let (dx, dy) = ((hi.x - lo.x) / res as f64, (hi.y - lo.y) / res as f64);
    let hits: usize = (0..res * res)
        .into_par_iter()
        .filter(|k| {
            let p = Point2::new(lo.x + dx * ((k % res) as f64 + 0.5), lo.y + dy * ((k / res) as f64 + 0.5));
            polys.iter().any(|poly| poly.contains(p, 0.0))
        })
        .count();
    hits as f64 * dx * dy
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma11Report {
    pub passed: bool,
    pub trials: usize,
    pub max_margin: f64,
}

/// At `theta = pi/2` every point lies on some normal line: random points in
/// a box of side `4 * scale` must all have margin below `1e-5 * scale`.
pub fn lemma11_check(curve: &ParametricCurve, trials: usize, n: usize, seed: u64) -> Result<Lemma11Report> {
    if trials < 100 {
        return Err(Error::InvalidParameter(format!("need at least 100 trials, got {trials}")));
    }
    let scale = curve.scale();
    let (lo, hi) = curve.bbox();
    let c = (lo + hi) * 0.5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Point2> =
        (0..trials).map(|_| c + Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)) * scale).collect();
    let margins =
        points.par_iter().map(|&p| Ok(membership(curve, FRAC_PI_2, p, n)?.1)).collect::<Result<Vec<f64>>>()?;
    let max_margin = margins.iter().cloned().fold(0.0, f64::max);
    Ok(Lemma11Report { passed: max_margin < 1e-5 * scale, trials, max_margin })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub coarse_max_dh: f64,
    pub fine_max_dh: f64,
    pub decreasing: bool,
}

/// Max consecutive Hausdorff distance on `steps + 1` angles over
/// `[0, theta_max]`, and again with the step halved.
pub fn continuity_check(curve: &ParametricCurve, theta_max: f64, steps: usize, n: usize) -> Result<ContinuityReport> {
    let coarse = sweep(curve, &theta_grid(0.0, theta_max, steps + 1), n)?;
    let fine = sweep(curve, &theta_grid(0.0, theta_max, 2 * steps + 1), n)?;
    let (c, f) = (coarse.max_consecutive_dh(), fine.max_consecutive_dh());
    Ok(ContinuityReport { coarse_max_dh: c, fine_max_dh: f, decreasing: f < c })
}

/// Vertex counts of the clipped region with `n` and with `2n` lines, from
/// the same seed. A polygon keeps its count under refinement while a curved
/// boundary picks up new vertices in proportion to `n`.
pub fn refinement_vertex_counts(
    curve: &ParametricCurve,
    theta: f64,
    n: usize,
    grid: usize,
) -> Result<Option<(usize, usize)>> {
    let Some(coarse) = region_at(curve, theta, n, grid)? else {
        return Ok(None);
    };
    let fine = region_by_clipping(curve, theta, coarse.seed, 2 * n)?;
    Ok(Some((coarse.polygon.len(), fine.polygon.len())))
}

/// Turning-angle diagnostics of the region at each angle.
pub fn shape_diagnostics(
    curve: &ParametricCurve,
    thetas: &[f64],
    n: usize,
    m: usize,
) -> Result<Vec<(f64, Option<ShapeDiagnostics>)>> {
    thetas
        .par_iter()
        .map(|&t| Ok((t, region_at(curve, t, n, DEFAULT_GRID)?.map(|r| diagnose_polygon(&r.polygon, m)))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn circle() -> ParametricCurve {
        ParametricCurve::circle(1.0).unwrap()
    }

    #[test]
    fn circle_sweep_diameters() {
        let thetas = [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2];
        let s = sweep(&circle(), &thetas, 2048).unwrap();
        for (d, t) in s.diameters.iter().zip(&thetas).take(4) {
            assert!((d - 2.0 * t.cos()).abs() < 2e-3);
        }
        assert!(s.regions[4].is_none());
        assert!(s.consecutive_dh[4].is_none() && s.consecutive_dh[1].is_some());
    }

    #[test]
    fn sweep_rejects_bad_angles() {
        assert!(sweep(&circle(), &[0.2, 0.1], 1024).is_err());
        assert!(sweep(&circle(), &[0.0, 2.0], 1024).is_err());
    }

    #[test]
    fn nesting_on_convex_curves() {
        for c in [circle(), ParametricCurve::ellipse(2.0, 1.0).unwrap()] {
            let s = sweep(&c, &theta_grid(0.0, 0.8, 8), 2048).unwrap();
            let r = nesting_check(&c, &s).unwrap();
            assert!(r.holds && r.guaranteed, "{r:?}");
        }
    }

    #[test]
    fn circle_aperture() {
        let a = aperture(&circle(), 1e-4, 2048).unwrap();
        assert!((a.theta_r - FRAC_PI_2).abs() < 1e-3);
        assert!(a.aperture_point.norm() < 1e-3);
        assert!(a.final_diameter <= 1e-2);
        assert!(!a.non_monotone);
    }

    #[test]
    fn ellipse_aperture_angle() {
        // for a centrally symmetric curve the region survives while the
        // center does: theta_r = atan(4/3) for the 2:1 ellipse
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        let a = aperture_angle(&e, 1e-4, 2048).unwrap();
        assert!(a.bracket.1 - a.bracket.0 <= 1e-4);
        assert!((a.theta_r - (4.0f64 / 3.0).atan()).abs() < 5e-3, "{}", a.theta_r);
        assert!(!a.non_monotone);
    }

    #[test]
    fn lemma11_on_the_circle() {
        assert!(lemma11_check(&circle(), 200, 2048, 1).unwrap().passed);
        assert!(lemma11_check(&circle(), 10, 2048, 1).is_err());
    }

    #[test]
    fn circle_aperture_set_is_the_disk() {
        let s = aperture_set(&circle(), FRAC_PI_2, 2048, 6).unwrap();
        assert!(s.nested);
        assert!((s.area - std::f64::consts::PI).abs() < 2e-2);
    }

    #[test]
    fn theta_grid_endpoints() {
        assert_eq!(theta_grid(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(theta_grid(0.3, 1.0, 1), vec![0.3]);
    }
}
