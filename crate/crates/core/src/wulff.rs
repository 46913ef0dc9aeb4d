//! Wulff shapes `W_h = ∩_u {x : x.u <= h(u)}`, their dual shapes through
//! spherical polarity, and turning-angle diagnostics that tell corners and
//! straight edges apart from smooth boundary.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{clip, ConvexPolygon, HalfPlane, Line2, Point2};
use crate::silhouette::SupportFn;
use crate::sphere::{central_project, central_unproject, polar_set, PolarSet};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WulffShape {
    pub polygon: ConvexPolygon,
    /// Support about the origin.
    pub support: SupportFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeDiagnostics {
    pub vertex_count: usize,
    pub max_turning_angle: f64,
    pub edge_flat_runs: usize,
    pub smoothness_score: f64,
}

/// Periodic linear interpolation of `h` at angle `phi`.
fn sample_support(h: &SupportFn, phi: f64) -> f64 {
    let m = h.len();
    let x = phi.rem_euclid(TAU) / TAU * m as f64;
    let i = (x.floor() as usize) % m;
    let f = x - x.floor();
    let v = h.values();
    v[i] * (1.0 - f) + v[(i + 1) % m] * f
}

/// Intersects the `m` half-planes `{x . u_i <= h(u_i)}` about the origin.
/// When `m` differs from the number of stored samples, `h` is resampled
/// linearly.
pub fn wulff_from_support(h: &SupportFn, m: usize) -> Result<WulffShape> {
    if m < 256 {
        return Err(Error::InvalidParameter(format!("Wulff shape needs M >= 256, got {m}")));
    }
    let values: Vec<f64> = if m == h.len() {
        h.values().to_vec()
    } else {
        (0..m).map(|i| sample_support(h, TAU * i as f64 / m as f64)).collect()
    };
    let hmax = values.iter().cloned().fold(0.0, f64::max);
    let mut poly = ConvexPolygon::square(Point2::ORIGIN, 4.0 * hmax);
    for (i, &v) in values.iter().enumerate() {
        let u = Point2::from_angle(TAU * i as f64 / m as f64);
        let hp = HalfPlane::containing(Line2::from_normal(u, v)?, Point2::ORIGIN);
        poly = clip(&poly, &hp)
            .ok_or_else(|| Error::EmptyIntersection("support half-planes have empty intersection".into()))?;
    }
    let support = SupportFn::new(Point2::ORIGIN, h.theta, values)?;
    Ok(WulffShape { polygon: poly, support })
}

/// `h(u) = max_v v.u` over the vertices, at `m` uniform directions.
pub fn support_polygon(poly: &ConvexPolygon, m: usize) -> Result<SupportFn> {
    SupportFn::from_fn(Point2::ORIGIN, 0.0, m, |phi| {
        let u = Point2::from_angle(phi);
        poly.vertices().iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Bounded, convex, non-degenerate, and containing the origin with margin
/// above `1e-9 * scale`.
pub fn convex_body_check(poly: &ConvexPolygon) -> bool {
    let v = poly.vertices();
    if poly.is_degenerate() || v.iter().any(|p| !p.is_finite()) {
        return false;
    }
    let n = v.len();
    let scale = poly.scale();
    let convex = (0..n).all(|i| {
        let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
        (b - a).cross(c - b) >= -1e-12 * scale * scale
    });
    convex && poly.area() > 0.0 && poly.interior_margin(Point2::ORIGIN) > 1e-9 * scale
}

/// Lifts the shape to the sphere, takes the polar set, and projects it
/// back to the chart. In the chart this is `{y : x.y >= -1 for x in W}`.
pub fn dual_wulff(w: &WulffShape, m: usize) -> Result<WulffShape> {
    if !convex_body_check(&w.polygon) {
        return Err(Error::InvalidParameter("dual Wulff shape needs a convex body around the origin".into()));
    }
    let mut lifted: Vec<_> = w.polygon.vertices().iter().map(|&v| central_unproject(v)).collect();
    lifted.extend(w.polygon.boundary_samples(m).into_iter().map(central_unproject));
    let polar = polar_set(&lifted)?;
    let PolarSet::Polygon(sp) = polar.shape else {
        return Err(Error::OutsideChart("polar set is not a bounded polygon".into()));
    };
    let pts = sp.vertices().iter().map(|&q| central_project(q)).collect::<Result<Vec<_>>>()?;
    let mut poly = ConvexPolygon::from_ccw(pts.clone());
    if poly.area() < 0.0 {
        poly = ConvexPolygon::from_ccw(pts.into_iter().rev().collect());
    }
    let support = support_polygon(&poly, m.max(256))?;
    Ok(WulffShape { polygon: poly, support })
}

/// Turning-angle diagnostics on `m` boundary samples uniform in arc length.
///
/// With `d = 2 pi / m`, a corner sample turns by more than `5 d`, and a flat
/// run is at least `0.05 m` consecutive samples turning by less than `d / 5`.
pub fn diagnose_shape(w: &WulffShape, m: usize) -> ShapeDiagnostics {
    diagnose_polygon(&w.polygon, m)
}

pub fn diagnose_polygon(poly: &ConvexPolygon, m: usize) -> ShapeDiagnostics {
    let pts = poly.boundary_samples(m);
    let m = pts.len();
    if m < 3 {
        return ShapeDiagnostics { vertex_count: 0, max_turning_angle: 0.0, edge_flat_runs: 0, smoothness_score: 0.0 };
    }
    let turning: Vec<f64> = (0..m)
        .map(|i| {
            let a = pts[i] - pts[(i + m - 1) % m];
            let b = pts[(i + 1) % m] - pts[i];
            a.cross(b).atan2(a.dot(b)).abs().min(PI)
        })
        .collect();
    let d = TAU / m as f64;
    let corner: Vec<bool> = turning.iter().map(|&t| t > 5.0 * d).collect();
    let flat: Vec<bool> = turning.iter().map(|&t| t < d / 5.0).collect();
    let min_run = (0.05 * m as f64).ceil() as usize;
    let max_turning_angle = turning.iter().cloned().fold(0.0, f64::max);
    ShapeDiagnostics {
        vertex_count: cyclic_runs(&corner, 1),
        max_turning_angle,
        edge_flat_runs: cyclic_runs(&flat, min_run),
        smoothness_score: max_turning_angle / d,
    }
}

/// Number of maximal cyclic runs of `true` with length at least `min_len`.
fn cyclic_runs(mask: &[bool], min_len: usize) -> usize {
    let n = mask.len();
    if mask.iter().all(|&b| b) {
        return usize::from(n >= min_len);
    }
    // start scanning just after a false entry so no run wraps
    let start = mask.iter().position(|&b| !b).unwrap();
    let (mut runs, mut len) = (0, 0);
    for k in 1..=n {
        if mask[(start + k) % n] {
            len += 1;
        } else {
            if len >= min_len && len > 0 {
                runs += 1;
            }
            len = 0;
        }
    }
    runs
}
