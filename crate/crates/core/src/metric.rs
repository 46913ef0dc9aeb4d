//! Pompeiu-Hausdorff distance between compact plane sets.
//!
//! Solid convex polygons are measured through their boundaries, subdivided
//! at a fixed step; point clouds are used as given.

use rayon::prelude::*;

use crate::geom2d::{ConvexPolygon, Point2};

/// Boundary subdivision step relative to the larger set's scale.
pub const SUBDIVISION: f64 = 1e-3;

#[derive(Clone, Debug)]
pub enum CompactSet2 {
    /// The solid region bounded by the polygon.
    Polygon(ConvexPolygon),
    Cloud(Vec<Point2>),
}

impl CompactSet2 {
    pub fn is_empty(&self) -> bool {
        match self {
            CompactSet2::Polygon(p) => p.is_empty(),
            CompactSet2::Cloud(c) => c.is_empty(),
        }
    }

    /// Bounding-box diagonal.
    pub fn scale(&self) -> f64 {
        match self {
            CompactSet2::Polygon(p) => p.scale(),
            CompactSet2::Cloud(c) => ConvexPolygon::from_ccw(c.clone()).scale(),
        }
    }

    /// Points whose farthest distance to another set realizes the directed
    /// distance: subdivided boundary for polygons, the points for clouds.
    fn probes(&self, step: f64) -> Vec<Point2> {
        match self {
            CompactSet2::Cloud(c) => c.clone(),
            CompactSet2::Polygon(p) => subdivide(p, step),
        }
    }
}

fn subdivide(poly: &ConvexPolygon, step: f64) -> Vec<Point2> {
    let mut out = Vec::new();
    if poly.len() == 1 {
        return poly.vertices().to_vec();
    }
    for (a, b) in poly.edges() {
        let k = ((a.distance(b) / step).ceil() as usize).max(1);
        out.extend((0..k).map(|i| a.lerp(b, i as f64 / k as f64)));
    }
    out
}

/// Distance from `x` to `b`; zero inside a solid polygon.
pub fn dist_point_to_set(x: Point2, b: &CompactSet2) -> f64 {
    match b {
        CompactSet2::Cloud(c) => c.iter().map(|p| p.distance(x)).fold(f64::INFINITY, f64::min),
        CompactSet2::Polygon(p) => {
            if p.len() >= 3 && p.contains_point(x) {
                0.0
            } else {
                p.distance_to_boundary(x)
            }
        }
    }
}

/// Directed distance `sup_{a in A} d(a, B)` with the default subdivision.
pub fn dist_set_to_set(a: &CompactSet2, b: &CompactSet2) -> f64 {
    let step = SUBDIVISION * a.scale().max(b.scale());
    directed(a, b, step)
}

fn directed(a: &CompactSet2, b: &CompactSet2, step: f64) -> f64 {
    let step = if step > 0.0 { step } else { f64::INFINITY };
    a.probes(step).par_iter().map(|&x| dist_point_to_set(x, b)).reduce(|| 0.0, f64::max)
}

pub fn hausdorff(a: &CompactSet2, b: &CompactSet2) -> f64 {
    let step = SUBDIVISION * a.scale().max(b.scale());
    directed(a, b, step).max(directed(b, a, step))
}

/// Hausdorff distance between solid polygons with an explicit subdivision
/// step.
pub fn hausdorff_polygons(a: &ConvexPolygon, b: &ConvexPolygon, step: f64) -> f64 {
    let (a, b) = (CompactSet2::Polygon(a.clone()), CompactSet2::Polygon(b.clone()));
    directed(&a, &b, step).max(directed(&b, &a, step))
}
