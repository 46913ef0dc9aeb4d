//! Plane primitives: vectors, rotations, lines, half-planes and convex polygons.
//!
//! Everything is plain `f64` with tolerance-based predicates. Tolerances are
//! relative to a length scale supplied by the caller or derived from the
//! polygon's bounding box, never absolute.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point or a free vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `phi`.
    #[inline]
    pub fn from_angle(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive when `o` is
    /// counterclockwise from `self`.
    #[inline]
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }

    /// Quarter turn counterclockwise.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn lerp(self, o: Self, t: f64) -> Self {
        self + (o - self) * t
    }
}

impl Add for Point2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn div(self, k: f64) -> Self {
        Self::new(self.x / k, self.y / k)
    }
}

impl Neg for Point2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Counterclockwise rotation of `v` by `theta` radians.
#[inline]
pub fn rotate(v: Point2, theta: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    Point2::new(v.x * c - v.y * s, v.x * s + v.y * c)
}

/// A line through `base` with unit direction `dir`.
///
/// Normal form is `n . x = c` with `n = (dir.y, -dir.x)`, i.e. the normal
/// points to the right of the direction of travel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line2 {
    base: Point2,
    dir: Point2,
}

impl Line2 {
    pub fn new(base: Point2, dir: Point2) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::Degenerate("line base is not finite".into()));
        }
        let dir = dir.normalized().ok_or_else(|| Error::Degenerate("line direction has zero length".into()))?;
        Ok(Self { base, dir })
    }

    /// Line `n . x = c` for a non-zero normal `n`.
    pub fn from_normal(normal: Point2, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len > 0.0) || !offset.is_finite() {
            return Err(Error::Degenerate("line normal has zero length".into()));
        }
        let n = normal / len;
        let c = offset / len;
        Ok(Self { base: n * c, dir: Point2::new(-n.y, n.x) })
    }

    #[inline]
    pub fn base(&self) -> Point2 {
        self.base
    }

    #[inline]
    pub fn dir(&self) -> Point2 {
        self.dir
    }

    #[inline]
    pub fn normal(&self) -> Point2 {
        Point2::new(self.dir.y, -self.dir.x)
    }

    #[inline]
    pub fn offset(&self) -> f64 {
        self.normal().dot(self.base)
    }
}

/// `n . p - c`; its magnitude is the Euclidean distance from `p` to the line.
#[inline]
pub fn signed_distance(line: &Line2, p: Point2) -> f64 {
    line.normal().dot(p - line.base)
}

/// Foot of the perpendicular dropped from `p` onto `line`.
#[inline]
pub fn foot_of_perpendicular(line: &Line2, p: Point2) -> Point2 {
    line.base + line.dir * (p - line.base).dot(line.dir)
}

/// Which side of a line a half-plane keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `{signed_distance >= 0}`
    Positive,
    /// `{signed_distance <= 0}`
    Negative,
}

impl Side {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub line: Line2,
    pub side: Side,
}

impl HalfPlane {
    pub fn new(line: Line2, side: Side) -> Self {
        Self { line, side }
    }

    /// The closed half-plane bounded by `line` that contains `p`.
    pub fn containing(line: Line2, p: Point2) -> Self {
        let side = if signed_distance(&line, p) >= 0.0 { Side::Positive } else { Side::Negative };
        Self { line, side }
    }

    /// Signed depth of `p`: positive inside, negative outside.
    #[inline]
    pub fn depth(&self, p: Point2) -> f64 {
        self.side.sign() * signed_distance(&self.line, p)
    }

    #[inline]
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.depth(p) >= -tol
    }
}

/// Convex polygon with counterclockwise vertices.
///
/// Fewer than three vertices (a point or a segment) is allowed and reported
/// by [`ConvexPolygon::is_degenerate`]; hulls of collinear input end up here.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Wraps counterclockwise vertices, dropping consecutive duplicates.
    pub fn from_ccw(vertices: Vec<Point2>) -> Self {
        let scale = bbox_diagonal(&vertices);
        Self { vertices: dedup_cyclic(vertices, 1e-12 * scale) }
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::from_ccw(vec![Point2::new(x0, y0), Point2::new(x1, y0), Point2::new(x1, y1), Point2::new(x0, y1)])
    }

    /// Axis-aligned square of the given side length centered at `center`.
    pub fn square(center: Point2, side: f64) -> Self {
        let h = 0.5 * side;
        Self::rectangle(center.x - h, center.y - h, center.x + h, center.y + h)
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` about the origin,
    /// with a vertex on the positive x-axis.
    pub fn regular(n: usize, r: f64) -> Self {
        Self::from_ccw((0..n).map(|i| Point2::from_angle(2.0 * PI * i as f64 / n as f64) * r).collect())
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True for points, segments and zero-area slivers.
    pub fn is_degenerate(&self) -> bool {
        let s = self.scale();
        self.vertices.len() < 3 || self.area() <= 1e-24 * s * s
    }

    /// Iterator over the directed edges `(v_i, v_{i+1})`.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Diagonal of the bounding box; the length scale for tolerances.
    pub fn scale(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        if self.vertices.len() < 2 {
            return 0.0;
        }
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    /// Area centroid; falls back to the vertex mean for degenerate polygons.
    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        if n == 0 {
            return Point2::ORIGIN;
        }
        let mean = self.vertices.iter().fold(Point2::ORIGIN, |acc, &v| acc + v) / n as f64;
        if self.is_degenerate() {
            return mean;
        }
        // Shift to the vertex mean first to keep the cross products small.
        let (mut a2, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for (p, q) in self.edges() {
            let (p, q) = (p - mean, q - mean);
            let w = p.cross(q);
            a2 += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        mean + Point2::new(cx, cy) / (3.0 * a2)
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].distance(v[j]));
            }
        }
        best
    }

    /// Smallest inward distance from `p` to the edge lines: positive inside,
    /// negative outside.
    pub fn interior_margin(&self, p: Point2) -> f64 {
        if self.vertices.len() < 3 {
            return -self.distance_to_boundary(p);
        }
        self.edges()
            .filter_map(|(a, b)| {
                let e = b - a;
                let len = e.norm();
                (len > 0.0).then(|| e.cross(p - a) / len)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed containment with absolute tolerance `tol`.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 | 2 => self.distance_to_boundary(p) <= tol,
            _ => self.interior_margin(p) >= -tol,
        }
    }

    /// Exact closed point-in-polygon test in `O(log n)`: locate the fan
    /// triangle at vertex 0 by bisection, then test its outer edge.
    pub fn contains_point(&self, p: Point2) -> bool {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return self.distance_to_boundary(p) == 0.0;
        }
        let q = p - v[0];
        if (v[1] - v[0]).cross(q) < 0.0 || (v[n - 1] - v[0]).cross(q) > 0.0 {
            return false;
        }
        // largest i with v_i - v0 at or clockwise of q
        let (mut lo, mut hi) = (1, n - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if (v[mid] - v[0]).cross(q) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (v[hi] - v[lo]).cross(p - v[lo]) >= 0.0
    }

    /// Distance from `p` to the polygon's boundary curve.
    pub fn distance_to_boundary(&self, p: Point2) -> f64 {
        match self.vertices.len() {
            0 => f64::INFINITY,
            1 => p.distance(self.vertices[0]),
            _ => self.edges().map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn translated(&self, v: Point2) -> Self {
        Self { vertices: self.vertices.iter().map(|&p| p + v).collect() }
    }

    /// `m` points spaced uniformly in arc length along the boundary,
    /// starting at vertex 0.
    pub fn boundary_samples(&self, m: usize) -> Vec<Point2> {
        let per = self.perimeter();
        if self.vertices.len() < 2 || per <= 0.0 || m == 0 {
            return self.vertices.iter().copied().cycle().take(m).collect();
        }
        let step = per / m as f64;
        let mut out = Vec::with_capacity(m);
        let mut edges = self.edges();
        let (mut a, mut b) = edges.next().unwrap();
        let mut edge_len = a.distance(b);
        let mut walked = 0.0;
        for i in 0..m {
            let target = i as f64 * step;
            while target > walked + edge_len {
                walked += edge_len;
                match edges.next() {
                    Some((p, q)) => {
                        a = p;
                        b = q;
                        edge_len = a.distance(b);
                    }
                    None => break,
                }
            }
            let t = if edge_len > 0.0 { ((target - walked) / edge_len).clamp(0.0, 1.0) } else { 0.0 };
            out.push(a.lerp(b, t));
        }
        out
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let e = b - a;
    let l2 = e.norm_squared();
    if l2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(e) / l2).clamp(0.0, 1.0);
    p.distance(a + e * t)
}

fn bbox_diagonal(points: &[Point2]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    hi.distance(lo)
}

fn dedup_cyclic(mut v: Vec<Point2>, tol: f64) -> Vec<Point2> {
    v.dedup_by(|a, b| a.distance(*b) <= tol);
    while v.len() > 1 && v[0].distance(v[v.len() - 1]) <= tol {
        v.pop();
    }
    v
}

/// Intersects a convex polygon with a closed half-plane.
///
/// Returns `None` when the intersection has no interior (empty, a point or a
/// segment). Vertices within `1e-13 * scale` of the boundary line count as
/// lying on it, which makes the operation idempotent.
pub fn clip(poly: &ConvexPolygon, hp: &HalfPlane) -> Option<ConvexPolygon> {
    let v = poly.vertices();
    if v.len() < 3 {
        return None;
    }
    let snap = 1e-13 * poly.scale();
    let depth: Vec<f64> = v
        .iter()
        .map(|&p| {
            let d = hp.depth(p);
            if d.abs() <= snap {
                0.0
            } else {
                d
            }
        })
        .collect();
    if depth.iter().all(|&d| d >= 0.0) {
        return Some(poly.clone());
    }
    if depth.iter().all(|&d| d <= 0.0) {
        return None;
    }
    let n = v.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (dc, dn) = (depth[i], depth[j]);
        if dc >= 0.0 {
            out.push(v[i]);
        }
        if (dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0) {
            out.push(v[i].lerp(v[j], dc / (dc - dn)));
        }
    }
    let out = ConvexPolygon::from_ccw(out);
    (!out.is_degenerate()).then_some(out)
}

/// Convex hull by Andrew's monotone chain; collinear boundary points dropped.
///
/// One or two distinct input points give a degenerate polygon.
pub fn convex_hull(points: &[Point2]) -> ConvexPolygon {
    let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return ConvexPolygon { vertices: pts };
    }
    let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    ConvexPolygon { vertices: hull }
}

/// Plane inversion about `center` in the antipodal convention
/// `I(q) = center - (q - center) / |q - center|^2`.
///
/// The image lies on the opposite side of `center`; `I` is an involution.
pub fn invert(q: Point2, center: Point2) -> Result<Point2> {
    let d = q - center;
    let d2 = d.norm_squared();
    let scale = 1.0f64.max(center.norm()).max(q.norm());
    if !(d2.sqrt() > 1e-12 * scale) {
        return Err(Error::Degenerate(format!(
            "inversion center ({}, {}) coincides with the inverted point",
            center.x, center.y
        )));
    }
    Ok(center - d / d2)
}
