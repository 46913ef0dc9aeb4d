//! The unit sphere: central projection onto the plane `z = 1`, the map
//! `Psi_N`, exact polar sets of finite sets, spherical convex hulls, and the
//! spherical Frenet frame of a lifted plane curve.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curve::ParametricCurve;
use crate::error::{Error, Result};
use crate::geom2d::{convex_hull, Point2};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const NORTH: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Vec3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn det(a: Self, b: Self, c: Self) -> f64 {
        a.dot(b.cross(c))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A unit vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    /// Normalizes `v`; fails for the zero vector.
    pub fn new(v: Vec3) -> Result<Self> {
        v.normalized().map(SpherePoint).ok_or_else(|| Error::Degenerate("cannot normalize a zero vector".into()))
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vec3::new(x, y, z))
    }

    pub const NORTH: SpherePoint = SpherePoint(Vec3::NORTH);

    #[inline]
    pub fn vec(self) -> Vec3 {
        self.0
    }

    #[inline]
    pub fn dot(self, o: SpherePoint) -> f64 {
        self.0.dot(o.0)
    }

    /// Great-circle distance.
    pub fn angle_to(self, o: SpherePoint) -> f64 {
        // atan2 of |cross| and dot stays accurate for nearby points
        self.0.cross(o.0).norm().atan2(self.0.dot(o.0))
    }

    pub fn antipode(self) -> SpherePoint {
        SpherePoint(-self.0)
    }

    /// Uniformly distributed random point.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> SpherePoint {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        SpherePoint(Vec3::new(r * phi.cos(), r * phi.sin(), z))
    }
}

/// `H(P) = {Q : P.Q >= 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hemisphere {
    pub pole: SpherePoint,
}

impl Hemisphere {
    pub fn contains(&self, q: SpherePoint, tol: f64) -> bool {
        self.pole.dot(q) >= -tol
    }
}

/// `(P1/P3, P2/P3)`; only the open northern hemisphere maps into the chart.
pub fn central_project(p: SpherePoint) -> Result<Point2> {
    let v = p.vec();
    if v.z <= 1e-12 {
        return Err(Error::OutsideChart(format!("({}, {}, {}) is not north of the equator", v.x, v.y, v.z)));
    }
    Ok(Point2::new(v.x / v.z, v.y / v.z))
}

pub fn central_unproject(q: Point2) -> SpherePoint {
    SpherePoint::new(Vec3::new(q.x, q.y, 1.0)).expect("(x, y, 1) is never zero")
}

/// `(N - (N.P) P) / sqrt(1 - (N.P)^2)` for `N = (0, 0, 1)`.
///
/// Evaluated as `P x (N x P) / |N x P|`, which is the same vector without
/// the cancellation in `1 - (N.P)^2` near the poles.
pub fn psi_n(p: SpherePoint) -> Result<SpherePoint> {
    let v = p.vec();
    if v.z.abs() >= 1.0 - 1e-12 {
        return Err(Error::Pole);
    }
    let m = Vec3::NORTH.cross(v);
    SpherePoint::new(v.cross(m))
}

/// Closed convex polygon on the sphere with minor-arc edges, vertices
/// counterclockwise when seen from outside. One or two vertices describe a
/// point or an arc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalPolygon {
    vertices: Vec<SpherePoint>,
}

impl SphericalPolygon {
    pub fn new(vertices: Vec<SpherePoint>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[SpherePoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Some `u` with `u.v > 0` for every vertex.
    pub fn hemisphere_witness(&self) -> Option<SpherePoint> {
        let sum = self.vertices.iter().fold(Vec3::new(0.0, 0.0, 0.0), |a, v| a + v.vec());
        let u = SpherePoint::new(sum).ok()?;
        self.vertices.iter().all(|v| v.dot(u) > 0.0).then_some(u)
    }

    /// Membership with tolerance `tol` on the edge-plane dot products.
    pub fn contains(&self, q: SpherePoint, tol: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0].angle_to(q) <= tol,
            2 => arc_distance(self.vertices[0], self.vertices[1], q) <= tol,
            // the edge half-spaces of a convex polygon cut out exactly the
            // cone over it
            n => (0..n).all(|i| {
                let (a, b) = (self.vertices[i].vec(), self.vertices[(i + 1) % n].vec());
                let normal = a.cross(b).normalized().unwrap_or(a);
                normal.dot(q.vec()) >= -tol
            }),
        }
    }

    /// Vertices plus `per_edge - 1` interior points on every edge arc.
    pub fn boundary_samples(&self, per_edge: usize) -> Vec<SpherePoint> {
        let n = self.vertices.len();
        if n < 2 {
            return self.vertices.clone();
        }
        let edges = if n == 2 { 1 } else { n };
        let mut out = Vec::with_capacity(edges * per_edge + 1);
        for i in 0..edges {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            for k in 0..per_edge.max(1) {
                out.push(slerp(a, b, k as f64 / per_edge.max(1) as f64));
            }
        }
        if n == 2 {
            out.push(self.vertices[1]);
        }
        out
    }
}

/// Point at fraction `t` along the minor arc from `a` to `b`.
pub fn slerp(a: SpherePoint, b: SpherePoint, t: f64) -> SpherePoint {
    let omega = a.angle_to(b);
    if omega < 1e-15 {
        return a;
    }
    let (s0, s1) = (((1.0 - t) * omega).sin(), (t * omega).sin());
    SpherePoint::new(a.vec() * s0 + b.vec() * s1).unwrap_or(a)
}

/// Angular distance from `q` to the minor arc `ab`.
pub fn arc_distance(a: SpherePoint, b: SpherePoint, q: SpherePoint) -> f64 {
    let n = a.vec().cross(b.vec());
    if let Some(n) = n.normalized() {
        // foot on the great circle, then check it lies between a and b
        let proj = q.vec() - n * n.dot(q.vec());
        if let Ok(f) = SpherePoint::new(proj) {
            if a.vec().cross(f.vec()).dot(n) >= 0.0 && f.vec().cross(b.vec()).dot(n) >= 0.0 {
                return q.angle_to(f);
            }
        }
    }
    q.angle_to(a).min(q.angle_to(b))
}

/// `{Q : P.Q >= 0 for every P in W}`, classified by the rank of `W`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolarSet {
    Empty,
    /// `H(pole)`.
    Hemisphere {
        pole: SpherePoint,
    },
    /// The great circle orthogonal to `normal`.
    GreatCircle {
        normal: SpherePoint,
    },
    /// `H(a) ∩ H(b)` for non-parallel `a`, `b`.
    Lune {
        a: SpherePoint,
        b: SpherePoint,
    },
    /// Half of the great circle orthogonal to `normal`, centered on `apex`.
    Semicircle {
        normal: SpherePoint,
        apex: SpherePoint,
    },
    /// `{p, -p}`.
    AntipodalPair {
        p: SpherePoint,
    },
    Point {
        p: SpherePoint,
    },
    /// A minor arc (possibly one of several points coincide).
    Arc {
        a: SpherePoint,
        b: SpherePoint,
    },
    Polygon(SphericalPolygon),
}

/// A polar set together with its defining poles; membership is always
/// answered from the poles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polar {
    pub poles: Vec<SpherePoint>,
    pub shape: PolarSet,
}

impl Polar {
    pub fn contains(&self, q: SpherePoint, tol: f64) -> bool {
        self.poles.iter().all(|p| p.dot(q) >= -tol)
    }
}

const RANK_TOL: f64 = 1e-12;

/// Exact polar set of a finite set.
pub fn polar_set(w: &[SpherePoint]) -> Result<Polar> {
    if w.is_empty() {
        return Err(Error::InvalidParameter("polar set of an empty set".into()));
    }
    let shape = polar_shape(w);
    Ok(Polar { poles: w.to_vec(), shape })
}

fn polar_shape(w: &[SpherePoint]) -> PolarSet {
    let p0 = w[0];
    // rank 1: every point is +-p0
    let second = w.iter().find(|p| p.vec().cross(p0.vec()).norm() > RANK_TOL);
    let Some(&p1) = second else {
        return if w.iter().any(|p| p.dot(p0) < 0.0) {
            PolarSet::GreatCircle { normal: p0 }
        } else {
            PolarSet::Hemisphere { pole: p0 }
        };
    };
    let m = SpherePoint::new(p0.vec().cross(p1.vec())).expect("independent");
    let third = w.iter().find(|p| p.dot(m).abs() > RANK_TOL);
    let Some(&p2) = third else {
        return planar_polar(w, m);
    };
    // rank 3: start from the cone of three independent constraints
    let (a, b, c) = (p0.vec(), p1.vec(), p2.vec());
    let corner = |x: Vec3, y: Vec3, opposite: Vec3| {
        let v = x.cross(y);
        let v = if v.dot(opposite) < 0.0 { -v } else { v };
        SpherePoint::new(v).expect("independent")
    };
    let mut poly = vec![corner(b, c, a), corner(c, a, b), corner(a, b, c)];
    orient_ccw(&mut poly);
    for p in w {
        poly = clip_spherical(&poly, *p);
        if poly.is_empty() {
            return PolarSet::Empty;
        }
    }
    match poly.len() {
        1 => PolarSet::Point { p: poly[0] },
        2 => PolarSet::Arc { a: poly[0], b: poly[1] },
        _ => PolarSet::Polygon(SphericalPolygon::new(poly)),
    }
}

/// Polar of a set spanning a plane with unit normal `m`: every constraint
/// only restricts the in-plane component.
fn planar_polar(w: &[SpherePoint], m: SpherePoint) -> PolarSet {
    let e1 = w[0].vec();
    let e2 = m.vec().cross(e1);
    let mut angles: Vec<f64> = w.iter().map(|p| p.vec().dot(e2).atan2(p.vec().dot(e1))).collect();
    angles.sort_by(f64::total_cmp);
    // largest gap between consecutive directions
    let n = angles.len();
    let (mut gap, mut after) = (angles[0] + TAU - angles[n - 1], 0);
    for i in 1..n {
        if angles[i] - angles[i - 1] > gap {
            gap = angles[i] - angles[i - 1];
            after = i;
        }
    }
    let spread = TAU - gap;
    let first = angles[after];
    let last = angles[(after + n - 1) % n];
    let dir = |phi: f64| SpherePoint::new(e1 * phi.cos() + e2 * phi.sin()).expect("unit");
    if spread < PI - 1e-12 {
        PolarSet::Lune { a: dir(first), b: dir(last) }
    } else if spread <= PI + 1e-12 {
        PolarSet::Semicircle { normal: m, apex: dir(first + 0.5 * PI) }
    } else {
        PolarSet::AntipodalPair { p: m }
    }
}

fn orient_ccw(poly: &mut [SpherePoint]) {
    let n = poly.len();
    if n < 3 {
        return;
    }
    let c = poly.iter().fold(Vec3::new(0.0, 0.0, 0.0), |a, v| a + v.vec());
    let (a, b) = (poly[0].vec(), poly[1].vec());
    if Vec3::det(a, b, c) < 0.0 {
        poly.reverse();
    }
}

/// Sutherland-Hodgman against the hemisphere `H(p)` on minor-arc edges.
fn clip_spherical(poly: &[SpherePoint], p: SpherePoint) -> Vec<SpherePoint> {
    let depth = |v: SpherePoint| {
        let d = p.dot(v);
        if d.abs() <= 1e-14 {
            0.0
        } else {
            d
        }
    };
    let depths: Vec<f64> = poly.iter().map(|&v| depth(v)).collect();
    if depths.iter().all(|&d| d >= 0.0) {
        return poly.to_vec();
    }
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    let closed = n >= 3;
    let edges = if closed { n } else { n.saturating_sub(1) };
    if n == 1 {
        return if depths[0] >= 0.0 { poly.to_vec() } else { Vec::new() };
    }
    for i in 0..edges {
        let j = (i + 1) % n;
        let (a, b) = (poly[i], poly[j]);
        let (da, db) = (depths[i], depths[j]);
        if da >= 0.0 {
            out.push(a);
        }
        if (da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0) {
            let x = b.vec() * da - a.vec() * db;
            let x = if da > db { x } else { -x };
            out.push(SpherePoint::new(x).expect("crossing of distinct points"));
        }
    }
    if !closed && depths[n - 1] >= 0.0 {
        out.push(poly[n - 1]);
    }
    dedup_sphere(out)
}

fn dedup_sphere(points: Vec<SpherePoint>) -> Vec<SpherePoint> {
    let mut out: Vec<SpherePoint> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().is_none_or(|q| q.angle_to(p) > 1e-12) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].angle_to(*out.last().unwrap()) <= 1e-12 {
        out.pop();
    }
    out
}

fn fibonacci_sphere(n: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            SpherePoint(Vec3::new(r * phi.cos(), r * phi.sin(), z))
        })
        .collect()
}

/// Orthonormal `(e1, e2)` with `e1 x e2 = c`.
fn tangent_frame(c: SpherePoint) -> (Vec3, Vec3) {
    let v = c.vec();
    let helper = if v.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let e1 = (helper - v * helper.dot(v)).normalized().expect("helper not parallel");
    (e1, v.cross(e1))
}

/// A point `P` with `P.w < 0` for every `w`, if `W` misses a closed
/// hemisphere by more than `1e-9`.
pub fn hemispherical_check(w: &[SpherePoint]) -> Option<SpherePoint> {
    let value = |p: SpherePoint| w.iter().map(|q| -p.dot(*q)).fold(f64::INFINITY, f64::min);
    let grid = fibonacci_sphere(4096);
    let mut best = grid[0];
    let mut best_v = value(best);
    for &g in &grid[1..] {
        let v = value(g);
        if v > best_v {
            best = g;
            best_v = v;
        }
    }
    let dirs: Vec<f64> = (0..16).map(|k| TAU * k as f64 / 16.0).collect();
    let mut step: f64 = 0.06;
    for _ in 0..40 {
        loop {
            let (e1, e2) = tangent_frame(best);
            let mut improved = false;
            for phi in &dirs {
                let cand =
                    SpherePoint::new(best.vec() + (e1 * phi.cos() + e2 * phi.sin()) * step.tan()).expect("non-zero");
                let v = value(cand);
                if v > best_v {
                    best = cand;
                    best_v = v;
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    (best_v > 1e-9).then_some(best)
}

/// Spherical convex hull via a gnomonic chart about the mean direction (or
/// about the antipode of a hemisphericity witness when the mean does not see
/// every point).
pub fn spherical_convex_hull(w: &[SpherePoint]) -> Result<SphericalPolygon> {
    let witness = hemispherical_check(w).ok_or(Error::NotHemispherical)?;
    let sum = w.iter().fold(Vec3::new(0.0, 0.0, 0.0), |a, v| a + v.vec());
    let center = match SpherePoint::new(sum) {
        Ok(m) if w.iter().all(|p| p.dot(m) > 1e-9) => m,
        _ => witness.antipode(),
    };
    let (e1, e2) = tangent_frame(center);
    let c = center.vec();
    let chart: Vec<Point2> = w
        .iter()
        .map(|p| {
            let v = p.vec();
            let z = v.dot(c);
            Point2::new(v.dot(e1) / z, v.dot(e2) / z)
        })
        .collect();
    let hull = convex_hull(&chart);
    let vertices =
        hull.vertices().iter().map(|q| SpherePoint::new(c + e1 * q.x + e2 * q.y).expect("chart point")).collect();
    Ok(SphericalPolygon::new(dedup_sphere(vertices)))
}

/// `k` uniform random points strictly inside a random open hemisphere,
/// at least `0.05` above its boundary plane.
pub fn random_hemispherical_set<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<SpherePoint> {
    let c = SpherePoint::random(rng);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let p = SpherePoint::random(rng);
        if p.dot(c) > 0.05 {
            out.push(p);
        }
    }
    out
}

/// Compares membership in the polar of the hull with membership in the
/// intersection of the hemispheres `H(w)` on random points.
pub fn maehara_check<R: Rng + ?Sized>(w: &[SpherePoint], trials: usize, rng: &mut R) -> Result<bool> {
    const TOL: f64 = 1e-9;
    let hull = spherical_convex_hull(w)?;
    // the hull is sampled on its vertices, edges and interior fan
    let mut hull_points = hull.boundary_samples(8);
    if let Some(c) = hull.hemisphere_witness() {
        for v in hull.vertices() {
            hull_points.push(slerp(c, *v, 0.5));
        }
        hull_points.push(c);
    }
    for _ in 0..trials {
        let q = SpherePoint::random(rng);
        let in_hull_polar = hull_points.iter().all(|x| x.dot(q) >= -TOL);
        let in_hemispheres = w.iter().all(|p| p.dot(q) >= -TOL);
        if in_hull_polar != in_hemispheres {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Unit-speed samples of a spherical curve and its Frenet frame.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SphericalFrame {
    /// Spherical arc length of each sample.
    pub arclength: Vec<f64>,
    /// Original curve parameter of each sample.
    pub params: Vec<f64>,
    pub r_tilde: Vec<Vec3>,
    pub t_tilde: Vec<Vec3>,
    pub n_tilde: Vec<Vec3>,
    pub kappa_g: Vec<f64>,
    pub length: f64,
}

impl SphericalFrame {
    pub fn len(&self) -> usize {
        self.r_tilde.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_tilde.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.length / self.len() as f64
    }

    /// Largest deviation of the frame from a positively oriented
    /// orthonormal basis.
    pub fn frame_error(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let (r, t, n) = (self.r_tilde[i], self.t_tilde[i], self.n_tilde[i]);
                [
                    (r.norm() - 1.0).abs(),
                    (t.norm() - 1.0).abs(),
                    (n.norm() - 1.0).abs(),
                    r.dot(t).abs(),
                    r.dot(n).abs(),
                    t.dot(n).abs(),
                    (Vec3::det(r, t, n) - 1.0).abs(),
                ]
                .into_iter()
                .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|n' + kappa_g t|` with `n'` from central differences.
    pub fn frenet_residual(&self) -> f64 {
        let m = self.len();
        let h = self.step();
        (0..m)
            .map(|i| {
                let d = (self.n_tilde[(i + 1) % m] - self.n_tilde[(i + m - 1) % m]) * (0.5 / h);
                (d + self.t_tilde[i] * self.kappa_g[i]).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Lifts `r` to the sphere through `(x, y, 1) / |(x, y, 1)|` and samples its
/// frame at `m` points uniform in spherical arc length.
pub fn spherical_frenet(curve: &ParametricCurve, m: usize) -> Result<SphericalFrame> {
    let scale = curve.scale();
    spherical_frenet_direct(
        |s| {
            let (p, d1, d2) = curve.jet(s);
            let u = Vec3::new(p.x, p.y, 1.0);
            let u1 = Vec3::new(d1.x, d1.y, 0.0);
            let u2 = Vec3::new(d2.x, d2.y, 0.0);
            let rho = u.norm();
            let rho1 = u.dot(u1) / rho;
            let rho2 = (u1.dot(u1) + u.dot(u2)) / rho - rho1 * rho1 / rho;
            let r = u * (1.0 / rho);
            let r1 = u1 * (1.0 / rho) - u * (rho1 / (rho * rho));
            let r2 = u2 * (1.0 / rho) - u1 * (2.0 * rho1 / (rho * rho)) - u * (rho2 / (rho * rho))
                + u * (2.0 * rho1 * rho1 / (rho * rho * rho));
            (r, r1, r2)
        },
        m,
    )
    .map_err(|e| match e {
        Error::Immersion { s, speed } => Error::Immersion { s, speed: speed * scale },
        other => other,
    })
}

/// Same as [`spherical_frenet`] for a curve given directly on the sphere by
/// its position and first two derivatives on `[0, 2pi)`.
pub fn spherical_frenet_direct(jet: impl Fn(f64) -> (Vec3, Vec3, Vec3), m: usize) -> Result<SphericalFrame> {
    if m < 16 {
        return Err(Error::InvalidParameter(format!("frame needs at least 16 samples, got {m}")));
    }
    let speed = |s: f64| jet(s).1.norm();
    // cumulative arc length on a fine grid with 5-point Gauss-Legendre
    let cells = (4 * m).max(1024);
    let h = TAU / cells as f64;
    let gl = gauss_legendre_5();
    let seg = |a: f64, b: f64| -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        gl.iter().map(|(x, w)| w * speed(mid + half * x)).sum::<f64>() * half
    };
    let mut cumulative = Vec::with_capacity(cells + 1);
    cumulative.push(0.0);
    for i in 0..cells {
        let a = i as f64 * h;
        let next = cumulative[i] + seg(a, a + h);
        cumulative.push(next);
    }
    let length = cumulative[cells];
    for i in 0..cells {
        let s = i as f64 * h;
        let v = speed(s);
        if !(v > 1e-9) {
            return Err(Error::Immersion { s, speed: v });
        }
    }

    let mut frame = SphericalFrame {
        arclength: Vec::with_capacity(m),
        params: Vec::with_capacity(m),
        r_tilde: Vec::with_capacity(m),
        t_tilde: Vec::with_capacity(m),
        n_tilde: Vec::with_capacity(m),
        kappa_g: Vec::with_capacity(m),
        length,
    };
    for j in 0..m {
        let target = length * j as f64 / m as f64;
        let cell = cumulative.partition_point(|&c| c <= target).saturating_sub(1).min(cells - 1);
        let a = cell as f64 * h;
        // linear guess inside the cell, then Newton on the arc-length equation
        let frac = (target - cumulative[cell]) / (cumulative[cell + 1] - cumulative[cell]);
        let mut s = a + frac * h;
        for _ in 0..8 {
            let err = cumulative[cell] + seg(a, s) - target;
            let ds = err / speed(s);
            s -= ds;
            if ds.abs() < 1e-15 {
                break;
            }
        }
        let (r, r1, r2) = jet(s);
        let v = r1.norm();
        let t = r1 * (1.0 / v);
        frame.arclength.push(target);
        frame.params.push(s);
        frame.r_tilde.push(r);
        frame.t_tilde.push(t);
        frame.n_tilde.push(r.cross(t));
        frame.kappa_g.push(Vec3::det(r, r1, r2) / (v * v * v));
    }
    Ok(frame)
}

fn gauss_legendre_5() -> [(f64, f64); 5] {
    let a = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let b = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let wa = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
    let wb = (322.0 - 13.0 * 70f64.sqrt()) / 900.0;
    [(-b, wb), (-a, wa), (0.0, 128.0 / 225.0), (a, wa), (b, wb)]
}

/// `cos(theta) n - sin(theta) t` at every frame sample, and the smallest
/// central-difference speed of that curve in unit-speed parameter.
pub fn rotated_dual(frame: &SphericalFrame, theta: f64) -> (Vec<SpherePoint>, f64) {
    let (s, c) = theta.sin_cos();
    let pts: Vec<Vec3> = (0..frame.len()).map(|i| frame.n_tilde[i] * c - frame.t_tilde[i] * s).collect();
    let m = pts.len();
    let h = frame.step();
    let min_speed =
        (0..m).map(|i| (pts[(i + 1) % m] - pts[(i + m - 1) % m]).norm() / (2.0 * h)).fold(f64::INFINITY, f64::min);
    let pts = pts.into_iter().map(|v| SpherePoint::new(v).expect("unit combination")).collect();
    (pts, min_speed)
}

/// Directed angular distance from sampled set `a` to the set with samples
/// `b` and membership test `b_contains`.
pub fn spherical_directed(a: &[SpherePoint], b: &[SpherePoint], b_contains: impl Fn(SpherePoint) -> bool) -> f64 {
    a.iter()
        .map(|&x| if b_contains(x) { 0.0 } else { b.iter().map(|&y| x.angle_to(y)).fold(f64::INFINITY, f64::min) })
        .fold(0.0, f64::max)
}

/// Boundary circle of the cap of angular radius `radius` about the north
/// pole.
pub fn cap_boundary(radius: f64, m: usize) -> Vec<SpherePoint> {
    (0..m)
        .map(|i| {
            let phi = TAU * i as f64 / m as f64;
            SpherePoint(Vec3::new(radius.sin() * phi.cos(), radius.sin() * phi.sin(), radius.cos()))
        })
        .collect()
}

/// For caps of radius `radius + eps` shrinking to the cap of radius
/// `radius`, the Hausdorff distances between the polars of their sampled
/// boundaries and the polar of the limit cap (the cap of radius
/// `pi/2 - radius`). Also reports whether the series is strictly
/// decreasing.
pub fn cap_polar_continuity(radius: f64, eps: &[f64], m: usize) -> Result<(Vec<f64>, bool)> {
    let limit = PI / 2.0 - radius;
    let limit_samples = cap_boundary(limit, 4 * m);
    let in_limit = |q: SpherePoint| q.vec().z >= limit.cos() - 1e-12;
    let mut out = Vec::with_capacity(eps.len());
    for &e in eps {
        let w = cap_boundary(radius + e, m);
        let polar = polar_set(&w)?;
        let PolarSet::Polygon(poly) = &polar.shape else {
            return Err(Error::Inconsistent("polar of a cap sample is not a polygon".into()));
        };
        let pb = poly.boundary_samples(16);
        let d1 = spherical_directed(&pb, &limit_samples, in_limit);
        let d2 = spherical_directed(&limit_samples, &pb, |q| poly.contains(q, 1e-12));
        out.push(d1.max(d2));
    }
    let monotone = out.windows(2).all(|w| w[1] < w[0]);
    Ok((out, monotone))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::invert;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_6};

    fn sp(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::from_xyz(x, y, z).unwrap()
    }

    #[test]
    fn chart_examples() {
        assert_eq!(central_project(SpherePoint::NORTH).unwrap(), Point2::ORIGIN);
        let q = central_project(sp(1.0, 0.0, 1.0)).unwrap();
        assert!(q.distance(Point2::new(1.0, 0.0)) < 1e-15);
        assert!(central_project(sp(0.0, 1.0, 0.0)).is_err());
        let u = central_unproject(Point2::new(1.0, 0.0)).vec();
        assert!((u - Vec3::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
        let u = central_unproject(Point2::new(3.0, 4.0)).vec();
        assert!((u - Vec3::new(3.0, 4.0, 1.0) * (1.0 / 26f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn psi_examples() {
        assert!((psi_n(sp(1.0, 0.0, 0.0)).unwrap().vec() - Vec3::NORTH).norm() < 1e-15);
        let r = psi_n(sp(0.0, 1.0, 1.0)).unwrap().vec();
        assert!((r - Vec3::new(0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(psi_n(SpherePoint::NORTH), Err(Error::Pole));
        assert_eq!(psi_n(SpherePoint::NORTH.antipode()), Err(Error::Pole));
    }

    #[test]
    fn psi_is_plane_inversion_in_the_chart() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let q = Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let image = central_project(psi_n(central_unproject(q)).unwrap()).unwrap();
            let expected = invert(q, Point2::ORIGIN).unwrap();
            assert!(image.distance(expected) <= 1e-10 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn polar_examples() {
        let n = SpherePoint::NORTH;
        assert!(matches!(polar_set(&[n]).unwrap().shape, PolarSet::Hemisphere { .. }));
        assert!(matches!(polar_set(&[n, n.antipode()]).unwrap().shape, PolarSet::GreatCircle { .. }));
        let basis = [sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.0, 0.0, 1.0)];
        let PolarSet::Polygon(octant) = polar_set(&basis).unwrap().shape else { panic!() };
        assert_eq!(octant.len(), 3);
        for v in octant.vertices() {
            assert!(basis.iter().any(|b| b.angle_to(*v) < 1e-15));
        }
        assert!(matches!(polar_set(&[sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0)]).unwrap().shape, PolarSet::Lune { .. }));
        assert!(matches!(
            polar_set(&[sp(1.0, 0.0, 0.0), sp(-1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0)]).unwrap().shape,
            PolarSet::Semicircle { .. }
        ));
        assert!(matches!(
            polar_set(&[sp(1.0, 0.0, 0.0), sp(-1.0, 1.0, 0.0), sp(-1.0, -1.0, 0.0)]).unwrap().shape,
            PolarSet::AntipodalPair { .. }
        ));
        // a point plus three vectors pinning it
        let pinned = [sp(1.0, 0.0, 0.0), sp(-1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.0, -1.0, 0.0), sp(0.0, 0.0, 1.0)];
        assert!(matches!(polar_set(&pinned).unwrap().shape, PolarSet::Point { .. }));
        let empty = [
            sp(1.0, 0.0, 0.0),
            sp(-1.0, 0.0, 0.0),
            sp(0.0, 1.0, 0.0),
            sp(0.0, -1.0, 0.0),
            sp(0.0, 0.0, 1.0),
            sp(0.0, 0.0, -1.0),
        ];
        assert!(matches!(polar_set(&empty).unwrap().shape, PolarSet::Empty));
    }

    #[test]
    fn polar_polygon_matches_rejection_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let k = rng.gen_range(3..9);
            let w: Vec<SpherePoint> = (0..k).map(|_| SpherePoint::random(&mut rng)).collect();
            let polar = polar_set(&w).unwrap();
            for _ in 0..2000 {
                let q = SpherePoint::random(&mut rng);
                let truth = w.iter().all(|p| p.dot(q) >= 0.0);
                let margin = w.iter().map(|p| p.dot(q).abs()).fold(f64::INFINITY, f64::min);
                if margin < 1e-9 {
                    continue;
                }
                let inside = match &polar.shape {
                    PolarSet::Empty => false,
                    PolarSet::Polygon(p) => p.contains(q, 0.0),
                    PolarSet::Point { .. } | PolarSet::Arc { .. } => false,
                    other => panic!("unexpected {other:?}"),
                };
                assert_eq!(inside, truth, "w = {w:?}\nq = {q:?}\npolar = {:?}", polar.shape);
            }
        }
    }

    #[test]
    fn hemispherical_examples() {
        let n = SpherePoint::NORTH;
        assert!(hemispherical_check(&[n]).unwrap().angle_to(n.antipode()) < 1e-3);
        assert!(hemispherical_check(&[n, n.antipode()]).is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cap: Vec<SpherePoint> =
            (0..400).map(|_| SpherePoint::random(&mut rng)).filter(|p| p.vec().z >= 0.5).collect();
        let w = hemispherical_check(&cap).unwrap();
        assert!(w.angle_to(n.antipode()) < 0.05);
    }

    #[test]
    fn hull_examples() {
        let n = SpherePoint::NORTH;
        assert_eq!(spherical_convex_hull(&[n]).unwrap().len(), 1);
        let tri = [n, sp(1.0, 0.0, 1.0), sp(0.0, 1.0, 1.0)];
        let h = spherical_convex_hull(&tri).unwrap();
        assert_eq!(h.len(), 3);
        for v in &tri {
            assert!(h.vertices().iter().any(|u| u.angle_to(*v) < 1e-12));
        }
        let mut with_inner = tri.to_vec();
        with_inner.push(sp(0.3, 0.3, 1.0));
        assert_eq!(spherical_convex_hull(&with_inner).unwrap().len(), 3);
        assert_eq!(spherical_convex_hull(&[n, n.antipode()]), Err(Error::NotHemispherical));
    }

    #[test]
    fn maehara_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(maehara_check(&[SpherePoint::NORTH], 5000, &mut rng).unwrap());
        assert!(maehara_check(&[sp(1.0, 0.0, 1.0), sp(0.0, 1.0, 0.0)], 5000, &mut rng).unwrap());
        for k in 1..=6 {
            let w = random_hemispherical_set(&mut rng, k);
            assert!(maehara_check(&w, 20_000, &mut rng).unwrap());
        }
    }

    #[test]
    fn bipolar_of_a_finite_set_is_its_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let w = random_hemispherical_set(&mut rng, 6);
            let hull = spherical_convex_hull(&w).unwrap();
            if hull.len() < 3 {
                continue;
            }
            let PolarSet::Polygon(p) = polar_set(&w).unwrap().shape else { panic!() };
            let PolarSet::Polygon(bipolar) = polar_set(&p.boundary_samples(256)).unwrap().shape else { panic!() };
            let (a, b) = (hull.boundary_samples(64), bipolar.boundary_samples(64));
            let d = spherical_directed(&a, &b, |q| bipolar.contains(q, 1e-12))
                .max(spherical_directed(&b, &a, |q| hull.contains(q, 1e-12)));
            assert!(d < 1e-3, "d = {d}");
        }
    }

    #[test]
    fn great_circles_have_zero_geodesic_curvature() {
        let f = spherical_frenet_direct(
            |s| {
                let (sn, cs) = s.sin_cos();
                (Vec3::new(cs, sn, 0.0), Vec3::new(-sn, cs, 0.0), Vec3::new(-cs, -sn, 0.0))
            },
            512,
        )
        .unwrap();
        assert!(f.kappa_g.iter().all(|k| k.abs() < 1e-14));
        assert!((f.length - TAU).abs() < 1e-12);
    }

    #[test]
    fn latitude_circle_curvature() {
        let c = 0.6f64;
        let a = (1.0 - c * c).sqrt();
        let f = spherical_frenet_direct(
            |s| {
                let (sn, cs) = s.sin_cos();
                (Vec3::new(a * cs, a * sn, c), Vec3::new(-a * sn, a * cs, 0.0), Vec3::new(-a * cs, -a * sn, 0.0))
            },
            512,
        )
        .unwrap();
        assert!(f.kappa_g.iter().all(|k| (k - c / a).abs() < 1e-12));
    }

    #[test]
    fn ellipse_frame_satisfies_frenet_equations() {
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        let f = spherical_frenet(&e, 4096).unwrap();
        assert!(f.frame_error() < 1e-9);
        assert!(f.frenet_residual() < 2e-4, "residual {}", f.frenet_residual());
        // samples are uniform in arc length
        let m = f.len();
        for i in 0..m {
            let chord = f.r_tilde[i].cross(f.r_tilde[(i + 1) % m]).norm().asin();
            assert!((chord - f.step()).abs() < 1e-6 * f.step());
        }
    }

    #[test]
    fn rotated_dual_examples() {
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        let f = spherical_frenet(&e, 2048).unwrap();
        let (d0, _) = rotated_dual(&f, 0.0);
        for (p, n) in d0.iter().zip(&f.n_tilde) {
            assert!((p.vec() - *n).norm() < 1e-12);
        }
        let (d90, _) = rotated_dual(&f, PI / 2.0);
        for (p, t) in d90.iter().zip(&f.t_tilde) {
            assert!((p.vec() + *t).norm() < 1e-12);
        }
        let (_, speed) = rotated_dual(&f, FRAC_PI_6);
        assert!(speed >= 0.5 - 0.05);
    }

    #[test]
    fn great_circle_of_the_frame_projects_to_the_tangent_line() {
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        let f = spherical_frenet(&e, 64).unwrap();
        for i in 0..f.len() {
            let (p, d, _) = e.jet(f.params[i]);
            for a in [-0.3, 0.1, 0.4] {
                let q = SpherePoint::new(f.r_tilde[i] * f64::cos(a) + f.t_tilde[i] * f64::sin(a)).unwrap();
                let x = central_project(q).unwrap();
                assert!((x - p).cross(d).abs() < 1e-10 * d.norm());
            }
        }
    }

    #[test]
    fn cap_polars_converge_monotonically() {
        let (d, monotone) = cap_polar_continuity(0.5, &[0.2, 0.1, 0.05, 0.025], 256).unwrap();
        assert!(monotone, "{d:?}");
        for (di, ei) in d.iter().zip([0.2, 0.1, 0.05, 0.025]) {
            assert!((di - ei).abs() < 5e-3);
        }
    }
}
