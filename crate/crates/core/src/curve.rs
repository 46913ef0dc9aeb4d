//! Closed parametric plane curves `r: [0, 2pi) -> R^2`.
//!
//! Built-in families have closed-form derivatives. Tabulated curves are
//! interpolated by a periodic cubic spline so that curvature stays continuous.

use std::f64::consts::TAU;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{convex_hull, rotate, Line2, Point2};

/// Minimum speed `|r'|`, relative to the curve scale.
pub const IMMERSION_TOL: f64 = 1e-6;

/// Samples used when validating and measuring a freshly built curve.
const PROBE_SAMPLES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveKind {
    Circle {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `r(s) = (1 - eps cos(k s)) (cos s, sin s)`.
    Flower {
        k: u32,
        eps: f64,
    },
    Table(TableCurve),
}

/// A validated closed immersed curve, optionally translated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametricCurve {
    kind: CurveKind,
    offset: Point2,
    scale: f64,
    bbox: (Point2, Point2),
}

impl ParametricCurve {
    pub fn new(kind: CurveKind) -> Result<Self> {
        match &kind {
            CurveKind::Circle { radius } if !(*radius > 0.0 && radius.is_finite()) => {
                return Err(Error::InvalidCurve(format!("circle radius {radius} must be positive")));
            }
            CurveKind::Ellipse { a, b } if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) => {
                return Err(Error::InvalidCurve(format!("ellipse axes ({a}, {b}) must be positive")));
            }
            CurveKind::Flower { k, eps } if *k == 0 || !(0.0..1.0).contains(eps) => {
                return Err(Error::InvalidCurve(format!(
                    "flower needs k >= 1 and 0 <= eps < 1, got k = {k}, eps = {eps}"
                )));
            }
            _ => {}
        }
        let mut curve = Self { kind, offset: Point2::ORIGIN, scale: 1.0, bbox: (Point2::ORIGIN, Point2::ORIGIN) };
        curve.measure()?;
        Ok(curve)
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(CurveKind::Circle { radius })
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::new(CurveKind::Ellipse { a, b })
    }

    pub fn flower(k: u32, eps: f64) -> Result<Self> {
        Self::new(CurveKind::Flower { k, eps })
    }

    pub fn table(table: TableCurve) -> Result<Self> {
        Self::new(CurveKind::Table(table))
    }

    /// The same curve shifted by `v`.
    pub fn translated(&self, v: Point2) -> Self {
        let mut c = self.clone();
        c.offset += v;
        c.bbox = (c.bbox.0 + v, c.bbox.1 + v);
        c
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    /// Curve diameter; every length tolerance is relative to it.
    #[inline]
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Axis-aligned bounding box `(min, max)` from dense sampling.
    pub fn bbox(&self) -> (Point2, Point2) {
        self.bbox
    }

    /// `r(s)`, `r'(s)` and `r''(s)`.
    pub fn jet(&self, s: f64) -> (Point2, Point2, Point2) {
        let (p, d1, d2) = match &self.kind {
            CurveKind::Circle { radius } => {
                let (sn, cs) = s.sin_cos();
                (
                    Point2::new(radius * cs, radius * sn),
                    Point2::new(-radius * sn, radius * cs),
                    Point2::new(-radius * cs, -radius * sn),
                )
            }
            CurveKind::Ellipse { a, b } => {
                let (sn, cs) = s.sin_cos();
                (Point2::new(a * cs, b * sn), Point2::new(-a * sn, b * cs), Point2::new(-a * cs, -b * sn))
            }
            CurveKind::Flower { k, eps } => {
                let k = *k as f64;
                let (sk, ck) = (k * s).sin_cos();
                let rho = 1.0 - eps * ck;
                let drho = eps * k * sk;
                let ddrho = eps * k * k * ck;
                let u = Point2::from_angle(s);
                let v = u.perp();
                (u * rho, u * drho + v * rho, u * (ddrho - rho) + v * (2.0 * drho))
            }
            CurveKind::Table(t) => t.jet(s),
        };
        (p + self.offset, d1, d2)
    }

    #[inline]
    pub fn position(&self, s: f64) -> Point2 {
        self.jet(s).0
    }

    fn measure(&mut self) -> Result<()> {
        let pts: Vec<Point2> =
            (0..PROBE_SAMPLES).map(|i| self.position(TAU * i as f64 / PROBE_SAMPLES as f64)).collect();
        if pts.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidCurve("curve evaluates to non-finite points".into()));
        }
        let hull = convex_hull(&pts);
        let diameter = hull.diameter();
        if !(diameter > 0.0) {
            return Err(Error::InvalidCurve("curve has zero diameter".into()));
        }
        let mut lo = pts[0];
        let mut hi = pts[0];
        for p in &pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        self.scale = diameter;
        self.bbox = (lo, hi);
        for i in 0..PROBE_SAMPLES {
            let s = TAU * i as f64 / PROBE_SAMPLES as f64;
            let speed = self.jet(s).1.norm();
            if !(speed > IMMERSION_TOL * diameter) {
                return Err(Error::Immersion { s, speed });
            }
        }
        Ok(())
    }
}

/// Position and unit tangent at `s`.
pub fn evaluate(curve: &ParametricCurve, s: f64) -> Result<(Point2, Point2)> {
    let (p, d, _) = curve.jet(s);
    let speed = d.norm();
    if !(speed >= IMMERSION_TOL * curve.scale()) {
        return Err(Error::Immersion { s, speed });
    }
    Ok((p, d / speed))
}

/// Tangent line at `s` rotated about `r(s)` by `theta`.
pub fn tangent_line(curve: &ParametricCurve, s: f64, theta: f64) -> Result<Line2> {
    let (p, t) = evaluate(curve, s)?;
    Line2::new(p, rotate(t, theta))
}

/// Signed curvature `(x'y'' - y'x'') / |r'|^3`; a counterclockwise circle is
/// positive.
pub fn curvature(curve: &ParametricCurve, s: f64) -> Result<f64> {
    let (_, d1, d2) = curve.jet(s);
    let speed = d1.norm();
    if !(speed >= IMMERSION_TOL * curve.scale()) {
        return Err(Error::Immersion { s, speed });
    }
    Ok(d1.cross(d2) / (speed * speed * speed))
}

/// Parameters in `[0, 2pi)` where the curvature changes sign, refined by
/// bisection to `1e-10`. Convex curves give an empty list.
pub fn inflection_points(curve: &ParametricCurve, n: usize) -> Result<Vec<f64>> {
    if n < 256 {
        return Err(Error::InvalidParameter(format!("inflection scan needs n >= 256, got {n}")));
    }
    let params: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let kappa = params.iter().map(|&s| curvature(curve, s)).collect::<Result<Vec<_>>>()?;
    // Tiny |kappa| is rounding noise on straight pieces, not a sign.
    let floor = 1e-12 / curve.scale();
    let sign = |k: f64| {
        if k > floor {
            1
        } else if k < -floor {
            -1
        } else {
            0
        }
    };
    let mut out = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (si, sj) = (sign(kappa[i]), sign(kappa[j]));
        if si * sj >= 0 {
            continue;
        }
        let (mut lo, mut hi) = (params[i], params[i] + TAU / n as f64);
        let lo_sign = si;
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if sign(curvature(curve, mid)?) == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push((0.5 * (lo + hi)).rem_euclid(TAU));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Uniform discretization of a curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSamples {
    pub params: Vec<f64>,
    pub points: Vec<Point2>,
    pub tangents: Vec<Point2>,
    pub curvatures: Vec<f64>,
}

pub fn sample(curve: &ParametricCurve, n: usize) -> Result<CurveSamples> {
    if n < 64 {
        return Err(Error::InvalidParameter(format!("curve sampling needs n >= 64, got {n}")));
    }
    let mut out = CurveSamples {
        params: Vec::with_capacity(n),
        points: Vec::with_capacity(n),
        tangents: Vec::with_capacity(n),
        curvatures: Vec::with_capacity(n),
    };
    for i in 0..n {
        let s = TAU * i as f64 / n as f64;
        let (p, t) = evaluate(curve, s)?;
        out.params.push(s);
        out.points.push(p);
        out.tangents.push(t);
        out.curvatures.push(curvature(curve, s)?);
    }
    Ok(out)
}

/// Periodic cubic spline through closed sample points.
///
/// Knot convention: with an explicit `s` column the knots are taken as given
/// (strictly increasing, inside `[0, 2pi)`); otherwise row `i` of `n` sits at
/// `s_i = 2 pi i / n`. The closing point is implied and must not be repeated;
/// a trailing row equal to the first is dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCurve {
    knots: Vec<f64>,
    points: Vec<Point2>,
    second: Vec<Point2>,
}

impl TableCurve {
    pub fn uniform(points: Vec<Point2>) -> Result<Self> {
        let n = points.len();
        let knots = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        Self::with_knots(knots, points)
    }

    pub fn with_knots(knots: Vec<f64>, mut points: Vec<Point2>) -> Result<Self> {
        let mut knots = knots;
        if points.len() > 1 && points[0] == points[points.len() - 1] {
            points.pop();
            knots.pop();
        }
        let n = points.len();
        if n < 8 {
            return Err(Error::InvalidCurve(format!("table curve needs at least 8 points, got {n}")));
        }
        if knots.len() != n {
            return Err(Error::InvalidCurve("knot and point counts differ".into()));
        }
        if points.iter().any(|p| !p.is_finite()) || knots.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidCurve("table contains non-finite values".into()));
        }
        if knots[0] < 0.0 || knots[n - 1] >= TAU || knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidCurve("knots must be strictly increasing inside [0, 2pi)".into()));
        }
        let h: Vec<f64> =
            (0..n).map(|i| if i + 1 < n { knots[i + 1] - knots[i] } else { knots[0] + TAU - knots[i] }).collect();
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rx = vec![0.0; n];
        let mut ry = vec![0.0; n];
        for i in 0..n {
            let hp = h[(i + n - 1) % n];
            let hi = h[i];
            let prev = points[(i + n - 1) % n];
            let next = points[(i + 1) % n];
            sub[i] = hp;
            diag[i] = 2.0 * (hp + hi);
            sup[i] = hi;
            let rhs = ((next - points[i]) / hi - (points[i] - prev) / hp) * 6.0;
            rx[i] = rhs.x;
            ry[i] = rhs.y;
        }
        let mx = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rx);
        let my = solve_cyclic_tridiagonal(&sub, &diag, &sup, &ry);
        let second = mx.into_iter().zip(my).map(|(x, y)| Point2::new(x, y)).collect();
        Ok(Self { knots, points, second })
    }

    /// Reads `x,y` or `s,x,y` CSV (header row required).
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::InvalidCurve(format!("csv header: {e}")))?
            .iter()
            .map(|h| h.to_ascii_lowercase())
            .collect();
        let has_s = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["x", "y"] => false,
            ["s", "x", "y"] => true,
            _ => {
                return Err(Error::InvalidCurve(format!(
                    "csv header must be `x,y` or `s,x,y`, got `{}`",
                    header.join(",")
                )))
            }
        };
        let mut knots = Vec::new();
        let mut points = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::InvalidCurve(format!("csv row {}: {e}", row + 2)))?;
            let vals = rec
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidCurve(format!("csv row {}: {e}", row + 2)))?;
            if has_s {
                knots.push(vals[0]);
                points.push(Point2::new(vals[1], vals[2]));
            } else {
                points.push(Point2::new(vals[0], vals[1]));
            }
        }
        if has_s {
            Self::with_knots(knots, points)
        } else {
            Self::uniform(points)
        }
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::InvalidCurve(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(f)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn jet(&self, s: f64) -> (Point2, Point2, Point2) {
        let n = self.knots.len();
        let s = s.rem_euclid(TAU);
        // interval i with knots[i] <= s < knots[i+1], wrapping below knots[0]
        let (i, s) = match self.knots.partition_point(|&k| k <= s) {
            0 => (n - 1, s + TAU),
            p => (p - 1, s),
        };
        let j = (i + 1) % n;
        let s0 = self.knots[i];
        let s1 = if j == 0 { self.knots[0] + TAU } else { self.knots[j] };
        let h = s1 - s0;
        let (a, b) = (s1 - s, s - s0);
        let (m0, m1) = (self.second[i], self.second[j]);
        let (y0, y1) = (self.points[i], self.points[j]);
        let p = m0 * (a * a * a / (6.0 * h))
            + m1 * (b * b * b / (6.0 * h))
            + (y0 / h - m0 * (h / 6.0)) * a
            + (y1 / h - m1 * (h / 6.0)) * b;
        let d1 = m0 * (-a * a / (2.0 * h)) + m1 * (b * b / (2.0 * h)) - (y0 / h - m0 * (h / 6.0))
            + (y1 / h - m1 * (h / 6.0));
        let d2 = m0 * (a / h) + m1 * (b / h);
        (p, d1, d2)
    }
}

/// Solves a cyclic tridiagonal system (`sub[0]` couples to the last row,
/// `sup[n-1]` to the first) via Sherman-Morrison.
fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let alpha = sup[n - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &d, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &d, sup, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

/// Thomas algorithm; `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Parses `circle:1`, `ellipse:2,1`, `flower:4,0.35` or `table:PATH`.
pub fn parse_curve_spec(spec: &str) -> Result<ParametricCurve> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let nums = || -> Result<Vec<f64>> {
        args.split(',')
            .filter(|a| !a.trim().is_empty())
            .map(|a| {
                a.trim().parse::<f64>().map_err(|e| Error::InvalidCurve(format!("`{spec}`: bad number `{a}`: {e}")))
            })
            .collect()
    };
    match name.trim().to_ascii_lowercase().as_str() {
        "circle" => match nums()?.as_slice() {
            [] => ParametricCurve::circle(1.0),
            [r] => ParametricCurve::circle(*r),
            _ => Err(Error::InvalidCurve(format!("`{spec}`: circle takes one radius"))),
        },
        "ellipse" => match nums()?.as_slice() {
            [a, b] => ParametricCurve::ellipse(*a, *b),
            _ => Err(Error::InvalidCurve(format!("`{spec}`: ellipse takes `a,b`"))),
        },
        "flower" => match nums()?.as_slice() {
            [] => ParametricCurve::flower(4, 0.35),
            [k, eps] if k.fract() == 0.0 && *k >= 1.0 => ParametricCurve::flower(*k as u32, *eps),
            _ => Err(Error::InvalidCurve(format!("`{spec}`: flower takes `k,eps` with integer k"))),
        },
        "table" => ParametricCurve::table(TableCurve::from_csv_path(Path::new(args.trim()))?),
        other => Err(Error::InvalidCurve(format!("unknown curve kind `{other}`"))),
    }
}

/// Parameter of the point with polar angle `phi` on a star-shaped curve
/// about the origin; only used by tests and reports for built-in kinds.
pub fn polar_parameter(curve: &ParametricCurve, phi: f64) -> f64 {
    match curve.kind() {
        CurveKind::Ellipse { a, b } => (a * phi.sin()).atan2(b * phi.cos()).rem_euclid(TAU),
        _ => phi.rem_euclid(TAU),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn evaluate_examples() {
        let c = ParametricCurve::circle(1.0).unwrap();
        let (p, t) = evaluate(&c, 0.0).unwrap();
        assert!(p.distance(Point2::new(1.0, 0.0)) < 1e-15);
        assert!(t.distance(Point2::new(0.0, 1.0)) < 1e-15);

        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        let (p, t) = evaluate(&e, FRAC_PI_2).unwrap();
        assert!(p.distance(Point2::new(0.0, 1.0)) < 1e-15);
        assert!(t.distance(Point2::new(-1.0, 0.0)) < 1e-15);

        let f = ParametricCurve::flower(4, 0.0).unwrap();
        for i in 0..16 {
            let s = 0.37 * i as f64;
            let (pf, tf) = evaluate(&f, s).unwrap();
            let (pc, tc) = evaluate(&c, s).unwrap();
            assert!(pf.distance(pc) < 1e-15 && tf.distance(tc) < 1e-15);
        }
    }

    #[test]
    fn scale_is_the_diameter() {
        assert!((ParametricCurve::circle(1.0).unwrap().scale() - 2.0).abs() < 1e-12);
        assert!((ParametricCurve::ellipse(2.0, 1.0).unwrap().scale() - 4.0).abs() < 1e-12);
        // flower(4, 0.35) is widest along the diagonals: 2 * 1.35
        assert!((ParametricCurve::flower(4, 0.35).unwrap().scale() - 2.7).abs() < 1e-9);
    }

    #[test]
    fn tangent_line_examples() {
        let c = ParametricCurve::circle(1.0).unwrap();
        let l = tangent_line(&c, 0.0, 0.0).unwrap();
        assert!((l.normal().x.abs() - 1.0).abs() < 1e-15);
        assert!((l.offset().abs() - 1.0).abs() < 1e-15);
        let l = tangent_line(&c, 0.0, FRAC_PI_2).unwrap();
        assert!(l.dir().distance(Point2::new(-1.0, 0.0)) < 1e-15);
        assert!(l.offset().abs() < 1e-15);
        for i in 0..50 {
            let s = 0.13 * i as f64;
            let theta = 0.031 * i as f64;
            let l = tangent_line(&c, s, theta).unwrap();
            assert!((l.offset().abs() - theta.cos().abs()).abs() < 1e-14);
        }
    }

    #[test]
    fn curvature_examples() {
        let c = ParametricCurve::circle(2.0).unwrap();
        for i in 0..8 {
            assert!((curvature(&c, i as f64).unwrap() - 0.5).abs() < 1e-15);
        }
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        assert!((curvature(&e, 0.0).unwrap() - 2.0).abs() < 1e-14);
        let f = ParametricCurve::flower(4, 0.35).unwrap();
        // dent bottoms at s = 0: rho^2 - rho rho'' = 0.65^2 - 0.65 * 5.6 < 0
        assert!(curvature(&f, 0.0).unwrap() < 0.0);
        assert!(curvature(&f, PI / 4.0).unwrap() > 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for curve in [
            ParametricCurve::circle(1.0).unwrap(),
            ParametricCurve::ellipse(2.0, 1.0).unwrap(),
            ParametricCurve::flower(4, 0.35).unwrap(),
        ] {
            for i in 0..64 {
                let s = TAU * i as f64 / 64.0;
                let fd = (curve.position(s + h) - curve.position(s - h)) / (2.0 * h);
                let (_, d1, d2) = curve.jet(s);
                assert!(fd.distance(d1) < 1e-6 * curve.scale());
                let fd2 = (curve.jet(s + h).1 - curve.jet(s - h).1) / (2.0 * h);
                assert!(fd2.distance(d2) < 1e-5 * curve.scale());
            }
        }
    }

    /// Brute-force scan at 1e5 samples: the count of curvature sign changes.
    fn brute_force_sign_changes(curve: &ParametricCurve) -> usize {
        let n = 100_000;
        let k: Vec<f64> = (0..n).map(|i| curvature(curve, TAU * i as f64 / n as f64).unwrap()).collect();
        (0..n).filter(|&i| k[i] * k[(i + 1) % n] < 0.0).count()
    }

    #[test]
    fn inflection_examples() {
        let c = ParametricCurve::circle(1.0).unwrap();
        assert!(inflection_points(&c, 1024).unwrap().is_empty());
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        assert!(inflection_points(&e, 1024).unwrap().is_empty());

        let f = ParametricCurve::flower(4, 0.35).unwrap();
        assert_eq!(brute_force_sign_changes(&f), 8);
        let infl = inflection_points(&f, 1024).unwrap();
        assert_eq!(infl.len(), 8);
        for s in &infl {
            let k = curvature(&f, *s).unwrap();
            assert!(k.abs() < 1e-8, "kappa({s}) = {k}");
        }
    }

    #[test]
    fn inflection_count_is_even() {
        for (k, eps) in [(2u32, 0.3), (3, 0.2), (4, 0.35), (5, 0.1), (6, 0.05)] {
            let f = ParametricCurve::flower(k, eps).unwrap();
            assert_eq!(inflection_points(&f, 2048).unwrap().len() % 2, 0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ParametricCurve::circle(0.0).is_err());
        assert!(ParametricCurve::ellipse(1.0, -1.0).is_err());
        assert!(ParametricCurve::flower(4, 1.0).is_err());
        assert!(ParametricCurve::flower(0, 0.1).is_err());
        assert!(inflection_points(&ParametricCurve::circle(1.0).unwrap(), 100).is_err());
        assert!(sample(&ParametricCurve::circle(1.0).unwrap(), 10).is_err());
    }

    #[test]
    fn table_spline_reproduces_a_circle() {
        let n = 256;
        let pts: Vec<Point2> = (0..n).map(|i| Point2::from_angle(TAU * i as f64 / n as f64)).collect();
        let t = ParametricCurve::table(TableCurve::uniform(pts).unwrap()).unwrap();
        for i in 0..97 {
            let s = TAU * (i as f64 + 0.31) / 97.0;
            let (p, tan) = evaluate(&t, s).unwrap();
            assert!((p.norm() - 1.0).abs() < 1e-8);
            assert!(tan.distance(Point2::from_angle(s).perp()) < 1e-6);
            assert!((curvature(&t, s).unwrap() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn table_csv_with_knots() {
        let mut csv = String::from("s,x,y\n");
        for i in 0..64 {
            let s = TAU * i as f64 / 64.0;
            csv.push_str(&format!("{s},{},{}\n", 2.0 * s.cos(), s.sin()));
        }
        let t = ParametricCurve::table(TableCurve::from_csv_reader(csv.as_bytes()).unwrap()).unwrap();
        let e = ParametricCurve::ellipse(2.0, 1.0).unwrap();
        for i in 0..50 {
            let s = 0.1 * i as f64 + 0.05;
            assert!(t.position(s).distance(e.position(s)) < 1e-4);
        }
        assert!(TableCurve::from_csv_reader("a,b\n1,2\n".as_bytes()).is_err());
        assert!(TableCurve::from_csv_reader("x,y\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn curve_spec_parsing() {
        assert!(matches!(parse_curve_spec("circle:1").unwrap().kind(), CurveKind::Circle { .. }));
        assert!(matches!(parse_curve_spec("flower:4,0.35").unwrap().kind(), CurveKind::Flower { k: 4, .. }));
        assert!(parse_curve_spec("ellipse:2").is_err());
        assert!(parse_curve_spec("spiral:1").is_err());
    }
}
