//! No-silhouette regions of rotated tangent-line families.
//!
//! Given a closed immersed plane curve `r`, every tangent line is rotated
//! about its point of tangency by a common angle `theta`. The part of the
//! plane that no rotated line touches is the *no-silhouette* `NS(theta)`.
//! Its closure is a Wulff shape that shrinks as `theta` grows and dissolves
//! at the *aperture angle* into a single *aperture point*.
//!
//! Module map:
//! - [`geom2d`]: points, lines, half-planes, convex polygons, hulls, inversion.
//! - [`curve`]: built-in and tabulated closed curves, tangents, curvature.
//! - [`silhouette`]: membership, seed search, and the two region constructions
//!   (half-plane clipping, and pedal curve -> inversion -> hull -> support).
//! - [`wulff`]: Wulff shapes, convex-body checks, dual Wulff shapes, corner
//!   and flat-edge diagnostics.
//! - [`sphere`]: central projection, `Psi_N`, polar sets, spherical hulls,
//!   the spherical Frenet frame and the rotated dual.
//! - [`metric`]: Pompeiu-Hausdorff distance.
//! - [`aperture`]: theta sweeps, nesting, aperture angle and point.
//! - [`cli`]: batch commands and the SVG / CSV / JSON emitters.

// `!(x > y)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aperture;
pub mod cli;
pub mod curve;
pub mod error;
pub mod geom2d;
pub mod metric;
pub mod silhouette;
pub mod sphere;
pub mod wulff;

pub use curve::ParametricCurve;
pub use error::{Error, Result};
pub use geom2d::{ConvexPolygon, HalfPlane, Line2, Point2};
pub use silhouette::{RegionApprox, SupportFn};
