#ifndef NOSIL_H
#define NOSIL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum NosilStatus {
  NOSIL_STATUS_OK = 0,
  // The requested region is empty; output handles are null.
  NOSIL_STATUS_EMPTY = 1,
  NOSIL_STATUS_NULL_POINTER = -1,
  NOSIL_STATUS_INVALID_ARGUMENT = -2,
  NOSIL_STATUS_INVALID_CURVE = -3,
  NOSIL_STATUS_DEGENERATE = -4,
  NOSIL_STATUS_INCONSISTENT = -5,
  NOSIL_STATUS_INVALID_SUPPORT = -6,
  NOSIL_STATUS_SPHERE = -7,
  NOSIL_STATUS_BUFFER_TOO_SMALL = -8,
  NOSIL_STATUS_PANIC = -99,
} NosilStatus;

// Closed plane curve.
typedef struct NosilCurve NosilCurve;

// No-silhouette region: a convex polygon with its seed and margin.
typedef struct NosilRegion NosilRegion;

// Support function sampled at uniform directions about a center.
typedef struct NosilSupport NosilSupport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *nosil_last_error(void);

// # Safety
// `out` must be valid for writes.
enum NosilStatus nosil_curve_circle(double radius, struct NosilCurve **out);

// # Safety
// `out` must be valid for writes.
enum NosilStatus nosil_curve_ellipse(double a, double b, struct NosilCurve **out);

// `r(s) = (1 - eps cos(k s)) (cos s, sin s)`.
//
// # Safety
// `out` must be valid for writes.
enum NosilStatus nosil_curve_flower(uint32_t k, double eps, struct NosilCurve **out);

// Parses `circle:R`, `ellipse:A,B`, `flower:K,EPS` or `table:PATH`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` valid for writes.
enum NosilStatus nosil_curve_from_spec(const char *spec, struct NosilCurve **out);

// Periodic spline through `n` points given at uniform parameters.
//
// # Safety
// `xs` and `ys` must point to `n` doubles each; `out` valid for writes.
enum NosilStatus nosil_curve_from_points(const double *xs,
                                         const double *ys,
                                         size_t n,
                                         struct NosilCurve **out);

// # Safety
// `curve` must come from a `nosil_curve_*` constructor, or be null.
void nosil_curve_free(struct NosilCurve *curve);

// Bounding-box diagonal, the unit of relative tolerances.
//
// # Safety
// `curve` must be a live handle and `out` valid for writes.
enum NosilStatus nosil_curve_scale(const struct NosilCurve *curve, double *out);

// Whether `(x, y)` avoids every rotated tangent line, and its margin.
//
// # Safety
// `curve` must be a live handle; `inside` and `margin` valid for writes.
enum NosilStatus nosil_membership(const struct NosilCurve *curve,
                                  double theta,
                                  double x,
                                  double y,
                                  size_t n,
                                  bool *inside,
                                  double *margin);

// A point of the region with its margin, or `NOSIL_STATUS_EMPTY`.
//
// # Safety
// `curve` must be a live handle; outputs valid for writes.
enum NosilStatus nosil_find_seed(const struct NosilCurve *curve,
                                 double theta,
                                 size_t grid,
                                 size_t n,
                                 double *x,
                                 double *y,
                                 double *margin);

// Seed search followed by clipping with `n` rotated tangent lines.
//
// # Safety
// `curve` must be a live handle and `out` valid for writes.
enum NosilStatus nosil_region(const struct NosilCurve *curve,
                              double theta,
                              size_t n,
                              size_t grid,
                              struct NosilRegion **out);

// Clips a large square around a known interior seed.
//
// # Safety
// `curve` must be a live handle and `out` valid for writes.
enum NosilStatus nosil_region_by_clipping(const struct NosilCurve *curve,
                                          double theta,
                                          double seed_x,
                                          double seed_y,
                                          size_t n,
                                          struct NosilRegion **out);

// Wulff shape of a support function, placed at its center.
//
// # Safety
// `support` must be a live handle and `out` valid for writes.
enum NosilStatus nosil_region_by_support(const struct NosilSupport *support,
                                         struct NosilRegion **out);

// # Safety
// `region` must come from a region constructor, or be null.
void nosil_region_free(struct NosilRegion *region);

// Copies up to `capacity` vertices as interleaved `x, y` pairs into `xy`
// (which holds `2 * capacity` doubles) and stores the vertex count in
// `count`. Pass `xy = NULL` to query the count alone.
//
// # Safety
// `region` must be a live handle; `xy` must hold `2 * capacity` doubles.
enum NosilStatus nosil_region_vertices(const struct NosilRegion *region,
                                       double *xy,
                                       size_t capacity,
                                       size_t *count);

// Area, diameter, centroid, seed and seed margin. Any output may be null.
//
// # Safety
// `region` must be a live handle; non-null outputs valid for writes.
enum NosilStatus nosil_region_summary(const struct NosilRegion *region,
                                      double *area,
                                      double *diameter,
                                      double *centroid_x,
                                      double *centroid_y,
                                      double *seed_x,
                                      double *seed_y,
                                      double *margin);

// Hausdorff distance between two regions, boundaries subdivided at `step`.
//
// # Safety
// `a` and `b` must be live handles; `out` valid for writes.
enum NosilStatus nosil_hausdorff(const struct NosilRegion *a,
                                 const struct NosilRegion *b,
                                 double step,
                                 double *out);

// Support function of the region about `seed`, at `m` uniform directions,
// through pedal points, inversion and convex hull.
//
// # Safety
// `curve` must be a live handle and `out` valid for writes.
enum NosilStatus nosil_support_function(const struct NosilCurve *curve,
                                        double theta,
                                        double seed_x,
                                        double seed_y,
                                        size_t n,
                                        size_t m,
                                        struct NosilSupport **out);

// Support values `values[i]` at angle `2 pi i / m` about `(center_x,
// center_y)`; every value must be positive and finite.
//
// # Safety
// `values` must point to `m` doubles and `out` be valid for writes.
enum NosilStatus nosil_support_new(const double *values,
                                   size_t m,
                                   double center_x,
                                   double center_y,
                                   double theta,
                                   struct NosilSupport **out);

// Copies the support values; semantics as `nosil_region_vertices`.
//
// # Safety
// `support` must be a live handle; `values` must hold `capacity` doubles.
enum NosilStatus nosil_support_values(const struct NosilSupport *support,
                                      double *values,
                                      size_t capacity,
                                      size_t *count);

// # Safety
// `support` must come from a support constructor, or be null.
void nosil_support_free(struct NosilSupport *support);

// Aperture angle bracket `[lo, hi]` no wider than `tol`, and the aperture
// point with the diameter of the last region on the approach schedule.
// Any output may be null.
//
// # Safety
// `curve` must be a live handle; non-null outputs valid for writes.
enum NosilStatus nosil_aperture(const struct NosilCurve *curve,
                                double tol,
                                size_t n,
                                double *theta_lo,
                                double *theta_hi,
                                double *point_x,
                                double *point_y,
                                double *final_diameter);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOSIL_H */
