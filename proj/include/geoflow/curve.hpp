#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "geoflow/surface.hpp"

namespace geoflow {

/// Endpoint condition: held at a fixed point, or following a prescribed
/// trajectory (used to run exact translating/shrinking solutions on a finite
/// parameter window).
struct BoundaryCondition {
  enum class Kind { Fixed, Prescribed };

  Kind kind = Kind::Fixed;
  Point anchor;                          // Fixed: the pinned point
  std::function<Point(double)> motion;   // Prescribed: time -> point

  static BoundaryCondition fixed(const Point& p) {
    BoundaryCondition b;
    b.kind = Kind::Fixed;
    b.anchor = p;
    return b;
  }
  static BoundaryCondition prescribed(std::function<Point(double)> motion) {
    BoundaryCondition b;
    b.kind = Kind::Prescribed;
    b.motion = std::move(motion);
    b.anchor = b.motion(0.0);
    return b;
  }
};

/// Ordered sample points of an open curve on a surface over a uniform
/// parameter grid. points.size() == params.size() == n+1 with n >= 8.
struct DiscreteCurve {
  Surface surface;
  std::vector<double> params;
  std::vector<Point> points;
  BoundaryCondition boundary_a;
  BoundaryCondition boundary_b;

  std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Checks grid shape, uniformity and consecutive-point separation; throws
/// std::invalid_argument describing the first violation.
void validate_curve(const DiscreteCurve& curve);

/// Per-node derived quantities. Tangent/normal frames are unit and orthogonal
/// in the surface metric; the normal is the +90-degree rotation of the
/// tangent. arclength is the cumulative trapezoid rule on speed.
struct CurveGeometry {
  std::vector<double> speed;            // |dF/du| in the surface metric
  std::vector<TangentVector> tangent;
  std::vector<TangentVector> normal;
  std::vector<double> curvature;        // geodesic curvature <cov. accel, N>
  std::vector<double> arclength;
  double total_length = 0.0;
};

CurveGeometry compute_geometry(const DiscreteCurve& curve);

/// arclength[j] - arclength[i] (requires i <= j).
double intrinsic_length(const CurveGeometry& geom, std::size_t i, std::size_t j);

/// Cumulative polyline arclength: running sums of geodesic distances between
/// consecutive nodes. Satisfies chord/arc <= 1 exactly by the triangle
/// inequality, with equality along geodesics, which makes it the right
/// denominator for chord-arc ratios.
std::vector<double> chord_arclength(const DiscreteCurve& curve);

/// chord_arclength back entry: the geodesic-polyline length of the curve.
double polyline_length(const DiscreteCurve& curve);

struct ChordArcResult {
  double theta_min = 1.0;
  std::size_t i = 0;
  std::size_t j = 0;
  bool interior = false;  // argmin strictly inside the pair grid and a strict local min
};

/// Minimum over node pairs i < j of geodesic distance / polyline arclength.
ChordArcResult chord_arc_scan(const DiscreteCurve& curve, const CurveGeometry& geom);

/// Minimum of the chord-arc ratio over pairs touching the boundary of the
/// pair grid: (0, j), (i, n) and adjacent pairs (i, i+1).
double boundary_pair_floor(const DiscreteCurve& curve);

/// Number of transversal crossings between non-adjacent segments, each
/// realized as a short geodesic arc. Tolerance-based; used as a runtime
/// embeddedness monitor.
int self_intersection_count(const DiscreteCurve& curve);

/// New curve with identical endpoints and node count, nodes equally spaced in
/// arclength. Interior nodes come from monotone cubic interpolation of the
/// ambient coordinates against arclength, then projection to the surface.
DiscreteCurve reparametrize(const DiscreteCurve& curve, const CurveGeometry& geom);

/// Points of the curve at the given arclength values (same interpolation as
/// reparametrize). Values are clamped to [0, total_length].
std::vector<Point> resample_at_arclengths(const DiscreteCurve& curve, const CurveGeometry& geom,
                                          const std::vector<double>& targets);

/// Total turning angle: trapezoid rule on |curvature| against arclength.
double total_turning(const CurveGeometry& geom);

/// Maximum over contiguous node windows of arclength < eps of the absolute
/// signed curvature integral over the window.
double alpha_epsilon(const CurveGeometry& geom, double eps);

/// Symmetric Hausdorff distance between two polylines on the same surface,
/// with exact point-to-geodesic-arc distances per segment.
double hausdorff_distance(const DiscreteCurve& a, const DiscreteCurve& b);

/// Monotone cubic (Fritsch-Carlson) slopes for data y over strictly
/// increasing abscissae x.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y);

/// Evaluate the monotone cubic interpolant at xq (clamped to the data range).
double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& m, double xq);

/// Derivative of the monotone cubic interpolant at xq.
double pchip_eval_deriv(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& m, double xq);

}  // namespace geoflow
