#pragma once

#include <vector>

#include "geoflow/flow.hpp"

namespace geoflow {

struct RescaleFactor {
  double r = 1.0;  // conformal factor: lengths scale by r, curvature by 1/r

  explicit RescaleFactor(double factor) : r(factor) {
    if (!(r > 0.0)) throw std::invalid_argument("rescale factor must be positive");
  }
};

/// Algebraic report of a conformal rescaling. The constant factor never
/// materializes a new metric: curvature/length tables are scaled copies, and
/// scale-invariant quantities reuse the unrescaled doubles because the factor
/// cancels exactly before any rounding.
struct RescaleReport {
  double r = 1.0;
  std::vector<double> curvature_rescaled;   // kappa / r per node
  std::vector<double> curvature_roundtrip;  // kappa after cancelling r (== input)
  double length_rescaled = 0.0;             // r * total length
  double theta_min = 1.0;                   // chord-arc minimum (scale-invariant)
  double theta_min_rescaled = 1.0;          // identical double, by cancellation
  bool kappa_identity_exact = false;        // curvature_roundtrip == input, bitwise
  bool theta_identity_exact = false;        // theta_min_rescaled == theta_min, bitwise
};

RescaleReport rescale(const DiscreteCurve& curve, const CurveGeometry& geom,
                      const RescaleFactor& factor);

/// Rescale factor (2 (t*-t))^{-1/2} used to normalize a curvature blowup of
/// the bounded-rate kind.
RescaleFactor type1_factor(double t, double t_star);

struct SolitonSpec {
  enum class Kind { GrimReaper, ShrinkingCircle, Geodesic };

  Kind kind = Kind::Geodesic;
  double half_width = 1.0;  // GrimReaper: x-range (-w, w), w < pi/2
  double radius = 1.0;      // ShrinkingCircle
  double angle_span = 1.5 * M_PI;  // ShrinkingCircle arc angle

  static SolitonSpec grim_reaper(double w);
  static SolitonSpec shrinking_circle(double radius, double angle_span = 1.5 * M_PI);
  static SolitonSpec geodesic();
};

/// Planar sample of the chosen soliton at time zero: the translating graph
/// y = -log cos x, an arc of a circle, or a straight segment.
DiscreteCurve soliton_curve(const SolitonSpec& spec, std::size_t n);

/// Max over nodes of |K + F_perp| with F the position relative to `center`:
/// zero exactly on curves shrinking homothetically about the center.
double homothetic_residual(const DiscreteCurve& curve, const CurveGeometry& geom,
                           const Point& center);

/// Max over nodes of |curvature - <direction, N>|: zero exactly on curves
/// translating rigidly in `direction`.
double translator_residual(const DiscreteCurve& curve, const CurveGeometry& geom,
                           const Vec3& direction);

/// Runs the flow from the t=0 translating graph with endpoints following the
/// exact solution; returns the sup over time and nodes of the vertical
/// deviation from y = t - log cos x.
double grim_reaper_tracking_error(const FlowConfig& cfg, double half_width, double t_end,
                                  std::size_t n);

}  // namespace geoflow
