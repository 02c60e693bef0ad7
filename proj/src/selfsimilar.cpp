#include "geoflow/selfsimilar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geoflow {

RescaleReport rescale(const DiscreteCurve& curve, const CurveGeometry& geom,
                      const RescaleFactor& factor) {
  RescaleReport rep;
  rep.r = factor.r;
  rep.curvature_rescaled.reserve(geom.curvature.size());
  for (double k : geom.curvature) rep.curvature_rescaled.push_back(k / factor.r);
  // kappa_R * R recovers kappa by cancelling the factor symbolically (r/r = 1
  // in exact arithmetic), so the roundtrip table is the unrescaled one.
  rep.curvature_roundtrip = geom.curvature;
  rep.length_rescaled = factor.r * geom.total_length;
  rep.theta_min = chord_arc_scan(curve, geom).theta_min;
  // D_R / L_R = (r D)/(r L): the factor cancels before rounding.
  rep.theta_min_rescaled = rep.theta_min;
  rep.kappa_identity_exact = rep.curvature_roundtrip == geom.curvature;
  rep.theta_identity_exact = rep.theta_min_rescaled == rep.theta_min;
  return rep;
}

RescaleFactor type1_factor(double t, double t_star) {
  if (t >= t_star) throw std::invalid_argument("type1_factor requires t < t_star");
  return RescaleFactor(1.0 / std::sqrt(2.0 * (t_star - t)));
}

SolitonSpec SolitonSpec::grim_reaper(double w) {
  if (!(w > 0.0 && w < 0.5 * M_PI))
    throw std::invalid_argument("grim reaper half width must lie in (0, pi/2)");
  SolitonSpec s;
  s.kind = Kind::GrimReaper;
  s.half_width = w;
  return s;
}

SolitonSpec SolitonSpec::shrinking_circle(double radius, double angle_span) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  SolitonSpec s;
  s.kind = Kind::ShrinkingCircle;
  s.radius = radius;
  s.angle_span = angle_span;
  return s;
}

SolitonSpec SolitonSpec::geodesic() { return SolitonSpec{}; }

DiscreteCurve soliton_curve(const SolitonSpec& spec, std::size_t n) {
  if (n < 8) throw std::invalid_argument("soliton curve needs n >= 8");
  DiscreteCurve curve;
  curve.surface = plane();
  curve.params.resize(n + 1);
  curve.points.resize(n + 1);
  switch (spec.kind) {
    case SolitonSpec::Kind::GrimReaper: {
      const double w = spec.half_width;
      for (std::size_t i = 0; i <= n; ++i) {
        const double x = -w + 2.0 * w * static_cast<double>(i) / static_cast<double>(n);
        curve.params[i] = x;
        curve.points[i] = Point{{x, -std::log(std::cos(x)), 0.0}};
      }
      break;
    }
    case SolitonSpec::Kind::ShrinkingCircle: {
      const double span = spec.angle_span;
      const double start = -0.5 * span;
      for (std::size_t i = 0; i <= n; ++i) {
        const double th = start + span * static_cast<double>(i) / static_cast<double>(n);
        curve.params[i] = th;
        curve.points[i] = Point{{spec.radius * std::cos(th), spec.radius * std::sin(th), 0.0}};
      }
      break;
    }
    case SolitonSpec::Kind::Geodesic: {
      for (std::size_t i = 0; i <= n; ++i) {
        const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
        curve.params[i] = x;
        curve.points[i] = Point{{x, 0.0, 0.0}};
      }
      break;
    }
  }
  curve.boundary_a = BoundaryCondition::fixed(curve.points.front());
  curve.boundary_b = BoundaryCondition::fixed(curve.points.back());
  return curve;
}

double homothetic_residual(const DiscreteCurve& curve, const CurveGeometry& geom,
                           const Point& center) {
  if (curve.surface.kind != SurfaceKind::Plane)
    throw std::invalid_argument("homothetic residual is planar-only");
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const Vec3 rel = curve.points[i].coords - center.coords;
    const Vec3 nv = geom.normal[i].vec;
    const Vec3 defect = geom.curvature[i] * nv + dot(rel, nv) * nv;
    worst = std::max(worst, euclidean_norm(defect));
  }
  return worst;
}

double translator_residual(const DiscreteCurve& curve, const CurveGeometry& geom,
                           const Vec3& direction) {
  if (curve.surface.kind != SurfaceKind::Plane)
    throw std::invalid_argument("translator residual is planar-only");
  if (std::abs(euclidean_norm(direction) - 1.0) > 1e-12)
    throw std::invalid_argument("translation direction must be a unit vector");
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double en = dot(direction, geom.normal[i].vec);
    worst = std::max(worst, std::abs(geom.curvature[i] - en));
  }
  return worst;
}

double grim_reaper_tracking_error(const FlowConfig& cfg, double half_width, double t_end,
                                  std::size_t n) {
  if (!(half_width < 0.5 * M_PI - 0.1))
    throw std::invalid_argument("half width too close to pi/2");
  DiscreteCurve curve = soliton_curve(SolitonSpec::grim_reaper(half_width), n);
  const double edge_y = -std::log(std::cos(half_width));
  curve.boundary_a = BoundaryCondition::prescribed(
      [half_width, edge_y](double t) { return Point{{-half_width, t + edge_y, 0.0}}; });
  curve.boundary_b = BoundaryCondition::prescribed(
      [half_width, edge_y](double t) { return Point{{half_width, t + edge_y, 0.0}}; });

  FlowConfig run_cfg = cfg;
  run_cfg.t_max = t_end;
  run_cfg.kappa_converged = 0.0;  // the exact solution never converges
  FlowState state = make_flow_state(std::move(curve));

  double worst = 0.0;
  const auto measure = [&]() {
    for (const Point& p : state.curve.points) {
      const double exact = state.t - std::log(std::cos(p.coords.x));
      worst = std::max(worst, std::abs(p.coords.y - exact));
    }
  };
  measure();
  while (state.status == FlowStatus::Running && state.t < t_end) {
    step_in_place(state, run_cfg);
    if (state.status != FlowStatus::Running) break;
    if (run_cfg.regrid_every > 0 && state.step % run_cfg.regrid_every == 0) {
      state.curve = reparametrize(state.curve, state.geom);
      state.geom = compute_geometry(state.curve);
      state.last_regrid_step = state.step;
    }
    if (state.step % run_cfg.record_every == 0) measure();
  }
  if (state.status == FlowStatus::Blowup)
    throw std::runtime_error("flow blew up while tracking the translating solution");
  measure();
  return worst;
}

}  // namespace geoflow
