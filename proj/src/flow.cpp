#include "geoflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace geoflow {

void FlowConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw std::invalid_argument("cfl must lie in (0, 0.5]");
  if (!(kappa_converged < kappa_blowup))
    throw std::invalid_argument("kappa_converged must be below kappa_blowup");
  if (record_every <= 0) throw std::invalid_argument("record_every must be positive");
  if (regrid_every < 0) throw std::invalid_argument("regrid_every must be >= 0");
}

FlowState make_flow_state(DiscreteCurve curve) {
  FlowState st;
  st.curve = std::move(curve);
  st.geom = compute_geometry(st.curve);
  return st;
}

namespace {

double min_spacing(const CurveGeometry& geom) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < geom.arclength.size(); ++i)
    m = std::min(m, geom.arclength[i + 1] - geom.arclength[i]);
  return m;
}

double sup_curvature(const CurveGeometry& geom) {
  double m = 0.0;
  for (double k : geom.curvature) m = std::max(m, std::abs(k));
  return m;
}

}  // namespace

void step_in_place(FlowState& state, const FlowConfig& cfg) {
  if (state.status != FlowStatus::Running)
    throw std::logic_error("step requires a running flow state");
  const double dt = cfg.cfl * min_spacing(state.geom) * min_spacing(state.geom);
  const Surface& srf = state.curve.surface;
  const std::size_t n = state.curve.segment_count();

  for (std::size_t i = 1; i < n; ++i) {
    const TangentVector motion{state.curve.points[i],
                               (dt * state.geom.curvature[i]) * state.geom.normal[i].vec};
    state.curve.points[i] = project(srf, exp_map(srf, motion).coords);
  }
  const double t_new = state.t + dt;
  if (state.curve.boundary_a.kind == BoundaryCondition::Kind::Prescribed)
    state.curve.points[0] = state.curve.boundary_a.motion(t_new);
  if (state.curve.boundary_b.kind == BoundaryCondition::Kind::Prescribed)
    state.curve.points[n] = state.curve.boundary_b.motion(t_new);

  state.t = t_new;
  ++state.step;
  try {
    state.geom = compute_geometry(state.curve);
  } catch (const std::runtime_error& e) {
    state.status = FlowStatus::Blowup;
    state.message = e.what();
  }
}

FlowState step(FlowState state, const FlowConfig& cfg) {
  step_in_place(state, cfg);
  return state;
}

DiagnosticRecord make_record(const FlowState& state, double alpha_eps) {
  DiagnosticRecord rec;
  rec.t = state.t;
  rec.step = state.step;
  rec.length = polyline_length(state.curve);
  rec.kappa_sup = sup_curvature(state.geom);
  rec.turning = total_turning(state.geom);
  rec.alpha = alpha_epsilon(state.geom, alpha_eps);
  rec.theta_min = chord_arc_scan(state.curve, state.geom).theta_min;

  const auto& k = state.geom.curvature;
  const auto& s = state.geom.arclength;
  const std::size_t m = k.size();
  std::vector<double> dk(m, 0.0);
  for (std::size_t i = 1; i + 1 < m; ++i) dk[i] = (k[i + 1] - k[i - 1]) / (s[i + 1] - s[i - 1]);
  dk[0] = (k[1] - k[0]) / (s[1] - s[0]);
  dk[m - 1] = (k[m - 1] - k[m - 2]) / (s[m - 1] - s[m - 2]);
  double ksq = 0.0, dksq = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double ds = s[i + 1] - s[i];
    ksq += 0.5 * (k[i] * k[i] + k[i + 1] * k[i + 1]) * ds;
    dksq += 0.5 * (dk[i] * dk[i] + dk[i + 1] * dk[i + 1]) * ds;
  }
  rec.kappa_sq_integral = ksq;
  rec.dkappa_sq_integral = dksq;
  return rec;
}

RunResult run(DiscreteCurve initial, const FlowConfig& cfg,
              const std::vector<Observer>& observers) {
  cfg.validate();
  RunResult result;
  FlowState& state = result.final_state;
  state = make_flow_state(std::move(initial));

  double alpha_eps = cfg.alpha_eps;
  if (alpha_eps <= 0.0) alpha_eps = 0.1 * state.geom.total_length;

  long last_recorded_step = -1;
  long last_regrid_at_record = -1;
  const auto record_now = [&]() {
    DiagnosticRecord rec = make_record(state, alpha_eps);
    rec.regrid_since_prev = state.last_regrid_step > last_regrid_at_record;
    for (const Observer& obs : observers) obs(state, rec);
    result.records.push_back(rec);
    last_recorded_step = state.step;
    last_regrid_at_record = state.last_regrid_step;
  };

  record_now();
  while (true) {
    if (sup_curvature(state.geom) < cfg.kappa_converged) {
      state.status = FlowStatus::Converged;
      break;
    }
    if (sup_curvature(state.geom) > cfg.kappa_blowup) {
      state.status = FlowStatus::Blowup;
      break;
    }
    if (state.t >= cfg.t_max) {
      state.status = FlowStatus::Timeout;
      break;
    }
    step_in_place(state, cfg);
    if (state.status != FlowStatus::Running) break;
    if (cfg.regrid_every > 0 && state.step % cfg.regrid_every == 0) {
      state.curve = reparametrize(state.curve, state.geom);
      state.geom = compute_geometry(state.curve);
      state.last_regrid_step = state.step;
    }
    if (state.step % cfg.record_every == 0) record_now();
  }
  if (state.step != last_recorded_step) record_now();
  return result;
}

double kappa_pde_residual(const FlowState& a, const FlowState& b, const FlowState& c) {
  const std::size_t m = a.curve.points.size();
  if (b.curve.points.size() != m || c.curve.points.size() != m ||
      a.curve.params != b.curve.params || b.curve.params != c.curve.params)
    throw std::invalid_argument("residual requires identical grids");
  if (!(a.t < b.t && b.t < c.t)) throw std::invalid_argument("states must be time-ordered");
  if (std::max(b.last_regrid_step, c.last_regrid_step) > a.step)
    throw std::invalid_argument("residual undefined across regrid");

  const double dt1 = b.t - a.t;
  const double dt2 = c.t - b.t;
  const double S = static_cast<double>(a.curve.surface.gauss_curvature());
  const double du =
      (b.curve.params.back() - b.curve.params.front()) / static_cast<double>(m - 1);

  const auto& ka = a.geom.curvature;
  const auto& kc = c.geom.curvature;
  const auto& v = b.geom.speed;

  // Fixed endpoints carry the analytic Dirichlet value 0; the one-sided
  // endpoint estimates have a different error constant and would pollute the
  // stencils of the first interior nodes.
  std::vector<double> kb = b.geom.curvature;
  if (b.curve.boundary_a.kind == BoundaryCondition::Kind::Fixed) kb.front() = 0.0;
  if (b.curve.boundary_b.kind == BoundaryCondition::Kind::Fixed) kb.back() = 0.0;

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    // non-uniform central difference in time at the middle state
    const double kdot = (dt1 * dt1 * kc[i] - dt2 * dt2 * ka[i] +
                         (dt2 * dt2 - dt1 * dt1) * kb[i]) /
                        (dt1 * dt2 * (dt1 + dt2));
    const double dk = (kb[i + 1] - kb[i - 1]) / (2.0 * du);
    const double d2k = (kb[i + 1] - 2.0 * kb[i] + kb[i - 1]) / (du * du);
    const double dv = (v[i + 1] - v[i - 1]) / (2.0 * du);
    const double kss = d2k / (v[i] * v[i]) - dk * dv / (v[i] * v[i] * v[i]);
    const double rhs = kss + kb[i] * kb[i] * kb[i] + S * kb[i];
    worst = std::max(worst, std::abs(kdot - rhs));
  }
  return worst;
}

double length_decay_residual(const DiagnosticRecord& r1, const DiagnosticRecord& r2) {
  if (r2.t == r1.t) throw std::invalid_argument("records at identical times");
  const double slope = (r2.length - r1.length) / (r2.t - r1.t);
  const double midpoint = 0.5 * (r1.kappa_sq_integral + r2.kappa_sq_integral);
  return std::abs(slope + midpoint);
}

InequalityCheck inequality_check(const FlowState& state) {
  InequalityCheck out;
  if (state.curve.boundary_a.kind != BoundaryCondition::Kind::Fixed ||
      state.curve.boundary_b.kind != BoundaryCondition::Kind::Fixed)
    return out;
  out.applicable = true;

  std::vector<double> k = state.geom.curvature;
  k.front() = 0.0;  // analytic boundary value for fixed endpoints
  k.back() = 0.0;
  const auto& s = state.geom.arclength;
  const double length = state.geom.total_length;
  const std::size_t m = k.size();

  double sq = 0.0, energy = 0.0, sup = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double ds = s[i + 1] - s[i];
    sq += ds * (k[i] * k[i] + k[i] * k[i + 1] + k[i + 1] * k[i + 1]) / 3.0;
    energy += (k[i + 1] - k[i]) * (k[i + 1] - k[i]) / ds;
  }
  for (double ki : k) sup = std::max(sup, std::abs(ki));

  const double S = static_cast<double>(state.curve.surface.gauss_curvature());
  out.wirtinger_applies = (S <= 0.0 || length < M_PI);
  out.wirtinger_gap = (length / M_PI) * (length / M_PI) * energy - sq;
  out.sobolev_gap = length * energy - sup * sup;
  return out;
}

}  // namespace geoflow
