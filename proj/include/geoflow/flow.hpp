#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geoflow/curve.hpp"
#include "geoflow/record.hpp"

namespace geoflow {

struct FlowConfig {
  double cfl = 0.25;              // dt = cfl * min(node spacing)^2
  double t_max = 1.0;
  double kappa_converged = 1e-5;  // stop when sup|curvature| drops below
  double kappa_blowup = 1e4;      // declare blowup above
  int regrid_every = 50;          // steps between reparametrizations; 0 = never
  int record_every = 50;          // steps between diagnostic records
  double alpha_eps = 0.0;         // window size for alpha; 0 = 10% of initial length

  void validate() const;
};

enum class FlowStatus { Running, Converged, Blowup, Timeout };

struct FlowState {
  DiscreteCurve curve;
  CurveGeometry geom;
  double t = 0.0;
  long step = 0;
  FlowStatus status = FlowStatus::Running;
  long last_regrid_step = -1;
  std::string message;
};

FlowState make_flow_state(DiscreteCurve curve);

/// One explicit Euler step: every interior node moves along its normal by
/// dt * curvature via the exponential map and is re-projected; endpoints stay
/// fixed or follow their prescribed trajectory. Geometry is recomputed. A
/// degenerate parametrization flips the status to Blowup with a message.
void step_in_place(FlowState& state, const FlowConfig& cfg);
FlowState step(FlowState state, const FlowConfig& cfg);

using Observer = std::function<void(const FlowState&, DiagnosticRecord&)>;

struct RunResult {
  FlowState final_state;
  std::vector<DiagnosticRecord> records;
};

/// Iterates step, reparametrizing every regrid_every steps and recording every
/// record_every steps (observers may annotate each record). Terminates with
/// Converged, Blowup or Timeout.
RunResult run(DiscreteCurve initial, const FlowConfig& cfg,
              const std::vector<Observer>& observers = {});

/// Diagnostic record of the current state (no optional fields filled).
DiagnosticRecord make_record(const FlowState& state, double alpha_eps);

/// Max over interior nodes of |time-central-difference of curvature minus
/// (d^2k/ds^2 + k^3 + S k)| evaluated at the middle of three states recorded
/// on the same grid. Throws if the states differ in grid or a regrid happened
/// inside the window.
double kappa_pde_residual(const FlowState& a, const FlowState& b, const FlowState& c);

/// |secant slope of length + midpoint curvature-square integral| between two
/// consecutive records.
double length_decay_residual(const DiagnosticRecord& r1, const DiagnosticRecord& r2);

/// Functional inequalities evaluated on the piecewise-linear interpolant of
/// the curvature profile with the analytic value 0 substituted at fixed
/// endpoints. Both sides are exact integrals of that interpolant, so the
/// inequalities hold up to roundoff whenever they apply.
struct InequalityCheck {
  bool applicable = false;        // both endpoints fixed
  bool wirtinger_applies = false; // curvature 0 at ends and (S <= 0 or L < pi)
  double wirtinger_gap = 0.0;     // (L/pi)^2 * int(k')^2 - int k^2 (>= 0 expected)
  double sobolev_gap = 0.0;       // L * int(k')^2 - sup|k|^2   (>= 0 expected)
};

InequalityCheck inequality_check(const FlowState& state);

}  // namespace geoflow
