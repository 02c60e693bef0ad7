#pragma once

#include <string>
#include <vector>

#include "geoflow/flow.hpp"

namespace geoflow {

/// Gaussian-weight probe: a fixed center and a reference terminal time. The
/// weight is (4 pi (t*-t))^{-1/2} exp(-rho^2 / (4 (t*-t))) with rho the
/// geodesic distance from the center.
struct MonotonicityProbe {
  Point p_star;
  double t_star = 1.0;
};

/// Integral of the Gaussian weight along the curve (trapezoid rule).
double q_functional(const FlowState& state, const MonotonicityProbe& probe);

/// Terms of the evolution identity for the weighted integral at the middle of
/// three recorded states: dQ/dt equals minus the soliton-defect integral plus
/// the boundary flux minus the curvature-correction integral (the correction
/// vanishes identically on the plane).
struct MonotonicityTerms {
  double dq_dt = 0.0;
  double defect_integral = 0.0;
  double boundary_term = 0.0;
  double correction_integral = 0.0;

  double rhs() const { return -defect_integral + boundary_term - correction_integral; }
  double residual() const { return std::abs(dq_dt - rhs()); }
};

MonotonicityTerms monotonicity_terms(const FlowState& a, const FlowState& b, const FlowState& c,
                                     const MonotonicityProbe& probe);

double monotonicity_residual(const FlowState& a, const FlowState& b, const FlowState& c,
                             const MonotonicityProbe& probe);

/// The soliton-defect integral at the current time: the weighted square norm
/// of K + rho W_perp / (2 (t*-t)). Vanishes on a shrinking circle matched to
/// the probe scale and on geodesics through the center.
double homothetic_defect(const FlowState& state, const MonotonicityProbe& probe);

/// Per-record sqrt(t*_est - t) * sup|curvature|.
std::vector<double> blowup_rate(const std::vector<DiagnosticRecord>& records,
                                double t_star_estimate);

/// "type-1-like", "type-2-like", or "no singularity at t*_est".
std::string classify_blowup_series(const std::vector<double>& series);

/// Blowup-time estimate: linear extrapolation of sup|curvature|^{-2} in t over
/// the trailing portion of the records (the classical rate ansatz).
double estimate_blowup_time(const std::vector<DiagnosticRecord>& records,
                            double tail_fraction = 0.25);

/// Variational identities at an interior chord-arc minimum. The discrete
/// argmin is polished to sub-node accuracy along the arclength interpolant
/// before the identities are evaluated.
struct VariationalCheckReport {
  bool applicable = false;
  std::string message;
  double s_p = 0.0, s_q = 0.0;       // arclength positions of the minimizing pair
  double chord = 0.0, arc = 0.0;     // D and L at the pair
  double ratio = 1.0;
  double wt_p = 0.0, wt_q = 0.0;     // <W,T> at each point (should equal D/L)
  int epsilon = 1;                   // sign matching <T_q,V_q> = eps <T_p,V_p>
  double analytic_second_variation = 0.0;
  double fd_second_variation = 0.0;
  double curvature_pairing_gap = 0.0;  // <K_q,W_q> - <K_p,W_p> (>= 0 expected)
};

VariationalCheckReport chord_arc_variational_check(const FlowState& state);

/// Least-squares exponential fit of the curvature-square integral over the
/// final half of the trajectory: value ~ prefactor * exp(-delta t).
struct DecayFit {
  double delta = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

DecayFit decay_fit(const std::vector<DiagnosticRecord>& records);

}  // namespace geoflow
