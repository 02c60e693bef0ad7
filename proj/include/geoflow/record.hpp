#pragma once

#include <optional>

namespace geoflow {

/// One timestamped row of the monitored functionals. The optional entries are
/// filled only when a weighted-integral probe is configured (q_value) or a
/// blowup-time estimate exists (blowup_rate).
struct DiagnosticRecord {
  double t = 0.0;
  double length = 0.0;              // geodesic-polyline length of the curve
  double kappa_sq_integral = 0.0;   // trapezoid rule on curvature^2
  double dkappa_sq_integral = 0.0;  // trapezoid rule on (d kappa/ds)^2
  double turning = 0.0;             // trapezoid rule on |curvature|
  double kappa_sup = 0.0;
  double theta_min = 1.0;           // min chord-arc ratio over node pairs
  double alpha = 0.0;               // max |signed curvature integral| over short windows
  std::optional<double> q_value;
  std::optional<double> blowup_rate;

  // bookkeeping (not serialized)
  long step = 0;
  bool regrid_since_prev = false;
};

}  // namespace geoflow
