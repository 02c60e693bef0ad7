#include "geoflow/runio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

#include "json.hpp"

namespace geoflow {

using nlohmann::json;

std::string status_name(FlowStatus status) {
  switch (status) {
    case FlowStatus::Running: return "Running";
    case FlowStatus::Converged: return "Converged";
    case FlowStatus::Blowup: return "Blowup";
    case FlowStatus::Timeout: return "Timeout";
  }
  return "Unknown";
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Tracks the monotone quantities and geometric bounds along an in-hypothesis
// run and records a line per violation.
class InvariantMonitor {
 public:
  InvariantMonitor(const Scenario& scn, std::vector<std::string>& violations)
      : scn_(scn), violations_(violations) {}

  void observe(const FlowState& state, DiagnosticRecord& rec) {
    char buf[160];
    if (first_) {
      theta_floor_ = rec.theta_min;
      first_ = false;
    }
    boundary_floor_ = std::min(boundary_floor_, boundary_pair_floor(state.curve));

    if (prev_) {
      if (!rec.regrid_since_prev) {
        if (!(rec.length < prev_->length + 1e-12)) {
          std::snprintf(buf, sizeof(buf), "t=%.6g: length not strictly decreasing (%.12g -> %.12g)",
                        rec.t, prev_->length, rec.length);
          violations_.push_back(buf);
        }
        const double turning_allowance = 1e-8 * static_cast<double>(rec.step - prev_->step);
        if (rec.turning > prev_->turning + turning_allowance) {
          std::snprintf(buf, sizeof(buf), "t=%.6g: turning increased (%.12g -> %.12g)", rec.t,
                        prev_->turning, rec.turning);
          violations_.push_back(buf);
        }
      }
    }

    const double floor = std::min(theta_floor_, boundary_floor_) - 1e-3;
    if (rec.theta_min < floor) {
      std::snprintf(buf, sizeof(buf), "t=%.6g: chord-arc minimum %.6g fell below floor %.6g",
                    rec.t, rec.theta_min, floor);
      violations_.push_back(buf);
    }

    const int crossings = self_intersection_count(state.curve);
    if (crossings != 0) {
      std::snprintf(buf, sizeof(buf), "t=%.6g: %d self-intersections", rec.t, crossings);
      violations_.push_back(buf);
    }

    if (scn_.barrier_a && scn_.barrier_b) {
      double worst = std::numeric_limits<double>::infinity();
      for (const Point& p : state.curve.points) {
        worst = std::min(worst, barrier_side(state.curve.surface, *scn_.barrier_a, p));
        worst = std::min(worst, barrier_side(state.curve.surface, *scn_.barrier_b, p));
      }
      if (worst < -1e-9) {
        std::snprintf(buf, sizeof(buf), "t=%.6g: node outside the barrier region by %.3e", rec.t,
                      -worst);
        violations_.push_back(buf);
      }
    }

    const InequalityCheck ineq = inequality_check(state);
    if (ineq.applicable) {
      if (ineq.wirtinger_applies && ineq.wirtinger_gap < -1e-8) {
        std::snprintf(buf, sizeof(buf), "t=%.6g: Wirtinger inequality violated by %.3e", rec.t,
                      -ineq.wirtinger_gap);
        violations_.push_back(buf);
      }
      if (ineq.sobolev_gap < -1e-8) {
        std::snprintf(buf, sizeof(buf), "t=%.6g: sup-norm inequality violated by %.3e", rec.t,
                      -ineq.sobolev_gap);
        violations_.push_back(buf);
      }
    }
    prev_ = rec;
  }

 private:
  const Scenario& scn_;
  std::vector<std::string>& violations_;
  std::optional<DiagnosticRecord> prev_;
  double theta_floor_ = 1.0;
  double boundary_floor_ = 1.0;
  bool first_ = true;
};

}  // namespace

RunOutput execute_scenario(const Scenario& scn) {
  RunOutput out;
  DiscreteCurve initial = build_initial_curve(scn);

  std::vector<Observer> observers;
  if (scn.probe) {
    const MonotonicityProbe probe{scn.probe->p_star, scn.probe->t_star};
    observers.push_back([probe](const FlowState& st, DiagnosticRecord& rec) {
      if (st.t < probe.t_star) rec.q_value = q_functional(st, probe);
    });
  }
  auto monitor = std::make_shared<InvariantMonitor>(scn, out.violations);
  if (scn.in_hypothesis)
    observers.push_back(
        [monitor](const FlowState& st, DiagnosticRecord& rec) { monitor->observe(st, rec); });

  long record_index = 0;
  const int snap_every = std::max(1, scn.snapshot_every);
  observers.push_back([&](const FlowState& st, DiagnosticRecord&) {
    if (record_index % snap_every == 0)
      out.snapshots.emplace_back(st.t, st.curve.points);
    ++record_index;
  });

  RunResult result = run(std::move(initial), scn.flow, observers);
  out.status = result.final_state.status;
  out.records = std::move(result.records);
  out.steps = result.final_state.step;
  out.final_length = polyline_length(result.final_state.curve);
  out.final_kappa_sup = out.records.empty() ? 0.0 : out.records.back().kappa_sup;

  if (out.status == FlowStatus::Blowup) {
    try {
      const double t_star = estimate_blowup_time(out.records);
      const std::vector<double> series = blowup_rate(out.records, t_star);
      for (std::size_t i = 0; i < out.records.size(); ++i)
        if (out.records[i].t < t_star) out.records[i].blowup_rate = series[i];
    } catch (const std::exception&) {
      // no usable estimate; leave the column empty
    }
  }

  if (!out.violations.empty())
    out.exit_code = 4;
  else if (out.status == FlowStatus::Blowup)
    out.exit_code = 2;
  else if (out.status == FlowStatus::Timeout)
    out.exit_code = 3;
  else
    out.exit_code = 0;
  return out;
}

std::string diagnostics_csv(const std::vector<DiagnosticRecord>& records) {
  std::string text =
      "t,length,kappa_sq_integral,dkappa_sq_integral,turning,kappa_sup,theta_min,alpha,"
      "q_value,blowup_rate\n";
  for (const DiagnosticRecord& r : records) {
    text += format_double(r.t);
    text += ',';
    text += format_double(r.length);
    text += ',';
    text += format_double(r.kappa_sq_integral);
    text += ',';
    text += format_double(r.dkappa_sq_integral);
    text += ',';
    text += format_double(r.turning);
    text += ',';
    text += format_double(r.kappa_sup);
    text += ',';
    text += format_double(r.theta_min);
    text += ',';
    text += format_double(r.alpha);
    text += ',';
    if (r.q_value) text += format_double(*r.q_value);
    text += ',';
    if (r.blowup_rate) text += format_double(*r.blowup_rate);
    text += '\n';
  }
  return text;
}

int run_scenario(const Scenario& scn, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const RunOutput out = execute_scenario(scn);

  {
    std::ofstream csv(out_dir / "diagnostics.csv", std::ios::binary);
    csv << diagnostics_csv(out.records);
  }
  {
    std::ofstream snaps(out_dir / "snapshots.jsonl", std::ios::binary);
    for (const auto& [t, points] : out.snapshots) {
      json line;
      line["t"] = t;
      json pts = json::array();
      for (const Point& p : points) pts.push_back({p.coords.x, p.coords.y, p.coords.z});
      line["points"] = std::move(pts);
      snaps << line.dump() << "\n";
    }
  }
  {
    json summary;
    summary["name"] = scn.name;
    switch (scn.surface.kind) {
      case SurfaceKind::Sphere: summary["surface"] = "sphere"; break;
      case SurfaceKind::Plane: summary["surface"] = "plane"; break;
      case SurfaceKind::Hyperbolic: summary["surface"] = "hyperbolic"; break;
    }
    summary["status"] = status_name(out.status);
    summary["exit_code"] = out.exit_code;
    summary["steps"] = out.steps;
    summary["records"] = out.records.size();
    summary["t_final"] = out.records.empty() ? 0.0 : out.records.back().t;
    summary["length_final"] = out.final_length;
    summary["kappa_sup_final"] = out.final_kappa_sup;
    summary["violations"] = out.violations;
    std::ofstream sum(out_dir / "summary.json", std::ios::binary);
    sum << summary.dump(2) << "\n";
  }
  return out.exit_code;
}

}  // namespace geoflow
