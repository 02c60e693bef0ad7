#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoflow/diagnostics.hpp"
#include "geoflow/flow.hpp"

namespace geoflow {

/// A barrier geodesic, given by a point on it and a unit tangent direction.
/// The admissible region lies on the +90-degree side of the tangent.
struct BarrierSpec {
  Point point;
  Vec3 tangent;
};

/// Signed side of a point relative to the barrier: inner product of the
/// log-map from the barrier point with the rotated tangent. Positive inside.
double barrier_side(const Surface& srf, const BarrierSpec& barrier, const Point& p);

/// Distance from a point to the barrier geodesic (exact per model).
double barrier_distance(const Surface& srf, const BarrierSpec& barrier, const Point& p);

struct PerturbationProfile {
  enum class Kind { None, Sine, Bump };
  Kind kind = Kind::None;
  double amplitude = 0.0;
  int mode = 1;          // sine
  double center = 0.5;   // bump, in parameter units
  double width = 0.1;    // bump
};

struct InitialSpec {
  enum class Kind { PerturbedGeodesic, Points, GrimReaper, CircleArc, Loop };
  Kind kind = Kind::PerturbedGeodesic;
  Point endpoint_a, endpoint_b;          // PerturbedGeodesic
  PerturbationProfile profile;
  std::vector<Point> points;             // Points
  double half_width = 1.0;               // GrimReaper
  double radius = 1.0;                   // CircleArc
  double angle_span = 1.5 * M_PI;        // CircleArc
  Point center;                          // CircleArc
  double scale = 0.5;                    // Loop
};

struct BoundaryMotionSpec {
  enum class Kind { Fixed, GrimReaper, ShrinkingCircle };
  Kind kind = Kind::Fixed;
};

struct ProbeSpec {
  Point p_star;
  double t_star = 1.0;
};

struct Scenario {
  std::string name;
  Surface surface;
  std::size_t n = 256;
  bool in_hypothesis = true;
  InitialSpec initial;
  BoundaryMotionSpec boundary;
  std::optional<BarrierSpec> barrier_a, barrier_b;
  FlowConfig flow;
  std::optional<ProbeSpec> probe;
  int snapshot_every = 10;  // in records
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

DiscreteCurve build_initial_curve(const Scenario& scn);

struct ValidationItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool all_passed() const {
    for (const ValidationItem& it : items)
      if (!it.passed) return false;
    return true;
  }
};

/// Hypothesis checks: endpoints on barriers, interior nodes strictly between
/// the barriers, embeddedness, and (sphere) containment in an open hemisphere
/// with non-conjugate endpoints.
ValidationReport validate_scenario(const Scenario& scn);

}  // namespace geoflow
