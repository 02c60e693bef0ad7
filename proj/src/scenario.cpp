#include "geoflow/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace geoflow {

using nlohmann::json;

double barrier_side(const Surface& srf, const BarrierSpec& barrier, const Point& p) {
  const double d = geodesic_distance(srf, barrier.point, p);
  if (d < 1e-14) return 0.0;
  const Vec3 inward = rotate90(srf, barrier.point, barrier.tangent);
  return ambient_dot(srf, log_map(srf, barrier.point, p).vec, inward);
}

double barrier_distance(const Surface& srf, const BarrierSpec& barrier, const Point& p) {
  switch (srf.kind) {
    case SurfaceKind::Plane: {
      const Vec3 rel = p.coords - barrier.point.coords;
      return std::abs(barrier.tangent.x * rel.y - barrier.tangent.y * rel.x) /
             euclidean_norm(barrier.tangent);
    }
    case SurfaceKind::Sphere: {
      Vec3 m = cross(barrier.point.coords, barrier.tangent);
      m = (1.0 / euclidean_norm(m)) * m;
      return std::abs(std::asin(std::clamp(dot(p.coords, m), -1.0, 1.0)));
    }
    case SurfaceKind::Hyperbolic: {
      // plane through the origin spanned by the barrier point and tangent
      Vec3 m = cross(barrier.point.coords, barrier.tangent);
      const double nm = std::sqrt(std::max(minkowski_dot(m, m), 1e-300));
      return std::asinh(std::abs(minkowski_dot(p.coords, m)) / nm);
    }
  }
  return 0.0;
}

namespace {

Vec3 parse_vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error("scenario field '" + field + "' must be a 3-vector");
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Surface parse_surface(const std::string& s) {
  if (s == "sphere") return sphere();
  if (s == "plane") return plane();
  if (s == "hyperbolic") return hyperbolic();
  throw std::runtime_error("scenario field 'surface' must be sphere|plane|hyperbolic");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("scenario parse error: ") + e.what());
  }

  Scenario scn;
  scn.name = j.value("name", std::string("scenario"));
  scn.surface = parse_surface(j.at("surface").get<std::string>());
  scn.n = j.value("n", static_cast<std::size_t>(256));
  scn.in_hypothesis = j.value("in_hypothesis", true);

  const json& init = j.at("initial");
  const std::string init_type = init.at("type").get<std::string>();
  if (init_type == "perturbed_geodesic") {
    scn.initial.kind = InitialSpec::Kind::PerturbedGeodesic;
    scn.initial.endpoint_a = project(scn.surface, parse_vec3(init.at("endpoint_a"), "endpoint_a"));
    scn.initial.endpoint_b = project(scn.surface, parse_vec3(init.at("endpoint_b"), "endpoint_b"));
    if (init.contains("profile")) {
      const json& prof = init.at("profile");
      const std::string ptype = prof.at("type").get<std::string>();
      if (ptype == "none") {
        scn.initial.profile.kind = PerturbationProfile::Kind::None;
      } else if (ptype == "sine") {
        scn.initial.profile.kind = PerturbationProfile::Kind::Sine;
        scn.initial.profile.amplitude = prof.at("amplitude").get<double>();
        scn.initial.profile.mode = prof.value("mode", 1);
      } else if (ptype == "bump") {
        scn.initial.profile.kind = PerturbationProfile::Kind::Bump;
        scn.initial.profile.amplitude = prof.at("amplitude").get<double>();
        scn.initial.profile.center = prof.value("center", 0.5);
        scn.initial.profile.width = prof.value("width", 0.1);
      } else {
        throw std::runtime_error("scenario field 'initial.profile.type' unknown: " + ptype);
      }
    }
  } else if (init_type == "points") {
    scn.initial.kind = InitialSpec::Kind::Points;
    for (const json& p : init.at("points"))
      scn.initial.points.push_back(project(scn.surface, parse_vec3(p, "initial.points[]")));
    if (scn.initial.points.size() < 9)
      throw std::runtime_error("scenario field 'initial.points' needs at least 9 entries");
    scn.n = scn.initial.points.size() - 1;
  } else if (init_type == "grim_reaper") {
    scn.initial.kind = InitialSpec::Kind::GrimReaper;
    scn.initial.half_width = init.at("half_width").get<double>();
  } else if (init_type == "circle_arc") {
    scn.initial.kind = InitialSpec::Kind::CircleArc;
    scn.initial.radius = init.at("radius").get<double>();
    scn.initial.angle_span = init.value("angle_span", 1.5 * M_PI);
    if (init.contains("center"))
      scn.initial.center = Point{parse_vec3(init.at("center"), "initial.center")};
  } else if (init_type == "loop") {
    scn.initial.kind = InitialSpec::Kind::Loop;
    scn.initial.scale = init.value("scale", 0.5);
  } else {
    throw std::runtime_error("scenario field 'initial.type' unknown: " + init_type);
  }

  if (j.contains("boundary")) {
    const std::string btype = j.at("boundary").at("type").get<std::string>();
    if (btype == "fixed") {
      scn.boundary.kind = BoundaryMotionSpec::Kind::Fixed;
    } else if (btype == "grim_reaper") {
      scn.boundary.kind = BoundaryMotionSpec::Kind::GrimReaper;
      if (scn.initial.kind != InitialSpec::Kind::GrimReaper)
        throw std::runtime_error("boundary 'grim_reaper' requires initial type grim_reaper");
    } else if (btype == "shrinking_circle") {
      scn.boundary.kind = BoundaryMotionSpec::Kind::ShrinkingCircle;
      if (scn.initial.kind != InitialSpec::Kind::CircleArc)
        throw std::runtime_error("boundary 'shrinking_circle' requires initial type circle_arc");
    } else {
      throw std::runtime_error("scenario field 'boundary.type' unknown: " + btype);
    }
  }

  if (j.contains("barriers")) {
    const json& b = j.at("barriers");
    const auto parse_barrier = [&](const json& jb, const char* which) {
      BarrierSpec spec;
      spec.point = project(scn.surface, parse_vec3(jb.at("point"), std::string("barriers.") + which + ".point"));
      Vec3 t = parse_vec3(jb.at("tangent"), std::string("barriers.") + which + ".tangent");
      t = tangent_project(scn.surface, spec.point, t);
      const double nt = tangent_norm(scn.surface, t);
      if (nt < 1e-12)
        throw std::runtime_error(std::string("barriers.") + which + ".tangent is degenerate");
      spec.tangent = (1.0 / nt) * t;
      return spec;
    };
    if (b.contains("a")) scn.barrier_a = parse_barrier(b.at("a"), "a");
    if (b.contains("b")) scn.barrier_b = parse_barrier(b.at("b"), "b");
  }

  if (j.contains("flow")) {
    const json& f = j.at("flow");
    scn.flow.cfl = f.value("cfl", 0.25);
    scn.flow.t_max = f.value("t_max", 1.0);
    scn.flow.kappa_converged = f.value("kappa_converged", 1e-5);
    scn.flow.kappa_blowup = f.value("kappa_blowup", 1e4);
    scn.flow.regrid_every = f.value("regrid_every", 50);
    scn.flow.record_every = f.value("record_every", 50);
  }

  if (j.contains("diagnostics")) {
    const json& d = j.at("diagnostics");
    scn.flow.alpha_eps = d.value("alpha_eps", 0.0);
    scn.snapshot_every = d.value("snapshot_every", 10);
    if (d.contains("probe")) {
      ProbeSpec probe;
      probe.p_star = project(scn.surface, parse_vec3(d.at("probe").at("p_star"), "probe.p_star"));
      probe.t_star = d.at("probe").at("t_star").get<double>();
      scn.probe = probe;
    }
  }
  scn.flow.validate();
  return scn;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

// Base geodesic from A to B with its unit tangent and +90-rotated normal, in
// closed form per model.
struct GeodesicFrame {
  Point position;
  Vec3 tangent;
  Vec3 normal;
};

GeodesicFrame geodesic_frame(const Surface& srf, const Point& a, const Vec3& unit_dir,
                             double sigma) {
  GeodesicFrame f;
  switch (srf.kind) {
    case SurfaceKind::Plane: {
      f.position = Point{a.coords + sigma * unit_dir};
      f.tangent = unit_dir;
      break;
    }
    case SurfaceKind::Sphere: {
      f.position = project(srf, std::cos(sigma) * a.coords + std::sin(sigma) * unit_dir);
      f.tangent = -std::sin(sigma) * a.coords + std::cos(sigma) * unit_dir;
      break;
    }
    case SurfaceKind::Hyperbolic: {
      f.position = project(srf, std::cosh(sigma) * a.coords + std::sinh(sigma) * unit_dir);
      f.tangent = std::sinh(sigma) * a.coords + std::cosh(sigma) * unit_dir;
      break;
    }
  }
  f.normal = rotate90(srf, f.position, f.tangent);
  return f;
}

DiscreteCurve perturbed_geodesic_curve(const Scenario& scn) {
  const Surface& srf = scn.surface;
  const Point a = scn.initial.endpoint_a;
  const Point b = scn.initial.endpoint_b;
  const double dist = geodesic_distance(srf, a, b);
  if (dist <= 0.0) throw std::runtime_error("initial endpoints coincide");
  const Vec3 dir = (1.0 / dist) * log_map(srf, a, b).vec;
  const std::size_t n = scn.n;

  const auto raw_profile = [&](double u) {
    switch (scn.initial.profile.kind) {
      case PerturbationProfile::Kind::None: return 0.0;
      case PerturbationProfile::Kind::Sine:
        return scn.initial.profile.amplitude *
               std::sin(M_PI * scn.initial.profile.mode * u);
      case PerturbationProfile::Kind::Bump: {
        const double d = (u - scn.initial.profile.center) / scn.initial.profile.width;
        return scn.initial.profile.amplitude * std::exp(-0.5 * d * d);
      }
    }
    return 0.0;
  };
  const double f0 = raw_profile(0.0);
  const double f1 = raw_profile(1.0);

  DiscreteCurve curve;
  curve.surface = srf;
  curve.params.resize(n + 1);
  curve.points.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n);
    curve.params[i] = u;
    const GeodesicFrame frame = geodesic_frame(srf, a, dir, u * dist);
    const double f = raw_profile(u) - ((1.0 - u) * f0 + u * f1);
    curve.points[i] =
        (f == 0.0) ? frame.position
                   : exp_map(srf, TangentVector{frame.position, f * frame.normal});
  }
  curve.points[0] = a;
  curve.points[n] = b;
  curve.boundary_a = BoundaryCondition::fixed(a);
  curve.boundary_b = BoundaryCondition::fixed(b);
  return curve;
}

DiscreteCurve uniform_param_curve(const Surface& srf, std::vector<Point> pts) {
  DiscreteCurve curve;
  curve.surface = srf;
  const std::size_t n = pts.size() - 1;
  curve.params.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    curve.params[i] = static_cast<double>(i) / static_cast<double>(n);
  curve.points = std::move(pts);
  curve.boundary_a = BoundaryCondition::fixed(curve.points.front());
  curve.boundary_b = BoundaryCondition::fixed(curve.points.back());
  return curve;
}

}  // namespace

DiscreteCurve build_initial_curve(const Scenario& scn) {
  switch (scn.initial.kind) {
    case InitialSpec::Kind::PerturbedGeodesic:
      return perturbed_geodesic_curve(scn);
    case InitialSpec::Kind::Points:
      return uniform_param_curve(scn.surface, scn.initial.points);
    case InitialSpec::Kind::GrimReaper: {
      const double w = scn.initial.half_width;
      DiscreteCurve curve;
      curve.surface = plane();
      curve.params.resize(scn.n + 1);
      curve.points.resize(scn.n + 1);
      for (std::size_t i = 0; i <= scn.n; ++i) {
        const double x = -w + 2.0 * w * static_cast<double>(i) / static_cast<double>(scn.n);
        curve.params[i] = x;
        curve.points[i] = Point{{x, -std::log(std::cos(x)), 0.0}};
      }
      if (scn.boundary.kind == BoundaryMotionSpec::Kind::GrimReaper) {
        const double edge_y = -std::log(std::cos(w));
        curve.boundary_a = BoundaryCondition::prescribed(
            [w, edge_y](double t) { return Point{{-w, t + edge_y, 0.0}}; });
        curve.boundary_b = BoundaryCondition::prescribed(
            [w, edge_y](double t) { return Point{{w, t + edge_y, 0.0}}; });
      } else {
        curve.boundary_a = BoundaryCondition::fixed(curve.points.front());
        curve.boundary_b = BoundaryCondition::fixed(curve.points.back());
      }
      return curve;
    }
    case InitialSpec::Kind::CircleArc: {
      const double r0 = scn.initial.radius;
      const double span = scn.initial.angle_span;
      const Vec3 c = scn.initial.center.coords;
      DiscreteCurve curve;
      curve.surface = plane();
      curve.params.resize(scn.n + 1);
      curve.points.resize(scn.n + 1);
      for (std::size_t i = 0; i <= scn.n; ++i) {
        const double th = -0.5 * span + span * static_cast<double>(i) / static_cast<double>(scn.n);
        curve.params[i] = th;
        curve.points[i] = Point{{c.x + r0 * std::cos(th), c.y + r0 * std::sin(th), 0.0}};
      }
      if (scn.boundary.kind == BoundaryMotionSpec::Kind::ShrinkingCircle) {
        const auto moving_end = [r0, c](double angle) {
          return [r0, c, angle](double t) {
            const double r = std::sqrt(std::max(r0 * r0 - 2.0 * t, 0.0));
            return Point{{c.x + r * std::cos(angle), c.y + r * std::sin(angle), 0.0}};
          };
        };
        curve.boundary_a = BoundaryCondition::prescribed(moving_end(-0.5 * span));
        curve.boundary_b = BoundaryCondition::prescribed(moving_end(0.5 * span));
      } else {
        curve.boundary_a = BoundaryCondition::fixed(curve.points.front());
        curve.boundary_b = BoundaryCondition::fixed(curve.points.back());
      }
      return curve;
    }
    case InitialSpec::Kind::Loop: {
      // closed loop pinned at the origin; the endpoints coincide
      const double a = scn.initial.scale;
      std::vector<Point> pts(scn.n + 1);
      for (std::size_t i = 0; i <= scn.n; ++i) {
        const double t = M_PI * static_cast<double>(i) / static_cast<double>(scn.n);
        pts[i] = Point{{a * std::sin(2.0 * t), a * std::sin(t), 0.0}};
      }
      return uniform_param_curve(plane(), std::move(pts));
    }
  }
  throw std::logic_error("unknown initial kind");
}

ValidationReport validate_scenario(const Scenario& scn) {
  ValidationReport report;
  DiscreteCurve curve = build_initial_curve(scn);
  const Surface& srf = scn.surface;

  char buf[128];
  if (scn.barrier_a && scn.barrier_b) {
    const double da = barrier_distance(srf, *scn.barrier_a, curve.points.front());
    const double db = barrier_distance(srf, *scn.barrier_b, curve.points.back());
    std::snprintf(buf, sizeof(buf), "distances %.3e, %.3e", da, db);
    report.items.push_back({"endpoints on barriers", da <= 1e-9 && db <= 1e-9, buf});

    bool inside = true;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
      const double sa = barrier_side(srf, *scn.barrier_a, curve.points[i]);
      const double sb = barrier_side(srf, *scn.barrier_b, curve.points[i]);
      worst = std::min({worst, sa, sb});
      inside = inside && sa > 0.0 && sb > 0.0;
    }
    std::snprintf(buf, sizeof(buf), "worst signed side %.3e", worst);
    report.items.push_back({"interior nodes inside the region", inside, buf});
  } else {
    report.items.push_back({"barriers provided", false, "no barrier pair in scenario"});
  }

  const int crossings = self_intersection_count(curve);
  std::snprintf(buf, sizeof(buf), "%d crossings", crossings);
  report.items.push_back({"initial curve embedded", crossings == 0, buf});

  if (srf.kind == SurfaceKind::Sphere && scn.in_hypothesis) {
    Vec3 centroid{0, 0, 0};
    for (const Point& p : curve.points) centroid += p.coords;
    const double nc = euclidean_norm(centroid);
    bool open_hemisphere = nc > 0.0;
    double min_dot = 1.0;
    if (open_hemisphere) {
      centroid = (1.0 / nc) * centroid;
      for (const Point& p : curve.points) min_dot = std::min(min_dot, dot(centroid, p.coords));
      open_hemisphere = min_dot > 0.0;
    }
    std::snprintf(buf, sizeof(buf), "min centroid dot %.3e", min_dot);
    report.items.push_back({"curve within an open hemisphere", open_hemisphere, buf});

    const double endpoint_gap =
        geodesic_distance(srf, curve.points.front(), curve.points.back());
    std::snprintf(buf, sizeof(buf), "endpoint distance %.6f", endpoint_gap);
    report.items.push_back({"endpoints not conjugate", endpoint_gap < M_PI - 1e-9, buf});
  }
  return report;
}

}  // namespace geoflow
