#include "geoflow/flow.hpp"

#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace geoflow;
namespace gt = geoflow::testing;

namespace {

DiscreteCurve plane_sine(double amplitude, std::size_t n) {
  DiscreteCurve c;
  c.surface = plane();
  c.params.resize(n + 1);
  c.points.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    c.params[i] = x;
    c.points[i] = Point{{x, amplitude * std::sin(M_PI * x), 0.0}};
  }
  c.boundary_a = BoundaryCondition::fixed(c.points.front());
  c.boundary_b = BoundaryCondition::fixed(c.points.back());
  return c;
}

// Bowed great-circle arc: endpoints 60 degrees apart on the equator, pushed
// toward the pole by a sine profile.
DiscreteCurve sphere_bowed_arc(double amplitude, std::size_t n) {
  DiscreteCurve c;
  c.surface = sphere();
  c.params.resize(n + 1);
  c.points.resize(n + 1);
  const double span = M_PI / 3.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n);
    c.params[i] = u;
    const double th = span * u;
    const Point base{{std::cos(th), std::sin(th), 0.0}};
    const double f = amplitude * std::sin(M_PI * u);
    c.points[i] = exp_map(sphere(), TangentVector{base, {0.0, 0.0, f}});
  }
  c.boundary_a = BoundaryCondition::fixed(c.points.front());
  c.boundary_b = BoundaryCondition::fixed(c.points.back());
  return c;
}

DiscreteCurve hyperbolic_bowed_arc(double amplitude, std::size_t n) {
  DiscreteCurve c;
  c.surface = hyperbolic();
  c.params.resize(n + 1);
  c.points.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n);
    c.params[i] = u;
    const double sg = -0.8 + 1.6 * u;
    const Point base{{std::cosh(sg), std::sinh(sg), 0.0}};
    const double f = amplitude * std::sin(M_PI * u);
    c.points[i] = exp_map(hyperbolic(), TangentVector{base, {0.0, 0.0, f}});
  }
  c.boundary_a = BoundaryCondition::fixed(c.points.front());
  c.boundary_b = BoundaryCondition::fixed(c.points.back());
  return c;
}

}  // namespace

TEST_CASE("geodesics are stationary") {
  FlowConfig cfg;
  cfg.t_max = 1e9;
  FlowState state =
      make_flow_state(gt::geodesic_segment(sphere(), Point{{1, 0, 0}}, Point{{0, 1, 0}}, 64));
  const std::vector<Point> original = state.curve.points;
  for (int i = 0; i < 1000; ++i) step_in_place(state, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i)
    worst = std::max(worst, geodesic_distance(sphere(), original[i], state.curve.points[i]));
  CHECK(worst < 1e-8);
}

TEST_CASE("small planar graph decays like the linearized heat equation") {
  const double amp = 0.01;
  FlowConfig cfg;
  cfg.t_max = 0.1;
  cfg.record_every = 200;
  cfg.regrid_every = 0;
  FlowState state = make_flow_state(plane_sine(amp, 256));
  while (state.status == FlowStatus::Running && state.t < cfg.t_max) {
    step_in_place(state, cfg);
    if (state.step % cfg.record_every == 0) {
      double sup_y = 0.0;
      for (const Point& p : state.curve.points) sup_y = std::max(sup_y, std::abs(p.coords.y));
      const double expected = amp * std::exp(-M_PI * M_PI * state.t);
      CHECK(sup_y / expected == doctest::Approx(1.0).epsilon(0.02));
    }
  }
  CHECK(state.t >= cfg.t_max);
}

TEST_CASE("one Euler step of the unit semicircle moves nodes inward by dt") {
  FlowConfig cfg;
  FlowState state = make_flow_state(gt::circle_arc(1.0, 0.0, M_PI, 256));
  const std::vector<Point> before = state.curve.points;
  const double spacing = state.geom.arclength[1] - state.geom.arclength[0];
  const double dt = cfg.cfl * spacing * spacing;
  step_in_place(state, cfg);
  CHECK(state.t == doctest::Approx(dt).epsilon(1e-6));
  for (std::size_t i = 1; i + 1 < before.size(); ++i) {
    const double moved = euclidean_norm(state.curve.points[i].coords - before[i].coords);
    CHECK(std::abs(moved - dt) < 1e-2 * dt);
    CHECK(euclidean_norm(state.curve.points[i].coords) < 1.0);  // inward
  }
}

TEST_CASE("run terminates and converges to geodesics") {
  SUBCASE("sphere arc converges to the great circle") {
    FlowConfig cfg;
    cfg.t_max = 5.0;
    cfg.record_every = 100;
    cfg.regrid_every = 50;
    const RunResult res = run(sphere_bowed_arc(0.3, 128), cfg);
    CHECK(res.final_state.status == FlowStatus::Converged);
    const DiscreteCurve oracle = gt::geodesic_segment(
        sphere(), res.final_state.curve.points.front(), res.final_state.curve.points.back(), 512);
    CHECK(hausdorff_distance(res.final_state.curve, oracle) < 1e-3);
  }
  SUBCASE("hyperbolic arc converges to the geodesic") {
    FlowConfig cfg;
    cfg.t_max = 5.0;
    cfg.record_every = 100;
    cfg.regrid_every = 50;
    const RunResult res = run(hyperbolic_bowed_arc(0.3, 128), cfg);
    CHECK(res.final_state.status == FlowStatus::Converged);
    CHECK(res.records.back().kappa_sup < cfg.kappa_converged);
    const DiscreteCurve oracle = gt::geodesic_segment(
        hyperbolic(), res.final_state.curve.points.front(), res.final_state.curve.points.back(),
        512);
    CHECK(hausdorff_distance(res.final_state.curve, oracle) < 1e-3);
  }
  SUBCASE("zero time budget returns the initial state with Timeout") {
    FlowConfig cfg;
    cfg.t_max = 0.0;
    const DiscreteCurve initial = plane_sine(0.01, 64);
    const RunResult res = run(initial, cfg);
    CHECK(res.final_state.status == FlowStatus::Timeout);
    CHECK(res.final_state.step == 0);
    for (std::size_t i = 0; i < initial.points.size(); ++i)
      CHECK(euclidean_norm(res.final_state.curve.points[i].coords - initial.points[i].coords) ==
            0.0);
  }
}

TEST_CASE("curvature evolution residual") {
  const auto residual_at = [](const DiscreteCurve& initial, double t_probe, int gap) {
    FlowConfig cfg;
    cfg.t_max = 10.0;
    cfg.regrid_every = 0;
    FlowState state = make_flow_state(initial);
    while (state.t < t_probe) step_in_place(state, cfg);
    const FlowState a = state;
    for (int i = 0; i < gap; ++i) step_in_place(state, cfg);
    const FlowState b = state;
    for (int i = 0; i < gap; ++i) step_in_place(state, cfg);
    return kappa_pde_residual(a, b, state);
  };

  SUBCASE("vanishes on geodesics") {
    const DiscreteCurve line =
        gt::geodesic_segment(plane(), Point{{0, 0, 0}}, Point{{1, 0, 0}}, 64);
    CHECK(residual_at(line, 1e-5, 4) < 1e-10);
  }
  SUBCASE("second-order refinement on the planar sine") {
    const double coarse = residual_at(plane_sine(0.05, 128), 0.01, 8);
    const double fine = residual_at(plane_sine(0.05, 256), 0.01, 8);
    const double ratio = coarse / fine;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
  SUBCASE("second-order refinement on the sphere, curvature term exercised") {
    const double coarse = residual_at(sphere_bowed_arc(0.3, 128), 0.01, 8);
    const double fine = residual_at(sphere_bowed_arc(0.3, 256), 0.01, 8);
    CHECK(std::isfinite(coarse));
    CHECK(std::isfinite(fine));
    const double ratio = coarse / fine;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
  SUBCASE("regrid inside the window is rejected") {
    FlowConfig cfg;
    cfg.regrid_every = 0;
    FlowState state = make_flow_state(plane_sine(0.05, 64));
    step_in_place(state, cfg);
    const FlowState a = state;
    step_in_place(state, cfg);
    FlowState b = state;
    step_in_place(state, cfg);
    FlowState c = state;
    b.last_regrid_step = b.step;  // simulate a regrid between the records
    c.last_regrid_step = b.step;
    CHECK_THROWS_WITH(kappa_pde_residual(a, b, c), "residual undefined across regrid");
  }
}

TEST_CASE("length decay residual") {
  SUBCASE("zero on geodesics") {
    FlowConfig cfg;
    cfg.t_max = 1e9;
    FlowState state =
        make_flow_state(gt::geodesic_segment(plane(), Point{{0, 0, 0}}, Point{{2, 0, 0}}, 64));
    const DiagnosticRecord r1 = make_record(state, 0.2);
    for (int i = 0; i < 10; ++i) step_in_place(state, cfg);
    const DiagnosticRecord r2 = make_record(state, 0.2);
    CHECK(length_decay_residual(r1, r2) < 1e-12);
  }
  SUBCASE("relative residual small on the planar sine") {
    FlowConfig cfg;
    cfg.t_max = 0.02;
    cfg.record_every = 50;
    cfg.regrid_every = 0;
    const RunResult res = run(plane_sine(0.01, 256), cfg);
    for (std::size_t i = 1; i < res.records.size(); ++i) {
      const double resid = length_decay_residual(res.records[i - 1], res.records[i]);
      const double scale =
          0.5 * (res.records[i - 1].kappa_sq_integral + res.records[i].kappa_sq_integral);
      CHECK(resid < 1e-3 * scale);
    }
  }
  SUBCASE("halves (or better) when the record interval halves") {
    const auto worst_residual = [](int record_every) {
      FlowConfig cfg;
      cfg.t_max = 0.05;
      cfg.record_every = record_every;
      cfg.regrid_every = 0;
      const RunResult res = run(plane_sine(0.05, 128), cfg);
      double worst = 0.0;
      for (std::size_t i = 1; i + 1 < res.records.size(); ++i)
        worst = std::max(worst, length_decay_residual(res.records[i - 1], res.records[i]));
      return worst;
    };
    const double coarse = worst_residual(2000);
    const double fine = worst_residual(1000);
    CHECK(fine < 0.55 * coarse);
  }
  SUBCASE("identical times rejected") {
    FlowState state = make_flow_state(plane_sine(0.01, 64));
    const DiagnosticRecord r = make_record(state, 0.1);
    CHECK_THROWS(length_decay_residual(r, r));
  }
}

TEST_CASE("monotone quantities along a sphere run") {
  FlowConfig cfg;
  cfg.t_max = 0.3;
  cfg.record_every = 100;
  cfg.regrid_every = 50;
  const DiscreteCurve initial = sphere_bowed_arc(0.3, 128);
  const double endpoint_distance =
      geodesic_distance(sphere(), initial.points.front(), initial.points.back());
  const RunResult res = run(initial, cfg);

  const double theta0 = res.records.front().theta_min;
  double boundary_floor = 1.0;
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const DiagnosticRecord& rec = res.records[i];
    CHECK(rec.length >= endpoint_distance - 1e-9);
    if (i > 0 && !rec.regrid_since_prev) {
      CHECK(rec.length < res.records[i - 1].length + 1e-12);
      CHECK(rec.turning <=
            res.records[i - 1].turning + 1e-8 * double(rec.step - res.records[i - 1].step));
    }
    CHECK(rec.theta_min >= std::min(theta0, boundary_floor) - 1e-3);
    boundary_floor = std::min(boundary_floor, rec.theta_min);
  }
}

TEST_CASE("functional inequalities hold at every record") {
  FlowConfig cfg;
  cfg.t_max = 0.1;
  cfg.record_every = 200;
  cfg.regrid_every = 0;
  std::vector<DiscreteCurve> cases;
  cases.push_back(plane_sine(0.01, 256));
  cases.push_back(sphere_bowed_arc(0.3, 128));
  cases.push_back(hyperbolic_bowed_arc(0.3, 128));
  for (DiscreteCurve& initial : cases) {
    std::vector<Observer> observers;
    observers.push_back([](const FlowState& st, DiagnosticRecord&) {
      const InequalityCheck chk = inequality_check(st);
      REQUIRE(chk.applicable);
      if (chk.wirtinger_applies) CHECK(chk.wirtinger_gap > -1e-8);
      CHECK(chk.sobolev_gap > -1e-8);
    });
    run(initial, cfg, observers);
  }
}

TEST_CASE("config validation") {
  FlowConfig cfg;
  cfg.cfl = 0.6;
  CHECK_THROWS(cfg.validate());
  cfg.cfl = 0.25;
  cfg.kappa_converged = 1.0;
  cfg.kappa_blowup = 0.5;
  CHECK_THROWS(cfg.validate());
}
