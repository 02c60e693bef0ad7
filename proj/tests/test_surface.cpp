#include "geoflow/surface.hpp"

#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace geoflow;
using geoflow::testing::RandomPoints;

TEST_CASE("metric inner products on the three models") {
  const Point px{{1.0, 0.0, 0.0}};
  CHECK(metric_inner(sphere(), {px, {0.0, 1.0, 0.0}}, {px, {0.0, 1.0, 0.0}}) == doctest::Approx(1.0));

  const Point origin{{0.0, 0.0, 0.0}};
  CHECK(metric_inner(plane(), {origin, {3.0, 4.0, 0.0}}, {origin, {3.0, 4.0, 0.0}}) ==
        doctest::Approx(25.0));

  const Point apex{{1.0, 0.0, 0.0}};
  CHECK(metric_inner(hyperbolic(), {apex, {0.0, 1.0, 0.0}}, {apex, {0.0, 0.0, 1.0}}) ==
        doctest::Approx(0.0));

  const Point other{{0.0, 1.0, 0.0}};
  CHECK_THROWS_WITH(metric_inner(sphere(), {px, {0.0, 1.0, 0.0}}, {other, {0.0, 0.0, 1.0}}),
                    "tangent vectors at different points");
}

TEST_CASE("geodesic distances") {
  CHECK(geodesic_distance(sphere(), Point{{1, 0, 0}}, Point{{0, 1, 0}}) ==
        doctest::Approx(M_PI / 2).epsilon(1e-14));
  CHECK(geodesic_distance(plane(), Point{{0, 0, 0}}, Point{{3, 4, 0}}) == doctest::Approx(5.0));
  CHECK(geodesic_distance(hyperbolic(), Point{{1, 0, 0}},
                          Point{{std::cosh(1.0), std::sinh(1.0), 0}}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("symmetry and identity") {
    RandomPoints rnd;
    for (const Surface& srf : {sphere(), plane(), hyperbolic()}) {
      for (int i = 0; i < 20; ++i) {
        const Point p = rnd.on(srf);
        const Point q = rnd.on(srf);
        CHECK(geodesic_distance(srf, p, q) == doctest::Approx(geodesic_distance(srf, q, p)));
        CHECK(geodesic_distance(srf, p, p) == doctest::Approx(0.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("roundoff clamp and domain errors") {
    // marginally outside the arccos domain: clamp, not error
    const Point a{{1.0, 0.0, 0.0}};
    CHECK(geodesic_distance(sphere(), a, a) == 0.0);
    const Point far{{2.0, 0.0, 0.0}};
    CHECK_THROWS_WITH(geodesic_distance(sphere(), a, far), "invalid point pair");
  }
}

TEST_CASE("exp map closed forms") {
  const Point o{{0, 0, 0}};
  const Point moved = exp_map(plane(), {o, {1.0, 2.0, 0.0}});
  CHECK(moved.coords.x == doctest::Approx(1.0));
  CHECK(moved.coords.y == doctest::Approx(2.0));

  const Point px{{1, 0, 0}};
  const Point quarter = exp_map(sphere(), {px, {0.0, M_PI / 2, 0.0}});
  CHECK(quarter.coords.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(quarter.coords.y == doctest::Approx(1.0));

  const Point hyp = exp_map(hyperbolic(), {Point{{1, 0, 0}}, {0.0, 1.0, 0.0}});
  CHECK(hyp.coords.x == doctest::Approx(std::cosh(1.0)));
  CHECK(hyp.coords.y == doctest::Approx(std::sinh(1.0)));

  // zero vector returns the base point
  const Point same = exp_map(sphere(), {px, {0.0, 0.0, 0.0}});
  CHECK(same.coords.x == 1.0);
}

TEST_CASE("log map inverts exp") {
  const TangentVector back = log_map(plane(), Point{{0, 0, 0}}, Point{{3, 4, 0}});
  CHECK(back.vec.x == doctest::Approx(3.0));
  CHECK(back.vec.y == doctest::Approx(4.0));

  const TangentVector quarter = log_map(sphere(), Point{{1, 0, 0}}, Point{{0, 1, 0}});
  CHECK(quarter.vec.y == doctest::Approx(M_PI / 2));

  CHECK_THROWS_WITH(log_map(sphere(), Point{{1, 0, 0}}, Point{{-1, 0, 0}}),
                    "conjugate pair, log undefined");

  SUBCASE("roundtrip on random pairs") {
    RandomPoints rnd;
    for (const Surface& srf : {sphere(), plane(), hyperbolic()}) {
      for (int i = 0; i < 100; ++i) {
        const Point p = rnd.on(srf);
        const Point q = rnd.on(srf);
        const Point q2 = exp_map(srf, log_map(srf, p, q));
        CHECK(geodesic_distance(srf, q, q2) < 1e-9);
      }
    }
  }

  SUBCASE("log length equals distance") {
    RandomPoints rnd(7);
    for (const Surface& srf : {sphere(), plane(), hyperbolic()}) {
      for (int i = 0; i < 50; ++i) {
        const Point p = rnd.on(srf);
        const Point q = rnd.on(srf);
        const TangentVector w = log_map(srf, p, q);
        CHECK(tangent_norm(srf, w.vec) ==
              doctest::Approx(geodesic_distance(srf, p, q)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("projection onto the model constraint") {
  const Point s = project(sphere(), {2.0, 0.0, 0.0});
  CHECK(s.coords.x == doctest::Approx(1.0));

  const Point p = project(plane(), {1.0, 2.0, 3e-15});
  CHECK(p.coords.z == 0.0);

  const Point h = project(hyperbolic(), {std::cosh(1.0) + 1e-6, std::sinh(1.0), 0.0});
  CHECK(std::abs(constraint_residual(hyperbolic(), h)) < 1e-14);

  CHECK_THROWS_WITH(project(sphere(), {1e-3, 0.0, 0.0}), "projection ill-defined");
  CHECK_THROWS_WITH(project(hyperbolic(), {-2.0, 0.0, 0.0}), "projection ill-defined");
}

TEST_CASE("scale profile of the polar metric") {
  const ScaleProfile s = scale_profile(sphere(), M_PI / 2);
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.derivative == doctest::Approx(0.0).epsilon(1e-15));

  const ScaleProfile p = scale_profile(plane(), 2.0);
  CHECK(p.value == 2.0);
  CHECK(p.derivative == 1.0);

  const ScaleProfile h = scale_profile(hyperbolic(), 0.0);
  CHECK(h.value == 0.0);
  CHECK(h.derivative == 1.0);

  SUBCASE("ratio correction term") {
    CHECK(scale_ratio_minus_one(plane(), 0.37) == 0.0);
    // series matches the closed form across the switchover
    for (const Surface& srf : {sphere(), hyperbolic()}) {
      const double lhs = scale_ratio_minus_one(srf, 9e-5);
      const ScaleProfile sp = scale_profile(srf, 9e-5);
      const double rhs = 9e-5 * sp.derivative / sp.value - 1.0;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
  }
}

TEST_CASE("triangle inequality on random triples") {
  RandomPoints rnd(99);
  for (const Surface& srf : {sphere(), plane(), hyperbolic()}) {
    for (int i = 0; i < 1000; ++i) {
      const Point p = rnd.on(srf);
      const Point q = rnd.on(srf);
      const Point r = rnd.on(srf);
      CHECK(geodesic_distance(srf, p, r) <=
            geodesic_distance(srf, p, q) + geodesic_distance(srf, q, r) + 1e-12);
    }
  }
}

TEST_CASE("distance agrees with quadrature arclength of the exp path") {
  RandomPoints rnd(3);
  for (const Surface& srf : {sphere(), plane(), hyperbolic()}) {
    for (int i = 0; i < 5; ++i) {
      const Point p = rnd.on(srf);
      const TangentVector v = rnd.tangent_at(srf, p, 1.0);
      const Point q = exp_map(srf, v);
      const double quadrature = geoflow::testing::exp_path_arclength(srf, v);
      CHECK(std::abs(quadrature - geodesic_distance(srf, p, q)) < 1e-8);
    }
  }
}

TEST_CASE("metric is positive definite on tangent vectors") {
  RandomPoints rnd(11);
  for (const Surface& srf : {sphere(), plane(), hyperbolic()}) {
    for (int i = 0; i < 100; ++i) {
      const Point p = rnd.on(srf);
      const TangentVector v = rnd.tangent_at(srf, p, 2.0);
      if (tangent_norm(srf, v.vec) == 0.0) continue;
      CHECK(metric_inner(srf, v, v) > 0.0);
    }
  }
}

TEST_CASE("rotation by 90 degrees preserves the frame") {
  RandomPoints rnd(17);
  for (const Surface& srf : {sphere(), plane(), hyperbolic()}) {
    for (int i = 0; i < 50; ++i) {
      const Point p = rnd.on(srf);
      TangentVector t = rnd.tangent_at(srf, p, 1.0);
      const double nt = tangent_norm(srf, t.vec);
      if (nt < 1e-12) continue;
      t.vec = (1.0 / nt) * t.vec;
      const Vec3 n = rotate90(srf, p, t.vec);
      CHECK(ambient_dot(srf, n, n) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(ambient_dot(srf, n, t.vec) == doctest::Approx(0.0).epsilon(1e-10));
      // applying the rotation twice reverses the vector
      const Vec3 back = rotate90(srf, p, n);
      CHECK(euclidean_norm(back + t.vec) < 1e-10);
    }
  }
}
