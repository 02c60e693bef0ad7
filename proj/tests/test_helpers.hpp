#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "geoflow/curve.hpp"
#include "geoflow/surface.hpp"

namespace geoflow::testing {

/// Deterministic random points, kept away from conjugate configurations.
class RandomPoints {
 public:
  explicit RandomPoints(unsigned seed = 20240817) : rng_(seed) {}

  Point on(const Surface& srf) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    switch (srf.kind) {
      case SurfaceKind::Plane:
        return Point{{3.0 * u(rng_), 3.0 * u(rng_), 0.0}};
      case SurfaceKind::Sphere: {
        // cap of angular radius 1.2 about +x, so pairs stay non-conjugate
        const double phi = 1.2 * std::abs(u(rng_));
        const double theta = M_PI * u(rng_);
        return Point{{std::cos(phi), std::sin(phi) * std::cos(theta),
                      std::sin(phi) * std::sin(theta)}};
      }
      case SurfaceKind::Hyperbolic: {
        const double phi = 1.5 * std::abs(u(rng_));
        const double theta = M_PI * u(rng_);
        return Point{{std::cosh(phi), std::sinh(phi) * std::cos(theta),
                      std::sinh(phi) * std::sin(theta)}};
      }
    }
    return Point{};
  }

  TangentVector tangent_at(const Surface& srf, const Point& base, double max_len = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Vec3 raw{u(rng_), u(rng_), u(rng_)};
    Vec3 t = tangent_project(srf, base, raw);
    const double n = tangent_norm(srf, t);
    if (n < 1e-8) return tangent_at(srf, base, max_len);
    const double len = max_len * std::abs(u(rng_));
    return TangentVector{base, (len / n) * t};
  }

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng_);
  }

 private:
  std::mt19937 rng_;
};

/// Arclength of the geodesic t -> exp(t v), t in [0,1], by composite Simpson
/// quadrature on finite-difference speeds. Independent of geodesic_distance.
inline double exp_path_arclength(const Surface& srf, const TangentVector& v, int intervals = 512) {
  const double delta = 1e-6;
  const auto speed = [&](double t) {
    const Point a = exp_map(srf, TangentVector{v.base, (t - delta) * v.vec});
    const Point b = exp_map(srf, TangentVector{v.base, (t + delta) * v.vec});
    const Point mid = exp_map(srf, TangentVector{v.base, t * v.vec});
    const Vec3 d = (1.0 / (2.0 * delta)) * (b.coords - a.coords);
    return tangent_norm(srf, tangent_project(srf, mid, d));
  };
  double total = speed(0.0) + speed(1.0);
  for (int i = 1; i < intervals; ++i)
    total += (i % 2 == 1 ? 4.0 : 2.0) * speed(static_cast<double>(i) / intervals);
  return total / (3.0 * intervals);
}

/// Planar graph curve y = f(x) over [x0, x1] with fixed endpoints.
inline DiscreteCurve plane_graph(double (*f)(double), double x0, double x1, std::size_t n) {
  DiscreteCurve c;
  c.surface = plane();
  c.params.resize(n + 1);
  c.points.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n);
    c.params[i] = x;
    c.points[i] = Point{{x, f(x), 0.0}};
  }
  c.boundary_a = BoundaryCondition::fixed(c.points.front());
  c.boundary_b = BoundaryCondition::fixed(c.points.back());
  return c;
}

/// Planar circle arc of the given radius spanning [a0, a1] radians.
inline DiscreteCurve circle_arc(double radius, double a0, double a1, std::size_t n,
                                Vec3 center = {0.0, 0.0, 0.0}) {
  DiscreteCurve c;
  c.surface = plane();
  c.params.resize(n + 1);
  c.points.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double th = a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(n);
    c.params[i] = th;
    c.points[i] = Point{{center.x + radius * std::cos(th), center.y + radius * std::sin(th), 0.0}};
  }
  c.boundary_a = BoundaryCondition::fixed(c.points.front());
  c.boundary_b = BoundaryCondition::fixed(c.points.back());
  return c;
}

/// Uniformly sampled segment between two points of any surface (via log/exp).
inline DiscreteCurve geodesic_segment(const Surface& srf, const Point& a, const Point& b,
                                      std::size_t n) {
  DiscreteCurve c;
  c.surface = srf;
  c.params.resize(n + 1);
  c.points.resize(n + 1);
  const TangentVector w = log_map(srf, a, b);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n);
    c.params[i] = u;
    c.points[i] = exp_map(srf, TangentVector{a, u * w.vec});
  }
  c.points[0] = a;
  c.points[n] = b;
  c.boundary_a = BoundaryCondition::fixed(a);
  c.boundary_b = BoundaryCondition::fixed(b);
  return c;
}

}  // namespace geoflow::testing
