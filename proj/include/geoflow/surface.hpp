#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geoflow {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Vec3& operator*=(double a) {
    x *= a;
    y *= a;
    z *= a;
    return *this;
  }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double a, Vec3 v) { return v *= a; }
inline Vec3 operator*(Vec3 v, double a) { return v *= a; }
inline Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double euclidean_norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Bilinear form diag(-1,+1,+1); the first coordinate is the timelike one of
// the hyperboloid model.
inline double minkowski_dot(const Vec3& a, const Vec3& b) {
  return -a.x * b.x + a.y * b.y + a.z * b.z;
}

enum class SurfaceKind { Sphere, Plane, Hyperbolic };

/// One of the three constant-curvature model geometries, realized in ambient
/// coordinates: the unit sphere in Euclidean 3-space, the z=0 plane, and the
/// upper hyperboloid -x^2+y^2+z^2 = -1 (x >= 1) in Minkowski 3-space.
struct Surface {
  SurfaceKind kind = SurfaceKind::Plane;

  int gauss_curvature() const {
    switch (kind) {
      case SurfaceKind::Sphere: return 1;
      case SurfaceKind::Plane: return 0;
      case SurfaceKind::Hyperbolic: return -1;
    }
    return 0;
  }
};

inline Surface sphere() { return Surface{SurfaceKind::Sphere}; }
inline Surface plane() { return Surface{SurfaceKind::Plane}; }
inline Surface hyperbolic() { return Surface{SurfaceKind::Hyperbolic}; }

struct Point {
  Vec3 coords;
};

struct TangentVector {
  Point base;
  Vec3 vec;
};

// Ambient bilinear form of the model: Euclidean for sphere/plane, Minkowski
// for the hyperboloid. Positive definite on tangent spaces in all cases.
inline double ambient_dot(const Surface& s, const Vec3& a, const Vec3& b) {
  return s.kind == SurfaceKind::Hyperbolic ? minkowski_dot(a, b) : dot(a, b);
}

/// Signed distance of a raw 3-vector from the model constraint set
/// (|p|-1 on the sphere, <p,p>+1 in Minkowski form on the hyperboloid, z on
/// the plane).
inline double constraint_residual(const Surface& s, const Point& p) {
  switch (s.kind) {
    case SurfaceKind::Sphere: return euclidean_norm(p.coords) - 1.0;
    case SurfaceKind::Plane: return p.coords.z;
    case SurfaceKind::Hyperbolic: return minkowski_dot(p.coords, p.coords) + 1.0;
  }
  return 0.0;
}

inline double metric_inner(const Surface& s, const TangentVector& a, const TangentVector& b) {
  const Vec3 d = a.base.coords - b.base.coords;
  if (euclidean_norm(d) > 1e-9)
    throw std::invalid_argument("tangent vectors at different points");
  return ambient_dot(s, a.vec, b.vec);
}

inline double tangent_norm(const Surface& s, const Vec3& v) {
  return std::sqrt(std::max(0.0, ambient_dot(s, v, v)));
}

inline double geodesic_distance(const Surface& s, const Point& p, const Point& q) {
  switch (s.kind) {
    case SurfaceKind::Plane:
      return euclidean_norm(p.coords - q.coords);
    case SurfaceKind::Sphere: {
      const double c = dot(p.coords, q.coords);
      if (c > 1.0 + 1e-9 || c < -1.0 - 1e-9)
        throw std::invalid_argument("invalid point pair");
      // chord form: well conditioned at both ends of [0, pi], unlike acos
      if (c >= 0.0)
        return 2.0 * std::asin(std::min(0.5 * euclidean_norm(q.coords - p.coords), 1.0));
      return M_PI - 2.0 * std::asin(std::min(0.5 * euclidean_norm(q.coords + p.coords), 1.0));
    }
    case SurfaceKind::Hyperbolic: {
      const double m = -minkowski_dot(p.coords, q.coords);
      if (m < 1.0 - 1e-9)
        throw std::invalid_argument("invalid point pair");
      // sinh form via the component orthogonal to p: conditioned near zero
      const Vec3 perp = q.coords - std::max(m, 1.0) * p.coords;
      return std::asinh(std::sqrt(std::max(0.0, minkowski_dot(perp, perp))));
    }
  }
  return 0.0;
}

inline Point project(const Surface& s, const Vec3& raw) {
  switch (s.kind) {
    case SurfaceKind::Plane:
      return Point{{raw.x, raw.y, 0.0}};
    case SurfaceKind::Sphere: {
      const double n = euclidean_norm(raw);
      if (n < 0.1) throw std::invalid_argument("projection ill-defined");
      return Point{(1.0 / n) * raw};
    }
    case SurfaceKind::Hyperbolic: {
      const double q = -minkowski_dot(raw, raw);
      if (q < 0.01 || raw.x <= 0.0) throw std::invalid_argument("projection ill-defined");
      return Point{(1.0 / std::sqrt(q)) * raw};
    }
  }
  return Point{raw};
}

inline Point exp_map(const Surface& s, const TangentVector& tv) {
  const double len = tangent_norm(s, tv.vec);
  switch (s.kind) {
    case SurfaceKind::Plane:
      return Point{{tv.base.coords.x + tv.vec.x, tv.base.coords.y + tv.vec.y, 0.0}};
    case SurfaceKind::Sphere: {
      if (len == 0.0) return tv.base;
      const Vec3 dir = (1.0 / len) * tv.vec;
      return project(s, std::cos(len) * tv.base.coords + std::sin(len) * dir);
    }
    case SurfaceKind::Hyperbolic: {
      if (len == 0.0) return tv.base;
      const Vec3 dir = (1.0 / len) * tv.vec;
      return project(s, std::cosh(len) * tv.base.coords + std::sinh(len) * dir);
    }
  }
  return tv.base;
}

inline TangentVector log_map(const Surface& s, const Point& p, const Point& q) {
  switch (s.kind) {
    case SurfaceKind::Plane:
      return TangentVector{p, q.coords - p.coords};
    case SurfaceKind::Sphere: {
      const double c = std::clamp(dot(p.coords, q.coords), -1.0, 1.0);
      if (c <= -1.0 + 1e-12) throw std::invalid_argument("conjugate pair, log undefined");
      const Vec3 perp = q.coords - c * p.coords;
      const double np = euclidean_norm(perp);
      if (np < 1e-15) return TangentVector{p, {0.0, 0.0, 0.0}};
      return TangentVector{p, (std::acos(c) / np) * perp};
    }
    case SurfaceKind::Hyperbolic: {
      const double m = std::max(-minkowski_dot(p.coords, q.coords), 1.0);
      const Vec3 perp = q.coords - m * p.coords;  // = q + <q,p> p, Minkowski-orthogonal to p
      const double np = tangent_norm(s, perp);
      if (np < 1e-15) return TangentVector{p, {0.0, 0.0, 0.0}};
      return TangentVector{p, (std::acosh(m) / np) * perp};
    }
  }
  return TangentVector{p, {0.0, 0.0, 0.0}};
}

/// Component of an ambient vector tangent to the surface at `base`.
inline Vec3 tangent_project(const Surface& s, const Point& base, const Vec3& v) {
  switch (s.kind) {
    case SurfaceKind::Plane:
      return {v.x, v.y, 0.0};
    case SurfaceKind::Sphere:
      return v - dot(v, base.coords) * base.coords;
    case SurfaceKind::Hyperbolic:
      return v + minkowski_dot(v, base.coords) * base.coords;
  }
  return v;
}

/// Rotation of a tangent vector by +90 degrees in the oriented tangent plane.
/// Orientation: outward ambient normal on the sphere, +z on the plane, the
/// position vector (Minkowski normal) on the hyperboloid.
inline Vec3 rotate90(const Surface& s, const Point& base, const Vec3& v) {
  switch (s.kind) {
    case SurfaceKind::Plane:
      return {-v.y, v.x, 0.0};
    case SurfaceKind::Sphere:
      return cross(base.coords, v);
    case SurfaceKind::Hyperbolic: {
      const Vec3 c = cross(base.coords, v);
      return {-c.x, c.y, c.z};  // raise the index with diag(-1,1,1)
    }
  }
  return v;
}

struct ScaleProfile {
  double value;       // S(phi): sin/identity/sinh
  double derivative;  // S'(phi)
};

inline ScaleProfile scale_profile(const Surface& s, double phi) {
  switch (s.kind) {
    case SurfaceKind::Sphere: return {std::sin(phi), std::cos(phi)};
    case SurfaceKind::Plane: return {phi, 1.0};
    case SurfaceKind::Hyperbolic: return {std::sinh(phi), std::cosh(phi)};
  }
  return {phi, 1.0};
}

/// phi * S'(phi)/S(phi) - 1, the curvature correction factor appearing in the
/// weighted-integral evolution identity. Identically zero on the plane; series
/// near phi = 0 elsewhere to avoid 0/0.
inline double scale_ratio_minus_one(const Surface& s, double phi) {
  if (s.kind == SurfaceKind::Plane) return 0.0;
  const double S = static_cast<double>(s.gauss_curvature());
  if (phi < 1e-4) {
    const double p2 = phi * phi;
    return -S * p2 / 3.0 - p2 * p2 / 45.0;
  }
  const ScaleProfile sp = scale_profile(s, phi);
  return phi * sp.derivative / sp.value - 1.0;
}

}  // namespace geoflow
