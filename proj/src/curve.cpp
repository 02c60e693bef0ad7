#include "geoflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace geoflow {

void validate_curve(const DiscreteCurve& curve) {
  const std::size_t m = curve.points.size();
  if (curve.params.size() != m)
    throw std::invalid_argument("params/points size mismatch");
  if (m < 9) throw std::invalid_argument("curve needs at least 9 nodes (n >= 8)");
  const double h0 = curve.params[1] - curve.params[0];
  if (h0 <= 0.0) throw std::invalid_argument("params not increasing");
  const double span = curve.params.back() - curve.params.front();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = curve.params[i + 1] - curve.params[i];
    if (std::abs(h - h0) > 1e-12 * span)
      throw std::invalid_argument("params not uniform");
    if (geodesic_distance(curve.surface, curve.points[i], curve.points[i + 1]) <= 0.0)
      throw std::invalid_argument("consecutive points coincide");
  }
  for (const Point& p : curve.points) {
    if (std::abs(constraint_residual(curve.surface, p)) > 1e-9)
      throw std::invalid_argument("point off the model surface");
  }
}

CurveGeometry compute_geometry(const DiscreteCurve& curve) {
  const std::size_t m = curve.points.size();
  if (m < 4) throw std::invalid_argument("too few nodes");
  const std::size_t n = m - 1;
  const double du = (curve.params.back() - curve.params.front()) / static_cast<double>(n);
  const Surface& srf = curve.surface;
  const auto& P = curve.points;

  CurveGeometry g;
  g.speed.resize(m);
  g.tangent.resize(m);
  g.normal.resize(m);
  g.curvature.resize(m);
  g.arclength.resize(m);

  const double inv2du = 1.0 / (2.0 * du);
  const double invdu2 = 1.0 / (du * du);
  for (std::size_t i = 0; i <= n; ++i) {
    Vec3 d1, d2;
    if (i == 0) {
      d1 = inv2du * (-3.0 * P[0].coords + 4.0 * P[1].coords - P[2].coords);
      d2 = invdu2 * (2.0 * P[0].coords - 5.0 * P[1].coords + 4.0 * P[2].coords - P[3].coords);
    } else if (i == n) {
      d1 = inv2du * (3.0 * P[n].coords - 4.0 * P[n - 1].coords + P[n - 2].coords);
      d2 = invdu2 *
           (2.0 * P[n].coords - 5.0 * P[n - 1].coords + 4.0 * P[n - 2].coords - P[n - 3].coords);
    } else {
      d1 = inv2du * (P[i + 1].coords - P[i - 1].coords);
      d2 = invdu2 * (P[i + 1].coords - 2.0 * P[i].coords + P[i - 1].coords);
    }
    const Vec3 d1t = tangent_project(srf, P[i], d1);
    const double v = tangent_norm(srf, d1t);
    if (v <= 1e-12) throw std::runtime_error("degenerate parametrization");
    g.speed[i] = v;
    const Vec3 t = (1.0 / v) * d1t;
    const Vec3 nv = rotate90(srf, P[i], t);
    g.tangent[i] = TangentVector{P[i], t};
    g.normal[i] = TangentVector{P[i], nv};
    // N is tangent to the surface, so pairing the raw second difference with
    // it already picks out the covariant part.
    g.curvature[i] = ambient_dot(srf, d2, nv) / (v * v);
  }

  g.arclength[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    g.arclength[i + 1] = g.arclength[i] + 0.5 * (g.speed[i] + g.speed[i + 1]) * du;
  g.total_length = g.arclength[n];
  return g;
}

double intrinsic_length(const CurveGeometry& geom, std::size_t i, std::size_t j) {
  if (i > j) throw std::invalid_argument("intrinsic_length requires i <= j");
  return geom.arclength[j] - geom.arclength[i];
}

std::vector<double> chord_arclength(const DiscreteCurve& curve) {
  std::vector<double> c(curve.points.size(), 0.0);
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i)
    c[i + 1] = c[i] + geodesic_distance(curve.surface, curve.points[i], curve.points[i + 1]);
  return c;
}

double polyline_length(const DiscreteCurve& curve) { return chord_arclength(curve).back(); }

ChordArcResult chord_arc_scan(const DiscreteCurve& curve, const CurveGeometry&) {
  const std::size_t n = curve.segment_count();
  const std::vector<double> c = chord_arclength(curve);
  const auto ratio = [&](std::size_t i, std::size_t j) {
    return geodesic_distance(curve.surface, curve.points[i], curve.points[j]) / (c[j] - c[i]);
  };

  ChordArcResult res;
  res.theta_min = 1.0;
  res.i = 0;
  res.j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double r = ratio(i, j);
      if (r < res.theta_min) {
        res.theta_min = r;
        res.i = i;
        res.j = j;
      }
    }
  }

  res.interior = false;
  if (res.i > 0 && res.j < n) {
    bool strict = true;
    const std::size_t bi = res.i, bj = res.j;
    const auto check = [&](std::size_t i, std::size_t j) {
      if (i < j && j <= n) strict = strict && res.theta_min < ratio(i, j);
    };
    check(bi - 1, bj);
    check(bi + 1, bj);
    check(bi, bj - 1);
    check(bi, bj + 1);
    res.interior = strict;
  }
  return res;
}

double boundary_pair_floor(const DiscreteCurve& curve) {
  const std::size_t n = curve.segment_count();
  const std::vector<double> c = chord_arclength(curve);
  double floor = 1.0;
  const auto visit = [&](std::size_t i, std::size_t j) {
    const double r =
        geodesic_distance(curve.surface, curve.points[i], curve.points[j]) / (c[j] - c[i]);
    floor = std::min(floor, r);
  };
  for (std::size_t j = 1; j <= n; ++j) visit(0, j);
  for (std::size_t i = 0; i < n; ++i) visit(i, n);
  for (std::size_t i = 0; i + 1 <= n; ++i) visit(i, i + 1);
  return floor;
}

namespace {

struct ArcHit {
  bool hit = false;
  double t = 0.0;  // parameter along the first arc in [0,1]
  double u = 0.0;  // parameter along the second arc
};

ArcHit plane_segment_hit(const Vec3& a, const Vec3& b, const Vec3& cc, const Vec3& d) {
  const double rx = b.x - a.x, ry = b.y - a.y;
  const double sx = d.x - cc.x, sy = d.y - cc.y;
  const double denom = rx * sy - ry * sx;
  const double qpx = cc.x - a.x, qpy = cc.y - a.y;
  const double scale = std::max({std::abs(rx), std::abs(ry), std::abs(sx), std::abs(sy), 1e-300});
  if (std::abs(denom) < 1e-14 * scale * scale) {
    // parallel; collinear overlap counts as a (degenerate) intersection
    if (std::abs(qpx * ry - qpy * rx) > 1e-12 * scale * scale) return {};
    const double rr = rx * rx + ry * ry;
    double t0 = (qpx * rx + qpy * ry) / rr;
    double t1 = t0 + (sx * rx + sy * ry) / rr;
    const double lo = std::max(std::min(t0, t1), 0.0);
    const double hi = std::min(std::max(t0, t1), 1.0);
    if (lo > hi) return {};
    const double tm = 0.5 * (lo + hi);
    const double um = (t1 != t0) ? (tm - t0) / (t1 - t0) : 0.0;
    return {true, tm, std::clamp(um, 0.0, 1.0)};
  }
  const double t = (qpx * sy - qpy * sx) / denom;
  const double u = (qpx * ry - qpy * rx) / denom;
  return {true, t, u};
}

// Both arcs realized as geodesics cut out by planes through the origin
// (sphere: Euclidean normals; hyperboloid: same planes, points normalized in
// the Minkowski form). Decomposing a candidate point x = alpha*P + beta*Q
// with alpha,beta >= 0 characterizes membership in the arc.
struct ArcDecomp {
  double alpha, beta, t;
};

ArcDecomp sphere_decompose(const Vec3& p, const Vec3& q, const Vec3& x) {
  const double cpq = dot(p, q);
  const double det = 1.0 - cpq * cpq;
  const double xp = dot(x, p), xq = dot(x, q);
  const double alpha = (xp - cpq * xq) / det;
  const double beta = (xq - cpq * xp) / det;
  const double full = std::acos(std::clamp(cpq, -1.0, 1.0));
  const double part = std::acos(std::clamp(xp, -1.0, 1.0));
  return {alpha, beta, full > 0 ? part / full : 0.0};
}

ArcDecomp hyper_decompose(const Vec3& p, const Vec3& q, const Vec3& x) {
  const double m = minkowski_dot(p, q);  // <= -1
  const double det = 1.0 - m * m;        // <= 0
  const double xp = minkowski_dot(x, p), xq = minkowski_dot(x, q);
  const double alpha = (-xp - m * xq) / det;
  const double beta = (-m * xp - xq) / det;
  const double full = std::acosh(std::max(-m, 1.0));
  const double part = std::acosh(std::max(-xp, 1.0));
  return {alpha, beta, full > 0 ? part / full : 0.0};
}

ArcHit curved_arc_hit(const Surface& srf, const Vec3& p1, const Vec3& q1, const Vec3& p2,
                      const Vec3& q2) {
  const Vec3 n1 = cross(p1, q1);
  const Vec3 n2 = cross(p2, q2);
  Vec3 d = cross(n1, n2);
  const double nd = euclidean_norm(d);
  const double scale = euclidean_norm(n1) * euclidean_norm(n2);
  if (nd < 1e-13 * std::max(scale, 1e-300)) {
    // same geodesic: report overlap if an endpoint of one arc lies on the other
    const auto decomp = (srf.kind == SurfaceKind::Sphere) ? sphere_decompose : hyper_decompose;
    const ArcDecomp a = decomp(p1, q1, p2);
    if (a.alpha >= -1e-9 && a.beta >= -1e-9) return {true, a.t, 0.0};
    const ArcDecomp b = decomp(p1, q1, q2);
    if (b.alpha >= -1e-9 && b.beta >= -1e-9) return {true, b.t, 1.0};
    const ArcDecomp cdec = decomp(p2, q2, p1);
    if (cdec.alpha >= -1e-9 && cdec.beta >= -1e-9) return {true, 0.0, cdec.t};
    return {};
  }

  if (srf.kind == SurfaceKind::Sphere) {
    for (int sign = 0; sign < 2; ++sign) {
      const Vec3 x = (sign == 0 ? 1.0 / nd : -1.0 / nd) * d;
      const ArcDecomp a = sphere_decompose(p1, q1, x);
      if (a.alpha < -1e-9 || a.beta < -1e-9) continue;
      const ArcDecomp b = sphere_decompose(p2, q2, x);
      if (b.alpha < -1e-9 || b.beta < -1e-9) continue;
      return {true, a.t, b.t};
    }
    return {};
  }

  // hyperboloid: the intersection line must be timelike and future-pointing
  const double qq = -minkowski_dot(d, d);
  if (qq <= 0.0) return {};
  if (d.x < 0.0) d = -d;
  const Vec3 x = (1.0 / std::sqrt(qq)) * d;
  const ArcDecomp a = hyper_decompose(p1, q1, x);
  if (a.alpha < -1e-9 || a.beta < -1e-9) return {};
  const ArcDecomp b = hyper_decompose(p2, q2, x);
  if (b.alpha < -1e-9 || b.beta < -1e-9) return {};
  return {true, a.t, b.t};
}

}  // namespace

int self_intersection_count(const DiscreteCurve& curve) {
  const std::size_t n = curve.segment_count();
  const auto& P = curve.points;
  const double tol = 1e-9;
  int count = 0;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    for (std::size_t l = k + 2; l < n; ++l) {
      ArcHit h;
      if (curve.surface.kind == SurfaceKind::Plane)
        h = plane_segment_hit(P[k].coords, P[k + 1].coords, P[l].coords, P[l + 1].coords);
      else
        h = curved_arc_hit(curve.surface, P[k].coords, P[k + 1].coords, P[l].coords,
                           P[l + 1].coords);
      if (!h.hit) continue;
      // half-open parameter ranges so a crossing at a shared node is counted
      // once; the final segment keeps its right endpoint (the curve end has
      // no successor segment to pick the crossing up).
      const bool t_ok = h.t >= -tol && (h.t < 1.0 - tol || (k == n - 1 && h.t <= 1.0 + tol));
      const bool u_ok = h.u >= -tol && (h.u < 1.0 - tol || (l == n - 1 && h.u <= 1.0 + tol));
      if (t_ok && u_ok) ++count;
    }
  }
  return count;
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw std::invalid_argument("pchip needs matched data, size >= 2");
  std::vector<double> slope(m, 0.0);
  if (m == 2) {
    slope[0] = slope[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return slope;
  }
  std::vector<double> h(m - 1), delta(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  const auto edge = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0)
      s = 0.0;
    else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
      s = 3.0 * d0;
    return s;
  };
  slope[0] = edge(h[0], h[1], delta[0], delta[1]);
  slope[m - 1] = edge(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
  return slope;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& m, double xq) {
  const std::size_t k = x.size();
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double t = (xq - x[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  (void)k;
  return h00 * y[i] + h10 * h * m[i] + h01 * y[i + 1] + h11 * h * m[i + 1];
}

double pchip_eval_deriv(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& m, double xq) {
  if (xq <= x.front()) return m.front();
  if (xq >= x.back()) return m.back();
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double t = (xq - x[i]) / h;
  const double t2 = t * t;
  const double d00 = (6.0 * t2 - 6.0 * t) / h;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = (-6.0 * t2 + 6.0 * t) / h;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return d00 * y[i] + d10 * m[i] + d01 * y[i + 1] + d11 * m[i + 1];
}

namespace {

struct CoordinateInterpolant {
  std::vector<double> s;
  std::vector<double> cx, cy, cz;
  std::vector<double> mx, my, mz;

  // Interpolation runs against the polyline-chord arclength: for a curve that
  // is already uniform the resampling targets then hit the knots exactly.
  explicit CoordinateInterpolant(const DiscreteCurve& curve, const CurveGeometry&) {
    s = chord_arclength(curve);
    const std::size_t m = curve.points.size();
    cx.resize(m);
    cy.resize(m);
    cz.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      cx[i] = curve.points[i].coords.x;
      cy[i] = curve.points[i].coords.y;
      cz[i] = curve.points[i].coords.z;
    }
    mx = pchip_slopes(s, cx);
    my = pchip_slopes(s, cy);
    mz = pchip_slopes(s, cz);
  }

  Point at(const Surface& srf, double target) const {
    const Vec3 raw{pchip_eval(s, cx, mx, target), pchip_eval(s, cy, my, target),
                   pchip_eval(s, cz, mz, target)};
    return project(srf, raw);
  }
};

}  // namespace

std::vector<Point> resample_at_arclengths(const DiscreteCurve& curve, const CurveGeometry& geom,
                                          const std::vector<double>& targets) {
  const CoordinateInterpolant interp(curve, geom);
  std::vector<Point> out;
  out.reserve(targets.size());
  for (double t : targets) out.push_back(interp.at(curve.surface, t));
  return out;
}

DiscreteCurve reparametrize(const DiscreteCurve& curve, const CurveGeometry& geom) {
  const std::size_t n = curve.segment_count();
  const CoordinateInterpolant interp(curve, geom);
  const double total = interp.s.back();
  DiscreteCurve out = curve;
  for (std::size_t i = 1; i < n; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(n);
    out.points[i] = interp.at(curve.surface, target);
  }
  // endpoints preserved bit-exactly
  out.points[0] = curve.points[0];
  out.points[n] = curve.points[n];
  return out;
}

double total_turning(const CurveGeometry& geom) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < geom.curvature.size(); ++i) {
    const double ds = geom.arclength[i + 1] - geom.arclength[i];
    total += 0.5 * (std::abs(geom.curvature[i]) + std::abs(geom.curvature[i + 1])) * ds;
  }
  return total;
}

double alpha_epsilon(const CurveGeometry& geom, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("alpha_epsilon requires eps > 0");
  const std::size_t m = geom.curvature.size();
  const auto& s = geom.arclength;
  std::vector<double> prefix(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i)
    prefix[i + 1] =
        prefix[i] + 0.5 * (geom.curvature[i] + geom.curvature[i + 1]) * (s[i + 1] - s[i]);

  double best = 0.0;
  std::deque<std::size_t> maxq, minq;
  std::size_t j = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    while (j + 1 < m && s[j + 1] - s[i] < eps) {
      ++j;
      while (!maxq.empty() && prefix[maxq.back()] <= prefix[j]) maxq.pop_back();
      maxq.push_back(j);
      while (!minq.empty() && prefix[minq.back()] >= prefix[j]) minq.pop_back();
      minq.push_back(j);
    }
    while (!maxq.empty() && maxq.front() <= i) maxq.pop_front();
    while (!minq.empty() && minq.front() <= i) minq.pop_front();
    if (!maxq.empty()) best = std::max(best, prefix[maxq.front()] - prefix[i]);
    if (!minq.empty()) best = std::max(best, prefix[i] - prefix[minq.front()]);
  }
  return best;
}

namespace {

// Distance from a point to the geodesic arc between two nodes.
double point_to_arc(const Surface& srf, const Point& p, const Point& a, const Point& b) {
  const double d_ends = std::min(geodesic_distance(srf, p, a), geodesic_distance(srf, p, b));
  switch (srf.kind) {
    case SurfaceKind::Plane: {
      const Vec3 ab = b.coords - a.coords;
      const double len2 = dot(ab, ab);
      if (len2 <= 0.0) return d_ends;
      const double t = dot(p.coords - a.coords, ab) / len2;
      if (t <= 0.0 || t >= 1.0) return d_ends;
      return euclidean_norm(p.coords - (a.coords + t * ab));
    }
    case SurfaceKind::Sphere: {
      Vec3 m = cross(a.coords, b.coords);
      const double nm = euclidean_norm(m);
      if (nm < 1e-14) return d_ends;
      m = (1.0 / nm) * m;
      const double off = dot(p.coords, m);
      const Vec3 foot_raw = p.coords - off * m;
      if (euclidean_norm(foot_raw) < 1e-14) return d_ends;
      const Point foot = project(srf, foot_raw);
      const ArcDecomp dec = sphere_decompose(a.coords, b.coords, foot.coords);
      if (dec.alpha < 0.0 || dec.beta < 0.0) return d_ends;
      return std::abs(std::asin(std::clamp(off, -1.0, 1.0)));
    }
    case SurfaceKind::Hyperbolic: {
      const Vec3 me = cross(a.coords, b.coords);
      Vec3 w{-me.x, me.y, me.z};  // Minkowski-orthogonal complement of span{a,b}
      const double nw2 = minkowski_dot(w, w);
      if (nw2 <= 1e-28) return d_ends;
      w = (1.0 / std::sqrt(nw2)) * w;
      const double off = minkowski_dot(p.coords, w);
      const Vec3 foot_raw = p.coords - off * w;
      if (-minkowski_dot(foot_raw, foot_raw) <= 0.0 || foot_raw.x <= 0.0) return d_ends;
      const Point foot = project(srf, foot_raw);
      const ArcDecomp dec = hyper_decompose(a.coords, b.coords, foot.coords);
      if (dec.alpha < 0.0 || dec.beta < 0.0) return d_ends;
      return std::asinh(std::abs(off));
    }
  }
  return d_ends;
}

}  // namespace

double hausdorff_distance(const DiscreteCurve& a, const DiscreteCurve& b) {
  const auto one_sided = [](const DiscreteCurve& from, const DiscreteCurve& to) {
    double worst = 0.0;
    for (const Point& p : from.points) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < to.points.size(); ++i)
        best = std::min(best, point_to_arc(to.surface, p, to.points[i], to.points[i + 1]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace geoflow
