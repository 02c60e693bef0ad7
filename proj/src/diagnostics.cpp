#include "geoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geoflow {

namespace {

double gaussian_weight(double rho, double remaining) {
  return std::exp(-rho * rho / (4.0 * remaining)) / std::sqrt(4.0 * M_PI * remaining);
}

// Unit tangent at p of the geodesic running from the probe center to p.
Vec3 outward_direction(const Surface& srf, const Point& center, const Point& p, double rho) {
  if (rho < 1e-14) return {0.0, 0.0, 0.0};
  const TangentVector back = log_map(srf, p, center);
  return (-1.0 / rho) * back.vec;
}

double trapezoid(const std::vector<double>& f, const std::vector<double>& s) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    total += 0.5 * (f[i] + f[i + 1]) * (s[i + 1] - s[i]);
  return total;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace

double q_functional(const FlowState& state, const MonotonicityProbe& probe) {
  if (state.t >= probe.t_star) throw std::invalid_argument("probe expired");
  const double remaining = probe.t_star - state.t;
  const Surface& srf = state.curve.surface;
  const std::size_t m = state.curve.points.size();
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double rho = geodesic_distance(srf, probe.p_star, state.curve.points[i]);
    f[i] = gaussian_weight(rho, remaining);
  }
  return trapezoid(f, state.geom.arclength);
}

double homothetic_defect(const FlowState& state, const MonotonicityProbe& probe) {
  if (state.t >= probe.t_star) throw std::invalid_argument("probe expired");
  const double remaining = probe.t_star - state.t;
  const Surface& srf = state.curve.surface;
  const std::size_t m = state.curve.points.size();
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Point& p = state.curve.points[i];
    const double rho = geodesic_distance(srf, probe.p_star, p);
    const Vec3 w = outward_direction(srf, probe.p_star, p, rho);
    const double wn = ambient_dot(srf, w, state.geom.normal[i].vec);
    const double defect = state.geom.curvature[i] + rho * wn / (2.0 * remaining);
    f[i] = gaussian_weight(rho, remaining) * defect * defect;
  }
  return trapezoid(f, state.geom.arclength);
}

MonotonicityTerms monotonicity_terms(const FlowState& a, const FlowState& b, const FlowState& c,
                                     const MonotonicityProbe& probe) {
  if (a.curve.params != b.curve.params || b.curve.params != c.curve.params)
    throw std::invalid_argument("residual requires identical grids");
  if (!(a.t < b.t && b.t < c.t)) throw std::invalid_argument("states must be time-ordered");
  if (std::max(b.last_regrid_step, c.last_regrid_step) > a.step)
    throw std::invalid_argument("residual undefined across regrid");
  if (c.t >= probe.t_star) throw std::invalid_argument("probe expired");

  MonotonicityTerms terms;
  const double qa = q_functional(a, probe);
  const double qb = q_functional(b, probe);
  const double qc = q_functional(c, probe);
  const double dt1 = b.t - a.t;
  const double dt2 = c.t - b.t;
  terms.dq_dt =
      (dt1 * dt1 * qc - dt2 * dt2 * qa + (dt2 * dt2 - dt1 * dt1) * qb) /
      (dt1 * dt2 * (dt1 + dt2));

  const Surface& srf = b.curve.surface;
  const double remaining = probe.t_star - b.t;
  const std::size_t m = b.curve.points.size();
  std::vector<double> defect(m), correction(m);
  std::vector<double> flux(m);  // boundary integrand, only ends used
  for (std::size_t i = 0; i < m; ++i) {
    const Point& p = b.curve.points[i];
    const double rho = geodesic_distance(srf, probe.p_star, p);
    const Vec3 w = outward_direction(srf, probe.p_star, p, rho);
    const double lam = gaussian_weight(rho, remaining);
    const double wn = ambient_dot(srf, w, b.geom.normal[i].vec);
    const double wt = ambient_dot(srf, w, b.geom.tangent[i].vec);
    const double d = b.geom.curvature[i] + rho * wn / (2.0 * remaining);
    defect[i] = lam * d * d;
    correction[i] =
        lam / (2.0 * remaining) * (1.0 - wt * wt) * scale_ratio_minus_one(srf, rho);
    flux[i] = lam * rho * wt / (2.0 * remaining);
  }
  terms.defect_integral = trapezoid(defect, b.geom.arclength);
  terms.correction_integral = trapezoid(correction, b.geom.arclength);
  terms.boundary_term = flux[m - 1] - flux[0];
  return terms;
}

double monotonicity_residual(const FlowState& a, const FlowState& b, const FlowState& c,
                             const MonotonicityProbe& probe) {
  return monotonicity_terms(a, b, c, probe).residual();
}

std::vector<double> blowup_rate(const std::vector<DiagnosticRecord>& records,
                                double t_star_estimate) {
  std::vector<double> series;
  series.reserve(records.size());
  for (const DiagnosticRecord& r : records)
    series.push_back(std::sqrt(std::max(t_star_estimate - r.t, 0.0)) * r.kappa_sup);
  return series;
}

std::string classify_blowup_series(const std::vector<double>& series) {
  if (series.empty()) return "no singularity at t*_est";
  const double peak = *std::max_element(series.begin(), series.end());
  const std::size_t span = std::max<std::size_t>(3, series.size() / 4);
  if (series.size() < 2 * span || peak <= 0.0)
    return peak > 0.0 ? "type-1-like" : "no singularity at t*_est";
  const std::vector<double> head(series.begin(), series.begin() + span);
  const std::vector<double> tail(series.end() - span, series.end());
  const double head_med = median(head);
  const double tail_med = median(tail);
  if (tail_med < 0.1 * peak && tail.back() <= tail.front()) return "no singularity at t*_est";
  if (tail_med > 3.0 * head_med) return "type-2-like";
  return "type-1-like";
}

double estimate_blowup_time(const std::vector<DiagnosticRecord>& records, double tail_fraction) {
  std::vector<double> t, y;
  for (const DiagnosticRecord& r : records)
    if (r.kappa_sup > 0.0) {
      t.push_back(r.t);
      y.push_back(1.0 / (r.kappa_sup * r.kappa_sup));
    }
  const std::size_t tail = std::max<std::size_t>(3, static_cast<std::size_t>(
                                                        tail_fraction * static_cast<double>(t.size())));
  if (t.size() < tail) throw std::invalid_argument("not enough records to estimate blowup time");
  const std::vector<double> tt(t.end() - tail, t.end());
  const std::vector<double> yy(y.end() - tail, y.end());
  const LineFit fit = fit_line(tt, yy);
  if (fit.slope >= 0.0) throw std::runtime_error("curvature not growing; no blowup time");
  return -fit.intercept / fit.slope;
}

namespace {

// Arclength parametrization of the curve through the monotone cubic
// interpolant of ambient coordinates, with tangents and curvature values
// interpolated the same way.
class ArclengthChart {
 public:
  ArclengthChart(const DiscreteCurve& curve, const CurveGeometry& geom)
      : srf_(curve.surface), s_(geom.arclength) {
    const std::size_t m = curve.points.size();
    cx_.resize(m);
    cy_.resize(m);
    cz_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      cx_[i] = curve.points[i].coords.x;
      cy_[i] = curve.points[i].coords.y;
      cz_[i] = curve.points[i].coords.z;
    }
    mx_ = pchip_slopes(s_, cx_);
    my_ = pchip_slopes(s_, cy_);
    mz_ = pchip_slopes(s_, cz_);
    kappa_ = geom.curvature;
    mk_ = pchip_slopes(s_, kappa_);
  }

  Point at(double s) const {
    return project(srf_, {pchip_eval(s_, cx_, mx_, s), pchip_eval(s_, cy_, my_, s),
                          pchip_eval(s_, cz_, mz_, s)});
  }

  Vec3 unit_tangent(double s) const {
    const Point p = at(s);
    const Vec3 raw{pchip_eval_deriv(s_, cx_, mx_, s), pchip_eval_deriv(s_, cy_, my_, s),
                   pchip_eval_deriv(s_, cz_, mz_, s)};
    const Vec3 tang = tangent_project(srf_, p, raw);
    return (1.0 / tangent_norm(srf_, tang)) * tang;
  }

  double curvature(double s) const { return pchip_eval(s_, kappa_, mk_, s); }

  double s_min() const { return s_.front(); }
  double s_max() const { return s_.back(); }

 private:
  Surface srf_;
  std::vector<double> s_;
  std::vector<double> cx_, cy_, cz_, kappa_;
  std::vector<double> mx_, my_, mz_, mk_;
};

double golden_minimize(const std::function<double(double)>& f, double lo, double hi, int iters) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iters; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

VariationalCheckReport chord_arc_variational_check(const FlowState& state) {
  VariationalCheckReport rep;
  const ChordArcResult scan = chord_arc_scan(state.curve, state.geom);
  if (!scan.interior) {
    rep.applicable = false;
    rep.message = "not applicable (boundary minimum)";
    return rep;
  }
  rep.applicable = true;

  const ArclengthChart chart(state.curve, state.geom);
  const Surface& srf = state.curve.surface;
  const auto& s = state.geom.arclength;
  const std::size_t n = state.curve.segment_count();
  const double spacing = state.geom.total_length / static_cast<double>(n);

  double sp = s[scan.i];
  double sq = s[scan.j];
  const auto ratio_of = [&](double a, double b) {
    return geodesic_distance(srf, chart.at(a), chart.at(b)) / (b - a);
  };
  // polish the discrete argmin to sub-node accuracy by alternating line
  // searches in the two arclength coordinates
  for (int round = 0; round < 6; ++round) {
    const double lo_p = std::max(chart.s_min(), sp - spacing);
    const double hi_p = std::min(sq - spacing, sp + spacing);
    sp = golden_minimize([&](double a) { return ratio_of(a, sq); }, lo_p, hi_p, 40);
    const double lo_q = std::max(sp + spacing, sq - spacing);
    const double hi_q = std::min(chart.s_max(), sq + spacing);
    sq = golden_minimize([&](double b) { return ratio_of(sp, b); }, lo_q, hi_q, 40);
  }

  const Point p = chart.at(sp);
  const Point q = chart.at(sq);
  rep.s_p = sp;
  rep.s_q = sq;
  rep.chord = geodesic_distance(srf, p, q);
  rep.arc = sq - sp;
  rep.ratio = rep.chord / rep.arc;

  const Vec3 w_p = (1.0 / rep.chord) * log_map(srf, p, q).vec;
  const Vec3 w_q = (-1.0 / rep.chord) * log_map(srf, q, p).vec;
  const Vec3 t_p = chart.unit_tangent(sp);
  const Vec3 t_q = chart.unit_tangent(sq);
  rep.wt_p = ambient_dot(srf, w_p, t_p);
  rep.wt_q = ambient_dot(srf, w_q, t_q);

  const Vec3 v_p = rotate90(srf, p, w_p);
  const Vec3 v_q = rotate90(srf, q, w_q);
  const double tv_p = ambient_dot(srf, t_p, v_p);
  const double tv_q = ambient_dot(srf, t_q, v_q);
  rep.epsilon = (tv_p * tv_q >= 0.0) ? 1 : -1;

  const Vec3 n_p = rotate90(srf, p, t_p);
  const Vec3 n_q = rotate90(srf, q, t_q);
  const double kw_p = chart.curvature(sp) * ambient_dot(srf, n_p, w_p);
  const double kw_q = chart.curvature(sq) * ambient_dot(srf, n_q, w_q);
  rep.curvature_pairing_gap = kw_q - kw_p;

  const ScaleProfile prof = scale_profile(srf, 0.5 * rep.chord);
  const double coeff = prof.value / (2.0 * prof.derivative);
  const double mismatch = rep.epsilon * tv_q - tv_p;
  rep.analytic_second_variation = rep.curvature_pairing_gap - coeff * mismatch * mismatch;

  const double h = spacing;
  const auto chord_at = [&](double a) {
    return geodesic_distance(srf, chart.at(sp + a), chart.at(sq + rep.epsilon * a));
  };
  rep.fd_second_variation = (chord_at(h) - 2.0 * chord_at(0.0) + chord_at(-h)) / (h * h);
  return rep;
}

DecayFit decay_fit(const std::vector<DiagnosticRecord>& records) {
  std::size_t positive = 0;
  for (const DiagnosticRecord& r : records)
    if (r.kappa_sq_integral > 0.0) ++positive;
  if (positive < 20) throw std::invalid_argument("decay fit undefined");

  const double t_mid = 0.5 * (records.front().t + records.back().t);
  std::vector<double> t, logy;
  for (const DiagnosticRecord& r : records) {
    if (r.t < t_mid) continue;
    if (r.kappa_sq_integral <= 0.0) throw std::invalid_argument("decay fit undefined");
    t.push_back(r.t);
    logy.push_back(std::log(r.kappa_sq_integral));
  }
  if (t.size() < 2) throw std::invalid_argument("decay fit undefined");
  const LineFit fit = fit_line(t, logy);
  DecayFit out;
  out.delta = -fit.slope;
  out.prefactor = std::exp(fit.intercept);
  out.r_squared = fit.r_squared;
  return out;
}

}  // namespace geoflow
