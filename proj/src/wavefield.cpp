#include "pointspec/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pointspec/parallel.hpp"
#include "pointspec/specfun.hpp"

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

double min_center_distance(const ManifoldSpec& m, const CenterSet& cs,
                           const Point& x) {
  double dmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cs.size(); ++i)
    dmin = std::min(dmin, geodesic_distance(m, cs[i].point, x));
  return dmin;
}

// Frechet-style centroid: arithmetic on flat, normalized embedded mean on
// the sphere and the hyperboloid.
Point centroid(const ManifoldSpec& m, const CenterSet& cs) {
  const int n = cs.size();
  if (n == 1) return cs[0].point;
  switch (m.geometry()) {
    case Geometry::FlatEuclidean: {
      Point p = cs[0].point;
      for (int c = 0; c < m.dim(); ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += cs[i].point[c];
        p[c] = s / n;
      }
      return p;
    }
    case Geometry::Sphere2: {
      double v[3] = {0, 0, 0};
      for (int i = 0; i < n; ++i) {
        const Point& p = cs[i].point;
        v[0] += std::sin(p[0]) * std::cos(p[1]);
        v[1] += std::sin(p[0]) * std::sin(p[1]);
        v[2] += std::cos(p[0]);
      }
      const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (norm < 1e-9) return cs[0].point;  // antipodal degenerate mean
      double z = v[2] / norm;
      z = std::clamp(z, -1.0, 1.0);
      double phi = std::atan2(v[1], v[0]);
      if (phi < 0.0) phi += 2.0 * kPi;
      if (phi >= 2.0 * kPi) phi = 0.0;
      return Point::sphere(std::acos(z), phi);
    }
    case Geometry::Hyperbolic: {
      // mean in the hyperboloid model, renormalized to the sheet
      const int h = m.dim() - 1;
      std::array<double, 4> X{};
      for (int i = 0; i < n; ++i) {
        const Point& p = cs[i].point;
        double xx = 0.0;
        for (int c = 0; c < h; ++c) xx += p[c] * p[c];
        const double y = p[h];
        X[0] += (xx + y * y + 1.0) / (2.0 * y);
        X[1] += (xx + y * y - 1.0) / (2.0 * y);
        for (int c = 0; c < h; ++c) X[2 + c] += p[c] / y;
      }
      double q = X[0] * X[0] - X[1] * X[1];
      for (int c = 0; c < h; ++c) q -= X[2 + c] * X[2 + c];
      const double norm = std::sqrt(q);
      for (auto& c : X) c /= norm;
      const double y = 1.0 / (X[0] - X[1]);
      if (m.dim() == 2) return Point::half_plane(X[2] * y, y);
      return Point::half_space(X[2] * y, X[3] * y, y);
    }
  }
  return cs[0].point;
}

// quintic smoothstep: 0 below u = 1/2, 1 above u = 1, C^2 in between
double cutoff_s(double u) {
  if (u <= 0.5) return 0.0;
  if (u >= 1.0) return 1.0;
  const double w = (u - 0.5) / 0.5;
  return w * w * w * (10.0 + w * (-15.0 + 6.0 * w));
}

std::vector<std::pair<double, double>> gauss8(double a, double b) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290,
                              0.7966664774136267, 0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};
  std::vector<std::pair<double, double>> nw;
  nw.reserve(8);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 3; i >= 0; --i) nw.push_back({c - h * x[i], h * w[i]});
  for (int i = 0; i < 4; ++i) nw.push_back({c + h * x[i], h * w[i]});
  return nw;
}

std::vector<std::pair<double, double>> radial_nodes(double a, double b,
                                                    double target_h) {
  const int panels = std::max(2, static_cast<int>(std::ceil((b - a) / target_h)));
  std::vector<std::pair<double, double>> nw;
  nw.reserve(static_cast<std::size_t>(panels) * 8);
  for (int p = 0; p < panels; ++p) {
    auto sub = gauss8(a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels);
    nw.insert(nw.end(), sub.begin(), sub.end());
  }
  return nw;
}

// Gauss-Legendre nodes on [-1, 1] (cos alpha for D = 3 charts)
std::vector<std::pair<double, double>> gauss_n(int n) {
  std::vector<std::pair<double, double>> nw(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= n; ++l) {
      const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nw[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return nw;
}

}  // namespace

// ---------------------------------------------------------------------------
// psi evaluation
// ---------------------------------------------------------------------------

double evaluate_psi(const ManifoldSpec& m, const CenterSet& cs,
                    const BoundState& bs, const Point& x,
                    const QuadratureConfig& quad) {
  if (!(bs.norm_factor > 0.0))
    throw std::invalid_argument("evaluate_psi: state has no norm factor");
  const double alpha = 1.0 / std::sqrt(bs.norm_factor);
  double s = 0.0;
  for (int i = 0; i < cs.size(); ++i) {
    const double d = geodesic_distance(m, cs[i].point, x);
    if (d < 1e-12)
      throw std::domain_error("evaluate_psi: point coincides with a center");
    s += bs.amplitudes[i] * free_resolvent_radial(m, d, bs.nu, quad);
  }
  return alpha * s;
}

RadialResolventTable::RadialResolventTable(const ManifoldSpec& m, double nu,
                                           double d_max,
                                           const QuadratureConfig& quad) {
  d_lo_ = 1e-7;
  d_hi_ = std::min(d_max, m.max_distance());
  s_lo_ = std::log(d_lo_);
  s_hi_ = std::log(d_hi_);
  panel_width_ = 0.3;
  n_panels_ = std::max(2, static_cast<int>(std::ceil((s_hi_ - s_lo_) / panel_width_)));
  panel_width_ = (s_hi_ - s_lo_) / n_panels_;
  values_.assign(n_panels_, std::vector<double>(12));
  parallel_for(static_cast<std::size_t>(n_panels_), [&](std::size_t p) {
    for (int j = 0; j < 12; ++j) {
      const double xj = std::cos(kPi * j / 11.0);  // Chebyshev-Lobatto
      const double s = s_lo_ + panel_width_ * (p + 0.5 * (1.0 - xj));
      values_[p][j] = free_resolvent_radial(m, std::exp(s), nu, quad);
    }
  });
}

double RadialResolventTable::operator()(double d) const {
  const double dc = std::clamp(d, d_lo_, d_hi_);
  const double s = std::log(dc);
  int p = static_cast<int>((s - s_lo_) / panel_width_);
  p = std::clamp(p, 0, n_panels_ - 1);
  // barycentric interpolation on Chebyshev-Lobatto nodes
  const double x = 1.0 - 2.0 * (s - (s_lo_ + panel_width_ * p)) / panel_width_;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < 12; ++j) {
    const double xj = std::cos(kPi * j / 11.0);
    if (std::abs(x - xj) < 1e-14) return values_[p][j];
    double w = (j % 2 == 0 ? 1.0 : -1.0);
    if (j == 0 || j == 11) w *= 0.5;
    const double r = w / (x - xj);
    num += r * values_[p][j];
    den += r;
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

WaveField sample_rays(const ManifoldSpec& m, const CenterSet& cs,
                      const BoundState& bs, int n_dirs, int n_radii,
                      double r_max, const QuadratureConfig& quad) {
  WaveField out;
  out.state = bs;
  out.grid_descriptor = "rays(centroid, dirs=" + std::to_string(n_dirs) +
                        ", radii=" + std::to_string(n_radii) + ")";
  const Point c = centroid(m, cs);
  const GeodesicChart chart(m, c);
  const double cap = 0.98 * m.max_distance();
  const double rmax = std::min(r_max, cap);
  const double alpha = 1.0 / std::sqrt(bs.norm_factor);
  double spread = 0.0;
  for (int i = 0; i < cs.size(); ++i)
    spread = std::max(spread, geodesic_distance(m, c, cs[i].point));
  const RadialResolventTable table(m, bs.nu, rmax + spread + 1.0, quad);

  for (int k = 0; k < n_dirs; ++k) {
    for (int j = 1; j <= n_radii; ++j) {
      const double r = rmax * j / n_radii;
      Point x = m.dim() == 2
                    ? chart.at(r, 2.0 * kPi * k / n_dirs)
                    : chart.at(r, kPi * (k + 0.5) / n_dirs,
                               2.0 * kPi * ((k * 7) % n_dirs) / n_dirs);
      const double dmin = min_center_distance(m, cs, x);
      if (dmin < 1e-9) continue;
      double psi = 0.0;
      for (int i = 0; i < cs.size(); ++i)
        psi += bs.amplitudes[i] *
               table(geodesic_distance(m, cs[i].point, x));
      out.samples.push_back({x, dmin, alpha * psi});
    }
  }
  return out;
}

NormResult l2_norm(const ManifoldSpec& m, const CenterSet& cs,
                   const BoundState& bs, const QuadratureConfig& quad,
                   int resolution) {
  const int n = cs.size();
  const double nu = bs.nu;
  const double alpha2 = 1.0 / bs.norm_factor;

  // excision radii: disjoint caps, comfortably inside a decay length
  std::vector<double> rho(n);
  for (int i = 0; i < n; ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (j != i) dmin = std::min(dmin, cs.distance(i, j));
    double r = std::min(0.5 / nu, 0.45 * dmin);
    if (m.compact()) r = std::min(r, m.max_distance() / 6.0);
    rho[i] = r;
  }

  const Point c = centroid(m, cs);
  double spread = 0.0;
  for (int i = 0; i < n; ++i)
    spread = std::max(spread, geodesic_distance(m, c, cs[i].point));
  const double r_far =
      std::min(spread + 22.0 / nu, 0.999999 * m.max_distance());

  const RadialResolventTable table(m, nu, r_far + spread + 1.0, quad);
  const auto psi_at = [&](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += bs.amplitudes[i] * table(geodesic_distance(m, cs[i].point, x));
    return s;  // psi / alpha
  };
  const auto far_weight = [&](const Point& x) {
    double w = 1.0;
    for (int i = 0; i < n; ++i)
      w *= cutoff_s(geodesic_distance(m, cs[i].point, x) / rho[i]);
    return w;
  };

  const auto integrate_at = [&](int res) {
    const double hr = 0.35 / nu / res;
    const int nphi = 48 * res;
    const int nalpha = 24 * res;
    const auto ca_nodes = gauss_n(nalpha);

    // angular average of f over the geodesic sphere of radius r about chart
    const auto shell_mean = [&](const GeodesicChart& chart, double r,
                                const auto& f) {
      double s = 0.0;
      if (m.dim() == 2) {
        for (int k = 0; k < nphi; ++k)
          s += f(chart.at(r, 2.0 * kPi * k / nphi));
        return s / nphi;
      }
      for (const auto& [calpha, w] : ca_nodes) {
        const double a = std::acos(std::clamp(calpha, -1.0, 1.0));
        double ring = 0.0;
        for (int k = 0; k < nphi; ++k)
          ring += f(chart.at(r, a, 2.0 * kPi * k / nphi));
        s += w * ring / nphi;
      }
      return s / 2.0;  // weights sum to 2
    };

    double total = 0.0;
    // far region about the centroid
    {
      const GeodesicChart chart(m, c);
      const auto nodes = radial_nodes(0.0, r_far, hr);
      std::vector<double> slice(nodes.size());
      parallel_for(nodes.size(), [&](std::size_t k) {
        const double r = nodes[k].first;
        const double mean = shell_mean(chart, r, [&](const Point& x) {
          const double w = far_weight(x);
          if (w == 0.0) return 0.0;
          const double p = psi_at(x);
          return w * p * p;
        });
        slice[k] = nodes[k].second * chart.sphere_area(r) * mean;
      });
      for (double v : slice) total += v;
    }
    // excision caps
    for (int i = 0; i < n; ++i) {
      const GeodesicChart chart(m, cs[i].point);
      const auto nodes = radial_nodes(0.0, rho[i], rho[i] / (10.0 * res));
      std::vector<double> slice(nodes.size());
      parallel_for(nodes.size(), [&](std::size_t k) {
        const double r = nodes[k].first;
        const double mean = shell_mean(chart, r, [&](const Point& x) {
          const double w = 1.0 - far_weight(x);
          if (w == 0.0) return 0.0;
          const double p = psi_at(x);
          return w * p * p;
        });
        slice[k] = nodes[k].second * chart.sphere_area(r) * mean;
      });
      for (double v : slice) total += v;
    }
    return std::sqrt(alpha2 * total);
  };

  NormResult out;
  out.coarse = integrate_at(std::max(1, resolution));
  out.value = integrate_at(std::max(1, resolution) + 1);
  out.under_resolved = std::abs(out.value - out.coarse) > 1e-2;
  return out;
}

double decay_rate_fit(const ManifoldSpec& m, const CenterSet& cs,
                      const BoundState& bs, const QuadratureConfig& quad) {
  const double nu = bs.nu;
  const double lo = 2.0 / nu, hi = 8.0 / nu;
  if (hi >= 0.98 * m.max_distance())
    throw std::domain_error(
        "decay_rate_fit: insufficient range (manifold too small for the "
        "[2/nu, 8/nu] window)");
  // ray from the dominant center, pointing away from the others
  int i0 = 0;
  for (int i = 1; i < cs.size(); ++i)
    if (std::abs(bs.amplitudes[i]) > std::abs(bs.amplitudes[i0])) i0 = i;
  const GeodesicChart chart(m, cs[i0].point);
  double best_a = 0.0, best_score = -1.0;
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * kPi * k / 8.0;
    const Point probe = m.dim() == 2 ? chart.at(hi, a) : chart.at(hi, a, 1.2);
    double score = std::numeric_limits<double>::infinity();
    for (int j = 0; j < cs.size(); ++j)
      if (j != i0)
        score = std::min(score, geodesic_distance(m, cs[j].point, probe));
    if (cs.size() == 1) score = 1.0;
    if (score > best_score) {
      best_score = score;
      best_a = a;
    }
  }

  // weights from the exact single-center resolvent shape, so the fitted
  // slope is the bare exponential rate
  const double kappa = m.scale();
  const auto weight = [&](double d) {
    switch (m.geometry()) {
      case Geometry::FlatEuclidean:
        return m.dim() == 3 ? d : std::sqrt(d);
      case Geometry::Hyperbolic:
        return m.dim() == 3 ? std::sinh(kappa * d) / kappa
                            : std::sqrt(std::sinh(kappa * d) / kappa);
      case Geometry::Sphere2:
        return 1.0;
    }
    return 1.0;
  };

  const int npts = 25;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int j = 0; j < npts; ++j) {
    const double r = lo + (hi - lo) * j / (npts - 1.0);
    const Point x = m.dim() == 2 ? chart.at(r, best_a) : chart.at(r, best_a, 1.2);
    const double psi = evaluate_psi(m, cs, bs, x, quad);
    const double d = geodesic_distance(m, cs[i0].point, x);
    const double y = -std::log(weight(d) * std::abs(psi));
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
  }
  return (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
}

PointwiseBoundReport pointwise_bound_check(const ManifoldSpec& m,
                                           const CenterSet& cs,
                                           const WaveField& field,
                                           const BoundConstants& c) {
  c.check();
  const double nu = field.state.nu;
  const double alpha = 1.0 / std::sqrt(field.state.norm_factor);
  const int dim = m.dim();
  const bool compact = m.compact();
  const double vol = compact ? m.volume() : 0.0;

  // per-center envelope of int_0^inf e^{-t nu^2} K_bound(t, d) dt
  const auto env1 = [&](double d) {
    const double z = nu * d / std::sqrt(2.0 * c.c2);
    const double sq = d / std::sqrt(2.0 * c.c2);  // sqrt(q), q = d^2/(2 C2)
    using specfun::bessel_bound;
    using specfun::BesselBoundKind;
    if (compact) {
      const double t1 = (8.0 * c.regularity_a / vol) * (sq / nu) *
                        bessel_bound(BesselBoundKind::k1, 2.0 * z);
      if (dim == 2)
        return t1 + 8.0 * c.regularity_a * c.b_eps *
                        bessel_bound(BesselBoundKind::k0_sharp, 2.0 * z);
      return t1 + 8.0 * c.regularity_a * c.b_eps * std::sqrt(kPi) *
                      std::exp(-2.0 * z) / (2.0 * sq);
    }
    if (dim == 2)
      return (c.c_ch / (2.0 * kPi)) *
             bessel_bound(BesselBoundKind::k0_sharp, 2.0 * z);
    return c.c_ch * std::sqrt(2.0 * c.c2) * std::exp(-2.0 * z) /
           (8.0 * kPi * d);
  };

  PointwiseBoundReport rep;
  rep.pass = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const WaveSample& s : field.samples) {
    if (s.d_min < 1e-6) continue;
    double env = 0.0;
    for (int i = 0; i < cs.size(); ++i)
      env += env1(geodesic_distance(m, cs[i].point, s.point));
    env *= alpha;
    ++rep.checked;
    if (env <= 0.0 || !std::isfinite(env)) continue;
    const double margin = (env - std::abs(s.psi)) / env;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (std::abs(s.psi) > env * (1.0 + 1e-12)) rep.pass = false;
  }
  return rep;
}

double h0_expectation_cutoff(const ManifoldSpec& m, const CenterSet& cs,
                             const BoundState& bs, double epsilon_cutoff,
                             const QuadratureConfig& quad) {
  if (!(epsilon_cutoff > 0.0))
    throw std::domain_error("h0_expectation_cutoff: requires epsilon > 0");
  const double nu = bs.nu;
  const TimeWeight w = weight_exp(nu);
  double t1 = 0.0;
  for (int i = 0; i < cs.size(); ++i)
    for (int j = 0; j < cs.size(); ++j) {
      const double d = i == j ? -1.0 : cs.distance(i, j);
      t1 += bs.amplitudes[i] * bs.amplitudes[j] *
            kernel_time_integral(m, d, w, quad, epsilon_cutoff);
    }
  return t1 / bs.norm_factor - nu * nu;
}

}  // namespace pointspec
