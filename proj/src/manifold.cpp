#include "pointspec/manifold.hpp"

#include <cmath>
#include <limits>

#include "pointspec/specfun.hpp"

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double sqr(double x) { return x * x; }

// s / sinh(s), stable for all s >= 0.
double sinh_ratio(double s) {
  if (s < 1e-8) return 1.0 - s * s / 6.0;
  if (s < 350.0) return s / std::sinh(s);
  return 2.0 * s * std::exp(-s);
}

// ---------------------------------------------------------------------------
// Sphere kernel: Legendre series for t/R^2 >= 1e-5, Gaussian short-time form
// below (the series would need ~R/sqrt(t) terms there).
// ---------------------------------------------------------------------------

constexpr double kSphereSeriesSwitch = 1e-5;

int sphere_lmax(double tau) {
  const int l = static_cast<int>(std::ceil(std::sqrt(46.0 / tau))) + 10;
  return l < 6000 ? l : 6000;
}

double sphere_asym(double tau, double theta) {
  const double ex = theta * theta / (4.0 * tau);
  if (ex > 745.0) return 0.0;
  const double w = theta < 1e-12 ? 1.0 : theta / std::sin(theta);
  // first heat-equation correction a1 = (1 - theta cot theta) / (4 theta^2)
  const double a1 = theta < 1e-4
                        ? 1.0 / 12.0 + theta * theta / 180.0
                        : (1.0 - theta * std::cos(theta) / std::sin(theta)) /
                              (4.0 * theta * theta);
  return std::sqrt(w) * (1.0 + tau * a1) * std::exp(0.25 * tau - ex) /
         (4.0 * kPi * tau);
}

// sum_{l >= lmin} (2l+1) e^{-l(l+1) tau} P_l(cos theta); extended-precision
// accumulation, multiplicative update of the exponentials. `cancelled` is
// set when the alternating sum sits below its own roundoff floor.
double sphere_series(double tau, double ctheta, int lmin, bool& cancelled) {
  const int lmax = sphere_lmax(tau);
  const long double x = ctheta;
  const long double r = std::exp(static_cast<long double>(-2.0L * tau));
  long double rho = 1.0L;  // e^{-2 l tau}
  long double e = 1.0L;    // e^{-l(l+1) tau}
  long double pm1 = 0.0L, pl = 1.0L;  // P_{l-1}, P_l
  long double sum = 0.0L, maxterm = 0.0L;
  for (int l = 0; l <= lmax; ++l) {
    if (l >= 1) {
      const long double pnext =
          ((2.0L * l - 1.0L) * x * pl - (l - 1.0L) * pm1) / l;
      pm1 = pl;
      pl = pnext;
      rho *= r;
      e *= rho;  // e^{-l(l+1)tau} = e^{-(l-1)l tau} * e^{-2 l tau}
    }
    if (l >= lmin) {
      const long double term = (2.0L * l + 1.0L) * e * pl;
      sum += term;
      const long double a = term < 0.0L ? -term : term;
      if (a > maxterm) maxterm = a;
    }
  }
  const long double mag = sum < 0.0L ? -sum : sum;
  cancelled = mag < maxterm * 1e-14L;
  return static_cast<double>(sum);
}

double sphere_kernel(double radius, double t, double theta) {
  const double tau = t / (radius * radius);
  const double inv_vol = 1.0 / (4.0 * kPi * radius * radius);
  if (tau < kSphereSeriesSwitch)
    return sphere_asym(tau, theta) / (radius * radius);
  bool cancelled = false;
  const double s = sphere_series(tau, std::cos(theta), 0, cancelled);
  if (cancelled || s < 0.0)
    return sphere_asym(tau, theta) / (radius * radius);
  return s * inv_vol;
}

// sum tau Theta(tau) = tau sum (2l+1) e^{-l(l+1)tau}; Mulholland expansion
// below the series switch.
double sphere_tau_theta(double tau) {
  if (tau < 1e-4)
    return 1.0 + tau / 3.0 + tau * tau / 15.0 +
           4.0 * tau * tau * tau / 315.0;
  bool cancelled = false;
  return tau * sphere_series(tau, 1.0, 0, cancelled);
}

// ---------------------------------------------------------------------------
// Hyperbolic plane, curvature -1: McKean integral with the s = d + w^2
// substitution; diagonal via a regular 1-D integral with a short-time series.
// ---------------------------------------------------------------------------

// S(t) with K_diag = (4 pi t)^{-1} e^{-t/4} S(t); series valid t <= 0.1.
double h2_diag_series_s(double t) {
  return 1.0 - t / 12.0 + 7.0 * t * t / 480.0 -
         31.0 * t * t * t / 8064.0 + 0.00137803819444 * t * t * t * t;
}

double h2_diag_unit(double t) {
  if (t <= 0.1)
    return std::exp(-0.25 * t) * h2_diag_series_s(t) / (4.0 * kPi * t);
  const double qmax = std::min(std::sqrt(760.0 * t) + 5.0, 740.0);
  const auto f = [&](double q) {
    return sinh_ratio(q) * std::exp(-q * q / t);
  };
  QuadResult r = integrate_adaptive(f, 0.0, qmax, 1e-12, 1e-305, 120);
  return 4.0 * std::pow(4.0 * kPi * t, -1.5) * std::exp(-0.25 * t) * r.value;
}

double h2_radial_unit(double t, double d) {
  if (d < 1e-12) return h2_diag_unit(t);
  const double x2 = std::sqrt(d * d + 3100.0 * t);
  const double wmax = std::sqrt(std::min(x2 - d, 1530.0)) + 2.0;
  const auto f = [&](double w) {
    const double a = 0.5 * w * w;
    const double s = a < 1e-8 ? 1.0 + a * a / 6.0 : std::sinh(a) / a;
    const double da = d + a;
    const double one_m = -std::expm1(-2.0 * da);
    const double expo = -sqr(d + w * w) / (4.0 * t) - 0.5 * da;
    return 2.0 * (d + w * w) * std::exp(expo) / std::sqrt(0.5 * s * one_m);
  };
  QuadResult r = integrate_adaptive(f, 0.0, wmax, 1e-11, 1e-305, 120);
  return std::sqrt(2.0) * std::pow(4.0 * kPi * t, -1.5) *
         std::exp(-0.25 * t) * r.value;
}

}  // namespace

// ---------------------------------------------------------------------------
// ManifoldSpec
// ---------------------------------------------------------------------------

ManifoldSpec ManifoldSpec::flat(int dim) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("ManifoldSpec::flat: dim must be 2 or 3");
  return ManifoldSpec(Geometry::FlatEuclidean, dim, 1.0);
}

ManifoldSpec ManifoldSpec::sphere2(double radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("ManifoldSpec::sphere2: radius must be > 0");
  return ManifoldSpec(Geometry::Sphere2, 2, radius);
}

ManifoldSpec ManifoldSpec::hyperbolic(int dim, double curvature_scale) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("ManifoldSpec::hyperbolic: dim must be 2 or 3");
  if (!(curvature_scale > 0.0))
    throw std::invalid_argument("ManifoldSpec::hyperbolic: kappa must be > 0");
  return ManifoldSpec(Geometry::Hyperbolic, dim, curvature_scale);
}

double ManifoldSpec::volume() const {
  if (geo_ != Geometry::Sphere2)
    throw std::domain_error("volume: defined only for Sphere2");
  return 4.0 * kPi * scale_ * scale_;
}

double ManifoldSpec::spectral_bottom() const {
  if (geo_ != Geometry::Hyperbolic) return 0.0;
  const double k = scale_;
  return 0.25 * (dim_ - 1.0) * (dim_ - 1.0) * k * k;
}

double ManifoldSpec::equilibrium_density() const {
  return compact() ? 1.0 / volume() : 0.0;
}

double ManifoldSpec::spectral_gap() const {
  if (geo_ == Geometry::Sphere2) return 2.0 / (scale_ * scale_);
  return 0.0;
}

double ManifoldSpec::max_distance() const {
  if (geo_ == Geometry::Sphere2) return kPi * scale_;
  return std::numeric_limits<double>::infinity();
}

void ManifoldSpec::validate(const Point& p) const {
  if (p.size() != dim_)
    throw std::invalid_argument("point dimension does not match manifold");
  for (int i = 0; i < p.size(); ++i)
    if (!std::isfinite(p[i]))
      throw std::invalid_argument("point has non-finite coordinate");
  switch (geo_) {
    case Geometry::FlatEuclidean:
      break;
    case Geometry::Sphere2:
      if (p[0] < 0.0 || p[0] > kPi)
        throw std::invalid_argument("sphere point: theta not in [0, pi]");
      if (p[1] < 0.0 || p[1] >= kTwoPi)
        throw std::invalid_argument("sphere point: phi not in [0, 2 pi)");
      break;
    case Geometry::Hyperbolic:
      if (!(p[dim_ - 1] > 0.0))
        throw std::invalid_argument("hyperbolic point: height must be > 0");
      break;
  }
}

std::string ManifoldSpec::describe() const {
  switch (geo_) {
    case Geometry::FlatEuclidean:
      return dim_ == 2 ? "flat2" : "flat3";
    case Geometry::Sphere2:
      return "sphere2(R=" + std::to_string(scale_) + ")";
    case Geometry::Hyperbolic:
      return (dim_ == 2 ? "h2(kappa=" : "h3(kappa=") + std::to_string(scale_) +
             ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

double geodesic_distance(const ManifoldSpec& m, const Point& x,
                         const Point& y) {
  m.validate(x);
  m.validate(y);
  switch (m.geometry()) {
    case Geometry::FlatEuclidean: {
      double s = 0.0;
      for (int i = 0; i < m.dim(); ++i) s += sqr(x[i] - y[i]);
      return std::sqrt(s);
    }
    case Geometry::Sphere2: {
      const double st1 = std::sin(x[0]), ct1 = std::cos(x[0]);
      const double st2 = std::sin(y[0]), ct2 = std::cos(y[0]);
      const double u[3] = {st1 * std::cos(x[1]), st1 * std::sin(x[1]), ct1};
      const double v[3] = {st2 * std::cos(y[1]), st2 * std::sin(y[1]), ct2};
      const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
      const double cx = u[1] * v[2] - u[2] * v[1];
      const double cy = u[2] * v[0] - u[0] * v[2];
      const double cz = u[0] * v[1] - u[1] * v[0];
      const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
      return m.scale() * std::atan2(cross, dot);
    }
    case Geometry::Hyperbolic: {
      const int h = m.dim() - 1;  // height coordinate index
      double dxy = 0.0;
      for (int i = 0; i < m.dim(); ++i) dxy += sqr(x[i] - y[i]);
      const double arg = std::sqrt(dxy / (4.0 * x[h] * y[h]));
      return 2.0 * std::asinh(arg) / m.scale();
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Heat kernels
// ---------------------------------------------------------------------------

double heat_kernel_diag(const ManifoldSpec& m, double t) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: requires t > 0");
  const double k = m.scale();
  switch (m.geometry()) {
    case Geometry::FlatEuclidean:
      return std::pow(4.0 * kPi * t, -0.5 * m.dim());
    case Geometry::Sphere2:
      return sphere_tau_theta(t / (k * k)) / (4.0 * kPi * t);
    case Geometry::Hyperbolic:
      if (m.dim() == 3)
        return std::pow(4.0 * kPi * t, -1.5) * std::exp(-k * k * t);
      return k * k * h2_diag_unit(k * k * t);
  }
  return 0.0;
}

double heat_kernel_radial(const ManifoldSpec& m, double t, double d) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: requires t > 0");
  if (d < 0.0) throw std::domain_error("heat_kernel: requires d >= 0");
  const double k = m.scale();
  switch (m.geometry()) {
    case Geometry::FlatEuclidean: {
      const double ex = d * d / (4.0 * t);
      return ex > 745.0 ? 0.0
                        : std::pow(4.0 * kPi * t, -0.5 * m.dim()) *
                              std::exp(-ex);
    }
    case Geometry::Sphere2: {
      double theta = d / k;
      if (theta > kPi) theta = kPi;  // guard roundoff past the antipode
      return sphere_kernel(k, t, theta);
    }
    case Geometry::Hyperbolic: {
      if (m.dim() == 3) {
        const double s = k * d;
        const double pref =
            s < 1e-300 ? 1.0 : 2.0 * s / (-std::expm1(-2.0 * s));
        const double expo = -k * k * t - d * d / (4.0 * t) - s;
        return expo < -745.0
                   ? 0.0
                   : std::pow(4.0 * kPi * t, -1.5) * pref * std::exp(expo);
      }
      return k * k * h2_radial_unit(k * k * t, k * d);
    }
  }
  return 0.0;
}

double heat_kernel(const ManifoldSpec& m, double t, const Point& x,
                   const Point& y) {
  return heat_kernel_radial(m, t, geodesic_distance(m, x, y));
}

double heat_kernel_radial_fluctuation(const ManifoldSpec& m, double t,
                                      double d) {
  if (!m.compact()) return heat_kernel_radial(m, t, d);
  const double R = m.scale();
  const double tau = t / (R * R);
  double theta = d < 0.0 ? 0.0 : d / R;
  if (theta > kPi) theta = kPi;
  const double inv_vol = m.equilibrium_density();
  if (tau < kSphereSeriesSwitch)
    return sphere_asym(tau, theta) / (R * R) - inv_vol;
  bool cancelled = false;
  const double s = sphere_series(tau, std::cos(theta), 1, cancelled);
  if (cancelled)
    return sphere_asym(tau, theta) / (R * R) - inv_vol;
  return s * inv_vol;
}

double heat_kernel_diag_minus_flat(const ManifoldSpec& m, double t) {
  const double k = m.scale();
  switch (m.geometry()) {
    case Geometry::FlatEuclidean:
      return 0.0;
    case Geometry::Sphere2: {
      const double tau = t / (k * k);
      if (tau < 1e-4)  // Mulholland terms without the cancelling 1
        return (tau / 3.0 + tau * tau / 15.0 +
                4.0 * tau * tau * tau / 315.0) /
               (4.0 * kPi * t);
      return (sphere_tau_theta(tau) - 1.0) / (4.0 * kPi * t);
    }
    case Geometry::Hyperbolic: {
      if (m.dim() == 3)
        return std::pow(4.0 * kPi * t, -1.5) * std::expm1(-k * k * t);
      const double tt = k * k * t;  // curvature -1 time
      if (tt <= 0.1) {
        const double s = h2_diag_series_s(tt);
        const double v = std::expm1(-0.25 * tt) * s + (s - 1.0);
        return k * k * v / (4.0 * kPi * tt);
      }
      return k * k * (h2_diag_unit(tt) - 1.0 / (4.0 * kPi * tt));
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Time integrals and the free resolvent
// ---------------------------------------------------------------------------

TimeWeight weight_exp(double nu) {
  const double b = nu * nu;
  return {[b](double t) { return std::exp(-b * t); },
          [b](double T) { return std::exp(-b * T) / b; }, b};
}

TimeWeight weight_exp_diff(double mu, double nu) {
  const double a = mu * mu, b = nu * nu;
  // e^{-a t} - e^{-b t}, factored through the slower exponential so the
  // other side never overflows inside expm1
  return {[a, b](double t) {
            return a <= b ? -std::exp(-a * t) * std::expm1(-(b - a) * t)
                          : std::exp(-b * t) * std::expm1(-(a - b) * t);
          },
          [a, b](double T) {
            return std::exp(-a * T) / a - std::exp(-b * T) / b;
          },
          std::min(a, b)};
}

TimeWeight weight_t_exp(double nu) {
  const double b = nu * nu;
  return {[b](double t) { return t * std::exp(-b * t); },
          [b](double T) { return std::exp(-b * T) * (T / b + 1.0 / (b * b)); },
          b};
}

TimeWeight weight_two_nu_t_exp(double nu) {
  const double b = nu * nu;
  return {[b, nu](double t) { return 2.0 * nu * t * std::exp(-b * t); },
          [b, nu](double T) {
            return 2.0 * nu * std::exp(-b * T) * (T / b + 1.0 / (b * b));
          },
          b};
}

double kernel_time_integral(const ManifoldSpec& m, double d,
                            const TimeWeight& weight,
                            const QuadratureConfig& quad, double lo) {
  const bool diag = d < 0.0;
  const auto kernel = [&](double t) {
    return diag ? heat_kernel_diag(m, t) : heat_kernel_radial(m, t, d);
  };
  if (!m.compact()) {
    const double rate = weight.decay_rate + m.spectral_bottom();
    const auto f = [&](double t) { return kernel(t) * weight.w(t); };
    return integrate_time_0_inf(f, lo, rate, quad);
  }
  const double split = std::max(quad.split_time, 2.0 * lo);
  double acc = 0.0;
  if (lo < split) {
    const auto f = [&](double t) { return kernel(t) * weight.w(t); };
    acc += integrate_usub(f, lo, split, 0.1 * quad.rel_tol,
                          quad.max_subdivisions)
               .value;
  }
  const auto g = [&](double t) {
    return heat_kernel_radial_fluctuation(m, t, diag ? -1.0 : d) *
           weight.w(t);
  };
  const double rate = weight.decay_rate + m.spectral_gap();
  acc += integrate_octave_tail(g, std::max(split, lo), rate, quad,
                               std::abs(acc))
             .value;
  acc += m.equilibrium_density() * weight.tail(std::max(split, lo));
  return acc;
}

double free_resolvent_radial(const ManifoldSpec& m, double d, double nu,
                             const QuadratureConfig& quad) {
  if (!(nu > 0.0))
    throw std::domain_error("free_resolvent: requires E < 0");
  if (d < 1e-12)
    throw std::domain_error(
        "free_resolvent: diagonal diverges for D >= 2 (x == y)");
  // Deliberately a different panel layout from kernel_time_integral: one
  // u-substituted pass over [0, T] so the resolvent-difference identity
  // compares two independent discretizations.
  const double rate = nu * nu + m.spectral_bottom();
  const double gap = m.spectral_gap();
  double T = 45.0 / rate;
  if (m.compact()) T = std::max(T, 45.0 / (gap + nu * nu));
  const auto f = [&](double t) {
    const double k = m.compact() ? heat_kernel_radial_fluctuation(m, t, d)
                                 : heat_kernel_radial(m, t, d);
    return k * std::exp(-nu * nu * t);
  };
  QuadResult r = integrate_usub(f, 0.0, T, 0.05 * quad.rel_tol, 300, 12);
  double value = r.value;
  if (m.compact())
    value += m.equilibrium_density() *
             (1.0 - std::exp(-nu * nu * T)) / (nu * nu);
  // exponential remainder beyond T is below tail_tol by construction
  return value;
}

double free_resolvent(const ManifoldSpec& m, const Point& x, const Point& y,
                      double E, const QuadratureConfig& quad) {
  if (!(E < 0.0)) throw std::domain_error("free_resolvent: requires E < 0");
  return free_resolvent_radial(m, geodesic_distance(m, x, y), std::sqrt(-E),
                               quad);
}

// ---------------------------------------------------------------------------
// Bound envelopes
// ---------------------------------------------------------------------------

double kernel_bound_envelope(const ManifoldSpec& m, EnvelopeKind kind,
                             double t, double d, const BoundConstants& c) {
  if (!(t > 0.0)) throw std::domain_error("kernel_bound_envelope: t > 0");
  c.check();
  const double D = m.dim();
  const double flat_diag = std::pow(4.0 * kPi * t, -0.5 * D);
  if (m.compact()) {
    const double vol = m.volume();
    if (kind == EnvelopeKind::lower_diag) return flat_diag;
    return 4.0 * c.regularity_a *
           (1.0 / vol + c.b_eps * std::pow(t, -0.5 * D)) *
           std::exp(-d * d / (2.0 * c.c2 * t));
  }
  // flat and hyperbolic are Cartan-Hadamard
  if (kind == EnvelopeKind::lower_diag)
    return c.c_low * flat_diag * std::exp(-c.xi * t);
  return c.c_ch * flat_diag * std::exp(-d * d / (2.0 * c.c2 * t));
}

// ---------------------------------------------------------------------------
// Metric scaling
// ---------------------------------------------------------------------------

ManifoldSpec scaled_manifold(const ManifoldSpec& m, double gamma) {
  switch (m.geometry()) {
    case Geometry::FlatEuclidean:
      return m;
    case Geometry::Sphere2:
      return ManifoldSpec::sphere2(m.scale() / gamma);
    case Geometry::Hyperbolic:
      return ManifoldSpec::hyperbolic(m.dim(), m.scale() * gamma);
  }
  return m;
}

Point scaled_point(const ManifoldSpec& m, const Point& p, double gamma) {
  if (m.geometry() != Geometry::FlatEuclidean) return p;
  Point q = p;
  for (int i = 0; i < p.size(); ++i) q[i] = p[i] / gamma;
  return q;
}

// ---------------------------------------------------------------------------
// Geodesic polar charts
// ---------------------------------------------------------------------------

namespace {

// Minkowski form B(X,Y) = -X0 Y0 + sum Xi Yi; hyperboloid points have
// B(X,X) = -1 and cosh(kappa d) = -B(X,Y).
double mink(const std::array<double, 4>& a, const std::array<double, 4>& b,
            int n) {
  double s = -a[0] * b[0];
  for (int i = 1; i < n; ++i) s += a[i] * b[i];
  return s;
}

std::array<double, 4> embed_hyperbolic(const ManifoldSpec& m, const Point& p) {
  const int h = m.dim() - 1;
  double xx = 0.0;
  for (int i = 0; i < h; ++i) xx += sqr(p[i]);
  const double y = p[h];
  std::array<double, 4> X{};
  X[0] = (xx + y * y + 1.0) / (2.0 * y);
  X[1] = (xx + y * y - 1.0) / (2.0 * y);
  for (int i = 0; i < h; ++i) X[2 + i] = p[i] / y;
  return X;
}

Point unembed_hyperbolic(const ManifoldSpec& m, const std::array<double, 4>& X) {
  const double y = 1.0 / (X[0] - X[1]);
  if (m.dim() == 2) return Point::half_plane(X[2] * y, y);
  return Point::half_space(X[2] * y, X[3] * y, y);
}

std::array<double, 3> embed_sphere(const Point& p) {
  return {std::sin(p[0]) * std::cos(p[1]), std::sin(p[0]) * std::sin(p[1]),
          std::cos(p[0])};
}

Point unembed_sphere(const std::array<double, 3>& v) {
  double z = v[2];
  if (z > 1.0) z = 1.0;
  if (z < -1.0) z = -1.0;
  double phi = std::atan2(v[1], v[0]);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return Point::sphere(std::acos(z), phi);
}

}  // namespace

GeodesicChart::GeodesicChart(const ManifoldSpec& m, const Point& origin)
    : m_(m), origin_(origin) {
  m_.validate(origin);
  if (m_.geometry() == Geometry::Sphere2) {
    const auto v = embed_sphere(origin);
    o_ = {v[0], v[1], v[2], 0.0};
    // e1 = normalize(seed x o), e2 = o x e1 with a seed not parallel to o
    std::array<double, 3> seed = std::abs(v[2]) < 0.9
                                     ? std::array<double, 3>{0.0, 0.0, 1.0}
                                     : std::array<double, 3>{1.0, 0.0, 0.0};
    std::array<double, 3> e1 = {seed[1] * v[2] - seed[2] * v[1],
                                seed[2] * v[0] - seed[0] * v[2],
                                seed[0] * v[1] - seed[1] * v[0]};
    const double n1 =
        std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto& c : e1) c /= n1;
    const std::array<double, 3> e2 = {v[1] * e1[2] - v[2] * e1[1],
                                      v[2] * e1[0] - v[0] * e1[2],
                                      v[0] * e1[1] - v[1] * e1[0]};
    frame_[0] = {e1[0], e1[1], e1[2], 0.0};
    frame_[1] = {e2[0], e2[1], e2[2], 0.0};
  } else if (m_.geometry() == Geometry::Hyperbolic) {
    const int n = m_.dim() + 1;
    o_ = embed_hyperbolic(m_, origin);
    int nf = 0;
    for (int s = 1; s < 4 && nf < m_.dim(); ++s) {
      std::array<double, 4> u{};
      u[s] = 1.0;
      // project onto the tangent space and Gram-Schmidt against the frame
      double bp = mink(u, o_, n);
      for (int i = 0; i < 4; ++i) u[i] += bp * o_[i];
      for (int j = 0; j < nf; ++j) {
        const double c = mink(u, frame_[j], n);
        for (int i = 0; i < 4; ++i) u[i] -= c * frame_[j][i];
      }
      const double nn = mink(u, u, n);
      if (nn < 1e-12) continue;
      const double inv = 1.0 / std::sqrt(nn);
      for (auto& c : u) c *= inv;
      frame_[nf++] = u;
    }
  }
}

Point GeodesicChart::at(double r, double a, double b) const {
  switch (m_.geometry()) {
    case Geometry::FlatEuclidean: {
      if (m_.dim() == 2)
        return Point::xy(origin_[0] + r * std::cos(a),
                         origin_[1] + r * std::sin(a));
      const double dir[3] = {std::sin(a) * std::cos(b),
                             std::sin(a) * std::sin(b), std::cos(a)};
      return Point::xyz(origin_[0] + r * dir[0], origin_[1] + r * dir[1],
                        origin_[2] + r * dir[2]);
    }
    case Geometry::Sphere2: {
      const double ang = r / m_.scale();
      std::array<double, 3> v{};
      for (int i = 0; i < 3; ++i)
        v[i] = std::cos(ang) * o_[i] +
               std::sin(ang) *
                   (std::cos(a) * frame_[0][i] + std::sin(a) * frame_[1][i]);
      return unembed_sphere(v);
    }
    case Geometry::Hyperbolic: {
      const double s = m_.scale() * r;
      std::array<double, 4> dir{};
      if (m_.dim() == 2) {
        for (int i = 0; i < 4; ++i)
          dir[i] = std::cos(a) * frame_[0][i] + std::sin(a) * frame_[1][i];
      } else {
        const double w[3] = {std::sin(a) * std::cos(b),
                             std::sin(a) * std::sin(b), std::cos(a)};
        for (int i = 0; i < 4; ++i)
          dir[i] = w[0] * frame_[0][i] + w[1] * frame_[1][i] +
                   w[2] * frame_[2][i];
      }
      std::array<double, 4> X{};
      for (int i = 0; i < 4; ++i)
        X[i] = std::cosh(s) * o_[i] + std::sinh(s) * dir[i];
      return unembed_hyperbolic(m_, X);
    }
  }
  return origin_;
}

double GeodesicChart::sphere_area(double r) const {
  const double k = m_.scale();
  switch (m_.geometry()) {
    case Geometry::FlatEuclidean:
      return m_.dim() == 2 ? kTwoPi * r : 4.0 * kPi * r * r;
    case Geometry::Sphere2:
      return kTwoPi * k * std::sin(r / k);
    case Geometry::Hyperbolic:
      return m_.dim() == 2 ? kTwoPi * std::sinh(k * r) / k
                           : 4.0 * kPi * sqr(std::sinh(k * r) / k);
  }
  return 0.0;
}

void BoundConstants::check() const {
  if (!(c2 >= 2.0))
    throw std::invalid_argument("BoundConstants: C2 must be >= 2");
  if (c2 == 2.0 && !flat_exact)
    throw std::invalid_argument(
        "BoundConstants: C2 == 2 requires the flat-exactness flag");
  if (!(regularity_a >= 1.0))
    throw std::invalid_argument("BoundConstants: A must be >= 1");
  if (b_eps < 0.0 || c_ch <= 0.0 || c_low <= 0.0 || xi < 0.0)
    throw std::invalid_argument("BoundConstants: constants must be positive");
}

}  // namespace pointspec
