#include "pointspec/specfun.hpp"

#include <cmath>
#include <limits>

#include "pointspec/quadrature.hpp"

namespace pointspec::specfun {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kPi = 3.14159265358979323846;

// Ascending series (convergent, all-positive terms; used below the
// cancellation threshold).
double k0_series(double x) {
  const double q = 0.25 * x * x;
  double ik = 1.0, hk = 0.0;  // (q^k)/(k!)^2 and harmonic number H_k
  double i0 = 1.0, s = 0.0;
  for (int k = 1; k < 40; ++k) {
    ik *= q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    i0 += ik;
    s += ik * hk;
    if (ik < 1e-18 * i0) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * i0 + s;
}

double k1_series(double x) {
  const double q = 0.25 * x * x;
  // I1(x) = (x/2) sum q^k / (k!(k+1)!)
  double term = 1.0, i1s = 1.0;
  // sum with psi-weights: sum q^k [psi(k+1)+psi(k+2)] / (k!(k+1)!)
  double psi_sum = (-2.0 * kEulerGamma + 1.0) * 1.0;
  double hk = 0.0, hk1 = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    hk1 += 1.0 / (k + 1);
    i1s += term;
    psi_sum += term * (-2.0 * kEulerGamma + hk + hk1);
    if (term < 1e-18 * i1s) break;
  }
  const double i1 = 0.5 * x * i1s;
  return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * psi_sum;
}

// Scaled integral representation e^x K_nu(x) = int_0^inf e^{-x(cosh s - 1)}
// cosh(nu s) ds, evaluated adaptively for the mid range.
double k_scaled_integral(int nu, double x) {
  const double smax = std::acosh(1.0 + 760.0 / x);
  const auto f = [&](double s) {
    const double e = std::exp(-x * (std::cosh(s) - 1.0));
    return nu == 0 ? e : e * std::cosh(s);
  };
  QuadResult r = integrate_adaptive(f, 0.0, smax, 1e-14, 1e-300, 200);
  return r.value;
}

// Scaled asymptotic series e^x K_nu(x) ~ sqrt(pi/2x) sum a_k, valid x >= 30.
double k_scaled_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double a = 1.0, s = 1.0;
  for (int k = 1; k <= 22; ++k) {
    const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
    a *= num / (8.0 * x * k);
    s += a;
    if (std::abs(a) < 1e-17 * std::abs(s)) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * s;
}

double bessel_k(int nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k: requires x > 0");
  if (x > 740.0) return 0.0;  // e^{-x} underflows; K decays below DBL_MIN
  if (x <= 2.0) return nu == 0 ? k0_series(x) : k1_series(x);
  const double scaled =
      x < 30.0 ? k_scaled_integral(nu, x) : k_scaled_asymptotic(nu, x);
  return std::exp(-x) * scaled;
}

}  // namespace

double bessel_k0(double x) { return bessel_k(0, x); }

double bessel_k1(double x) { return bessel_k(1, x); }

double bessel_k_half(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k_half: requires x > 0");
  return std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
}

double bessel_bound(BesselBoundKind kind, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_bound: requires x > 0");
  const double e = std::exp(-0.5 * x);
  switch (kind) {
    case BesselBoundKind::k0_coarse:
      return 2.0 / x * e;
    case BesselBoundKind::k0_sharp:
      return e * (2.0 / (1.0 + x) + std::log((x + 1.0) / x));
    case BesselBoundKind::k1:
      return e * (1.0 / x + 0.5);
  }
  throw std::invalid_argument("bessel_bound: unknown kind");
}

double lambert_w0(double x) {
  const double inv_e = std::exp(-1.0);
  if (x < -inv_e) {
    // tolerate roundoff right at the branch point
    if (x > -inv_e - 1e-15) return -1.0;
    throw std::domain_error("lambert_w0: requires x >= -1/e");
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.25) {
    const double p = std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    // so close to the branch point that Halley's denominator degenerates;
    // the series is already beyond full precision there
    if (1.0 + std::exp(1.0) * x < 1e-8) return w;
  } else if (x < 0.25) {
    w = x * (1.0 + x * (-1.0 + x * (1.5 - 8.0 / 3.0 * x)));
  } else if (x < 10.0) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x), l2 = std::log(std::log(x));
    w = l1 - l2 + l2 / l1;
  }

  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - f * (w + 2.0) / (2.0 * (w + 1.0));
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) break;
  }
  if (w < -1.0) w = -1.0;
  return w;
}

double legendre_p(int l, double x) {
  if (l < 0 || l > 10000)
    throw std::domain_error("legendre_p: order out of range");
  if (!(x >= -1.0 && x <= 1.0))
    throw std::domain_error("legendre_p: requires |x| <= 1");
  if (l == 0) return 1.0;
  if (l == 1) return x;
  long double pm1 = 1.0L, p = x;
  const long double xl = x;
  for (int k = 2; k <= l; ++k) {
    const long double pk =
        ((2.0L * k - 1.0L) * xl * p - (k - 1.0L) * pm1) / k;
    pm1 = p;
    p = pk;
  }
  return static_cast<double>(p);
}

}  // namespace pointspec::specfun
