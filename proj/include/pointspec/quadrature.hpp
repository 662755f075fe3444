#ifndef POINTSPEC_QUADRATURE_HPP
#define POINTSPEC_QUADRATURE_HPP

// Adaptive Gauss-Kronrod (G7,K15) panels plus the semi-infinite time
// integrator used for all heat-kernel Laplace transforms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace pointspec {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Defaults per the solver contract; rel_tol is the target relative error of
// each assembled matrix entry.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double split_time = 1.0;
  double tail_tol = 1e-16;
  int max_subdivisions = 60;
};

namespace detail {

// QUADPACK dqk15 nodes/weights.
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.2293532201052922e-1, 0.6309209262997855e-1, 0.1047900103222502,
    0.1406532597155259,    0.1690047266392679,    0.1903505780647854,
    0.2044329400752989,    0.2094821410847278};
inline constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                                  0.3818300505051189, 0.4179591836734694};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int j = 0; j < 7; ++j) resk += kWgk[j] * (fv[j] + fv[14 - j]);
  for (int j = 0; j < 3; ++j) {
    const int jg = 2 * j + 1;  // Gauss nodes sit at odd Kronrod indices
    resg += kWg[j] * (fv[jg] + fv[14 - jg]);
  }
  value = resk * h;
  err = std::abs((resk - resg) * h);
}

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace detail

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = true;
};

// Adaptive refinement of [a, b]; stops when the error estimate is below
// max(rel_tol*|I|, abs_tol).
template <class F>
inline QuadResult integrate_adaptive(const F& f, double a, double b,
                                     double rel_tol, double abs_tol,
                                     int max_subdivisions = 60) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<detail::Panel> panels;
  detail::Panel p{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, p.value, p.err);
  double total = p.value, total_err = p.err;
  panels.push(p);
  int sub = 0;
  while (total_err > std::max(rel_tol * std::abs(total), abs_tol) &&
         sub < max_subdivisions) {
    detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Panel left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.err);
    detail::gk15(f, right.a, right.b, right.value, right.err);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    panels.push(left);
    panels.push(right);
    ++sub;
  }
  out.value = total;
  out.abs_error = total_err;
  out.subdivisions = sub;
  out.converged = total_err <= std::max(rel_tol * std::abs(total), abs_tol) ||
                  total_err <= 1e-15 * std::abs(total) + 1e-300;
  return out;
}

// ∫_lo^hi f(t) dt through the substitution t = u^2 (absorbs t^{-1/2}-type
// endpoint behaviour of the heat-kernel integrands). Seeding with several
// panels keeps localized bumps from slipping between the nodes of a single
// root panel.
template <class F>
inline QuadResult integrate_usub(const F& f, double lo, double hi,
                                 double rel_tol, int max_subdivisions = 60,
                                 int seed_panels = 4) {
  const auto g = [&f](double u) { return 2.0 * u * f(u * u); };
  const double ua = std::sqrt(lo), ub = std::sqrt(hi);
  QuadResult out;
  for (int p = 0; p < seed_panels; ++p) {
    const double pa = ua + (ub - ua) * p / seed_panels;
    const double pb = ua + (ub - ua) * (p + 1) / seed_panels;
    QuadResult r =
        integrate_adaptive(g, pa, pb, rel_tol, 1e-305, max_subdivisions);
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.subdivisions += r.subdivisions;
    out.converged = out.converged && r.converged;
  }
  return out;
}

// ∫_t0^∞ f(t) dt over doubling panels; |f(t)| must decay at least like
// e^{-decay_rate t}. Stops when the last panel and the exponential
// remainder bound both fall below tail_tol * scale.
template <class F>
inline QuadResult integrate_octave_tail(const F& f, double t0,
                                        double decay_rate,
                                        const QuadratureConfig& cfg,
                                        double scale_hint = 0.0) {
  if (decay_rate <= 0.0)
    throw QuadratureError("integrate_octave_tail: nonpositive decay rate");
  QuadResult out;
  double width = t0;
  const int max_oct = 64;
  for (int k = 0; k < max_oct; ++k) {
    const double t1 = t0 + width;
    QuadResult piece = integrate_adaptive(f, t0, t1, 0.1 * cfg.rel_tol, 1e-305,
                                          cfg.max_subdivisions);
    out.value += piece.value;
    out.abs_error += piece.abs_error;
    const double scale = std::max(std::abs(out.value), scale_hint);
    const double remainder_bound = std::abs(f(t1)) / decay_rate;
    if (std::abs(piece.value) <= cfg.tail_tol * scale &&
        remainder_bound <= cfg.tail_tol * scale)
      return out;
    t0 = t1;
    width *= 2.0;
  }
  throw QuadratureError("integrate_octave_tail: tail did not converge");
}

// ∫_lo^∞ f(t) dt = u-substituted head over (lo, split] plus octave tail.
template <class F>
inline double integrate_time_0_inf(const F& f, double lo, double decay_rate,
                                   const QuadratureConfig& cfg,
                                   double scale_hint = 0.0) {
  const double split = std::max(cfg.split_time, 2.0 * lo);
  double acc = 0.0, err = 0.0;
  if (lo < split) {
    QuadResult head = integrate_usub(f, lo, split, 0.1 * cfg.rel_tol,
                                     cfg.max_subdivisions);
    acc += head.value;
    err += head.abs_error;
  }
  QuadResult tail = integrate_octave_tail(f, std::max(split, lo), decay_rate,
                                          cfg, std::max(std::abs(acc), scale_hint));
  acc += tail.value;
  err += tail.abs_error;
  const double scale = std::max(std::abs(acc), scale_hint);
  if (err > 1e4 * cfg.rel_tol * scale + 1e-280)
    throw QuadratureError("integrate_time_0_inf: requested tolerance not met");
  return acc;
}

}  // namespace pointspec

#endif
