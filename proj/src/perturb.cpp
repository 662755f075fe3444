#include "pointspec/perturb.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_distinct_mus(const CenterSet& cs) {
  for (int i = 0; i < cs.size(); ++i)
    for (int j = i + 1; j < cs.size(); ++j)
      if (std::abs(cs[i].mu - cs[j].mu) < 1e-12)
        throw std::invalid_argument(
            "perturb: binding scales must be pairwise distinct");
}

}  // namespace

PerturbationShift delta_nu(const ManifoldSpec& m, const CenterSet& cs, int k,
                           const QuadratureConfig& quad) {
  const int n = cs.size();
  if (k < 0 || k >= n) throw std::invalid_argument("delta_nu: bad index");
  PerturbationShift out;
  if (n == 1) {
    out.in_regime = true;
    out.dominance_ratio = std::numeric_limits<double>::infinity();
    return out;  // empty sum
  }
  require_distinct_mus(cs);
  const double mu_k = cs[k].mu;
  const PrincipalMatrix phi = assemble(m, cs, mu_k, quad);

  double min_diag = std::numeric_limits<double>::infinity();
  double max_off = 0.0;
  for (int l = 0; l < n; ++l) {
    if (l != k) min_diag = std::min(min_diag, std::abs(phi.entries(l, l)));
    for (int j = l + 1; j < n; ++j)
      max_off = std::max(max_off, std::abs(phi.entries(l, j)));
  }
  out.dominance_ratio = max_off > 0.0
                            ? min_diag / max_off
                            : std::numeric_limits<double>::infinity();
  out.in_regime = out.dominance_ratio >= 1e3;

  const double slope = phi_derivative_nu(m, cs[k].point, cs[k].point, mu_k, quad);
  double sum = 0.0;
  for (int l = 0; l < n; ++l) {
    if (l == k) continue;
    sum += phi.entries(k, l) * phi.entries(l, k) / phi.entries(l, l);
  }
  out.delta_nu = sum / slope;
  return out;
}

double tunneling_offdiag_asymptotic(const ManifoldSpec& m, double d,
                                    double mu_k) {
  if (!(d > 0.0) || !(mu_k > 0.0))
    throw std::domain_error("tunneling_offdiag_asymptotic: d, mu > 0");
  if (mu_k * d < 3.0)
    throw std::domain_error(
        "tunneling_offdiag_asymptotic: requires mu_k * d >= 3");
  switch (m.geometry()) {
    case Geometry::FlatEuclidean:
      if (m.dim() == 3) return -std::exp(-mu_k * d) / (4.0 * kPi * d);
      // K0 replaced by its leading exponential form
      return -std::sqrt(kPi / (2.0 * mu_k * d)) * std::exp(-mu_k * d) /
             (2.0 * kPi);
    case Geometry::Hyperbolic: {
      if (m.dim() != 3)
        throw std::domain_error(
            "tunneling_offdiag_asymptotic: H^2 geodesic-flow factor is not "
            "exact; use the quadrature entries");
      const double k = m.scale();
      const double rate = std::sqrt(mu_k * mu_k + k * k);
      return -k * std::exp(-d * rate) / (4.0 * kPi * std::sinh(k * d));
    }
    case Geometry::Sphere2:
      throw std::domain_error(
          "tunneling_offdiag_asymptotic: multiple geodesics on the sphere; "
          "use the quadrature entries");
  }
  return 0.0;
}

PerturbationReport compare_with_exact(const ManifoldSpec& m,
                                      const CenterSet& cs, int k,
                                      const QuadratureConfig& quad,
                                      double root_tol) {
  require_distinct_mus(cs);
  const double mu_k = cs[k].mu;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int l = 0; l < cs.size(); ++l)
    if (l != k) min_gap = std::min(min_gap, std::abs(cs[l].mu - mu_k));

  PerturbationReport rep;
  rep.branch = k;
  rep.nu0 = mu_k;
  const PerturbationShift shift = delta_nu(m, cs, k, quad);
  rep.delta_nu = shift.delta_nu;
  rep.delta_e = -2.0 * mu_k * shift.delta_nu;
  rep.in_regime = shift.in_regime;
  rep.regime_ratio = cs.size() > 1
                         ? (cs.mu_d() * cs.mu_d()) /
                               (cs.mu_min() * cs.mu_min())
                         : 0.0;

  const SpectrumResult sr = solve_spectrum(m, cs, quad, root_tol);
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const BoundState& st : sr.states) {
    const double dist = std::abs(st.nu - mu_k);
    if (dist < best) {
      best = dist;
      rep.exact_nu = st.nu;
      found = true;
    }
  }
  if (!found || best > 0.5 * min_gap)
    throw std::runtime_error(
        "compare_with_exact: no solver root within half the mu gap of mu_k");
  const double exact_shift = rep.exact_nu - mu_k;
  rep.relative_error = std::abs(rep.delta_nu - exact_shift) /
                       std::max(std::abs(exact_shift), 1e-300);
  return rep;
}

}  // namespace pointspec
