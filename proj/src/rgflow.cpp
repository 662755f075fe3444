#include "pointspec/rgflow.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pointspec/smallmat.hpp"

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

double require_nu_from_energy(double energy) {
  if (!(energy < 0.0))
    throw std::domain_error("rgflow: requires E < 0");
  return std::sqrt(-energy);
}

}  // namespace

double subtracted_diagonal_integral(const ManifoldSpec& m, double energy,
                                    double scale,
                                    const QuadratureConfig& quad) {
  const double nu = require_nu_from_energy(energy);
  if (!(scale > 0.0))
    throw std::domain_error("rgflow: requires M > 0");
  const double flat_part =
      m.dim() == 2 ? std::log(scale * scale / (nu * nu)) / (4.0 * kPi)
                   : (scale - nu) / (4.0 * kPi);
  if (m.geometry() == Geometry::FlatEuclidean) return flat_part;
  const auto f = [&](double t) {
    return heat_kernel_diag_minus_flat(m, t) * std::exp(energy * t);
  };
  return flat_part + integrate_time_0_inf(f, 0.0, nu * nu, quad);
}

std::vector<double> sigma_offsets(const ManifoldSpec& m, const CenterSet& cs,
                                  const QuadratureConfig& quad) {
  // all five geometries are homogeneous: the diagonal kernel is the same at
  // every center and Sigma_i reduces to a binding-scale difference
  std::vector<double> sigma(static_cast<std::size_t>(cs.size()), 0.0);
  for (int i = 1; i < cs.size(); ++i) {
    if (cs[i].mu == cs[0].mu) continue;
    sigma[static_cast<std::size_t>(i)] = kernel_time_integral(
        m, -1.0, weight_exp_diff(cs[0].mu, cs[i].mu), quad);
  }
  return sigma;
}

RGState rg_scheme(const ManifoldSpec& m, const CenterSet& cs, double scale,
                  const QuadratureConfig& quad) {
  RGState rg;
  rg.dim = m.dim();
  rg.scale = scale;
  const double j1 =
      subtracted_diagonal_integral(m, -cs[0].mu * cs[0].mu, scale, quad);
  if (std::abs(j1) < 1e-300)
    throw std::invalid_argument(
        "rg_scheme: renormalization scale sits on the coupling pole");
  rg.coupling = rg.dim == 2 ? 1.0 / j1 : scale / j1;
  rg.sigma = sigma_offsets(m, cs, quad);
  return rg;
}

PrincipalMatrix renormalized_phi(const ManifoldSpec& m, const CenterSet& cs,
                                 const RGState& rg, double energy,
                                 const QuadratureConfig& quad) {
  const double nu = require_nu_from_energy(energy);
  if (static_cast<int>(rg.sigma.size()) != cs.size())
    throw std::invalid_argument("renormalized_phi: sigma size mismatch");
  const double inv_coupling_term =
      rg.dim == 2 ? 1.0 / rg.coupling : rg.scale / rg.coupling;
  PrincipalMatrix pm;
  pm.nu = nu;
  pm.entries = SymMatrix(cs.size());
  for (int i = 0; i < cs.size(); ++i) {
    pm.entries(i, i) =
        inv_coupling_term -
        subtracted_diagonal_integral(m, energy, rg.scale, quad) -
        rg.sigma[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < cs.size(); ++j)
      pm.entries.set_sym(
          i, j, phi_offdiagonal_radial(m, cs.distance(i, j), nu, quad));
  }
  return pm;
}

double beta(int dim, double coupling) {
  if (dim == 2) return -coupling * coupling / (2.0 * kPi);
  if (dim == 3) return coupling - coupling * coupling / (4.0 * kPi);
  throw std::invalid_argument("beta: dim must be 2 or 3");
}

double flow_coupling(int dim, double coupling_at_m, double gamma) {
  if (!(gamma > 0.0))
    throw std::domain_error("flow_coupling: requires gamma > 0");
  if (dim == 2) {
    const double denom = 1.0 + coupling_at_m * std::log(gamma) / (2.0 * kPi);
    if (!(denom > 0.0))
      throw LandauPoleError("flow_coupling: 2-D Landau pole crossed");
    return coupling_at_m / denom;
  }
  if (dim == 3) {
    const double denom = 1.0 - coupling_at_m * (1.0 - gamma) / (4.0 * kPi);
    if (!(denom > 0.0))
      throw LandauPoleError("flow_coupling: 3-D flow denominator crossed");
    return gamma * coupling_at_m / denom;
  }
  throw std::invalid_argument("flow_coupling: dim must be 2 or 3");
}

double scaling_covariance_check(const ManifoldSpec& m, const CenterSet& cs,
                                const RGState& rg, double gamma, double energy,
                                const QuadratureConfig& quad) {
  require_nu_from_energy(energy);
  const double power = std::pow(gamma, m.dim() - 2.0);

  // left side: metric gamma^{-2} g, energy gamma^2 E, couplings at M
  const ManifoldSpec ms = scaled_manifold(m, gamma);
  std::vector<Center> scaled;
  scaled.reserve(static_cast<std::size_t>(cs.size()));
  for (int i = 0; i < cs.size(); ++i)
    scaled.push_back({scaled_point(m, cs[i].point, gamma), cs[i].mu});
  const CenterSet cs_scaled(ms, std::move(scaled));
  RGState lhs_rg = rg;
  lhs_rg.sigma.resize(static_cast<std::size_t>(cs.size()));
  for (std::size_t i = 0; i < lhs_rg.sigma.size(); ++i)
    lhs_rg.sigma[i] = power * rg.sigma[i];
  const PrincipalMatrix lhs =
      renormalized_phi(ms, cs_scaled, lhs_rg, gamma * gamma * energy, quad);

  // right side: original geometry with the coupling flowed to gamma M
  RGState rhs_rg = rg;
  rhs_rg.coupling = flow_coupling(rg.dim, rg.coupling, gamma);
  const PrincipalMatrix rhs = renormalized_phi(m, cs, rhs_rg, energy, quad);

  double worst = 0.0;
  for (int i = 0; i < cs.size(); ++i)
    for (int j = 0; j < cs.size(); ++j)
      worst = std::max(worst, std::abs(lhs.entries(i, j) -
                                       power * rhs.entries(i, j)));
  return worst;
}

std::vector<double> rg_spectrum_roots(const ManifoldSpec& m,
                                      const CenterSet& cs, const RGState& rg,
                                      const QuadratureConfig& quad,
                                      double root_tol) {
  const int n = cs.size();
  std::map<double, std::vector<double>> cache;
  const auto eigen_at = [&](double nu) -> const std::vector<double>& {
    auto it = cache.find(nu);
    if (it == cache.end()) {
      const PrincipalMatrix pm =
          renormalized_phi(m, cs, rg, -nu * nu, quad);
      it = cache.emplace(nu, jacobi_eigensystem(pm.entries).eigenvalues)
               .first;
    }
    return it->second;
  };

  const double nu_lo = m.compact() ? std::max(kNuMinCompact, 0.01 * cs.mu_min())
                                   : 0.01 * cs.mu_min();
  const double base =
      n > 1 ? std::max(cs.mu_max(), cs.mu_d()) : cs.mu_max();
  std::vector<double> roots;
  for (int k = 0; k < n; ++k) {
    if (eigen_at(nu_lo)[k] >= 0.0) continue;
    double hi = base;
    const double cap = 1024.0 * base;
    while (hi <= cap && eigen_at(hi)[k] <= 0.0) hi *= 2.0;
    if (hi > cap) continue;
    double lo = nu_lo;
    while (hi - lo > root_tol * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (eigen_at(mid)[k] <= 0.0 ? lo : hi) = mid;
    }
    roots.push_back(0.5 * (lo + hi));
  }
  std::sort(roots.rbegin(), roots.rend());  // deepest energy first
  return roots;
}

}  // namespace pointspec
