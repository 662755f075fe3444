#include "pointspec/principal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pointspec/parallel.hpp"

namespace pointspec {

namespace {

void require_nu(const ManifoldSpec& m, double nu) {
  if (!(nu > 0.0)) throw std::domain_error("principal: requires nu > 0");
  if (m.compact() && nu < kNuMinCompact)
    throw std::domain_error("principal: nu below compact-manifold cutoff");
}

}  // namespace

CenterSet::CenterSet(const ManifoldSpec& m, std::vector<Center> centers)
    : m_(m), centers_(std::move(centers)) {
  if (centers_.empty())
    throw std::invalid_argument("CenterSet: needs at least one center");
  const std::size_t n = centers_.size();
  for (const Center& c : centers_) {
    m_.validate(c.point);
    if (!(c.mu > 0.0))
      throw std::invalid_argument("CenterSet: mu must be > 0");
  }
  dist_.assign(n * n, 0.0);
  min_dist_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d =
          geodesic_distance(m_, centers_[i].point, centers_[j].point);
      if (d < 1e-12)
        throw std::invalid_argument("CenterSet: coincident centers " +
                                    std::to_string(i) + "," +
                                    std::to_string(j));
      dist_[i * n + j] = dist_[j * n + i] = d;
      min_dist_ = std::min(min_dist_, d);
    }
  }
}

double CenterSet::mu_max() const {
  double v = 0.0;
  for (const Center& c : centers_) v = std::max(v, c.mu);
  return v;
}

double CenterSet::mu_min() const {
  double v = std::numeric_limits<double>::infinity();
  for (const Center& c : centers_) v = std::min(v, c.mu);
  return v;
}

double CenterSet::mu_d() const { return 1.0 / min_dist_; }

CenterSet CenterSet::without_last() const {
  std::vector<Center> sub(centers_.begin(), centers_.end() - 1);
  return CenterSet(m_, std::move(sub));
}

double phi_diagonal(const ManifoldSpec& m, const Point& a, double mu,
                    double nu, const QuadratureConfig& quad) {
  if (!(mu > 0.0)) throw std::domain_error("phi_diagonal: requires mu > 0");
  require_nu(m, nu);
  m.validate(a);
  if (mu == nu) return 0.0;  // renormalization condition, integrand vanishes
  return kernel_time_integral(m, -1.0, weight_exp_diff(mu, nu), quad);
}

double phi_offdiagonal_radial(const ManifoldSpec& m, double d, double nu,
                              const QuadratureConfig& quad) {
  require_nu(m, nu);
  if (d < 1e-12)
    throw std::invalid_argument("phi_offdiagonal: coincident centers");
  return -kernel_time_integral(m, d, weight_exp(nu), quad);
}

double phi_offdiagonal(const ManifoldSpec& m, const Point& ai, const Point& aj,
                       double nu, const QuadratureConfig& quad) {
  return phi_offdiagonal_radial(m, geodesic_distance(m, ai, aj), nu, quad);
}

double phi_derivative_nu_radial(const ManifoldSpec& m, double d, double nu,
                                const QuadratureConfig& quad) {
  require_nu(m, nu);
  return kernel_time_integral(m, d, weight_two_nu_t_exp(nu), quad);
}

double phi_derivative_nu(const ManifoldSpec& m, const Point& ai,
                         const Point& aj, double nu,
                         const QuadratureConfig& quad) {
  const double d = geodesic_distance(m, ai, aj);
  return phi_derivative_nu_radial(m, d < 1e-12 ? -1.0 : d, nu, quad);
}

namespace {

// Assemble the upper triangle in parallel with fixed entry slots; entry
// errors are captured and rethrown with their (i, j) position.
template <class EntryFn>
SymMatrix assemble_symmetric(int n, const EntryFn& entry) {
  SymMatrix out(n);
  const int m = n * (n + 1) / 2;
  std::vector<std::string> errors(static_cast<std::size_t>(m));
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t k) {
    // unrank k -> (i, j), i <= j, row-major upper triangle
    int i = 0;
    std::size_t kk = k;
    std::size_t row = static_cast<std::size_t>(n);
    while (kk >= row) {
      kk -= row;
      --row;
      ++i;
    }
    const int j = i + static_cast<int>(kk);
    try {
      out.set_sym(i, j, entry(i, j));
    } catch (const std::exception& e) {
      errors[k] = "entry (" + std::to_string(i) + "," + std::to_string(j) +
                  "): " + e.what();
    }
  });
  for (const std::string& e : errors)
    if (!e.empty()) throw std::runtime_error("assemble: " + e);
  return out;
}

}  // namespace

PrincipalMatrix assemble(const ManifoldSpec& m, const CenterSet& cs, double nu,
                         const QuadratureConfig& quad) {
  require_nu(m, nu);
  PrincipalMatrix pm;
  pm.nu = nu;
  pm.entries = assemble_symmetric(cs.size(), [&](int i, int j) {
    if (i == j) return phi_diagonal(m, cs[i].point, cs[i].mu, nu, quad);
    return phi_offdiagonal_radial(m, cs.distance(i, j), nu, quad);
  });
  return pm;
}

SymMatrix assemble_derivative(const ManifoldSpec& m, const CenterSet& cs,
                              double nu, const QuadratureConfig& quad) {
  require_nu(m, nu);
  return assemble_symmetric(cs.size(), [&](int i, int j) {
    const double d = i == j ? -1.0 : cs.distance(i, j);
    return phi_derivative_nu_radial(m, d, nu, quad);
  });
}

SymMatrix assemble_norm_matrix(const ManifoldSpec& m, const CenterSet& cs,
                               double nu, const QuadratureConfig& quad) {
  require_nu(m, nu);
  return assemble_symmetric(cs.size(), [&](int i, int j) {
    const double d = i == j ? -1.0 : cs.distance(i, j);
    return kernel_time_integral(m, d, weight_t_exp(nu), quad);
  });
}

double resolvent_difference_check(const ManifoldSpec& m, const CenterSet& cs,
                                  int i, int j, double e1, double e2,
                                  const QuadratureConfig& quad) {
  if (i == j)
    throw std::invalid_argument("resolvent_difference_check: needs i != j");
  if (!(e1 < 0.0) || !(e2 < 0.0))
    throw std::domain_error("resolvent_difference_check: requires E < 0");
  if (e1 == e2) return 0.0;
  const double d = cs.distance(i, j);
  const double phi1 = phi_offdiagonal_radial(m, d, std::sqrt(-e1), quad);
  const double phi2 = phi_offdiagonal_radial(m, d, std::sqrt(-e2), quad);
  const double r1 = free_resolvent_radial(m, d, std::sqrt(-e1), quad);
  const double r2 = free_resolvent_radial(m, d, std::sqrt(-e2), quad);
  return std::abs((phi2 - phi1) - (r1 - r2));
}

}  // namespace pointspec
