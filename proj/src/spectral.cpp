#include "pointspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace pointspec {

namespace {

double contract(const SymMatrix& mtx, const std::vector<double>& a) {
  const int n = mtx.size();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += a[i] * mtx(i, j) * a[j];
  return s;
}

double nu_floor(const ManifoldSpec& m, const CenterSet& cs) {
  const double lo = 0.01 * cs.mu_min();
  return m.compact() ? std::max(kNuMinCompact, lo) : lo;
}

}  // namespace

EigenSystem eigensystem(const PrincipalMatrix& phi) {
  EigenDecomposition d = jacobi_eigensystem(phi.entries);
  EigenSystem es;
  es.nu = phi.nu;
  es.eigenvalues = std::move(d.eigenvalues);
  es.eigenvectors = std::move(d.eigenvectors);
  return es;
}

FhDerivative eigen_derivative_fh(const ManifoldSpec& m, const CenterSet& cs,
                                 const EigenSystem& es, int k,
                                 const QuadratureConfig& quad) {
  const int n = static_cast<int>(es.eigenvalues.size());
  if (k < 0 || k >= n)
    throw std::invalid_argument("eigen_derivative_fh: branch out of range");
  double scale = 0.0;
  for (double w : es.eigenvalues) scale = std::max(scale, std::abs(w));
  double gap = std::numeric_limits<double>::infinity();
  if (k > 0) gap = std::min(gap, es.eigenvalues[k] - es.eigenvalues[k - 1]);
  if (k + 1 < n) gap = std::min(gap, es.eigenvalues[k + 1] - es.eigenvalues[k]);
  FhDerivative out;
  if (n > 1 && gap < 1e-9 * std::max(scale, 1e-30)) {
    // degenerate branch: symmetric finite differences of the sorted branch
    const double h = 1e-5 * es.nu;
    const EigenSystem lo = eigensystem(assemble(m, cs, es.nu - h, quad));
    const EigenSystem hi = eigensystem(assemble(m, cs, es.nu + h, quad));
    out.value = (hi.eigenvalues[k] - lo.eigenvalues[k]) / (2.0 * h);
    out.used_finite_difference = true;
    return out;
  }
  const SymMatrix dphi = assemble_derivative(m, cs, es.nu, quad);
  out.value = contract(dphi, es.eigenvectors[k]);
  return out;
}

std::vector<std::vector<double>> eigen_branch_scan(
    const ManifoldSpec& m, const CenterSet& cs, const std::vector<double>& nus,
    const QuadratureConfig& quad) {
  std::vector<std::vector<double>> out(nus.size());
  for (std::size_t i = 0; i < nus.size(); ++i)
    out[i] = eigensystem(assemble(m, cs, nus[i], quad)).eigenvalues;
  return out;
}

namespace {

struct SpectralSample {
  EigenSystem es;
  double frob = 0.0;
};

struct BranchSolver {
  const ManifoldSpec& m;
  const CenterSet& cs;
  const QuadratureConfig& quad;
  std::map<double, SpectralSample> cache;

  const SpectralSample& at(double nu) {
    auto it = cache.find(nu);
    if (it == cache.end()) {
      PrincipalMatrix phi = assemble(m, cs, nu, quad);
      SpectralSample s{eigensystem(phi), phi.entries.frobenius_norm()};
      it = cache.emplace(nu, std::move(s)).first;
    }
    return it->second;
  }
};

}  // namespace

SpectrumResult solve_spectrum(const ManifoldSpec& m, const CenterSet& cs,
                              const QuadratureConfig& quad, double root_tol) {
  if (!(root_tol > 0.0))
    throw std::invalid_argument("solve_spectrum: root_tol must be > 0");
  const int n = cs.size();
  BranchSolver solver{m, cs, quad, {}};

  const double nu_lo = nu_floor(m, cs);
  const double base =
      n > 1 ? std::max(cs.mu_max(), cs.mu_d()) : cs.mu_max();
  const double hi_cap = 1024.0 * base;

  SpectrumResult out;
  const std::vector<double> omega_lo = solver.at(nu_lo).es.eigenvalues;

  for (int k = 0; k < n; ++k) {
    BranchReport rep;
    rep.branch = k;
    if (omega_lo[k] >= 0.0) {
      rep.has_root = false;
      rep.note = "at threshold / absent";
      out.branches.push_back(rep);
      continue;
    }
    double hi = base;
    while (hi <= hi_cap && solver.at(hi).es.eigenvalues[k] <= 0.0) hi *= 2.0;
    if (hi > hi_cap) {
      rep.has_root = false;
      rep.note = "no bound state on this branch (no sign change up to 2^10)";
      out.branches.push_back(rep);
      continue;
    }
    double lo = nu_lo;
    // bisection on the monotone sorted branch, then Newton with the
    // Feynman-Hellmann slope
    while (hi - lo > 1e-6 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (solver.at(mid).es.eigenvalues[k] <= 0.0 ? lo : hi) = mid;
    }
    double nu = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
      const SpectralSample& s = solver.at(nu);
      const double omega = s.es.eigenvalues[k];
      if (std::abs(omega) <= 0.25 * root_tol * std::max(1.0, s.frob)) break;
      (omega <= 0.0 ? lo : hi) = nu;
      const FhDerivative slope = eigen_derivative_fh(m, cs, s.es, k, quad);
      double next = nu - omega / slope.value;
      if (!(slope.value > 0.0) || next <= lo || next >= hi)
        next = 0.5 * (lo + hi);
      if (next == nu) break;
      nu = next;
    }

    const EigenSystem& es = solver.at(nu).es;
    BoundState st;
    st.branch = k;
    st.nu = nu;
    st.energy = -nu * nu;
    st.amplitudes = es.eigenvectors[k];
    st.omega_slope = eigen_derivative_fh(m, cs, es, k, quad).value;
    st.norm_factor =
        contract(assemble_norm_matrix(m, cs, nu, quad), st.amplitudes);
    out.states.push_back(st);
    rep.has_root = true;
    rep.note = "root";
    out.branches.push_back(rep);
  }

  std::stable_sort(out.states.begin(), out.states.end(),
                   [](const BoundState& a, const BoundState& b) {
                     return a.energy < b.energy;
                   });
  return out;
}

InterlacingReport check_interlacing(const ManifoldSpec& m,
                                    const CenterSet& cs_full,
                                    const QuadratureConfig& quad,
                                    double root_tol) {
  if (cs_full.size() < 2)
    throw std::invalid_argument("check_interlacing: needs N + 1 >= 2");
  InterlacingReport rep;
  rep.interlaced = true;
  rep.min_interlace_margin = std::numeric_limits<double>::infinity();

  const double lo = std::max(nu_floor(m, cs_full), 0.3 * cs_full.mu_min());
  const double hi = 1.5 * std::max(cs_full.mu_max(), cs_full.mu_d());
  const int samples = 8;
  for (int s = 0; s < samples; ++s) {
    const double nu = lo * std::pow(hi / lo, s / (samples - 1.0));
    const PrincipalMatrix full = assemble(m, cs_full, nu, quad);
    const EigenDecomposition wf = jacobi_eigensystem(full.entries);
    const EigenDecomposition ws =
        jacobi_eigensystem(full.entries.leading_principal_submatrix());
    const double tol =
        1e-10 * std::max(1.0, full.entries.frobenius_norm());
    const int nn = cs_full.size() - 1;
    for (int k = 0; k < nn; ++k) {
      const double a = ws.eigenvalues[k] - wf.eigenvalues[k];
      const double b = wf.eigenvalues[k + 1] - ws.eigenvalues[k];
      rep.min_interlace_margin = std::min({rep.min_interlace_margin, a, b});
      if (a < -tol || b < -tol) rep.interlaced = false;
    }
  }

  const SpectrumResult full = solve_spectrum(m, cs_full, quad, root_tol);
  const SpectrumResult sub =
      solve_spectrum(m, cs_full.without_last(), quad, root_tol);
  if (full.states.empty() || sub.states.empty())
    throw std::runtime_error("check_interlacing: missing ground state");
  rep.e_gr_full = full.states.front().energy;
  rep.e_gr_sub = sub.states.front().energy;
  rep.deepening_margin = rep.e_gr_sub - rep.e_gr_full;
  rep.deepening = rep.deepening_margin > 0.0;

  double single_min = 0.0;
  const CenterSet sub_set = cs_full.without_last();
  for (int i = 0; i < sub_set.size(); ++i) {
    CenterSet one(m, {sub_set[i]});
    const SpectrumResult si = solve_spectrum(m, one, quad, root_tol);
    if (!si.states.empty())
      single_min = std::min(single_min, si.states.front().energy);
  }
  rep.below_single = rep.e_gr_sub <= single_min + root_tol;
  return rep;
}

PositivityReport ground_state_positivity(const SpectrumResult& spectrum,
                                         double root_tol) {
  if (spectrum.states.empty())
    throw std::invalid_argument("ground_state_positivity: no states");
  const BoundState& gr = spectrum.states.front();
  PositivityReport rep;
  rep.min_amplitude = gr.amplitudes.empty() ? 0.0 : gr.amplitudes[0];
  for (double a : gr.amplitudes) rep.min_amplitude = std::min(rep.min_amplitude, a);
  rep.all_positive = rep.min_amplitude > 0.0;
  if (spectrum.states.size() > 1) {
    rep.uniqueness_margin = gr.nu - spectrum.states[1].nu;
    rep.unique = rep.uniqueness_margin > root_tol;
  }
  return rep;
}

}  // namespace pointspec
