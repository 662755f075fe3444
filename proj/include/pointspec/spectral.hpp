#ifndef POINTSPEC_SPECTRAL_HPP
#define POINTSPEC_SPECTRAL_HPP

// Eigenvalue branches omega^k(-nu^2) of the principal matrix, bound-state
// roots omega^k = 0, Feynman-Hellmann derivatives, Cauchy interlacing and
// Perron-Frobenius ground-state checks.

#include <string>
#include <vector>

#include "pointspec/principal.hpp"

namespace pointspec {

struct EigenSystem {
  double nu = 0.0;
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::vector<double>> eigenvectors;  // [k][i]
};

EigenSystem eigensystem(const PrincipalMatrix& phi);

struct BoundState {
  int branch = 0;                  // ascending-eigenvalue branch index
  double nu = 0.0;                 // root of omega^branch
  double energy = 0.0;             // -nu^2
  std::vector<double> amplitudes;  // unit eigenvector at the root
  double omega_slope = 0.0;        // d omega / d nu at the root (> 0)
  double norm_factor = 0.0;        // A^T [int t K e^{-t nu^2}] A (> 0)
};

struct BranchReport {
  int branch = 0;
  bool has_root = false;
  std::string note;  // "root", "at threshold / absent", ...
};

struct SpectrumResult {
  std::vector<BoundState> states;  // energy ascending; ground state first
  std::vector<BranchReport> branches;
};

SpectrumResult solve_spectrum(const ManifoldSpec& m, const CenterSet& cs,
                              const QuadratureConfig& quad,
                              double root_tol = 1e-10);

struct FhDerivative {
  double value = 0.0;
  bool used_finite_difference = false;  // degenerate-branch fallback
};

// d omega^k / d nu = A^k . (d Phi / d nu) . A^k (Feynman-Hellmann); falls
// back to central differences when the branch is degenerate.
FhDerivative eigen_derivative_fh(const ManifoldSpec& m, const CenterSet& cs,
                                 const EigenSystem& es, int k,
                                 const QuadratureConfig& quad);

// eigenvalues of Phi(-nu^2) for each nu in the grid (branch plot data)
std::vector<std::vector<double>> eigen_branch_scan(
    const ManifoldSpec& m, const CenterSet& cs, const std::vector<double>& nus,
    const QuadratureConfig& quad);

struct InterlacingReport {
  bool interlaced = false;
  bool deepening = false;     // E_gr^{N+1} < E_gr^{N}
  bool below_single = false;  // E_gr^{N} <= min_i E_single(i)
  double min_interlace_margin = 0.0;
  double deepening_margin = 0.0;  // E_gr^N - E_gr^{N+1}
  double e_gr_full = 0.0;
  double e_gr_sub = 0.0;
  bool pass() const { return interlaced && deepening && below_single; }
};

InterlacingReport check_interlacing(const ManifoldSpec& m,
                                    const CenterSet& cs_full,
                                    const QuadratureConfig& quad,
                                    double root_tol = 1e-10);

struct PositivityReport {
  bool all_positive = false;
  double min_amplitude = 0.0;
  bool unique = true;
  double uniqueness_margin = 0.0;  // nu_gr - nu_next when a second root exists
  bool pass() const { return all_positive && unique; }
};

PositivityReport ground_state_positivity(const SpectrumResult& spectrum,
                                         double root_tol = 1e-10);

}  // namespace pointspec

#endif
