#ifndef POINTSPEC_PERTURB_HPP
#define POINTSPEC_PERTURB_HPP

// Tunneling-regime perturbation theory: second-order root shifts
// delta nu_k = [dPhi_kk/dnu]^{-1} sum_{l != k} Phi_kl^2 / Phi_ll at
// nu = mu_k, the off-diagonal exponential asymptotics, and comparison
// against the exact solver.

#include "pointspec/spectral.hpp"

namespace pointspec {

struct PerturbationShift {
  double delta_nu = 0.0;
  double dominance_ratio = 0.0;  // min |Phi_ll| / max |Phi_kl|
  bool in_regime = false;        // dominance_ratio >= 1e3
};

// requires pairwise distinct mu's; k indexes the center whose branch sits
// at nu = mu_k unperturbed
PerturbationShift delta_nu(const ManifoldSpec& m, const CenterSet& cs, int k,
                           const QuadratureConfig& quad);

// Leading exponential form of Phi_ij(-mu^2) for widely separated centers;
// supported where the geodesic-flow factor is exact (flat R^2/R^3 and H^3).
double tunneling_offdiag_asymptotic(const ManifoldSpec& m, double d,
                                    double mu_k);

struct PerturbationReport {
  int branch = 0;          // center index k
  double nu0 = 0.0;        // mu_k
  double delta_nu = 0.0;   // perturbative shift
  double delta_e = 0.0;    // ~ -2 mu_k delta_nu
  double exact_nu = 0.0;   // nearest solver root
  double relative_error = 0.0;
  double regime_ratio = 0.0;  // mu_d^2 / mu_min^2
  bool in_regime = false;
};

PerturbationReport compare_with_exact(const ManifoldSpec& m,
                                      const CenterSet& cs, int k,
                                      const QuadratureConfig& quad,
                                      double root_tol = 1e-10);

}  // namespace pointspec

#endif
