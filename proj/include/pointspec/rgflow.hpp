#ifndef POINTSPEC_RGFLOW_HPP
#define POINTSPEC_RGFLOW_HPP

// Renormalization-group machinery: the renormalized principal matrix at
// scale M with offsets Sigma_i, exact beta functions in D = 2 and 3, the
// coupling flow, and the scaling-covariance identity.

#include <vector>

#include "pointspec/principal.hpp"

namespace pointspec {

struct LandauPoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RGState {
  int dim = 2;       // D
  double scale = 1.0;  // M, dimension energy^{1/2}
  // lambda_R for D = 2; dimensionless lambda_hat = M lambda_R for D = 3
  double coupling = 0.0;
  std::vector<double> sigma;  // offsets, sigma[0] = 0
};

// Scheme-consistent state for a configuration: coupling fixed by
// Phi^R_11(-mu_1^2) = 0 at scale M, offsets by Phi^R_ii(-mu_i^2) = 0.
RGState rg_scheme(const ManifoldSpec& m, const CenterSet& cs, double scale,
                  const QuadratureConfig& quad);

// Sigma_i = int_0^inf [K_t(a_1,a_1) e^{-t mu_1^2} - K_t(a_i,a_i)
// e^{-t mu_i^2}] dt (Sigma_1 = 0)
std::vector<double> sigma_offsets(const ManifoldSpec& m, const CenterSet& cs,
                                  const QuadratureConfig& quad);

// renormalized diagonal subtraction J(E, M) =
// int_0^inf [K_t(a,a) e^{tE} - e^{-M^2 t}/(4 pi t)^{D/2}] dt
double subtracted_diagonal_integral(const ManifoldSpec& m, double energy,
                                    double scale,
                                    const QuadratureConfig& quad);

PrincipalMatrix renormalized_phi(const ManifoldSpec& m, const CenterSet& cs,
                                 const RGState& rg, double energy,
                                 const QuadratureConfig& quad);

// exact beta functions: -lambda^2/(2 pi) in D = 2,
// lambda_hat - lambda_hat^2/(4 pi) in D = 3
double beta(int dim, double coupling);

// integrated flow from M to gamma M; throws LandauPoleError when the
// denominator crosses zero on the path
double flow_coupling(int dim, double coupling_at_m, double gamma);

// max entrywise | Phi^R(M, lambda(M), gamma^2 E; gamma^{-2} g)
//               - gamma^{D-2} Phi^R(M, lambda(gamma M), E; g) |
double scaling_covariance_check(const ManifoldSpec& m, const CenterSet& cs,
                                const RGState& rg, double gamma, double energy,
                                const QuadratureConfig& quad);

// bound-state roots from det Phi^R(E) = 0 (zero eigenvalue branches of the
// symmetric renormalized matrix); sorted like solve_spectrum
std::vector<double> rg_spectrum_roots(const ManifoldSpec& m,
                                      const CenterSet& cs, const RGState& rg,
                                      const QuadratureConfig& quad,
                                      double root_tol = 1e-10);

}  // namespace pointspec

#endif
