#ifndef POINTSPEC_BOUNDS_HPP
#define POINTSPEC_BOUNDS_HPP

// Ground-state lower bounds: the numerical Gershgorin diagonal-dominance
// certificate and the closed-form Lambert-W bounds for compact and
// Cartan-Hadamard manifolds.

#include <string>
#include <vector>

#include "pointspec/bound_constants.hpp"
#include "pointspec/principal.hpp"

namespace pointspec {

enum class BoundMethod {
  gershgorin_numeric,
  lambert_compact,
  lambert_cartan_hadamard
};

struct BoundCertificate {
  double nu_star = 0.0;
  double e_star = 0.0;  // -nu_star^2
  BoundMethod method = BoundMethod::gershgorin_numeric;
  std::vector<double> row_margins;  // per-row Phi_ii - sum |Phi_ij| at nu_star
};

struct GershgorinResult {
  bool dominant = false;
  std::vector<double> row_margins;
};

// strict row diagonal dominance with positive diagonal at E = -nu^2
GershgorinResult gershgorin_certificate(const ManifoldSpec& m,
                                        const CenterSet& cs, double nu,
                                        const QuadratureConfig& quad);

// smallest nu_star with the certificate holding for all nu >= nu_star
// (entry monotonicity makes one bisection sound); E_gr >= -nu_star^2
BoundCertificate certified_lower_bound_numeric(const ManifoldSpec& m,
                                               const CenterSet& cs,
                                               const QuadratureConfig& quad,
                                               double tol = 1e-10);

enum class ManifoldClass { compact, cartan_hadamard };

// closed-form Lambert-W bounds; mu = max_i mu_i, mu_d = 1/min pair distance
BoundCertificate analytic_lower_bound(ManifoldClass cls, int dim,
                                      const BoundConstants& constants, int n,
                                      double mu_max, double mu_d);

// Numerically calibrated sphere constants: smallest B(eps) with A = 1 such
// that the compact upper envelope dominates the exact kernel on a log grid.
BoundConstants calibrate_sphere_constants(double radius, double c2 = 2.5);

// sidecar cache of calibrated constants, keyed by geometry parameters
std::string calibration_key(const ManifoldSpec& m);
bool load_calibration(const std::string& path, const std::string& key,
                      BoundConstants& out);
void store_calibration(const std::string& path, const std::string& key,
                       const BoundConstants& c);

}  // namespace pointspec

#endif
