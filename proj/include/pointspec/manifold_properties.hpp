#ifndef POINTSPEC_MANIFOLD_PROPERTIES_HPP
#define POINTSPEC_MANIFOLD_PROPERTIES_HPP

// Numerical verification of the heat-kernel property suite: symmetry,
// positivity, semigroup, stochastic completeness, short-time diagonal
// asymptotics, metric scaling and the heat equation itself.

#include <string>
#include <vector>

#include "pointspec/manifold.hpp"

namespace pointspec {

struct PropertyResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

double semigroup_residual(const ManifoldSpec& m, double t1, double t2,
                          double dxy);
double stochastic_completeness_residual(const ManifoldSpec& m, double t);
double short_time_diag_residual(const ManifoldSpec& m, double t);
double scaling_residual(const ManifoldSpec& m, double alpha, double t,
                        double d);
double symmetry_residual(const ManifoldSpec& m);
// flat: finite differences in polar normal coordinates; sphere: analytic
// Legendre series for the Laplacian; unsupported elsewhere (returns -1)
double heat_equation_residual(const ManifoldSpec& m, double t, double d);
bool positivity_check(const ManifoldSpec& m);

// the full Appendix-style suite at the acceptance tolerances
std::vector<PropertyResult> run_property_suite(const ManifoldSpec& m);

}  // namespace pointspec

#endif
