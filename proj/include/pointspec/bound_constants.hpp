#ifndef POINTSPEC_BOUND_CONSTANTS_HPP
#define POINTSPEC_BOUND_CONSTANTS_HPP

#include <string>

namespace pointspec {

// Constants entering the heat-kernel bound envelopes and the closed-form
// ground-state bounds. Exact choices exist for flat space (C = 1, C2 = 2,
// the Gaussian saturates its own envelope) and for H^3 (c = 1, xi = sigma1);
// sphere constants are calibrated numerically against the exact kernel.
struct BoundConstants {
  double c2 = 2.0;          // Gaussian exponent constant, >= 2
  double regularity_a = 1.0;  // A >= 1
  double b_eps = 0.0;        // B(eps), compact off-diagonal t^{-D/2} weight
  double c_ch = 1.0;         // C(eps, kappa), Cartan-Hadamard prefactor
  double c_low = 1.0;        // c, diagonal lower-bound constant
  double xi = 0.0;           // sigma1 + delta, spectral shift
  double volume = 0.0;       // V(M), compact only
  bool flat_exact = false;   // permits C2 == 2
  std::string provenance = "exact";

  void check() const;  // throws std::invalid_argument on violations
};

}  // namespace pointspec

#endif
