#ifndef POINTSPEC_SPECFUN_HPP
#define POINTSPEC_SPECFUN_HPP

// Modified Bessel functions K0, K1, K_{1/2}, their explicit exponential
// bounds, the principal Lambert W branch and Legendre polynomials.

#include <stdexcept>

namespace pointspec::specfun {

// K_nu(x), nu in {0, 1, 1/2}; relative error <= 1e-12 on [1e-6, 700],
// underflow to zero beyond. Throws std::domain_error for x <= 0.
double bessel_k0(double x);
double bessel_k1(double x);
double bessel_k_half(double x);

enum class BesselBoundKind { k0_coarse, k0_sharp, k1 };

// Explicit upper bounds: (2/x)e^{-x/2}; e^{-x/2}[2/(1+x) + ln((x+1)/x)];
// e^{-x/2}(1/x + 1/2).
double bessel_bound(BesselBoundKind kind, double x);

// Principal branch W0: w e^w = x, w >= -1, for x >= -1/e.
double lambert_w0(double x);

// P_l(x) for 0 <= l <= 10000, |x| <= 1; extended-precision recurrence.
double legendre_p(int l, double x);

}  // namespace pointspec::specfun

#endif
