#include "pointspec/specfun.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace pointspec::specfun;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("bessel K0/K1 against the integral-representation oracle") {
  // log grid spanning series, mid-range and asymptotic branches
  for (double x : {1e-4, 1e-2, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 5.0, 10.0,
                   17.0, 29.9, 30.1, 45.0, 80.0, 200.0}) {
    const double k0 = bessel_k0(x);
    const double k1 = bessel_k1(x);
    CHECK(k0 == doctest::Approx(oracles::bessel_k_int_rep(0, x)).epsilon(1e-12));
    CHECK(k1 == doctest::Approx(oracles::bessel_k_int_rep(1, x)).epsilon(1e-12));
  }
  // frozen reference points
  CHECK(bessel_k0(1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-13));
  CHECK(bessel_k1(1.0) == doctest::Approx(0.60190723019723458).epsilon(1e-13));
}

TEST_CASE("bessel K_{1/2} closed form") {
  for (double x : {0.1, 1.0, 2.5, 10.0})
    CHECK(bessel_k_half(x) ==
          doctest::Approx(std::sqrt(kPi / (2.0 * x)) * std::exp(-x))
              .epsilon(1e-15));
  CHECK(bessel_k_half(1.0) == doctest::Approx(0.4610685).epsilon(1e-6));
}

TEST_CASE("bessel domain errors and underflow") {
  CHECK_THROWS_AS(bessel_k0(0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k1(-1.0), std::domain_error);
  CHECK(bessel_k0(750.0) == 0.0);
}

TEST_CASE("bessel bound values") {
  CHECK(bessel_bound(BesselBoundKind::k0_coarse, 2.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(bessel_bound(BesselBoundKind::k0_sharp, 1.0) ==
        doctest::Approx(std::exp(-0.5) * (1.0 + std::log(2.0)))
            .epsilon(1e-15));
  CHECK(bessel_bound(BesselBoundKind::k1, 2.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(bessel_bound(BesselBoundKind::k1, 0.0), std::domain_error);
}

TEST_CASE("bessel bound lemmas hold on [0.1, 50]") {
  for (int i = 0; i < 10000; ++i) {
    const double x = 0.1 * std::pow(500.0, i / 9999.0);
    const double k0 = bessel_k0(x);
    CHECK(k0 <= bessel_bound(BesselBoundKind::k0_coarse, x));
    CHECK(k0 <= bessel_bound(BesselBoundKind::k0_sharp, x));
    CHECK(bessel_k1(x) <= bessel_bound(BesselBoundKind::k1, x));
  }
}

TEST_CASE("log lemma ln u > (u-1)/u") {
  for (int i = 0; i < 10000; ++i) {
    const double u = 1e-3 * std::pow(1e4, i / 9999.0);
    if (std::abs(u - 1.0) < 1e-9) continue;
    CHECK(std::log(u) > (u - 1.0) / u);
  }
}

TEST_CASE("K0 asymptotic ratio approaches 1") {
  const double x = 50.0;
  const double ratio =
      bessel_k0(x) / (std::sqrt(kPi / (2.0 * x)) * std::exp(-x));
  CHECK(std::abs(ratio - 1.0) < 0.01);
}

TEST_CASE("lambert W0 fixed points and oracle") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lambert_w0(1.0) ==
        doctest::Approx(oracles::lambert_newton(1.0)).epsilon(1e-13));
  CHECK(lambert_w0(1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-12));
  CHECK_THROWS_AS(lambert_w0(-1.0), std::domain_error);
}

TEST_CASE("lambert W0 residual invariant") {
  const double lo = -std::exp(-1.0) + 1e-9;
  // branch-point neighbourhood, then log-spaced up to 1e6
  for (int i = 0; i < 200; ++i) {
    const double x = lo + (0.5 - lo) * i / 199.0;
    const double w = lambert_w0(x);
    CHECK(w >= -1.0);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
  for (int i = 0; i < 10000; ++i) {
    const double x = 1e-6 * std::pow(1e12, i / 9999.0);
    const double w = lambert_w0(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("legendre recurrence against explicit polynomials") {
  const auto p2 = [](double x) { return 0.5 * (3.0 * x * x - 1.0); };
  const auto p3 = [](double x) { return 0.5 * (5.0 * x * x * x - 3.0 * x); };
  const auto p4 = [](double x) {
    return 0.125 * (35.0 * x * x * x * x - 30.0 * x * x + 3.0);
  };
  for (int i = 0; i <= 50; ++i) {
    const double x = -1.0 + 2.0 * i / 50.0;
    CHECK(legendre_p(0, x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(legendre_p(1, x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(legendre_p(2, x) == doctest::Approx(p2(x)).epsilon(1e-14));
    CHECK(legendre_p(3, x) == doctest::Approx(p3(x)).epsilon(1e-14));
    CHECK(legendre_p(4, x) == doctest::Approx(p4(x)).epsilon(1e-14));
  }
  CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-14));
}

TEST_CASE("legendre stays bounded at high order") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int l : {10, 100, 1000, 5000, 10000}) {
    for (int s = 0; s < 20; ++s) {
      const double v = legendre_p(l, u(rng));
      CHECK(std::abs(v) <= 1.0 + 1e-12);
    }
    CHECK(legendre_p(l, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(legendre_p(2, 1.5), std::domain_error);
  CHECK_THROWS_AS(legendre_p(-1, 0.0), std::domain_error);
  CHECK_THROWS_AS(legendre_p(10001, 0.0), std::domain_error);
}
