#include "pointspec/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "pointspec/spectral.hpp"
#include "pointspec/specfun.hpp"

using namespace pointspec;

namespace {
constexpr double kPi = 3.14159265358979323846;
const QuadratureConfig kQuad{};

CenterSet flat3_pair(double mu1, double mu2, double d) {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  return CenterSet(f3, {{Point::xyz(0, 0, 0), mu1}, {Point::xyz(d, 0, 0), mu2}});
}
}  // namespace

TEST_CASE("gershgorin certificate on the symmetric pair") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet cs = flat3_pair(1.0, 1.0, 1.0);
  // nu = 2: (2-1)/4pi > e^{-2}/4pi -> dominant
  CHECK(gershgorin_certificate(f3, cs, 2.0, kQuad).dominant);
  // nu = 1.2: 0.2/4pi < e^{-1.2}/4pi -> not dominant
  CHECK(!gershgorin_certificate(f3, cs, 1.2, kQuad).dominant);
  // single center: dominance iff the diagonal is positive
  const CenterSet one(f3, {{Point::xyz(0, 0, 0), 1.0}});
  CHECK(gershgorin_certificate(f3, one, 1.5, kQuad).dominant);
  CHECK(!gershgorin_certificate(f3, one, 0.5, kQuad).dominant);
}

TEST_CASE("certificate is monotone in nu") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet cs = flat3_pair(1.0, 2.0, 0.8);
  bool seen_true = false;
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0}) {
    const bool ok = gershgorin_certificate(f3, cs, nu, kQuad).dominant;
    if (seen_true) CHECK(ok);
    seen_true = seen_true || ok;
  }
  CHECK(seen_true);
}

TEST_CASE("numeric certificate: symmetric pair is tight") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const BoundCertificate cert =
      certified_lower_bound_numeric(f3, flat3_pair(1, 1, 1), kQuad);
  const double nu_expect = 1.0 + specfun::lambert_w0(std::exp(-1.0));
  CHECK(cert.nu_star == doctest::Approx(nu_expect).epsilon(1e-8));
  // N = 1: nu_star = mu
  const CenterSet one(f3, {{Point::xyz(0, 0, 0), 1.3}});
  CHECK(certified_lower_bound_numeric(f3, one, kQuad).nu_star ==
        doctest::Approx(1.3).epsilon(1e-8));
  // asymmetric pair: nu_star from the weaker row, above the ground root
  const BoundCertificate ac =
      certified_lower_bound_numeric(f3, flat3_pair(1, 2, 1), kQuad);
  const double weak_row = 2.0 + specfun::lambert_w0(std::exp(-2.0));
  CHECK(ac.nu_star == doctest::Approx(weak_row).epsilon(1e-6));
  const SpectrumResult sr = solve_spectrum(f3, flat3_pair(1, 2, 1), kQuad);
  CHECK(sr.states[0].nu <= ac.nu_star + 1e-9);
}

TEST_CASE("analytic lower bound closed forms") {
  BoundConstants flat_exact;
  flat_exact.c2 = 2.0;
  flat_exact.flat_exact = true;
  // N = 1 collapses to -mu^2 for every class
  for (ManifoldClass cls :
       {ManifoldClass::compact, ManifoldClass::cartan_hadamard}) {
    BoundConstants c = flat_exact;
    if (cls == ManifoldClass::compact) c.volume = 4.0 * kPi;
    const BoundCertificate b = analytic_lower_bound(cls, 3, c, 1, 1.5, 1.0);
    CHECK(b.e_star == doctest::Approx(-2.25).epsilon(1e-14));
  }
  // Cartan-Hadamard D=3 with flat-exact constants reproduces the
  // symmetric-pair Lambert root
  const BoundCertificate b =
      analytic_lower_bound(ManifoldClass::cartan_hadamard, 3, flat_exact, 2,
                           1.0, 1.0);
  const double nu_expect = 1.0 + specfun::lambert_w0(std::exp(-1.0));
  CHECK(b.nu_star == doctest::Approx(nu_expect).epsilon(1e-12));
  // D=2 Cartan-Hadamard with xi = 0 is refused
  CHECK_THROWS_AS(analytic_lower_bound(ManifoldClass::cartan_hadamard, 2,
                                       flat_exact, 2, 1.0, 1.0),
                  std::domain_error);
  // xi > 0 small enough that the Lambert argument stays right of -1/e
  BoundConstants with_xi = flat_exact;
  with_xi.xi = 0.003;
  const BoundCertificate b2 = analytic_lower_bound(
      ManifoldClass::cartan_hadamard, 2, with_xi, 2, 1.0, 1.0);
  CHECK(b2.e_star < 0.0);
  // and a configuration left of the branch point is refused
  BoundConstants big_xi = flat_exact;
  big_xi.xi = 0.25;
  CHECK_THROWS_AS(analytic_lower_bound(ManifoldClass::cartan_hadamard, 2,
                                       big_xi, 2, 1.0, 1.0),
                  std::domain_error);
}

TEST_CASE("soundness chain on random configurations") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> um(0.7, 1.8);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  BoundConstants flat_exact;
  flat_exact.c2 = 2.0;
  flat_exact.flat_exact = true;

  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<Center> centers;
    for (int i = 0; i < n; ++i)
      centers.push_back({Point::xyz(ux(rng) + 1.6 * i, ux(rng), ux(rng)),
                         um(rng)});
    const CenterSet cs(f3, centers);
    const BoundCertificate num = certified_lower_bound_numeric(f3, cs, kQuad);
    const BoundCertificate ana = analytic_lower_bound(
        ManifoldClass::cartan_hadamard, 3, flat_exact, n, cs.mu_max(),
        cs.mu_d());
    const SpectrumResult sr = solve_spectrum(f3, cs, kQuad);
    REQUIRE(!sr.states.empty());
    const double e_gr = sr.states[0].energy;
    INFO("trial " << trial << " ana " << ana.e_star << " num " << num.e_star
                  << " gr " << e_gr);
    CHECK(ana.e_star <= num.e_star + 1e-9);
    CHECK(num.e_star <= e_gr + 1e-9);
  }

  // H3 with exact constants: c = 1, C = 1, xi = sigma1 = kappa^2
  const ManifoldSpec h3 = ManifoldSpec::hyperbolic(3, 1.0);
  BoundConstants h3c = flat_exact;
  h3c.xi = 1.0;
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + trial % 2;
    std::vector<Center> centers;
    for (int i = 0; i < n; ++i)
      centers.push_back({Point::half_space(1.1 * i + 0.1 * ux(rng),
                                           0.2 * ux(rng), 1.0 + 0.3 * i),
                         um(rng)});
    const CenterSet cs(h3, centers);
    const BoundCertificate num = certified_lower_bound_numeric(h3, cs, kQuad);
    const BoundCertificate ana = analytic_lower_bound(
        ManifoldClass::cartan_hadamard, 3, h3c, n, cs.mu_max(), cs.mu_d());
    const SpectrumResult sr = solve_spectrum(h3, cs, kQuad);
    REQUIRE(!sr.states.empty());
    INFO("h3 trial " << trial);
    CHECK(ana.e_star <= num.e_star + 1e-9);
    CHECK(num.e_star <= sr.states[0].energy + 1e-9);
  }
}

TEST_CASE("compact analytic chain on the sphere") {
  const ManifoldSpec s2 = ManifoldSpec::sphere2(1.0);
  const BoundConstants cal = calibrate_sphere_constants(1.0);
  // two centers a quarter-circle apart
  const CenterSet cs(s2, {{Point::sphere(kPi / 2.0, 0.0), 1.0},
                          {Point::sphere(kPi / 2.0, kPi / 2.0), 1.0}});
  CHECK(cs.min_pair_distance() == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  const BoundCertificate ana = analytic_lower_bound(
      ManifoldClass::compact, 2, cal, cs.size(), cs.mu_max(), cs.mu_d());
  const BoundCertificate num = certified_lower_bound_numeric(s2, cs, kQuad);
  const SpectrumResult sr = solve_spectrum(s2, cs, kQuad);
  REQUIRE(!sr.states.empty());
  CHECK(ana.e_star <= num.e_star + 1e-9);
  CHECK(num.e_star <= sr.states.front().energy + 1e-9);
}

TEST_CASE("sphere constants calibration dominates the kernel") {
  const double radius = 1.0;
  const BoundConstants cal = calibrate_sphere_constants(radius);
  CHECK(cal.provenance == "calibrated");
  const ManifoldSpec s2 = ManifoldSpec::sphere2(radius);
  const int nt = 40, nd = 40;
  for (int it = 0; it < nt; ++it) {
    const double t = 1e-4 * std::pow(50.0 / 1e-4, it / (nt - 1.0));
    for (int id = 0; id < nd; ++id) {
      const double d = kPi * (id + 1.0) / nd;
      CHECK(heat_kernel_radial(s2, t, d) <=
            kernel_bound_envelope(s2, EnvelopeKind::upper_offdiag, t, d, cal) *
                (1.0 + 1e-12));
    }
  }
}

TEST_CASE("calibration sidecar round trip") {
  const std::string path = "calibration_test_sidecar.txt";
  std::remove(path.c_str());
  const BoundConstants cal = calibrate_sphere_constants(1.0);
  const ManifoldSpec s2 = ManifoldSpec::sphere2(1.0);
  store_calibration(path, calibration_key(s2), cal);
  BoundConstants loaded;
  REQUIRE(load_calibration(path, calibration_key(s2), loaded));
  CHECK(loaded.b_eps == doctest::Approx(cal.b_eps).epsilon(1e-15));
  CHECK(loaded.c2 == doctest::Approx(cal.c2));
  CHECK(loaded.provenance == "calibrated");
  BoundConstants missing;
  CHECK(!load_calibration(path, "sphere2(R=9.000000)", missing));
  std::remove(path.c_str());
}
