#include "pointspec/wavefield.hpp"

#include <cmath>

#include "doctest.h"
#include "pointspec/bounds.hpp"
#include "pointspec/specfun.hpp"

using namespace pointspec;

namespace {
constexpr double kPi = 3.14159265358979323846;
const QuadratureConfig kQuad{};

SpectrumResult solve_single(const ManifoldSpec& m, const Point& a, double mu) {
  return solve_spectrum(m, CenterSet(m, {{a, mu}}), kQuad);
}
}  // namespace

TEST_CASE("psi closed forms for a single flat center") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const Point o3 = Point::xyz(0, 0, 0);
  const SpectrumResult s3 = solve_single(f3, o3, 1.0);
  REQUIRE(s3.states.size() == 1);
  const BoundState& b3 = s3.states[0];
  // norm_factor = 1/(8 pi nu)
  CHECK(b3.norm_factor ==
        doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-8));
  // psi(r) = sqrt(nu/2pi) e^{-nu r}/r
  const double psi3 = evaluate_psi(f3, CenterSet(f3, {{o3, 1.0}}), b3,
                                   Point::xyz(1, 0, 0), kQuad);
  CHECK(psi3 ==
        doctest::Approx(std::sqrt(1.0 / (2.0 * kPi)) * std::exp(-1.0))
            .epsilon(1e-8));

  const ManifoldSpec f2 = ManifoldSpec::flat(2);
  const Point o2 = Point::xy(0, 0);
  const SpectrumResult s2 = solve_single(f2, o2, 1.0);
  const BoundState& b2 = s2.states[0];
  // norm_factor = 1/(4 pi nu^2)
  CHECK(b2.norm_factor ==
        doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-8));
  // psi(r) = (nu/sqrt(pi)) K0(nu r)
  const double psi2 = evaluate_psi(f2, CenterSet(f2, {{o2, 1.0}}), b2,
                                   Point::xy(1, 0), kQuad);
  CHECK(psi2 == doctest::Approx(specfun::bessel_k0(1.0) / std::sqrt(kPi))
                    .epsilon(1e-8));

  CHECK_THROWS_AS(
      evaluate_psi(f3, CenterSet(f3, {{o3, 1.0}}), b3, o3, kQuad),
      std::domain_error);
}

TEST_CASE("norm factor equals the Feynman-Hellmann slope over 2 nu") {
  const ManifoldSpec m = ManifoldSpec::hyperbolic(3, 1.0);
  const CenterSet cs(m, {{Point::half_space(0, 0, 1.0), 1.0},
                         {Point::half_space(0.8, 0, 1.2), 1.3}});
  const SpectrumResult sr = solve_spectrum(m, cs, kQuad);
  for (const BoundState& st : sr.states)
    CHECK(st.norm_factor ==
          doctest::Approx(st.omega_slope / (2.0 * st.nu)).epsilon(1e-8));
}

TEST_CASE("radial resolvent table accuracy") {
  for (const ManifoldSpec& m :
       {ManifoldSpec::flat(2), ManifoldSpec::sphere2(1.0),
        ManifoldSpec::hyperbolic(3, 1.0)}) {
    const double nu = 1.2;
    const double dmax = m.compact() ? kPi : 12.0;
    const RadialResolventTable table(m, nu, dmax, kQuad);
    for (double d : {1e-4, 0.02, 0.3, 1.1, 2.7}) {
      if (d >= table.d_max()) continue;
      INFO(m.describe() << " d=" << d);
      CHECK(table(d) ==
            doctest::Approx(free_resolvent_radial(m, d, nu, kQuad))
                .epsilon(1e-8));
    }
  }
}

TEST_CASE("L2 norm is 1 for flat single centers") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const Point o3 = Point::xyz(0, 0, 0);
  const CenterSet c3(f3, {{o3, 1.0}});
  const NormResult n3 = l2_norm(f3, c3, solve_single(f3, o3, 1.0).states[0], kQuad);
  CHECK(std::abs(n3.value - 1.0) <= 1e-4);
  CHECK(!n3.under_resolved);

  const ManifoldSpec f2 = ManifoldSpec::flat(2);
  const Point o2 = Point::xy(0, 0);
  const CenterSet c2(f2, {{o2, 1.0}});
  const NormResult n2 = l2_norm(f2, c2, solve_single(f2, o2, 1.0).states[0], kQuad);
  CHECK(std::abs(n2.value - 1.0) <= 1e-4);
}

TEST_CASE("L2 norm is 1 for pairs and on curved geometries") {
  // flat pair, both states
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet pair(f3, {{Point::xyz(0, 0, 0), 2.0},
                            {Point::xyz(1, 0, 0), 2.0}});
  const SpectrumResult sr = solve_spectrum(f3, pair, kQuad);
  REQUIRE(sr.states.size() == 2);
  for (const BoundState& st : sr.states) {
    const NormResult n = l2_norm(f3, pair, st, kQuad);
    INFO("state nu=" << st.nu);
    CHECK(std::abs(n.value - 1.0) <= 1e-4);
  }

  const ManifoldSpec s2 = ManifoldSpec::sphere2(1.0);
  const Point ps = Point::sphere(1.0, 0.5);
  const CenterSet cs2(s2, {{ps, 1.0}});
  const NormResult ns = l2_norm(s2, cs2, solve_single(s2, ps, 1.0).states[0], kQuad);
  CHECK(std::abs(ns.value - 1.0) <= 1e-3);

  const ManifoldSpec h3 = ManifoldSpec::hyperbolic(3, 1.0);
  const Point ph = Point::half_space(0, 0, 1.0);
  const CenterSet ch(h3, {{ph, 1.0}});
  const NormResult nh = l2_norm(h3, ch, solve_single(h3, ph, 1.0).states[0], kQuad);
  CHECK(std::abs(nh.value - 1.0) <= 1e-3);
}

TEST_CASE("ground state is positive, excited pair state antisymmetric") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet pair(f3, {{Point::xyz(0, 0, 0), 2.0},
                            {Point::xyz(1, 0, 0), 2.0}});
  const SpectrumResult sr = solve_spectrum(f3, pair, kQuad);
  REQUIRE(sr.states.size() == 2);

  const WaveField ground = sample_rays(f3, pair, sr.states[0], 6, 24, 6.0, kQuad);
  for (const WaveSample& s : ground.samples) CHECK(s.psi > 0.0);

  // midpoint symmetry: psi_exc(x) + psi_exc(mirror x) = 0
  const BoundState& exc = sr.states[1];
  for (double y : {0.3, 0.9, 2.0}) {
    const double a =
        evaluate_psi(f3, pair, exc, Point::xyz(0.2, y, 0.0), kQuad);
    const double b =
        evaluate_psi(f3, pair, exc, Point::xyz(0.8, y, 0.0), kQuad);
    CHECK(std::abs(a + b) <= 1e-8 * std::max(1.0, std::abs(a)));
  }
  // and strictly positive at the midplane for the ground state
  CHECK(evaluate_psi(f3, pair, sr.states[0], Point::xyz(0.5, 0.4, 0.0), kQuad) >
        0.0);
}

TEST_CASE("decay rate fits") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const Point o3 = Point::xyz(0, 0, 0);
  const CenterSet c3(f3, {{o3, 1.0}});
  const double r3 = decay_rate_fit(f3, c3, solve_single(f3, o3, 1.0).states[0], kQuad);
  CHECK(std::abs(r3 - 1.0) <= 0.01);

  const ManifoldSpec f2 = ManifoldSpec::flat(2);
  const Point o2 = Point::xy(0, 0);
  const CenterSet c2(f2, {{o2, 1.0}});
  const double r2 = decay_rate_fit(f2, c2, solve_single(f2, o2, 1.0).states[0], kQuad);
  CHECK(std::abs(r2 - 1.0) <= 0.02);

  const ManifoldSpec h3 = ManifoldSpec::hyperbolic(3, 1.0);
  const Point ph = Point::half_space(0, 0, 1.0);
  const CenterSet ch(h3, {{ph, 1.0}});
  const double rh = decay_rate_fit(h3, ch, solve_single(h3, ph, 1.0).states[0], kQuad);
  CHECK(std::abs(rh - std::sqrt(2.0)) <= 0.05 * std::sqrt(2.0));

  // sphere window [2/nu, 8/nu] does not fit: insufficient-range error
  const ManifoldSpec s2 = ManifoldSpec::sphere2(1.0);
  const Point ps = Point::sphere(1.0, 0.5);
  const CenterSet cs2(s2, {{ps, 1.0}});
  CHECK_THROWS_AS(
      decay_rate_fit(s2, cs2, solve_single(s2, ps, 1.0).states[0], kQuad),
      std::domain_error);
}

TEST_CASE("psi diverges at centers with the local free-resolvent power") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const Point o3 = Point::xyz(0, 0, 0);
  const CenterSet c3(f3, {{o3, 1.0}});
  const BoundState b3 = solve_single(f3, o3, 1.0).states[0];
  // local exponent of |psi| ~ d^{-1} in 3D on d in [1e-3, 1e-2]
  const double p1 = evaluate_psi(f3, c3, b3, Point::xyz(1e-3, 0, 0), kQuad);
  const double p2 = evaluate_psi(f3, c3, b3, Point::xyz(1e-2, 0, 0), kQuad);
  const double expo = std::log(p1 / p2) / std::log(1e-2 / 1e-3);
  CHECK(std::abs(expo - 1.0) <= 0.1);

  const ManifoldSpec f2 = ManifoldSpec::flat(2);
  const Point o2 = Point::xy(0, 0);
  const CenterSet c2(f2, {{o2, 1.0}});
  const BoundState b2 = solve_single(f2, o2, 1.0).states[0];
  // logarithmic divergence in 2D: psi(d)/ln(1/d) -> const within 10%
  const double q1 = evaluate_psi(f2, c2, b2, Point::xy(1e-3, 0), kQuad) /
                    std::log(1e3);
  const double q2 = evaluate_psi(f2, c2, b2, Point::xy(1e-2, 0), kQuad) /
                    std::log(1e2);
  CHECK(std::abs(q1 / q2 - 1.0) <= 0.1);
}

TEST_CASE("pointwise bounds dominate the wave function") {
  BoundConstants flat_exact;
  flat_exact.c2 = 2.0;
  flat_exact.flat_exact = true;

  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const Point o3 = Point::xyz(0, 0, 0);
  const CenterSet c3(f3, {{o3, 1.0}});
  const BoundState b3 = solve_single(f3, o3, 1.0).states[0];
  const WaveField w3 = sample_rays(f3, c3, b3, 4, 30, 8.0, kQuad);
  const PointwiseBoundReport r3 = pointwise_bound_check(f3, c3, w3, flat_exact);
  CHECK(r3.pass);
  CHECK(r3.checked > 0);
  // flat saturates its own envelope: margins nonnegative but tiny
  CHECK(r3.worst_margin >= -1e-10);

  const ManifoldSpec f2 = ManifoldSpec::flat(2);
  const Point o2 = Point::xy(0, 0);
  const CenterSet c2(f2, {{o2, 1.0}});
  const BoundState b2 = solve_single(f2, o2, 1.0).states[0];
  const WaveField w2 = sample_rays(f2, c2, b2, 4, 30, 8.0, kQuad);
  CHECK(pointwise_bound_check(f2, c2, w2, flat_exact).pass);

  const ManifoldSpec h3 = ManifoldSpec::hyperbolic(3, 1.0);
  const Point ph = Point::half_space(0, 0, 1.0);
  const CenterSet ch(h3, {{ph, 1.0}});
  const BoundState bh = solve_single(h3, ph, 1.0).states[0];
  const WaveField wh = sample_rays(h3, ch, bh, 4, 30, 8.0, kQuad);
  CHECK(pointwise_bound_check(h3, ch, wh, flat_exact).pass);
}

TEST_CASE("pointwise bounds on the sphere with calibrated constants") {
  const ManifoldSpec s2 = ManifoldSpec::sphere2(1.0);
  const BoundConstants cal = calibrate_sphere_constants(1.0);
  const CenterSet cs(s2, {{Point::sphere(1.0, 0.5), 1.0},
                          {Point::sphere(2.2, 1.8), 1.2}});
  const SpectrumResult sr = solve_spectrum(s2, cs, kQuad);
  REQUIRE(!sr.states.empty());
  const WaveField field =
      sample_rays(s2, cs, sr.states.front(), 6, 24, 2.9, kQuad);
  const PointwiseBoundReport rep = pointwise_bound_check(s2, cs, field, cal);
  CHECK(rep.checked > 0);
  CHECK(rep.pass);
}

TEST_CASE("H0 expectation diverges with the cutoff") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const Point o3 = Point::xyz(0, 0, 0);
  const CenterSet c3(f3, {{o3, 1.0}});
  const BoundState b3 = solve_single(f3, o3, 1.0).states[0];
  const double v1 = h0_expectation_cutoff(f3, c3, b3, 1e-2, kQuad);
  const double v2 = h0_expectation_cutoff(f3, c3, b3, 1e-4, kQuad);
  const double v3 = h0_expectation_cutoff(f3, c3, b3, 1e-6, kQuad);
  CHECK(v2 > v1);
  CHECK(v3 > v2);
  // eps^{-1/2} scaling: value(eps) * sqrt(eps) -> const, ratio -> 2
  CHECK(v2 * 1e-2 == doctest::Approx(v3 * 1e-3).epsilon(0.02));
  CHECK(h0_expectation_cutoff(f3, c3, b3, 0.25e-4, kQuad) / v2 ==
        doctest::Approx(2.0).epsilon(0.05));

  const ManifoldSpec f2 = ManifoldSpec::flat(2);
  const Point o2 = Point::xy(0, 0);
  const CenterSet c2(f2, {{o2, 1.0}});
  const BoundState b2 = solve_single(f2, o2, 1.0).states[0];
  const double w2 = h0_expectation_cutoff(f2, c2, b2, 1e-4, kQuad);
  const double w3 = h0_expectation_cutoff(f2, c2, b2, 1e-8, kQuad);
  // ln(1/eps) scaling
  CHECK(w2 / std::log(1e4) == doctest::Approx(w3 / std::log(1e8)).epsilon(0.05));
}
