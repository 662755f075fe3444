#include "pointspec/spectral.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "pointspec/specfun.hpp"

using namespace pointspec;

namespace {
constexpr double kPi = 3.14159265358979323846;
const QuadratureConfig kQuad{};

CenterSet flat3_pair(double mu1, double mu2, double d) {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  return CenterSet(f3, {{Point::xyz(0, 0, 0), mu1}, {Point::xyz(d, 0, 0), mu2}});
}

Point generic_point(const ManifoldSpec& m) {
  switch (m.geometry()) {
    case Geometry::FlatEuclidean:
      return m.dim() == 2 ? Point::xy(0, 0) : Point::xyz(0, 0, 0);
    case Geometry::Sphere2:
      return Point::sphere(1.0, 0.5);
    case Geometry::Hyperbolic:
      return m.dim() == 2 ? Point::half_plane(0.0, 1.0)
                          : Point::half_space(0, 0, 1.0);
  }
  return Point::xy(0, 0);
}
}  // namespace

TEST_CASE("eigensystem basics") {
  PrincipalMatrix pm;
  pm.nu = 1.0;
  pm.entries = SymMatrix(1);
  pm.entries(0, 0) = 0.0;
  EigenSystem es = eigensystem(pm);
  CHECK(es.eigenvalues[0] == 0.0);
  CHECK(es.eigenvectors[0][0] == doctest::Approx(1.0));

  const double c = std::exp(-1.0) / (4.0 * kPi);
  pm.entries = SymMatrix(2);
  pm.entries.set_sym(0, 1, -c);
  es = eigensystem(pm);
  CHECK(es.eigenvalues[0] == doctest::Approx(-c).epsilon(1e-14));
  CHECK(es.eigenvalues[1] == doctest::Approx(c).epsilon(1e-14));
  CHECK(es.eigenvectors[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(es.eigenvectors[0][1] == doctest::Approx(1.0 / std::sqrt(2.0)));

  pm.entries = SymMatrix(2);
  pm.entries(0, 0) = 0.1;
  pm.entries(1, 1) = 0.3;
  es = eigensystem(pm);
  CHECK(es.eigenvalues[0] == doctest::Approx(0.1));
  CHECK(es.eigenvalues[1] == doctest::Approx(0.3));
  CHECK(std::abs(es.eigenvectors[0][0]) == doctest::Approx(1.0));
}

TEST_CASE("jacobi eigensystem properties on random symmetric matrices") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a.set_sym(i, j, u(rng));
    const EigenDecomposition d = jacobi_eigensystem(a);
    // residual || A v - w v || and orthonormality
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        double av = 0.0;
        for (int j = 0; j < n; ++j) av += a(i, j) * d.eigenvectors[k][j];
        CHECK(av == doctest::Approx(d.eigenvalues[k] * d.eigenvectors[k][i])
                        .epsilon(1e-10)
                        .scale(a.frobenius_norm()));
      }
      for (int l = k; l < n; ++l) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i)
          dot += d.eigenvectors[k][i] * d.eigenvectors[l][i];
        CHECK(dot == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
      }
      if (k > 0) CHECK(d.eigenvalues[k] >= d.eigenvalues[k - 1]);
    }
  }
}

TEST_CASE("single center binds at nu = mu on all five geometries") {
  for (const ManifoldSpec& m :
       {ManifoldSpec::flat(2), ManifoldSpec::flat(3),
        ManifoldSpec::sphere2(1.0), ManifoldSpec::hyperbolic(2, 1.0),
        ManifoldSpec::hyperbolic(3, 1.0)}) {
    const CenterSet cs(m, {{generic_point(m), 1.0}});
    const SpectrumResult sr = solve_spectrum(m, cs, kQuad);
    REQUIRE(sr.states.size() == 1);
    const double tol =
        (m.geometry() == Geometry::FlatEuclidean || m.dim() == 3) ? 1e-8
                                                                  : 1e-6;
    INFO(m.describe());
    CHECK(std::abs(sr.states[0].nu - 1.0) <= tol);
  }
}

TEST_CASE("symmetric pair: Lambert-W closed form") {
  // mu = 1, d = 1: ground nu = 1 + W(e^{-1}); antisymmetric branch at
  // threshold (mu d = 1)
  const SpectrumResult sr = solve_spectrum(ManifoldSpec::flat(3),
                                           flat3_pair(1.0, 1.0, 1.0), kQuad);
  REQUIRE(sr.states.size() == 1);
  const double nu_expect = 1.0 + specfun::lambert_w0(std::exp(-1.0));
  CHECK(sr.states[0].nu == doctest::Approx(nu_expect).epsilon(1e-9));
  CHECK(sr.states[0].energy ==
        doctest::Approx(-nu_expect * nu_expect).epsilon(1e-9));
  CHECK(sr.branches[0].has_root != sr.branches[1].has_root);

  // mu = 2, d = 1: both Lambert branches bind
  const SpectrumResult sr2 = solve_spectrum(ManifoldSpec::flat(3),
                                            flat3_pair(2.0, 2.0, 1.0), kQuad);
  REQUIRE(sr2.states.size() == 2);
  const double gr = 2.0 + specfun::lambert_w0(std::exp(-2.0));
  const double ex = 2.0 + specfun::lambert_w0(-std::exp(-2.0));
  CHECK(sr2.states[0].nu == doctest::Approx(gr).epsilon(1e-9));
  CHECK(sr2.states[1].nu == doctest::Approx(ex).epsilon(1e-9));
  // interlacing ordering E_gr < -mu^2 < E_exc
  CHECK(sr2.states[0].energy < -4.0);
  CHECK(sr2.states[1].energy > -4.0);
}

TEST_CASE("symmetric pair closed form across (mu, d) grid") {
  for (double mu : {0.5, 1.0, 2.0}) {
    for (double d : {0.5, 1.0, 3.0}) {
      if (mu * d < 0.2 || mu * d > 10.0) continue;
      const SpectrumResult sr = solve_spectrum(ManifoldSpec::flat(3),
                                               flat3_pair(mu, mu, d), kQuad);
      REQUIRE(!sr.states.empty());
      const double expect =
          mu + specfun::lambert_w0(std::exp(-mu * d)) / d;
      CHECK(sr.states[0].nu == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("root residual contract") {
  const CenterSet cs = flat3_pair(1.0, 2.0, 1.3);
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const double root_tol = 1e-10;
  const SpectrumResult sr = solve_spectrum(f3, cs, kQuad, root_tol);
  for (const BoundState& st : sr.states) {
    const PrincipalMatrix pm = assemble(f3, cs, st.nu, kQuad);
    const EigenSystem es = eigensystem(pm);
    CHECK(std::abs(es.eigenvalues[st.branch]) <=
          root_tol * std::max(1.0, pm.entries.frobenius_norm()));
    CHECK(st.omega_slope > 0.0);
    CHECK(st.norm_factor > 0.0);
  }
}

TEST_CASE("Feynman-Hellmann matches finite differences") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet cs = flat3_pair(1.0, 1.0, 1.0);

  // closed-form check at nu = 1 for the symmetric ground branch
  const EigenSystem es = eigensystem(assemble(f3, cs, 1.0, kQuad));
  const FhDerivative fh = eigen_derivative_fh(f3, cs, es, 0, kQuad);
  CHECK(!fh.used_finite_difference);
  CHECK(fh.value ==
        doctest::Approx((1.0 + std::exp(-1.0)) / (4.0 * kPi)).epsilon(1e-9));

  // N = 1 closed forms
  const CenterSet one3(f3, {{Point::xyz(0, 0, 0), 1.0}});
  const EigenSystem e1 = eigensystem(assemble(f3, one3, 1.7, kQuad));
  CHECK(eigen_derivative_fh(f3, one3, e1, 0, kQuad).value ==
        doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-9));
  const ManifoldSpec f2 = ManifoldSpec::flat(2);
  const CenterSet one2(f2, {{Point::xy(0, 0), 0.6}});
  const EigenSystem e2 = eigensystem(assemble(f2, one2, 2.0, kQuad));
  CHECK(eigen_derivative_fh(f2, one2, e2, 0, kQuad).value ==
        doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-9));

  // random configurations vs central differences
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> um(0.6, 2.0);
  std::uniform_real_distribution<double> ux(-1.5, 1.5);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<Center> centers;
    for (int i = 0; i < n; ++i)
      centers.push_back({Point::xyz(ux(rng), ux(rng), ux(rng) + 3.0 * i),
                         um(rng)});
    CenterSet rcs(f3, centers);
    const double nu = 1.1;
    const EigenSystem esr = eigensystem(assemble(f3, rcs, nu, kQuad));
    const double h = 1e-5 * nu;
    const EigenSystem lo = eigensystem(assemble(f3, rcs, nu - h, kQuad));
    const EigenSystem hi = eigensystem(assemble(f3, rcs, nu + h, kQuad));
    for (int k = 0; k < n; ++k) {
      const double fd =
          (hi.eigenvalues[k] - lo.eigenvalues[k]) / (2.0 * h);
      const FhDerivative an = eigen_derivative_fh(f3, rcs, esr, k, kQuad);
      CHECK(an.value > 0.0);
      CHECK(an.value == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("interlacing report") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  // N + 1 = 2, symmetric
  const InterlacingReport r2 = check_interlacing(f3, flat3_pair(1, 1, 1), kQuad);
  CHECK(r2.pass());
  const double nu_gr = 1.0 + specfun::lambert_w0(std::exp(-1.0));
  CHECK(r2.e_gr_full == doctest::Approx(-nu_gr * nu_gr).epsilon(1e-8));
  CHECK(r2.e_gr_sub == doctest::Approx(-1.0).epsilon(1e-8));

  // N + 1 = 3, collinear
  const CenterSet c3(f3, {{Point::xyz(0, 0, 0), 1.0},
                          {Point::xyz(1, 0, 0), 1.0},
                          {Point::xyz(2, 0, 0), 1.0}});
  const InterlacingReport r3 = check_interlacing(f3, c3, kQuad);
  CHECK(r3.pass());
  CHECK(r3.e_gr_full < r3.e_gr_sub);
  CHECK(r3.e_gr_sub < -1.0);

  // far-separated pair: deepening persists at tolerance scale
  const InterlacingReport rfar =
      check_interlacing(f3, flat3_pair(1, 1, 50.0), kQuad);
  CHECK(rfar.deepening_margin >= 0.0);
  CHECK(rfar.deepening_margin < 1e-12);
}

TEST_CASE("ground state positivity") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const SpectrumResult sym = solve_spectrum(f3, flat3_pair(1, 1, 1), kQuad);
  const PositivityReport pr = ground_state_positivity(sym);
  CHECK(pr.all_positive);
  CHECK(pr.min_amplitude ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

  const SpectrumResult asym =
      solve_spectrum(f3, flat3_pair(1.0, 2.0, 1.0), kQuad);
  const PositivityReport pa = ground_state_positivity(asym);
  CHECK(pa.all_positive);
  if (asym.states.size() > 1) CHECK(pa.unique);

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> um(0.7, 1.8);
  std::uniform_real_distribution<double> ux(-1.2, 1.2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<Center> centers;
    for (int i = 0; i < n; ++i)
      centers.push_back({Point::xyz(ux(rng) + 2.0 * i, ux(rng), ux(rng)),
                         um(rng)});
    const SpectrumResult sr = solve_spectrum(f3, CenterSet(f3, centers), kQuad);
    REQUIRE(!sr.states.empty());
    CHECK(ground_state_positivity(sr).all_positive);
  }
}

TEST_CASE("degenerate branches fall back to finite differences") {
  // far-separated symmetric pair: the branch gap ~ e^{-nu d} is below the
  // degeneracy tolerance, so the slope comes from finite differences
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet cs = flat3_pair(1.0, 1.0, 60.0);
  const EigenSystem es = eigensystem(assemble(f3, cs, 1.2, kQuad));
  CHECK(es.eigenvalues[1] - es.eigenvalues[0] < 1e-12);
  const FhDerivative fh = eigen_derivative_fh(f3, cs, es, 0, kQuad);
  CHECK(fh.used_finite_difference);
  // both branches carry the isolated-center slope 1/(4 pi)
  CHECK(fh.value == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-4));
}

TEST_CASE("eigen branch scan shape") {
  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet cs = flat3_pair(1.0, 1.5, 1.0);
  const std::vector<double> nus = {0.5, 1.0, 1.5, 2.0};
  const auto scan = eigen_branch_scan(f3, cs, nus, kQuad);
  REQUIRE(scan.size() == nus.size());
  for (const auto& row : scan) CHECK(row.size() == 2);
  // each sorted branch is increasing in nu
  for (std::size_t i = 1; i < nus.size(); ++i)
    for (int k = 0; k < 2; ++k) CHECK(scan[i][k] > scan[i - 1][k]);
}
