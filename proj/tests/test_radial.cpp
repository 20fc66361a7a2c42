#include <doctest.h>

#include <cmath>

#include "dirac/radial.hpp"

using namespace dirac;

TEST_SUITE("radial") {

TEST_CASE("problem validation") {
  RadialProblem p;
  p.kappa = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.kappa = -1;
  p.r_min = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.r_min = 1e-4;
  p.n = 32;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.n = 256;
  p.m = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("assembled operator is tridiagonal of size 2n with finite Gershgorin bound") {
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.n = 256;
  const TriDiag t = assemble(p);
  CHECK(t.size() == 512);
  CHECK(t.off.size() == 511);
  CHECK(std::isfinite(t.norm_bound()));
  // multiply agrees with the dense matvec on a basis vector
  Eigen::VectorXd e = Eigen::VectorXd::Zero(512);
  e(100) = 1.0;
  const Eigen::VectorXd he = t.multiply(e);
  CHECK(he(100) == doctest::Approx(t.diag(100)));
  CHECK(he(99) == doctest::Approx(t.off(99)));
  CHECK(he(101) == doctest::Approx(t.off(100)));
  for (int i = 0; i < 512; ++i)
    if (std::abs(i - 100) > 1) CHECK(he(i) == 0.0);
}

TEST_CASE("sommerfeld oracle values and guards") {
  // gamma = sqrt(3)/2 for nu = -1/2, kappa = -1
  CHECK(sommerfeld(-0.5, -1, 0, 1.0) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(sommerfeld(-0.5, -1, 1, 1.0) ==
        doctest::Approx(0.9659258262890684).epsilon(1e-12));
  // degenerate pairs: kappa = -2, n_r = 0 coincides with kappa = +... level ladder
  CHECK(sommerfeld(-0.5, -2, 0, 1.0) > sommerfeld(-0.5, -1, 0, 1.0));
  CHECK_THROWS_AS(sommerfeld(-0.5, 0, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sommerfeld(0.5, -1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sommerfeld(-1.5, -1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sommerfeld(-0.5, 1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sommerfeld(-0.5, -1, 0, 0.0), std::invalid_argument);
}

TEST_CASE("free massive operator has an empty spectral gap") {
  RadialProblem p;
  p.m = 1.0;
  p.n = 1024;
  p.r_max = 100.0;
  const SpectrumResult s = solve(p, -0.999, 0.999);
  CHECK(s.in_gap.empty());
}

TEST_CASE("coulomb ground state matches the oracle at moderate resolution") {
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.n = 1024;
  p.r_max = 120.0;
  const SpectrumResult s = solve(p, -0.999, 0.999);
  REQUIRE_FALSE(s.in_gap.empty());
  const double lam = s.eigenvalues[s.in_gap.front()];
  CHECK(std::abs(lam - std::sqrt(0.75)) / std::sqrt(0.75) < 1e-4);
  CHECK(s.localizations[s.in_gap.front()] > 0.999);
  CHECK(s.residuals[s.in_gap.front()] < 1e-8 * assemble(p).norm_bound());
}

TEST_CASE("charge conjugation symmetry: nu -> -nu mirrors the gap spectrum") {
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.n = 1024;
  p.r_max = 120.0;
  RadialProblem q = p;
  q.nu = 0.5;
  q.kappa = 1;
  const SpectrumResult sp = solve(p, -0.999, 0.999);
  const SpectrumResult sq = solve(q, -0.999, 0.999);
  REQUIRE_FALSE(sp.in_gap.empty());
  REQUIRE_FALSE(sq.in_gap.empty());
  const double a = sp.eigenvalues[sp.in_gap.front()];
  const double b = sq.eigenvalues[sq.in_gap.back()];
  // the staggered layout breaks the mirror symmetry only at discretization level
  CHECK(a == doctest::Approx(-b).epsilon(1e-6));
}

TEST_CASE("refinement study flags the coulomb ground state as persistent") {
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.n = 1024;
  p.r_max = 120.0;
  const auto verdicts = refinement_study(p, -0.999, 0.999);
  REQUIRE_FALSE(verdicts.empty());
  const auto& v = verdicts.front();
  CHECK(v.persistent());
  CHECK(v.drift_grid < 1e-4);
  CHECK(v.drift_domain < 1e-4);
  CHECK(v.localization > 0.99);
}

TEST_CASE("repulsive massless channels produce no persistent eigenvalues") {
  RadialProblem p;
  p.nu = 0.1;
  p.m = 0.0;
  p.n = 512;
  p.r_max = 100.0;
  for (int kappa : {-1, 1}) {
    p.kappa = kappa;
    int persistent = 0;
    for (const auto& v : refinement_study(p, -0.4, 0.4))
      if (v.persistent()) ++persistent;
    CHECK(persistent == 0);
  }
}

TEST_CASE("spectrum is invariant under orthogonal conjugation") {
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.n = 256;
  p.r_max = 60.0;
  const Eigen::MatrixXd P = random_orthogonal(2 * p.n, 99);
  CHECK(conjugation_invariance_check(p, P) < 1e-8);
  const Eigen::MatrixXd notP = Eigen::MatrixXd::Identity(2 * p.n, 2 * p.n) * 2.0;
  CHECK_THROWS_AS(conjugation_invariance_check(p, notP), std::invalid_argument);
}

TEST_CASE("csv rows carry the full channel description") {
  CHECK(spectrum_csv_header() ==
        "kappa,nu,mu,delta,m,n,r_max,lambda,residual,localization,persistent\n");
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  std::string out;
  append_spectrum_csv(out, p, 0.866, 1e-10, 0.9995, true);
  CHECK(out.find("-1,-0.5,0,0,1,4096,200,") == 0);
  CHECK(out.find(",1") != std::string::npos);
}

}  // TEST_SUITE
