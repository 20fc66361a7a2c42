#include <doctest.h>

#include <random>

#include "dirac/identities.hpp"

using namespace dirac;

namespace {

Eigen::VectorXcd unit_dir(std::mt19937_64& rng, int N) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd u(N);
  for (int i = 0; i < N; ++i) u(i) = Cplx(nd(rng), nd(rng));
  return u.normalized();
}

AmPointData random_point_data(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  AmPointData p;
  for (int j = 0; j < 3; ++j) {
    p.grad_phi(j) = nd(rng);
    p.b(j) = nd(rng);
    for (int k = 0; k < 3; ++k) {
      p.hess_phi(j, k) = nd(rng);
      p.jac_b(j, k) = nd(rng);
    }
  }
  p.hess_phi = ((p.hess_phi + p.hess_phi.transpose()) / 2).eval();
  return p;
}

}  // namespace

TEST_SUITE("identities") {

TEST_CASE("matrix identities hold for arbitrary field data") {
  const DiracRep rep = build_dirac_rep(3);
  const SpinSet spin = spin_and_T(rep);
  std::mt19937_64 rng(3);
  std::vector<AmPointData> pts;
  for (int i = 0; i < 25; ++i) pts.push_back(random_point_data(rng));
  const auto results = verify_am_identities(rep, spin, pts, true);
  CHECK(results.size() == 8);
  for (const auto& r : results) {
    INFO(r.identity);
    CHECK(r.pass);
    CHECK(r.max_error <= 1e-10);
  }
}

TEST_CASE("matrix identities survive unitary conjugation") {
  const DiracRep rep = build_dirac_rep(3);
  const SpinSet spin = spin_and_T(rep);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd r(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = Cplx(nd(rng), nd(rng));
  const Eigen::MatrixXcd Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(r).householderQ();

  std::vector<Mat> alphas;
  for (int j = 0; j < 3; ++j)
    alphas.push_back(Q * rep.alphas[j].to_complex() * Q.adjoint());
  const Mat beta = Q * rep.beta.to_complex() * Q.adjoint();
  std::array<Mat, 3> S;
  for (int j = 0; j < 3; ++j) S[j] = Q * spin.S[j].to_complex() * Q.adjoint();
  const Mat T = Q * spin.T.to_complex() * Q.adjoint();

  std::vector<AmPointData> pts = {random_point_data(rng), random_point_data(rng)};
  for (const auto& res : verify_am_identities(alphas, beta, S, T, pts, true)) {
    INFO(res.identity);
    CHECK(res.pass);
  }
}

TEST_CASE("pointwise field data matches closed forms") {
  const RadialProfile phi = RadialProfile::log_coulomb(0.5);
  const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.3, 1.0));
  const Eigen::Vector3d x(1.2, -0.7, 0.9);
  const AmPointData p = am_point_data(phi, az, x);
  const double r = x.norm();
  CHECK((p.grad_phi - 0.5 * x / (r * r)).norm() < 1e-12);
  // Hessian trace equals the Laplacian of 0.5 ln r: 0.5 (d-2)/r^2 at d=3
  CHECK(p.hess_phi.trace() == doctest::Approx(0.5 / (r * r)).epsilon(1e-10));
  CHECK((p.hess_phi - p.hess_phi.transpose()).norm() < 1e-12);
  CHECK((p.b - b_vector_from_matrix(eval_B(az, x))).norm() < 1e-12);
  // Jacobian consistency: finite difference of b
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d xp = x, xm = x;
    const double h = 1e-5;
    xp(j) += h;
    xm(j) -= h;
    const Eigen::Vector3d db =
        (b_vector_from_matrix(eval_B(az, xp)) - b_vector_from_matrix(eval_B(az, xm))) /
        (2 * h);
    CHECK((p.jac_b.row(j).transpose() - db).norm() < 1e-6);
  }
}

TEST_CASE("scaling multiplier identity is a quadrature null test") {
  const DiracRep rep = build_dirac_rep(3);
  std::mt19937_64 rng(21);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {0.3, -0.4, 0.1}, 1.0);
  const auto r = verify_multiplier(3, rep, MagneticSpec::zero(3), psi, BoxGrid(8.0, 96),
                                   {}, {}, 2.5);
  CHECK(r.pass);
  CHECK(r.rel_error < 1e-6);
}

TEST_CASE("matrix multiplier identity with an analytic x-derivative") {
  const DiracRep rep = build_dirac_rep(3);
  std::mt19937_64 rng(22);
  const TestSpinor psi =
      TestSpinor::polynomial_gaussian(unit_dir(rng, 4), 1, {0.6, -0.8, 0.0}, 1.0);
  const auto M = [](const Eigen::Vector3d& x) -> Mat {
    return std::exp(-x.squaredNorm()) * Mat::Identity(4, 4);
  };
  const auto xdM = [](const Eigen::Vector3d& x) -> Mat {
    return -2.0 * x.squaredNorm() * std::exp(-x.squaredNorm()) * Mat::Identity(4, 4);
  };
  const auto r =
      verify_multiplier(2, rep, MagneticSpec::zero(3), psi, BoxGrid(8.0, 96), M, xdM);
  CHECK(r.pass);
  CHECK_THROWS_AS(
      verify_multiplier(2, rep, MagneticSpec::zero(3), psi, BoxGrid(8.0, 64)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      verify_multiplier(4, rep, MagneticSpec::zero(3), psi, BoxGrid(8.0, 64)),
      std::invalid_argument);
}

TEST_CASE("magnetic multiplier identity with a nonzero field") {
  const DiracRep rep = build_dirac_rep(3);
  std::mt19937_64 rng(23);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {0.2, 0.5, -0.3}, 1.0);
  const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.15, 0.0));
  const auto r = verify_multiplier(1, rep, az, psi, BoxGrid(8.0, 80));
  CHECK(r.rel_error < 1e-5);
}

TEST_CASE("squaring residual converges at high order on a magnetic background") {
  const DiracRep rep = build_dirac_rep(3);
  std::mt19937_64 rng(27);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {0.5, 0.3, -0.2}, 1.0);
  const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.1, 0.0));
  const auto r = verify_squaring(rep, az, 1.0, psi, BoxGrid(8.0, 40), 1);
  CHECK(r.pass);
  CHECK(r.order_estimate >= 3.0);
}

TEST_CASE("anticommutator expansion holds off the singularity and rejects it at 0") {
  const DiracRep rep = build_dirac_rep(3);
  std::mt19937_64 rng(31);
  const PotentialSpec vel = PotentialSpec::electric(3, RadialProfile::power_law(0.3, 1.0));
  const TestSpinor bump = TestSpinor::gaussian(unit_dir(rng, 4), {3.75, 0, 0}, 0.5);
  const auto r = verify_anticommutator_expansion(rep, MagneticSpec::zero(3), vel, 0.5,
                                                 bump, BoxGrid(8.0, 96));
  CHECK(r.pass);

  const TestSpinor central = TestSpinor::gaussian(unit_dir(rng, 4), {0, 0, 0}, 1.0);
  CHECK_THROWS_AS(verify_anticommutator_expansion(rep, MagneticSpec::zero(3), vel, 0.5,
                                                  central, BoxGrid(8.0, 64)),
                  std::invalid_argument);
}

TEST_CASE("cutoff decay table and feasibility gate") {
  std::mt19937_64 rng(37);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {3, 0, 0}, 0.7);
  const DecayTable t = verify_cutoff_decay(psi, BoxGrid(16.0, 32), {2, 4, 8});
  CHECK(t.strictly_decreasing);
  CHECK(t.values.front() > t.values.back());
  // box too small for R = 8 (needs L >= 2 R)
  CHECK_THROWS_AS(verify_cutoff_decay(psi, BoxGrid(8.0, 32), {2, 4, 8}),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_cutoff_decay(psi, BoxGrid(16.0, 32), {4, 2}),
                  std::invalid_argument);
}

TEST_CASE("profile independence of the cutoff decay trend") {
  std::mt19937_64 rng(41);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {3, 0, 0}, 0.7);
  CutoffFamily f9;
  f9.profile = CutoffFamily::Profile::Smoothstep9;
  const DecayTable t = verify_cutoff_decay(psi, BoxGrid(16.0, 32), {2, 4, 8}, f9);
  CHECK(t.strictly_decreasing);
}

TEST_CASE("hardy and diamagnetic check on an origin-avoiding shell") {
  std::mt19937_64 rng(43);
  const TestSpinor shell = TestSpinor::cutoff_composed(unit_dir(rng, 4), 1.0, 5.0);
  const auto hd =
      hardy_and_diamagnetic_check(shell, MagneticSpec::zero(3), BoxGrid(8.0, 64));
  CHECK(hd.hardy_ratio <= 4.0 + 1e-2);
  CHECK(hd.diamagnetic_gap <= 1e-8);
  const TestSpinor central = TestSpinor::gaussian(unit_dir(rng, 4), {0, 0, 0}, 1.0);
  CHECK_THROWS_AS(
      hardy_and_diamagnetic_check(central, MagneticSpec::zero(3), BoxGrid(8.0, 64)),
      std::invalid_argument);
}

}  // TEST_SUITE
