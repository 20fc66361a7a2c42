// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dirac/clifford.hpp"
#include "dirac/fields.hpp"
#include "dirac/grid.hpp"
#include "dirac/hardy.hpp"
#include "dirac/identities.hpp"
#include "dirac/radial.hpp"

using namespace dirac;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXcd unit_dir(std::mt19937_64& rng, int N) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd u(N);
  for (int i = 0; i < N; ++i) u(i) = Cplx(nd(rng), nd(rng));
  return u.normalized();
}

// 1. exact Clifford relations for d = 3..9, < 5 s
bool criterion1(std::string& detail) {
  const auto t0 = Clock::now();
  bool ok = true;
  for (int d = 3; d <= 9; ++d) {
    const DiracRep rep = build_dirac_rep(d);
    ok = ok && rep.N == spinor_size(d);
    for (int j = 0; j < d && ok; ++j) {
      ok = anticommutator(rep.alphas[j], rep.beta).is_zero();
      for (int k = j; k < d && ok; ++k) {
        const ExactMatrix ac = anticommutator(rep.alphas[j], rep.alphas[k]);
        ok = j == k ? ac.is_identity_times(2) : ac.is_zero();
      }
    }
    ok = ok && (rep.beta * rep.beta) == ExactMatrix::identity(rep.N);
  }
  const double dt = seconds_since(t0);
  detail = "d=3..9 exact, " + std::to_string(dt) + " s";
  return ok && dt < 5.0;
}

// 2. operator_norm(nu I + mu beta + i delta beta alpha.omega) closed form, < 1 s
bool criterion2(std::string& detail) {
  const auto t0 = Clock::now();
  const DiracRep rep = build_dirac_rep(3);
  const Mat beta = rep.beta.to_complex();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const double nu = nd(rng), mu = nd(rng), delta = nd(rng);
    Eigen::Vector3d omega(nd(rng), nd(rng), nd(rng));
    omega.normalize();
    Mat m = nu * Mat::Identity(4, 4) + mu * beta;
    Mat aw = Mat::Zero(4, 4);
    for (int j = 0; j < 3; ++j) aw += omega(j) * rep.alphas[j].to_complex();
    m += Cplx(0, 1) * delta * beta * aw;
    const double expected = std::abs(nu) + std::hypot(mu, delta);
    worst = std::max(worst, std::abs(operator_norm(m) - expected));
  }
  const double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max deviation %.2e over 100 draws, %.3f s", worst, dt);
  detail = buf;
  return worst < 1e-12 && dt < 1.0;
}

// 3. eight matrix identities at 100 random points and 10 conjugations, < 10 s
bool criterion3(std::string& detail) {
  const auto t0 = Clock::now();
  const DiracRep rep = build_dirac_rep(3);
  const SpinSet spin = spin_and_T(rep);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ur(0.4, 4.0);

  const RadialProfile phi = RadialProfile::log_coulomb(0.5);
  const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.3, 1.0));
  std::vector<AmPointData> pts;
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector3d x(nd(rng), nd(rng), nd(rng));
    x = ur(rng) * x.normalized();
    pts.push_back(am_point_data(phi, az, x));
  }

  double worst = 0;
  int suites = 0;
  auto fold = [&](const std::vector<AmIdentityResult>& rs) {
    ++suites;
    for (const auto& r : rs) worst = std::max(worst, r.max_error);
  };
  fold(verify_am_identities(rep, spin, pts, true));
  for (int c = 0; c < 10; ++c) {
    Eigen::MatrixXcd r(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) = Cplx(nd(rng), nd(rng));
    const Eigen::MatrixXcd Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(r).householderQ();
    std::vector<Mat> alphas;
    for (int j = 0; j < 3; ++j)
      alphas.push_back(Q * rep.alphas[j].to_complex() * Q.adjoint());
    std::array<Mat, 3> S;
    for (int j = 0; j < 3; ++j) S[j] = Q * spin.S[j].to_complex() * Q.adjoint();
    fold(verify_am_identities(alphas, Q * rep.beta.to_complex() * Q.adjoint(), S,
                              Q * spin.T.to_complex() * Q.adjoint(), pts, true));
  }
  const double dt = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "max error %.2e over %d suites x 8 identities x 100 points, %.2f s",
                worst, suites, dt);
  detail = buf;
  return worst <= 1e-10 && dt < 10.0;
}

// 4. multiplier identity, A = 0, Gaussian spinor: <= 1e-6 at n=128, 8x drop at n=256
bool criterion4(std::string& detail) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {0.5, 0.3, -0.2}, 1.0);
  const DiracRep rep = build_dirac_rep(3);
  const MagneticSpec a0 = MagneticSpec::zero(3);
  const auto coarse = verify_multiplier(1, rep, a0, psi, BoxGrid(8.0, 128));
  const auto fine = verify_multiplier(1, rep, a0, psi, BoxGrid(8.0, 256));
  const double drop =
      fine.rel_error > 0 ? coarse.rel_error / fine.rel_error
                         : std::numeric_limits<double>::infinity();
  const double dt = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "rel %.2e at n=128, %.2e at n=256 (drop %.1fx), %.1f s",
                coarse.rel_error, fine.rel_error, drop, dt);
  detail = buf;
  return coarse.rel_error <= 1e-6 && drop >= 8.0 && dt < 120.0;
}

// 5. squaring residual converges with observed order >= 3 on a nonzero-B field
bool criterion5(std::string& detail) {
  std::mt19937_64 rng(5);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {0.5, 0.3, -0.2}, 1.0);
  const DiracRep rep = build_dirac_rep(3);
  const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.1, 0.0));
  const auto r = verify_squaring(rep, az, 1.0, psi, BoxGrid(8.0, 48), 1);
  char buf[128];
  std::snprintf(buf, sizeof buf, "residual %.2e, observed order %.2f", r.rel_error,
                r.order_estimate);
  detail = buf;
  return r.pass && r.order_estimate >= 3.0;
}

// 6. Hardy ratio <= 4 + 1e-2 for 20 random origin-avoiding spinors
bool criterion6(std::string& detail) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> rin(0.5, 1.5), rout(3.0, 5.5);
  const BoxGrid g(8.0, 64);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const TestSpinor shell =
        TestSpinor::cutoff_composed(unit_dir(rng, 4), rin(rng), rout(rng));
    const auto hd = hardy_and_diamagnetic_check(shell, MagneticSpec::zero(3), g);
    worst = std::max(worst, hd.hardy_ratio);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max ratio %.4f (bound 4.01)", worst);
  detail = buf;
  return worst <= 4.0 + 1e-2;
}

// 7. massless-electric Coulomb threshold = (sqrt 2 - 1)/2
bool criterion7(std::string& detail) {
  const CouplingFamily fam = make_family("coulomb-electric", 3, Theorem::MasslessElectric);
  const double exact = (std::sqrt(2.0) - 1.0) / 2.0;
  const double closed = critical_coupling(Theorem::MasslessElectric, 3, 0.0, fam,
                                          ThresholdMethod::ClosedForm);
  const double bisect = critical_coupling(Theorem::MasslessElectric, 3, 0.0, fam,
                                          ThresholdMethod::Bisection);
  char buf[128];
  std::snprintf(buf, sizeof buf, "closed-form off by %.2e, bisection off by %.2e",
                std::abs(closed - exact), std::abs(bisect - exact));
  detail = buf;
  return std::abs(closed - exact) < 1e-12 && std::abs(bisect - exact) < 1e-9;
}

// 8. Sommerfeld oracle spectra for nu=-0.5, m=1, kappa=-1 at n=4096, r_max=200
bool criterion8(std::string& detail) {
  const auto t0 = Clock::now();
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.kappa = -1;
  p.n = 4096;
  p.r_max = 200.0;
  const auto verdicts = refinement_study(p, -0.999, 0.999);
  std::vector<double> persistent;
  for (const auto& v : verdicts)
    if (v.persistent()) persistent.push_back(v.lambda);
  const double dt = seconds_since(t0);
  if (persistent.size() < 2) {
    detail = "fewer than two persistent in-gap eigenvalues";
    return false;
  }
  const double o0 = sommerfeld(-0.5, -1, 0, 1.0);  // 0.8660254...
  const double o1 = sommerfeld(-0.5, -1, 1, 1.0);  // 0.9659258...
  const double e0 = std::abs(persistent[0] - o0) / o0;
  const double e1 = std::abs(persistent[1] - o1) / o1;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "lambda=%.7f (oracle %.7f, rel %.1e), lambda=%.7f (oracle %.7f, rel %.1e), %.1f s",
                persistent[0], o0, e0, persistent[1], o1, e1, dt);
  detail = buf;
  return e0 < 1e-3 && e1 < 1e-3 && dt < 120.0;
}

// 9. massless absence consistency and free massive purity
bool criterion9(std::string& detail) {
  const CouplingFamily fam = make_family("coulomb-electric", 3, Theorem::MasslessElectric);
  const HypothesisReport rep = check_theorem(fam.at(0.1), 3, 0.0, Theorem::MasslessElectric);
  if (rep.verdict != Verdict::Holds || std::abs(rep.lhs - 0.44) > 1e-12) {
    detail = "checker verdict mismatch at nu = 0.1";
    return false;
  }
  int persistent = 0;
  for (int kappa : {-2, -1, 1, 2}) {
    RadialProblem p;
    p.nu = 0.1;
    p.m = 0.0;
    p.kappa = kappa;
    p.n = 1024;
    p.r_max = 120.0;
    for (const auto& v : refinement_study(p, -0.5, 0.5))
      if (v.persistent()) ++persistent;
  }
  RadialProblem free_massive;
  free_massive.m = 1.0;
  free_massive.n = 1024;
  free_massive.r_max = 120.0;
  int free_persistent = 0;
  for (const auto& v : refinement_study(free_massive, -0.999, 0.999))
    if (v.persistent()) ++free_persistent;
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "lhs %.2f holds; %d persistent massless, %d persistent free-massive",
                rep.lhs, persistent, free_persistent);
  detail = buf;
  return persistent == 0 && free_persistent == 0;
}

// 10. cutoff decay: strict decrease along R = 2, 4, 8, 16, final < 0.05 x initial
bool criterion10(std::string& detail) {
  std::mt19937_64 rng(10);
  const TestSpinor psi = TestSpinor::gaussian(unit_dir(rng, 4), {3, 0, 0}, 0.7);
  const DecayTable t = verify_cutoff_decay(psi, BoxGrid(32.0, 32), {2, 4, 8, 16});
  const double ratio = t.values.back() / t.values.front();
  char buf[160];
  std::snprintf(buf, sizeof buf, "values %.3e -> %.3e -> %.3e -> %.3e (final/initial %.2e)",
                t.values[0], t.values[1], t.values[2], t.values[3], ratio);
  detail = buf;
  return t.strictly_decreasing && ratio < 0.05;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    bool (*fn)(std::string&);
  };
  const Entry entries[] = {
      {"clifford exactness", criterion1},
      {"matrix-norm closed form", criterion2},
      {"matrix identity suite", criterion3},
      {"multiplier identity quadrature", criterion4},
      {"squaring identity convergence", criterion5},
      {"hardy ratio", criterion6},
      {"threshold reproduction", criterion7},
      {"oracle spectra", criterion8},
      {"massless absence consistency", criterion9},
      {"cutoff decay", criterion10},
  };
  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = entries[i].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d (%s): %s — %s\n", i + 1, entries[i].name,
                ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
