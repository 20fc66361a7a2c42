#include "dirac/identities.hpp"

#include <cmath>
#include <stdexcept>

namespace dirac {
namespace {

std::vector<Eigen::VectorXd> sample_A(const BoxGrid& g, const MagneticSpec& aspec) {
  std::vector<Eigen::VectorXd> A;
  if (aspec.variant == MagneticSpec::Variant::Zero) return A;
  A.assign(3, Eigen::VectorXd::Zero(g.size()));
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const Eigen::Vector3d x = g.point(i, j, k);
        if (x.norm() < 1e-12) continue;
        const Vec a = aspec.vector_potential(x);
        const std::size_t idx = g.index(i, j, k);
        for (int l = 0; l < 3; ++l) A[l](idx) = a(l);
      }
  return A;
}

// B_01, B_02, B_12 sampled (antisymmetric matrix determined by these)
std::array<Eigen::VectorXd, 3> sample_B(const BoxGrid& g, const MagneticSpec& aspec) {
  std::array<Eigen::VectorXd, 3> B;
  for (auto& f : B) f = Eigen::VectorXd::Zero(g.size());
  if (aspec.variant == MagneticSpec::Variant::Zero) return B;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Eigen::Vector3d x = g.point(i, j, k);
        // evaluate the origin by limit along a generic direction (regular
        // fields only; singular ones must not meet spinor support here)
        if (x.norm() < 1e-12) x = Eigen::Vector3d::Constant(1e-9);
        const Eigen::MatrixXd m = eval_B(aspec, x);
        const std::size_t idx = g.index(i, j, k);
        B[0](idx) = m(0, 1);
        B[1](idx) = m(0, 2);
        B[2](idx) = m(1, 2);
      }
  return B;
}

Field covariant_diff(const BoxGrid& g, const std::vector<Eigen::VectorXd>& A,
                     const Field& f, int axis, int order) {
  Field out = diff(g, f, axis, order);
  if (!A.empty())
    out -= Cplx(0, 1) * A[axis].cast<Cplx>().cwiseProduct(f);
  return out;
}

// -Delta_A f = -sum_j (d_j - i A_j)^2 f
Field minus_laplacian_A(const BoxGrid& g, const std::vector<Eigen::VectorXd>& A,
                        const Field& f, int order) {
  Field out = Field::Zero(f.size());
  for (int j = 0; j < 3; ++j) {
    out -= diff2(g, f, j, order);
    if (!A.empty()) {
      const Eigen::VectorXcd Aj = A[j].cast<Cplx>();
      out += Cplx(0, 1) * (diff(g, Aj.cwiseProduct(f), j, order) +
                           Aj.cwiseProduct(diff(g, f, j, order)));
      out += Aj.cwiseProduct(Aj).cwiseProduct(f);
    }
  }
  return out;
}

// field of x_axis values
Eigen::VectorXd coord_field(const BoxGrid& g, int axis) {
  Eigen::VectorXd out(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        out(g.index(i, j, k)) = g.coord(axis == 0 ? i : axis == 1 ? j : k);
  return out;
}

// apply a pointwise matrix function to a spinor field
GridSpinor apply_matrix_field(const GridSpinor& psi,
                              const std::function<Mat(const Eigen::Vector3d&)>& M) {
  const BoxGrid& g = psi.g;
  const int N = psi.N();
  GridSpinor out;
  out.g = g;
  out.c.assign(N, Field::Zero(g.size()));
  Eigen::VectorXcd v(N);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const Eigen::Vector3d x = g.point(i, j, k);
        const std::size_t idx = g.index(i, j, k);
        for (int b = 0; b < N; ++b) v(b) = psi.c[b](idx);
        if (v.isZero()) continue;
        const Eigen::VectorXcd w = M(x) * v;
        for (int b = 0; b < N; ++b) out.c[b](idx) = w(b);
      }
  return out;
}

double spinor_norm(const GridSpinor& a, int skin) { return std::sqrt(quad_norm2(a, skin)); }

void require_boundary_clean(const GridSpinor& psi) {
  const double bm = boundary_mass(psi);
  if (bm > 1e-10)
    throw std::invalid_argument("spinor boundary mass " + std::to_string(bm) +
                                " exceeds 1e-10; enlarge the box");
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

nlohmann::json GriddedReport::to_json() const {
  return {{"identity", identity}, {"gridded", g.to_json()},
          {"lhs", lhs},           {"rhs", rhs},
          {"rel_error", rel_error}, {"order_estimate", order_estimate},
          {"pass", pass}};
}

GridSpinor apply_dirac(const DiracRep& rep, const MagneticSpec& aspec, double m,
                       const GridSpinor& psi, int order) {
  if (psi.N() != rep.N)
    throw std::invalid_argument("apply_dirac: component count does not match N");
  const BoxGrid& g = psi.g;
  const int N = rep.N;
  std::vector<Mat> alpha(3);
  for (int j = 0; j < 3; ++j) alpha[j] = rep.alphas[j].to_complex();
  const Mat beta = rep.beta.to_complex();
  const auto A = sample_A(g, aspec);

  GridSpinor out;
  out.g = g;
  out.c.assign(N, Field::Zero(g.size()));
  if (m != 0)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (beta(a, b) != Cplx(0, 0)) out.c[a] += m * beta(a, b) * psi.c[b];
  for (int b = 0; b < N; ++b)
    for (int j = 0; j < 3; ++j) {
      const Field Dj = covariant_diff(g, A, psi.c[b], j, order);
      for (int a = 0; a < N; ++a)
        if (alpha[j](a, b) != Cplx(0, 0))
          out.c[a] += Cplx(0, -1) * alpha[j](a, b) * Dj;
    }
  return out;
}

std::vector<Field> covariant_gradient(const BoxGrid& g, const MagneticSpec& aspec,
                                      const Field& comp, int order) {
  const auto A = sample_A(g, aspec);
  std::vector<Field> out;
  out.reserve(3);
  for (int j = 0; j < 3; ++j) out.push_back(covariant_diff(g, A, comp, j, order));
  return out;
}

namespace {

double squaring_residual(const DiracRep& rep, const MagneticSpec& aspec, double m,
                         const TestSpinor& tsp, const BoxGrid& g, int order,
                         double* lhs_norm, double* rhs_norm) {
  const int N = rep.N;
  GridSpinor psi = sample_spinor(tsp, g, N);
  require_boundary_clean(psi);
  GridSpinor h1 = apply_dirac(rep, aspec, m, psi, order);
  GridSpinor h2 = apply_dirac(rep, aspec, m, h1, order);
  h1.c.clear();

  const auto A = sample_A(g, aspec);
  const auto B = sample_B(g, aspec);
  std::vector<Mat> alpha(3);
  for (int j = 0; j < 3; ++j) alpha[j] = rep.alphas[j].to_complex();
  // commutators [alpha_j, alpha_k] for (j,k) = (0,1), (0,2), (1,2)
  std::array<Mat, 3> comm = {alpha[0] * alpha[1] - alpha[1] * alpha[0],
                             alpha[0] * alpha[2] - alpha[2] * alpha[0],
                             alpha[1] * alpha[2] - alpha[2] * alpha[1]};

  GridSpinor rhs;
  rhs.g = g;
  rhs.c.assign(N, Field::Zero(g.size()));
  for (int b = 0; b < N; ++b) {
    const Field lap = minus_laplacian_A(g, A, psi.c[b], order);
    rhs.c[b] += lap;
    if (m != 0) rhs.c[b] += (m * m) * psi.c[b];
  }
  // (i/2) (alpha.B.alpha) psi, with alpha.B.alpha = sum_{j<k} B_jk [a_j, a_k]
  for (int b = 0; b < N; ++b)
    for (int p = 0; p < 3; ++p) {
      for (int a = 0; a < N; ++a)
        if (comm[p](a, b) != Cplx(0, 0))
          rhs.c[a] += Cplx(0, 0.5) * comm[p](a, b) *
                      B[p].cast<Cplx>().cwiseProduct(psi.c[b]);
    }

  const int skin = order;  // two stencil applications
  double res2 = 0;
  for (int b = 0; b < N; ++b) res2 += quad_norm2(g, h2.c[b] - rhs.c[b], skin);
  if (lhs_norm) *lhs_norm = spinor_norm(h2, skin);
  if (rhs_norm) *rhs_norm = spinor_norm(rhs, skin);
  return std::sqrt(res2) / spinor_norm(psi, skin);
}

}  // namespace

GriddedReport verify_squaring(const DiracRep& rep, const MagneticSpec& aspec, double m,
                              const TestSpinor& psi, const BoxGrid& g, int refine,
                              int order) {
  GriddedReport rep_out;
  rep_out.identity = "squaring";
  rep_out.g = g;
  std::vector<double> residuals;
  BoxGrid cur = g;
  for (int r = 0; r <= refine; ++r) {
    residuals.push_back(
        squaring_residual(rep, aspec, m, psi, cur, order,
                          r == 0 ? &rep_out.lhs : nullptr,
                          r == 0 ? &rep_out.rhs : nullptr));
    cur = BoxGrid(cur.L, 2 * cur.n - 1);  // halves h exactly
  }
  rep_out.rel_error = residuals.front();
  if (refine > 0) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
      worst = std::min(worst, std::log2(residuals[i] / residuals[i + 1]));
    rep_out.order_estimate = worst;
    rep_out.pass = worst >= 3.0;
  } else {
    rep_out.pass = rep_out.rel_error <= 1e-6;
  }
  return rep_out;
}

GriddedReport verify_multiplier(int which, const DiracRep& rep, const MagneticSpec& aspec,
                                const TestSpinor& tsp, const BoxGrid& g,
                                const std::function<Mat(const Eigen::Vector3d&)>& M,
                                const std::function<Mat(const Eigen::Vector3d&)>& xdM,
                                double c, int order) {
  if (which < 1 || which > 3)
    throw std::invalid_argument("verify_multiplier: which must be 1, 2 or 3");
  const int d = 3;
  const int N = rep.N;
  GridSpinor psi = sample_spinor(tsp, g, N);
  require_boundary_clean(psi);

  const int skin = order;
  std::array<Eigen::VectorXd, 3> xf = {coord_field(g, 0), coord_field(g, 1),
                                       coord_field(g, 2)};

  GriddedReport out;
  out.g = g;
  const bool magnetic = which == 1;
  const auto A = magnetic ? sample_A(g, aspec) : std::vector<Eigen::VectorXd>{};

  // u = 2 x.grad psi + d psi (magnetic gradient for which=1)
  GridSpinor u;
  u.g = g;
  u.c.assign(N, Field());
  double grad2 = 0;
  double bterm = 0;
  const auto B = magnetic ? sample_B(g, aspec) : std::array<Eigen::VectorXd, 3>{};
  for (int b = 0; b < N; ++b) {
    Field acc = static_cast<double>(d) * psi.c[b];
    for (int j = 0; j < 3; ++j) {
      const Field Dj = covariant_diff(g, A, psi.c[b], j, order);
      acc += 2.0 * xf[j].cast<Cplx>().cwiseProduct(Dj);
      if (magnetic) {
        grad2 += quad_norm2(g, Dj, skin);
        // Im int x_k B_jk psi* d_j^A psi, pairs (j,k) with B sampled as
        // B01, B02, B12 (antisymmetric)
        auto add = [&](int j_, int k_, double sign, const Eigen::VectorXd& Bf) {
          if (j_ != j) return;
          const Field w =
              (sign * xf[k_].cwiseProduct(Bf)).cast<Cplx>().cwiseProduct(Dj);
          bterm += quad_inner(g, psi.c[b], w, skin).imag();
        };
        add(0, 1, 1, B[0]);
        add(1, 0, -1, B[0]);
        add(0, 2, 1, B[1]);
        add(2, 0, -1, B[1]);
        add(1, 2, 1, B[2]);
        add(2, 1, -1, B[2]);
      }
    }
    u.c[b] = std::move(acc);
  }

  double lhs = 0, rhs = 0, scale = 0;
  switch (which) {
    case 1: {
      out.identity = "mult-1";
      for (int b = 0; b < N; ++b) {
        const Field lap = minus_laplacian_A(g, A, psi.c[b], order);
        lhs += quad_inner(g, u.c[b], lap, skin).real();
      }
      rhs = 2 * grad2 - 2 * bterm;
      scale = std::max(std::abs(lhs), std::abs(rhs));
      break;
    }
    case 2: {
      out.identity = "mult-2";
      if (!M || !xdM)
        throw std::invalid_argument("verify_multiplier: which=2 needs M and x.grad M");
      const GridSpinor Mpsi = apply_matrix_field(psi, M);
      const GridSpinor xdMpsi = apply_matrix_field(psi, xdM);
      lhs = quad_inner(u, Mpsi, skin).real();
      rhs = -quad_inner(psi, xdMpsi, skin).real();
      scale = std::max(std::abs(lhs), std::abs(rhs));
      break;
    }
    case 3: {
      out.identity = "mult-3";
      lhs = c * quad_inner(u, psi, skin).real();
      rhs = 0;
      scale = std::abs(c) * spinor_norm(u, skin) * spinor_norm(psi, skin);
      break;
    }
  }
  out.lhs = lhs;
  out.rhs = rhs;
  out.rel_error = scale > 0 ? std::abs(lhs - rhs) / scale : 0;
  out.pass = out.rel_error <= 1e-6;
  return out;
}

GriddedReport verify_anticommutator_expansion(const DiracRep& rep, const MagneticSpec& aspec,
                                              const PotentialSpec& vspec, double m,
                                              const TestSpinor& tsp, const BoxGrid& g,
                                              int order) {
  if (std::abs(tsp.envelope(Eigen::Vector3d::Zero())) > 1e-12)
    throw std::invalid_argument(
        "verify_anticommutator_expansion: spinor support touches the origin");
  const int N = rep.N;
  GridSpinor psi = sample_spinor(tsp, g, N);
  require_boundary_clean(psi);

  std::vector<Mat> alpha(3);
  for (int j = 0; j < 3; ++j) alpha[j] = rep.alphas[j].to_complex();
  const Mat beta = rep.beta.to_complex();

  auto Vmat = [&](const Eigen::Vector3d& x) -> Mat {
    if (x.norm() < 1e-12) return Mat::Zero(N, N);
    return eval_potential(vspec, rep, x);
  };

  GridSpinor hpsi = apply_dirac(rep, aspec, m, psi, order);
  GridSpinor vpsi = apply_matrix_field(psi, Vmat);
  GridSpinor hvpsi = apply_dirac(rep, aspec, m, vpsi, order);
  GridSpinor vhpsi = apply_matrix_field(hpsi, Vmat);

  // rhs = -i {alpha_j, V} d_j^A psi - i (alpha.grad V) psi + m {beta, V} psi
  const auto A = sample_A(g, aspec);
  GridSpinor rhs;
  rhs.g = g;
  rhs.c.assign(N, Field::Zero(g.size()));
  for (int b = 0; b < N; ++b)
    for (int j = 0; j < 3; ++j) {
      const Field Dj = covariant_diff(g, A, psi.c[b], j, order);
      // accumulate pointwise with the {alpha_j, V(x)} matrix
      for (int i = 0; i < g.n; ++i)
        for (int jj = 0; jj < g.n; ++jj)
          for (int k = 0; k < g.n; ++k) {
            const std::size_t idx = g.index(i, jj, k);
            const Cplx v = Dj(idx);
            if (v == Cplx(0, 0)) continue;
            const Eigen::Vector3d x = g.point(i, jj, k);
            if (x.norm() < 1e-12) continue;
            const Mat V = Vmat(x);
            const Mat ac = alpha[j] * V + V * alpha[j];
            for (int a = 0; a < N; ++a)
              rhs.c[a](idx) += Cplx(0, -1) * ac(a, b) * v;
          }
    }
  // pointwise algebraic terms
  {
    Eigen::VectorXcd v(N);
    for (int i = 0; i < g.n; ++i)
      for (int jj = 0; jj < g.n; ++jj)
        for (int k = 0; k < g.n; ++k) {
          const std::size_t idx = g.index(i, jj, k);
          double mag = 0;
          for (int b = 0; b < N; ++b) mag += std::norm(psi.c[b](idx));
          if (mag == 0) continue;
          const Eigen::Vector3d x = g.point(i, jj, k);
          if (x.norm() < 1e-12) continue;
          for (int b = 0; b < N; ++b) v(b) = psi.c[b](idx);
          const auto gradV = eval_grad_potential(vspec, rep, x);
          Mat term = Mat::Zero(N, N);
          for (int j = 0; j < 3; ++j) term += alpha[j] * gradV[j];
          Mat total = Cplx(0, -1) * term;
          if (m != 0) {
            const Mat V = Vmat(x);
            total += m * (beta * V + V * beta);
          }
          const Eigen::VectorXcd w = total * v;
          for (int b = 0; b < N; ++b) rhs.c[b](idx) += w(b);
        }
  }

  const int skin = order;
  double res2 = 0;
  for (int b = 0; b < N; ++b)
    res2 += quad_norm2(g, hvpsi.c[b] + vhpsi.c[b] - rhs.c[b], skin);
  const double rel1 = std::sqrt(res2) / spinor_norm(psi, skin);

  // full expansion H_m(A,V)^2 psi = (H_m(A)^2 + V^2 + {H_m(A),V}) psi with
  // the anticommutator replaced by its algebraic form
  GridSpinor h2psi = apply_dirac(rep, aspec, m, hpsi, order);
  GridSpinor vvpsi = apply_matrix_field(vpsi, Vmat);
  GridSpinor hv_full = apply_dirac(rep, aspec, m, vpsi, order);
  double res2b = 0;
  for (int b = 0; b < N; ++b) {
    const Field lhs_b = h2psi.c[b] + hv_full.c[b] + vhpsi.c[b] + vvpsi.c[b];
    const Field rhs_b = h2psi.c[b] + vvpsi.c[b] + rhs.c[b];
    res2b += quad_norm2(g, lhs_b - rhs_b, skin);
  }
  const double rel2 = std::sqrt(res2b) / spinor_norm(psi, skin);

  GriddedReport out;
  out.identity = "anticommutator-expansion";
  out.g = g;
  out.lhs = rel1;
  out.rhs = rel2;
  out.rel_error = std::max(rel1, rel2);
  out.pass = out.rel_error <= 1e-5;
  return out;
}

namespace {

std::vector<AmIdentityResult> run_am_checks(const std::vector<Mat>& a, const Mat& beta,
                                            const std::array<Mat, 3>& S, const Mat& T,
                                            const std::vector<AmPointData>& points,
                                            bool threeD) {
  const int N = static_cast<int>(beta.rows());
  const Mat id = Mat::Identity(N, N);
  const Cplx I(0, 1);

  auto adot = [&](const Eigen::Vector3d& v) {
    Mat m = Mat::Zero(N, N);
    for (int j = 0; j < 3; ++j) m += v(j) * a[j];
    return m;
  };
  auto sdot = [&](const Eigen::Vector3d& v) {
    Mat m = Mat::Zero(N, N);
    for (int j = 0; j < 3; ++j) m += v(j) * S[j];
    return m;
  };

  std::vector<AmIdentityResult> out;
  auto record = [&](const std::string& name, double err) {
    for (auto& r : out)
      if (r.identity == name) {
        r.max_error = std::max(r.max_error, err);
        r.pass = r.max_error <= 1e-10;
        return;
      }
    out.push_back({name, err, err <= 1e-10});
  };

  for (const auto& p : points) {
    const Mat Vam = I * beta * adot(p.grad_phi);
    const double g2 = p.grad_phi.squaredNorm();

    record("V-square", max_abs(Vam * Vam - g2 * id));
    record("V-beta", max_abs(beta * Vam + Vam * beta));
    for (int k = 0; k < 3; ++k) {
      const Mat lhs = a[k] * Vam + Vam * a[k];
      const Mat rhs = 2.0 * I * beta * adot(p.grad_phi) * a[k] -
                      2.0 * I * p.grad_phi(k) * beta;
      record("V-alpha", max_abs(lhs - rhs));
    }
    {
      // d_j V_am = i beta alpha_k H_jk; contract with alpha_j
      Mat lhs = Mat::Zero(N, N);
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) lhs += a[j] * (I * beta * a[k] * p.hess_phi(j, k));
      record("nablaV-alpha", max_abs(lhs + I * p.hess_phi.trace() * beta));
    }

    if (!threeD) continue;
    const Mat V3 = Vam - 2.0 * beta * sdot(p.b);
    const Eigen::Vector3d cross = p.grad_phi.cross(p.b);
    record("V-square-3d",
           max_abs(V3 * V3 - (g2 + p.b.squaredNorm()) * id + 2.0 * adot(cross)));
    record("V-beta-3d", max_abs(beta * V3 + V3 * beta + 4.0 * sdot(p.b)));
    for (int k = 0; k < 3; ++k) {
      const Mat lhs = a[k] * V3 + V3 * a[k];
      const Mat rhs = 2.0 * I * beta * adot(p.grad_phi) * a[k] -
                      2.0 * I * p.grad_phi(k) * beta -
                      4.0 * beta * sdot(p.b) * a[k] + 2.0 * p.b(k) * beta * T;
      record("V-alpha-3d", max_abs(lhs - rhs));
    }
    {
      Mat lhs = Mat::Zero(N, N);
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          lhs += a[j] * (I * beta * a[k] * p.hess_phi(j, k) -
                         2.0 * beta * S[k] * p.jac_b(j, k));
      Mat rhs = -I * p.hess_phi.trace() * beta;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          rhs += 2.0 * beta * a[j] * S[k] * p.jac_b(j, k);
      record("nablaV-alpha-3d", max_abs(lhs - rhs));
    }
  }
  return out;
}

}  // namespace

std::vector<AmIdentityResult> verify_am_identities(const DiracRep& rep, const SpinSet& spin,
                                                   const std::vector<AmPointData>& points,
                                                   bool threeD) {
  if (threeD && rep.d != 3)
    throw std::invalid_argument("verify_am_identities: threeD requires d = 3");
  std::vector<Mat> a;
  for (int j = 0; j < 3; ++j) a.push_back(rep.alphas[j].to_complex());
  std::array<Mat, 3> S;
  for (int j = 0; j < 3; ++j) S[j] = spin.S[j].to_complex();
  return run_am_checks(a, rep.beta.to_complex(), S, spin.T.to_complex(), points, threeD);
}

std::vector<AmIdentityResult> verify_am_identities(const std::vector<Mat>& alphas,
                                                   const Mat& beta,
                                                   const std::array<Mat, 3>& S, const Mat& T,
                                                   const std::vector<AmPointData>& points,
                                                   bool threeD) {
  return run_am_checks(alphas, beta, S, T, points, threeD);
}

AmPointData am_point_data(const RadialProfile& phi, const MagneticSpec& aspec,
                          const Eigen::Vector3d& x) {
  const double r = x.norm();
  if (r == 0) throw std::invalid_argument("am_point_data: singular at x = 0");
  AmPointData p;
  const Eigen::Vector3d xh = x / r;
  const double dphi = phi.derivative(r);
  const double ddphi = phi.second_derivative(r);
  p.grad_phi = dphi * xh;
  p.hess_phi = ddphi * xh * xh.transpose() +
               (dphi / r) * (Eigen::Matrix3d::Identity() - xh * xh.transpose());
  if (aspec.variant != MagneticSpec::Variant::Zero) {
    p.b = b_vector_from_matrix(eval_B(aspec, x));
    // order-8 central differences of the closed-form b
    const double h = 1e-2 * r;
    const double w[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      for (int o = 1; o <= 4; ++o) {
        Eigen::Vector3d xp = x, xm = x;
        xp(j) += o * h;
        xm(j) -= o * h;
        acc += w[o - 1] *
               (b_vector_from_matrix(eval_B(aspec, xp)) -
                b_vector_from_matrix(eval_B(aspec, xm)));
      }
      p.jac_b.row(j) = (acc / h).transpose();
    }
  }
  return p;
}

nlohmann::json DecayTable::to_json() const {
  return {{"R", Rs}, {"value", values}, {"strictly_decreasing", strictly_decreasing}};
}

DecayTable verify_cutoff_decay(const TestSpinor& psi, const BoxGrid& g,
                               const std::vector<double>& Rs, const CutoffFamily& fam) {
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    if (Rs[i] < 2) throw std::invalid_argument("verify_cutoff_decay: R must be >= 2");
    if (i && Rs[i] <= Rs[i - 1])
      throw std::invalid_argument("verify_cutoff_decay: Rs must increase");
  }
  const double Rmax = Rs.empty() ? 2.0 : Rs.back();
  if (g.L < 2 * Rmax)
    throw std::invalid_argument("verify_cutoff_decay: box too small; need L >= " +
                                std::to_string(2 * Rmax));

  // spherical average of |psi|^2 at radius r, closed form
  std::function<double(double)> avg;
  if (psi.kind == TestSpinor::Kind::GaussianBump && psi.kvec.isZero()) {
    const double c = psi.center.norm();
    const double w2 = psi.width * psi.width;
    avg = [c, w2](double r) {
      const double pre = std::exp(-(r * r + c * c) / w2);
      const double t = 2 * r * c / w2;
      const double sinc = t < 1e-8 ? 1.0 + t * t / 6 : std::sinh(t) / t;
      return pre * sinc;
    };
  } else if (psi.kind == TestSpinor::Kind::CutoffComposed && psi.center.isZero() &&
             psi.kvec.isZero()) {
    avg = [&psi](double r) {
      Eigen::Vector3d x(r, 0, 0);
      return std::norm(psi.envelope(x));
    };
  } else {
    throw std::invalid_argument(
        "verify_cutoff_decay: needs a Gaussian bump or radial cutoff-composed spinor");
  }

  auto piece = [&](double a, double b, double R) {
    // Simpson on [a, b] of 4 pi r^2 (dxi_R/dr)^2 avg(r)
    const int n = 20000;  // even
    const double h = (b - a) / n;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
      const double r = a + i * h;
      const double f = 4 * M_PI * r * r * std::pow(fam.dxi_R(r, R), 2) * avg(r);
      s += f * (i == 0 || i == n ? 1 : i % 2 ? 4 : 2);
    }
    return s * h / 3;
  };

  DecayTable out;
  out.Rs = Rs;
  for (double R : Rs)
    out.values.push_back(std::sqrt(piece(1 / (2 * R), 2 / R, R) + piece(R / 2, 2 * R, R)));
  out.strictly_decreasing = true;
  for (std::size_t i = 1; i < out.values.size(); ++i)
    if (!(out.values[i] < out.values[i - 1])) out.strictly_decreasing = false;
  return out;
}

HardyDiamagnetic hardy_and_diamagnetic_check(const TestSpinor& psi,
                                             const MagneticSpec& aspec, const BoxGrid& g,
                                             int order) {
  if (std::abs(psi.envelope(Eigen::Vector3d::Zero())) > 1e-10)
    throw std::invalid_argument(
        "hardy_and_diamagnetic_check: origin inside support without exclusion shell");
  const Field env = sample_envelope(psi, g);
  const int skin = order / 2;

  // Hardy ratio with free gradient
  double weighted = 0;
  {
    const double h = g.h();
    for (int i = skin; i < g.n - skin; ++i)
      for (int j = skin; j < g.n - skin; ++j)
        for (int k = skin; k < g.n - skin; ++k) {
          const double r2 = g.point(i, j, k).squaredNorm();
          if (r2 < 1e-24) continue;
          weighted += std::norm(env(g.index(i, j, k))) / r2;
        }
    weighted *= h * h * h;
  }
  double grad2 = 0;
  std::array<Field, 3> gA;
  const auto A = sample_A(g, aspec);
  for (int j = 0; j < 3; ++j) {
    const Field dj = diff(g, env, j, order);
    grad2 += quad_norm2(g, dj, skin);
    gA[j] = A.empty() ? dj : Field(dj - Cplx(0, 1) * A[j].cast<Cplx>().cwiseProduct(env));
  }

  // pointwise diamagnetic gap |grad |psi|| - |grad_A psi|
  Field mod = env.cwiseAbs();
  std::array<Field, 3> gmod;
  for (int j = 0; j < 3; ++j) gmod[j] = diff(g, mod, j, order);
  double gap = -std::numeric_limits<double>::infinity();
  for (int i = skin; i < g.n - skin; ++i)
    for (int j = skin; j < g.n - skin; ++j)
      for (int k = skin; k < g.n - skin; ++k) {
        const std::size_t idx = g.index(i, j, k);
        double m2 = 0, a2 = 0;
        for (int l = 0; l < 3; ++l) {
          m2 += std::norm(gmod[l](idx));
          a2 += std::norm(gA[l](idx));
        }
        gap = std::max(gap, std::sqrt(m2) - std::sqrt(a2));
      }

  HardyDiamagnetic out;
  out.hardy_ratio = grad2 > 0 ? weighted / grad2 : 0;
  out.diamagnetic_gap = gap;
  return out;
}

}  // namespace dirac
