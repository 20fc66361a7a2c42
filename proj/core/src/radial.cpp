#include "dirac/radial.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <lapacke.h>

namespace dirac {

void RadialProblem::validate() const {
  if (!(r_min > 0) || !(r_min < r_max))
    throw std::invalid_argument("RadialProblem: need 0 < r_min < r_max");
  if (n < 64) throw std::invalid_argument("RadialProblem: n must be >= 64");
  if (kappa == 0) throw std::invalid_argument("RadialProblem: kappa must be nonzero");
  if (m < 0) throw std::invalid_argument("RadialProblem: mass must be nonnegative");
  if (!staggered)
    throw std::invalid_argument("RadialProblem: only the staggered grid is supported");
}

Eigen::VectorXd TriDiag::multiply(const Eigen::VectorXd& v) const {
  const int n = size();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double s = diag(i) * v(i);
    if (i > 0) s += off(i - 1) * v(i - 1);
    if (i + 1 < n) s += off(i) * v(i + 1);
    out(i) = s;
  }
  return out;
}

double TriDiag::norm_bound() const {
  double best = 0;
  const int n = size();
  for (int i = 0; i < n; ++i) {
    double s = std::abs(diag(i));
    if (i > 0) s += std::abs(off(i - 1));
    if (i + 1 < n) s += std::abs(off(i));
    best = std::max(best, s);
  }
  return best;
}

namespace {

// quadratically graded radial mesh r(s) = r_min + (r_max - r_min) s^2 on
// uniform s; clusters nodes at the origin where eigenfunctions behave like
// r^gamma (gamma < 1) and restores second-order eigenvalue convergence
double node_r(const RadialProblem& p, double s) {
  return p.r_min + (p.r_max - p.r_min) * s * s;
}

}  // namespace

TriDiag assemble(const RadialProblem& p) {
  p.validate();
  const int n = p.n;
  const double kd = p.kappa + p.delta;
  TriDiag t;
  t.diag.resize(2 * n);
  t.off.resize(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    const double ri = node_r(p, static_cast<double>(i) / n);       // upper component
    const double rh = node_r(p, (i + 0.5) / n);                    // lower component
    const double rf = node_r(p, (i + 1.0) / n);
    const double rhm = i == 0 ? p.r_min : node_r(p, (i - 0.5) / n);
    const double Df = i == 0 ? rh - ri : rh - rhm;  // f_i dual-cell width
    const double Dg = rf - ri;                      // g_i dual-cell width
    t.diag(2 * i) = p.m + (p.nu + p.mu) / ri;
    t.diag(2 * i + 1) = -p.m + (p.nu - p.mu) / rh;
    // staggered two-point derivative plus averaged kd/r coupling; the
    // nonuniform operator is symmetric in the cell-weighted inner product,
    // and the geometric mean of the two one-sided coefficients realizes the
    // diagonal similarity that makes it plainly symmetric
    const double rc1 = (ri + rh) / 2;
    const double a = -1.0 / Df + kd / (2 * rc1);  // f_i <- g_i
    const double c = -1.0 / Dg + kd / (2 * rc1);  // g_i <- f_i
    t.off(2 * i) = (a < 0 ? -1 : 1) * std::sqrt(std::abs(a * c));
    if (i + 1 < n) {
      const double rfp = node_r(p, (i + 1.5) / n);
      const double Dfp = rfp - rh;  // f_{i+1} dual cell
      const double rc2 = (rh + rf) / 2;
      const double dd = 1.0 / Dg + kd / (2 * rc2);  // g_i <- f_{i+1}
      const double b = 1.0 / Dfp + kd / (2 * rc2);  // f_{i+1} <- g_i
      t.off(2 * i + 1) = (dd < 0 ? -1 : 1) * std::sqrt(std::abs(dd * b));
    }
  }
  return t;
}

SpectrumResult solve(const RadialProblem& p, double lo, double hi, double margin) {
  if (!(lo < hi)) throw std::invalid_argument("solve: empty window");
  const TriDiag t = assemble(p);
  const int n2 = t.size();

  std::vector<double> d(t.diag.data(), t.diag.data() + n2);
  std::vector<double> e(t.off.data(), t.off.data() + n2 - 1);
  std::vector<double> wvals(n2);
  std::vector<double> z(static_cast<std::size_t>(n2) * n2 / 4 + n2);  // grown below
  // eigenvector storage: worst case all eigenvalues in window; allocate lazily
  lapack_int found = 0;
  std::vector<lapack_int> ifail(n2);

  // first pass: count eigenvalues in the window (values only)
  {
    std::vector<double> dc = d, ec = e;
    lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'N', 'V', n2, dc.data(), ec.data(),
                                     lo, hi, 0, 0, 2 * LAPACKE_dlamch('S'), &found,
                                     wvals.data(), nullptr, n2, ifail.data());
    if (info != 0)
      throw std::runtime_error("solve: dstevx (values) failed with info " +
                               std::to_string(info));
  }

  SpectrumResult out;
  out.margin = margin < 0 ? 1e-3 * p.m : margin;
  if (found == 0) return out;

  z.assign(static_cast<std::size_t>(n2) * found, 0.0);
  {
    std::vector<double> dc = d, ec = e;
    lapack_int got = 0;
    lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'V', n2, dc.data(), ec.data(),
                                     lo, hi, 0, 0, 2 * LAPACKE_dlamch('S'), &got,
                                     wvals.data(), z.data(), n2, ifail.data());
    if (info != 0)
      throw std::runtime_error("solve: dstevx (vectors) failed with info " +
                               std::to_string(info));
    found = got;
  }

  const double hnorm = t.norm_bound();
  // nodes with r < r_max/2 on the graded mesh: s^2 < (r_max/2 - r_min)/(r_max - r_min)
  const int half_nodes = static_cast<int>(std::floor(
      p.n * std::sqrt((p.r_max / 2 - p.r_min) / (p.r_max - p.r_min))));
  for (int q = 0; q < found; ++q) {
    Eigen::Map<const Eigen::VectorXd> v(z.data() + static_cast<std::size_t>(q) * n2, n2);
    const double lambda = wvals[q];
    const double res = (t.multiply(v) - lambda * v).norm() / v.norm();
    if (res > 1e-8 * std::max(1.0, hnorm))
      throw std::runtime_error("solve: residual above 1e-8 * ||H|| for lambda = " +
                               std::to_string(lambda));
    double inner = 0;
    const int cut = std::clamp(half_nodes, 0, p.n);
    for (int i = 0; i < cut; ++i)
      inner += v(2 * i) * v(2 * i) + v(2 * i + 1) * v(2 * i + 1);
    out.eigenvalues.push_back(lambda);
    out.residuals.push_back(res);
    out.localizations.push_back(inner / v.squaredNorm());
    // m > 0: strict interior of the spectral gap; m = 0: no gap, every
    // eigenvalue in the requested window is a candidate
    if (p.m == 0 || std::abs(lambda) < p.m - out.margin)
      out.in_gap.push_back(static_cast<int>(out.eigenvalues.size()) - 1);
  }
  return out;
}

double sommerfeld(double nu, int kappa, int n_r, double m) {
  if (kappa == 0) throw std::invalid_argument("sommerfeld: kappa must be nonzero");
  if (!(m > 0)) throw std::invalid_argument("sommerfeld: mass must be positive");
  if (nu >= 0) throw std::invalid_argument("sommerfeld: coupling must be attractive (nu < 0)");
  if (std::abs(nu) >= std::abs(kappa))
    throw std::invalid_argument("sommerfeld: requires |nu| < |kappa|");
  if (n_r < 0 || (kappa > 0 && n_r < 1))
    throw std::invalid_argument("sommerfeld: n_r >= 1 required when kappa > 0");
  const double gamma = std::sqrt(static_cast<double>(kappa) * kappa - nu * nu);
  const double t = nu / (n_r + gamma);
  return m / std::sqrt(1 + t * t);
}

std::vector<RefinementVerdict> refinement_study(const RadialProblem& p, double lo,
                                                double hi, const RefinementOptions& opt) {
  RadialProblem fine = p;
  fine.n = 2 * p.n;
  RadialProblem wide = p;
  wide.r_max = 2 * p.r_max;
  wide.n = 2 * p.n;  // keep h comparable on the doubled domain

  const SpectrumResult base = solve(p, lo, hi);
  const SpectrumResult refined = solve(fine, lo, hi);
  const SpectrumResult domain = solve(wide, lo, hi);

  auto nearest = [](const std::vector<double>& vals, double x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : vals) best = std::min(best, std::abs(v - x));
    return best;
  };
  auto nearest_loc = [](const SpectrumResult& s, double x) {
    double bestd = std::numeric_limits<double>::infinity();
    double loc = 0;
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
      if (std::abs(s.eigenvalues[i] - x) < bestd) {
        bestd = std::abs(s.eigenvalues[i] - x);
        loc = s.localizations[i];
      }
    return loc;
  };

  std::vector<RefinementVerdict> out;
  for (int idx : base.in_gap) {
    const double lambda = base.eigenvalues[idx];
    const double scale = std::max(std::abs(lambda), 1e-12);
    RefinementVerdict v;
    v.lambda = lambda;
    v.drift_grid = nearest(refined.eigenvalues, lambda) / scale;
    v.drift_domain = nearest(domain.eigenvalues, lambda) / scale;
    v.localization = base.localizations[idx];
    v.localization_domain =
        domain.eigenvalues.empty() ? 0.0 : nearest_loc(domain, lambda);
    v.stable = v.drift_grid <= opt.drift_tol && v.drift_domain <= opt.drift_tol;
    v.localized = v.localization >= opt.loc_tol && v.localization_domain >= opt.loc_tol;
    out.push_back(v);
  }
  return out;
}

Eigen::MatrixXd random_orthogonal(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = nd(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q;
}

double conjugation_invariance_check(const RadialProblem& p, const Eigen::MatrixXd& P) {
  const TriDiag t = assemble(p);
  const int n2 = t.size();
  if (P.rows() != n2 || P.cols() != n2)
    throw std::invalid_argument("conjugation_invariance_check: P has wrong size");
  if ((P * P.transpose() - Eigen::MatrixXd::Identity(n2, n2)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("conjugation_invariance_check: P is not orthogonal");
  if (n2 > 2048)
    throw std::invalid_argument(
        "conjugation_invariance_check: dense path limited to n <= 1024");

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n2, n2);
  H.diagonal() = t.diag;
  for (int i = 0; i + 1 < n2; ++i) {
    H(i, i + 1) = t.off(i);
    H(i + 1, i) = t.off(i);
  }
  const Eigen::MatrixXd Hc = P * H * P.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(H, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e2(
      0.5 * (Hc + Hc.transpose()), Eigen::EigenvaluesOnly);
  return (e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff();
}

std::string spectrum_csv_header() {
  return "kappa,nu,mu,delta,m,n,r_max,lambda,residual,localization,persistent\n";
}

void append_spectrum_csv(std::string& out, const RadialProblem& p, double lambda,
                         double residual, double localization, bool persistent) {
  std::ostringstream os;
  os.precision(12);
  os << p.kappa << ',' << p.nu << ',' << p.mu << ',' << p.delta << ',' << p.m << ','
     << p.n << ',' << p.r_max << ',' << lambda << ',' << residual << ','
     << localization << ',' << (persistent ? 1 : 0) << '\n';
  out += os.str();
}

}  // namespace dirac
