#include "dirac/clifford.hpp"

#include <stdexcept>

namespace dirac {
namespace {

std::array<ExactMatrix, 3> pauli() {
  ExactMatrix s1(2), s2(2), s3(2);
  s1(0, 1) = {1, 0};
  s1(1, 0) = {1, 0};
  s2(0, 1) = {0, -1};
  s2(1, 0) = {0, 1};
  s3(0, 0) = {1, 0};
  s3(1, 1) = {-1, 0};
  return {s1, s2, s3};
}

// 2k+1 pairwise anticommuting Hermitian unitaries of size 2^k.
// k=1: the Pauli matrices. Step k -> k+1:
//   e'_j = sigma_1 (x) e_j,  e'_{2k+2} = sigma_2 (x) I,  e'_{2k+3} = sigma_3 (x) I.
std::vector<ExactMatrix> clifford_generators(int k) {
  auto sigma = pauli();
  const ExactMatrix s1 = sigma[0], s2 = sigma[1], s3 = sigma[2];
  std::vector<ExactMatrix> e(sigma.begin(), sigma.end());
  int n = 2;
  for (int level = 1; level < k; ++level) {
    std::vector<ExactMatrix> next;
    next.reserve(e.size() + 2);
    for (const auto& ej : e) next.push_back(s1.kron(ej));
    next.push_back(s2.kron(ExactMatrix::identity(n)));
    next.push_back(s3.kron(ExactMatrix::identity(n)));
    e = std::move(next);
    n *= 2;
  }
  return e;
}

}  // namespace

int spinor_size(int d) { return 1 << ((d + 1) / 2); }

DiracRep build_dirac_rep(int d) {
  if (d < 3 || d > 9)
    throw std::invalid_argument("build_dirac_rep: dimension must satisfy 3 <= d <= 9, got " +
                                std::to_string(d));
  const int k = (d + 1) / 2;
  auto e = clifford_generators(k);
  DiracRep rep;
  rep.d = d;
  rep.N = spinor_size(d);
  rep.alphas.assign(e.begin(), e.begin() + d);
  rep.beta = e[2 * k];  // sigma_3 (x) I (x) ... : the diagonal element
  return rep;
}

ExactMatrix anticommutator(const ExactMatrix& m1, const ExactMatrix& m2) {
  return m1 * m2 + m2 * m1;
}

Eigen::MatrixXcd anticommutator(const Eigen::MatrixXcd& m1, const Eigen::MatrixXcd& m2) {
  if (m1.rows() != m2.rows() || m1.cols() != m2.cols())
    throw std::invalid_argument("anticommutator: size mismatch");
  return m1 * m2 + m2 * m1;
}

SpinSet spin_and_T(const DiracRep& rep) {
  if (rep.d != 3) throw std::invalid_argument("spin_and_T: requires d = 3");
  auto sigma = pauli();
  SpinSet out;
  ExactMatrix id2 = ExactMatrix::identity(2);
  for (int j = 0; j < 3; ++j)
    out.S[j] = id2.kron(sigma[j]).scaled_by_half(1);  // diag(sigma_j, sigma_j)/2
  ExactMatrix s1(2);
  s1(0, 1) = {1, 0};
  s1(1, 0) = {1, 0};
  out.T = s1.kron(id2);  // off-diagonal identity swap
  return out;
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("operator_norm: matrix not square");
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-12 * scale)
    throw std::invalid_argument("operator_norm: input not Hermitian within 1e-12");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

nlohmann::json DiracRep::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["N"] = N;
  j["alphas"] = nlohmann::json::array();
  for (const auto& a : alphas) j["alphas"].push_back(a.to_json());
  j["beta"] = beta.to_json();
  return j;
}

}  // namespace dirac
