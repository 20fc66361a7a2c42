#pragma once

#include <array>
#include <vector>

#include "dirac/exact.hpp"

namespace dirac {

/// Hermitian Dirac matrices alpha_1..alpha_d, beta of size N = 2^floor((d+1)/2),
/// entries exact Gaussian integers. All pairs anticommute, squares are I.
struct DiracRep {
  int d = 0;
  int N = 0;
  std::vector<ExactMatrix> alphas;
  ExactMatrix beta;

  nlohmann::json to_json() const;
};

/// d=3 auxiliary matrices: spin operators S_j = diag(sigma_j, sigma_j)/2 and
/// the off-diagonal swap T, satisfying 2 S_j T = 2 T S_j = alpha_j.
struct SpinSet {
  std::array<ExactMatrix, 3> S;
  ExactMatrix T;
};

/// Spinor size for spatial dimension d.
int spinor_size(int d);

/// Recursive-doubling construction: the d=3 block is the standard Dirac
/// representation (alpha_j off-diagonal sigma_j, beta = diag(I, -I)); each
/// additional pair of dimensions doubles N by tensoring with Pauli matrices.
/// Supported range 3 <= d <= 9. Deterministic.
DiracRep build_dirac_rep(int d);

/// M1*M2 + M2*M1, exact.
ExactMatrix anticommutator(const ExactMatrix& m1, const ExactMatrix& m2);
Eigen::MatrixXcd anticommutator(const Eigen::MatrixXcd& m1, const Eigen::MatrixXcd& m2);

/// Spin/T matrices for the standard d=3 representation. Rejects d != 3.
SpinSet spin_and_T(const DiracRep& rep);

/// Largest absolute eigenvalue of a Hermitian matrix. Rejects inputs whose
/// anti-Hermitian part exceeds 1e-12 relative.
double operator_norm(const Eigen::MatrixXcd& m);

}  // namespace dirac
