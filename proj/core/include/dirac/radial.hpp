#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace dirac {

/// kappa-channel radial Dirac problem with Coulomb-type couplings:
///   h_kappa = [ m + (nu+mu)/r        -d/dr + (kappa+delta)/r ]
///             [ d/dr + (kappa+delta)/r   -m + (nu-mu)/r      ]
/// on (r_min, r_max) with Dirichlet truncation, upper component on integer
/// nodes and lower component on half-offset nodes (staggered grid, no
/// fermion doubling).
struct RadialProblem {
  double nu = 0, mu = 0, delta = 0;
  double m = 0;
  int kappa = -1;
  double r_min = 1e-4;
  double r_max = 200.0;
  int n = 4096;
  bool staggered = true;

  double h() const { return (r_max - r_min) / n; }
  void validate() const;
};

/// Symmetric tridiagonal 2n x 2n matrix (interleaved components).
struct TriDiag {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;

  int size() const { return static_cast<int>(diag.size()); }
  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;
  double norm_bound() const;  // Gershgorin
};

TriDiag assemble(const RadialProblem& p);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // sorted
  std::vector<double> residuals;    // ||Hv - lambda v|| / ||v||
  std::vector<double> localizations;  // mass fraction with r < r_max/2
  std::vector<int> in_gap;          // indices with |lambda| < m - margin
  double margin = 0;
};

/// Eigenpairs with eigenvalues in [lo, hi] (LAPACK dstevx, residual-checked).
/// margin classifies the in-gap subset as |lambda| < m - margin; the default
/// (negative sentinel) means 1e-3 * m.
SpectrumResult solve(const RadialProblem& p, double lo, double hi,
                     double margin = -1.0);

/// Dirac-Coulomb bound-state energy
///   E = m [1 + nu^2 / (n_r + sqrt(kappa^2 - nu^2))^2]^{-1/2},
/// the independent oracle for the radial solver.
double sommerfeld(double nu, int kappa, int n_r, double m);

/// Persistence of a candidate eigenvalue under refinement.
struct RefinementVerdict {
  double lambda = 0;
  double drift_grid = 0;    // relative, n -> 2n
  double drift_domain = 0;  // relative, r_max -> 2 r_max
  double localization = 0;       // at base resolution
  double localization_domain = 0;  // at doubled domain
  bool stable = false;     // both drifts <= drift_tol
  bool localized = false;  // localization >= loc_tol at both domains
  bool persistent() const { return stable && localized; }
};

struct RefinementOptions {
  double drift_tol = 1e-4;
  double loc_tol = 0.99;
};

/// Solves at (n, r_max), (2n, r_max) and (n, 2 r_max), pairs in-gap
/// eigenvalues by proximity and flags persistent ones.
std::vector<RefinementVerdict> refinement_study(const RadialProblem& p, double lo,
                                                double hi,
                                                const RefinementOptions& opt = {});

/// Max eigenvalue drift between H and P H P^T for an orthogonal P (similarity
/// invariance; dense solve, keep n small). Rejects non-orthogonal P.
double conjugation_invariance_check(const RadialProblem& p, const Eigen::MatrixXd& P);

Eigen::MatrixXd random_orthogonal(int dim, unsigned seed);

std::string spectrum_csv_header();
void append_spectrum_csv(std::string& out, const RadialProblem& p, double lambda,
                         double residual, double localization, bool persistent);

}  // namespace dirac
