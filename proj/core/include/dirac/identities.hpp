#pragma once

#include <string>
#include <vector>

#include "dirac/clifford.hpp"
#include "dirac/fields.hpp"
#include "dirac/grid.hpp"

namespace dirac {

/// Quadrature verification record.
struct GriddedReport {
  std::string identity;
  BoxGrid g;
  double lhs = 0;
  double rhs = 0;
  double rel_error = 0;
  double order_estimate = 0;  // 0 when no refinement was run
  bool pass = false;

  nlohmann::json to_json() const;
};

/// (-i alpha . grad_A + m beta) psi via high-order stencils. The boundary
/// layer (half stencil width) must be excluded from subsequent quadratures.
GridSpinor apply_dirac(const DiracRep& rep, const MagneticSpec& aspec, double m,
                       const GridSpinor& psi, int order = 8);

/// grad_A psi: d x N component fields (d_j - i A_j) psi.
std::vector<Field> covariant_gradient(const BoxGrid& g, const MagneticSpec& aspec,
                                      const Field& comp, int order = 8);

/// Residual of H_m(A)^2 psi = (-Delta_A + (i/2) alpha.B.alpha + m^2) psi,
/// relative to ||psi||; with refine > 0, repeats on doubled grids and
/// estimates the convergence order from successive residual ratios.
GriddedReport verify_squaring(const DiracRep& rep, const MagneticSpec& aspec, double m,
                              const TestSpinor& psi, const BoxGrid& g, int refine = 1,
                              int order = 8);

/// Multiplier identities for compactly supported psi:
///   1: Re<2x.grad_A psi + d psi, -Delta_A psi>
///        = 2 ||grad_A psi||^2 - 2 Im int x_k B_jk psi* d_j^A psi
///      (with B_jk = d_j A_k - d_k A_j)
///   2: Re<2x.grad psi + d psi, M psi> = -<psi, (x.grad M) psi>
///   3: Re<2x.grad psi + d psi, c psi> = 0
/// M and its analytic x.grad M are supplied as pointwise matrix functions.
GriddedReport verify_multiplier(int which, const DiracRep& rep, const MagneticSpec& aspec,
                                const TestSpinor& psi, const BoxGrid& g,
                                const std::function<Mat(const Eigen::Vector3d&)>& M = {},
                                const std::function<Mat(const Eigen::Vector3d&)>& xdM = {},
                                double c = 0, int order = 8);

/// Residual checks of {H_m(A), V} psi = (-i {alpha, V}.grad_A - i (alpha.grad V)
/// + m {beta, V}) psi and of the full square expansion
/// H_m(A,V)^2 psi = (H_m(A)^2 + V^2 + {H_m(A), V}) psi.
/// The spinor support must avoid the potential's singularity at the origin.
GriddedReport verify_anticommutator_expansion(const DiracRep& rep, const MagneticSpec& aspec,
                                              const PotentialSpec& vspec, double m,
                                              const TestSpinor& psi, const BoxGrid& g,
                                              int order = 8);

/// Pointwise field data feeding the anomalous-potential matrix identities:
/// grad phi, the (symmetric) Hessian of phi, and in d=3 the magnetic vector b
/// with its Jacobian J(j,k) = d_j b_k.
struct AmPointData {
  Eigen::Vector3d grad_phi = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hess_phi = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d jac_b = Eigen::Matrix3d::Zero();
};

struct AmIdentityResult {
  std::string identity;
  double max_error = 0;
  bool pass = false;
};

/// Check the four V_am matrix identities (and, with threeD, the four V_am^3d
/// ones) at the given field data, each to 1e-10. The representation may be
/// any unitary conjugate of the standard one; S and T must be conjugated
/// consistently.
std::vector<AmIdentityResult> verify_am_identities(
    const DiracRep& rep, const SpinSet& spin, const std::vector<AmPointData>& points,
    bool threeD);
/// Same, with a conjugated representation given as dense matrices.
std::vector<AmIdentityResult> verify_am_identities(
    const std::vector<Mat>& alphas, const Mat& beta, const std::array<Mat, 3>& S,
    const Mat& T, const std::vector<AmPointData>& points, bool threeD);

/// Field data from a radial profile phi and magnetic spec at a point.
AmPointData am_point_data(const RadialProfile& phi, const MagneticSpec& aspec,
                          const Eigen::Vector3d& x);

/// || (grad xi_R) psi || for each R, via radial quadrature of the closed-form
/// spherical average of |psi|^2 (psi must be a Gaussian bump or a radial
/// cutoff-composed spinor). The grid argument only gates feasibility: the
/// support of xi(x/R) must fit in the box.
struct DecayTable {
  std::vector<double> Rs;
  std::vector<double> values;
  bool strictly_decreasing = false;

  nlohmann::json to_json() const;
};

DecayTable verify_cutoff_decay(const TestSpinor& psi, const BoxGrid& g,
                               const std::vector<double>& Rs,
                               const CutoffFamily& fam = {});

/// Hardy ratio int |psi|^2/|x|^2 / ||grad psi||^2 (expected <= 4/(d-2)^2 plus
/// quadrature tolerance) and the maximal pointwise diamagnetic gap
/// |grad |psi|| - |grad_A psi| (expected <= 1e-8). Rejects spinors whose
/// support reaches the origin.
struct HardyDiamagnetic {
  double hardy_ratio = 0;
  double diamagnetic_gap = 0;
};

HardyDiamagnetic hardy_and_diamagnetic_check(const TestSpinor& psi,
                                             const MagneticSpec& aspec, const BoxGrid& g,
                                             int order = 8);

}  // namespace dirac
