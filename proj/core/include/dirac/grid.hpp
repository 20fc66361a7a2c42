#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dirac/fields.hpp"

namespace dirac {

using Cplx = std::complex<double>;
using Field = Eigen::VectorXcd;  // one spinor component, flattened n^3

/// Uniform cube [-L, L]^3 with n points per axis, spacing h = 2L/(n-1).
struct BoxGrid {
  int d = 3;
  double L = 8.0;
  int n = 128;

  BoxGrid() = default;
  BoxGrid(double L_, int n_);

  double h() const { return 2.0 * L / (n - 1); }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  double coord(int i) const { return -L + h() * i; }
  Eigen::Vector3d point(int i, int j, int k) const {
    return {coord(i), coord(j), coord(k)};
  }
  nlohmann::json to_json() const;
};

/// Closed-form test spinor psi(x) = envelope(x) * u with u a fixed spinor
/// direction. Envelopes:
///   GaussianBump:        exp(-|x-c|^2 / (2 w^2))
///   PolynomialGaussian:  (a.(x-c))^deg * exp(-|x-c|^2 / (2 w^2))
///   CutoffComposed:      smooth shell supported in r_inner <= |x| <= r_outer
/// all optionally times a plane-wave phase exp(i k.x).
struct TestSpinor {
  enum class Kind { GaussianBump, PolynomialGaussian, CutoffComposed };
  Kind kind = Kind::GaussianBump;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double width = 1.0;
  int degree = 0;
  Eigen::Vector3d poly_dir = Eigen::Vector3d::UnitX();
  double r_inner = 1.0, r_outer = 4.0;
  Eigen::Vector3d kvec = Eigen::Vector3d::Zero();
  Eigen::VectorXcd u;

  static TestSpinor gaussian(const Eigen::VectorXcd& u, Eigen::Vector3d center,
                             double width);
  static TestSpinor polynomial_gaussian(const Eigen::VectorXcd& u, int degree,
                                        Eigen::Vector3d dir, double width);
  static TestSpinor cutoff_composed(const Eigen::VectorXcd& u, double r_inner,
                                    double r_outer);

  Cplx envelope(const Eigen::Vector3d& x) const;
  Eigen::Vector3cd envelope_grad(const Eigen::Vector3d& x) const;  // analytic
  /// Largest radius (from the origin) beyond which |envelope| < 1e-14.
  double support_radius() const;
};

/// Spinor field sampled on a BoxGrid.
struct GridSpinor {
  BoxGrid g;
  std::vector<Field> c;  // N components

  int N() const { return static_cast<int>(c.size()); }
};

GridSpinor sample_spinor(const TestSpinor& psi, const BoxGrid& g, int N);
/// Scalar envelope only (component reuse keeps memory flat).
Field sample_envelope(const TestSpinor& psi, const BoxGrid& g);
/// Pointwise scalar function of position.
Field sample_scalar(const BoxGrid& g, const std::function<Cplx(const Eigen::Vector3d&)>& f);

/// Central-difference first/second derivative along an axis (0,1,2) with
/// stencil order 2, 4, 6 or 8; out-of-range neighbors treated as zero, valid
/// for fields negligible at the boundary. Default order 8.
Field diff(const BoxGrid& g, const Field& f, int axis, int order = 8);
Field diff2(const BoxGrid& g, const Field& f, int axis, int order = 8);

/// Trapezoid quadrature of conj(a).b over the box, excluding a `skin`-layer
/// frame (stencil support at the boundary is incomplete).
Cplx quad_inner(const BoxGrid& g, const Field& a, const Field& b, int skin = 4);
double quad_norm2(const BoxGrid& g, const Field& a, int skin = 4);
Cplx quad_inner(const GridSpinor& a, const GridSpinor& b, int skin = 4);
double quad_norm2(const GridSpinor& a, int skin = 4);

/// Max |psi| over the outermost grid layer (type invariant: < 1e-12).
double boundary_mass(const GridSpinor& a);

/// Smooth radial cutoff xi (=1 on r<=1, =0 on r>=2, polynomial smoothstep in
/// between) and the two-sided family xi_R(x) = xi(x/R) - xi(Rx), which
/// vanishes near 0 and near infinity. Two transition profiles are provided to
/// demonstrate profile independence.
struct CutoffFamily {
  enum class Profile { Smoothstep7, Smoothstep9 };
  Profile profile = Profile::Smoothstep7;

  double xi(double r) const;
  double dxi(double r) const;  // d/dr
  double xi_R(double r, double R) const;
  double dxi_R(double r, double R) const;  // radial derivative
  /// sup_r |xi'(r)|
  double grad_sup() const;
};

}  // namespace dirac
