#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dirac/clifford.hpp"

namespace dirac {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;

/// Scalar radial profile.
///   PowerLaw:   c * r^-sigma          (sigma >= 0)
///   LogCoulomb: c * ln(r)             (the anomalous Coulomb case: phi' = c/r)
///   Sampled:    linear interpolation of a strictly increasing (r, value) table,
///               zero outside the table range.
struct RadialProfile {
  enum class Kind { PowerLaw, LogCoulomb, Sampled };
  Kind kind = Kind::PowerLaw;
  double c = 0.0;
  double sigma = 0.0;
  std::vector<std::pair<double, double>> samples;

  static RadialProfile power_law(double c, double sigma);
  static RadialProfile log_coulomb(double c);
  static RadialProfile sampled(std::vector<std::pair<double, double>> table);

  double value(double r) const;
  double derivative(double r) const;         // analytic, or FD for sampled
  double second_derivative(double r) const;  // analytic, or FD for sampled
  bool analytic() const { return kind != Kind::Sampled; }
  void validate() const;
};

/// Declarative electric potential family.
struct PotentialSpec {
  enum class Variant { Zero, MatrixCoulomb, Electric, Scalar, Anomalous, Custom };
  Variant variant = Variant::Zero;
  int d = 3;
  // MatrixCoulomb couplings: V = (1/r)(nu I + mu beta + i delta beta (alpha.x/|x|))
  double nu = 0.0, mu = 0.0, delta = 0.0;
  // Electric/Scalar: v(r); Anomalous: phi_am(r); Custom: sampled v(r), V = v(r) I.
  RadialProfile profile;

  static PotentialSpec zero(int d);
  static PotentialSpec matrix_coulomb(int d, double nu, double mu, double delta);
  static PotentialSpec electric(int d, RadialProfile v);
  static PotentialSpec scalar(int d, RadialProfile v);
  static PotentialSpec anomalous(int d, RadialProfile phi);
  static PotentialSpec custom(int d, RadialProfile sampled_v);
};

/// Magnetic vector potential family. Azimuthal (d=3): A = g(r) * (-y, x, 0).
struct MagneticSpec {
  enum class Variant { Zero, Azimuthal, Custom };
  Variant variant = Variant::Zero;
  int d = 3;
  RadialProfile profile;  // g(r) for Azimuthal
  std::function<Vec(const Vec&)> custom_A;

  static MagneticSpec zero(int d = 3);
  static MagneticSpec azimuthal(RadialProfile g);
  static MagneticSpec custom(int d, std::function<Vec(const Vec&)> A);

  Vec vector_potential(const Vec& x) const;
};

/// Pointwise field data bundle.
struct FieldSample {
  Vec x;
  Mat V;
  std::vector<Mat> gradV;
  Eigen::MatrixXd B;
  double normV = 0, normGradV = 0, normB = 0;
};

/// V(x), Hermitian N x N. Rejects x = 0 and dimension mismatches.
Mat eval_potential(const PotentialSpec& spec, const DiracRep& rep, const Vec& x);

/// d matrices (dV/dx_j). Analytic for catalog families; central differences
/// with relative step 1e-5 |x| for Custom.
std::vector<Mat> eval_grad_potential(const PotentialSpec& spec, const DiracRep& rep,
                                     const Vec& x);

/// Antisymmetric matrix B_jk = d_j A_k - d_k A_j. Analytic for the catalog,
/// finite differences for Custom.
Eigen::MatrixXd eval_B(const MagneticSpec& aspec, const Vec& x);

/// d=3 vector b with B v = b x v. Note b = -curl A under this identification.
Eigen::Vector3d b_vector_from_matrix(const Eigen::MatrixXd& B);

/// |grad V|(x) = sqrt(sum_j |d_j V|^2) with operator norms.
double grad_norm(const std::vector<Mat>& gradV);

/// Pointwise |grad B|: sqrt(sum_l |d_l b|^2) in d=3 (finite differences for Custom).
FieldSample make_field_sample(const PotentialSpec& spec, const MagneticSpec& aspec,
                              const DiracRep& rep, const Vec& x);

enum class Provenance { ClosedForm, GridEstimate, UserSupplied };

struct Weight {
  double value = 0.0;
  Provenance prov = Provenance::ClosedForm;
  static Weight infinite() { return {std::numeric_limits<double>::infinity(), Provenance::ClosedForm}; }
  bool finite() const { return std::isfinite(value); }
};

/// Analytic sup-weights of the potential/magnetic pair.
struct WeightTable {
  Weight xV;        // sup |x| |V|
  Weight x2gradV;   // sup |x|^2 |grad V|
  Weight x3gradV;   // sup |x|^3 |grad V|
  Weight x2B;       // sup |x|^2 |B|
  Weight xGradPhi;  // sup |x| |grad phi_am|
  Weight x2LapPhi;  // sup |x|^2 |Delta phi_am|
  Weight xB;        // sup |x| |B|
  Weight x2gradB;   // sup |x|^2 |grad B|

  nlohmann::json to_json() const;
};

/// Closed forms for catalog families; Custom families are scanned over a
/// logarithmic radial grid (1000 points per decade on [1e-6, 1e6]) and the
/// result flagged as a lower-bound estimate. Divergent weights are +inf.
WeightTable sup_weights(const PotentialSpec& spec, const MagneticSpec& aspec,
                        const DiracRep& rep);

std::string to_string(Provenance p);

}  // namespace dirac
