#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dirac/fields.hpp"
#include "dirac/grid.hpp"

namespace dirac {

/// The six no-eigenvalue theorems. `General` admits arbitrary Hermitian
/// matrix potentials (bound "<= 2", non-strict); the specialized ones are
/// strict.
enum class Theorem { General, Electric, MasslessElectric, Scalar, Anomalous, Anomalous3d };

std::string to_string(Theorem t);
Theorem theorem_from_string(const std::string& name);

/// Constants eps_1..eps_5 entering a theorem's smallness inequality; unset
/// slots are absent, +inf marks a divergent weight.
struct EpsilonBundle {
  std::array<std::optional<Weight>, 5> eps;

  void set(int slot, double value, Provenance prov = Provenance::ClosedForm);
  bool has(int slot) const { return eps[slot - 1].has_value(); }
  double value(int slot) const;  // throws if unset
  bool any_grid_estimate() const;
  nlohmann::json to_json() const;
};

enum class Verdict { Holds, Fails, NotCertifiable };
std::string to_string(Verdict v);

struct HypothesisReport {
  Theorem theorem = Theorem::General;
  int d = 3;
  double m = 0;
  double lhs = 0;
  double bound = 2;
  double margin = 2;  // bound - lhs
  Verdict verdict = Verdict::Fails;
  std::vector<std::string> notes;
  EpsilonBundle eps;

  nlohmann::json to_json() const;
};

/// Hardy reduction: a condition  int W |psi|^2 <= eps^2 ||grad_A psi||^2  with
/// pointwise majorant W <= c^2 |x|^{-2} admits eps = 2c/(d-2). Slots are
/// filled per theorem from the sup-weight table; divergent weights map to
/// +inf. Magnetic gradients may be replaced by free ones (diamagnetic
/// inequality), so the reduction needs only the free Hardy constant.
EpsilonBundle derive_epsilons(const WeightTable& w, int d, Theorem t);

/// Evaluate the theorem's published smallness combination. Verdict Holds
/// requires the inequality (strict except for General) and closed-form
/// provenance of every used slot; grid-estimated slots yield NotCertifiable
/// with a holds-numerically note.
HypothesisReport check_theorem(const EpsilonBundle& b, int d, double m, Theorem t);

/// One-parameter potential family: parameter -> epsilon bundle. Bundles must
/// be monotone nondecreasing slotwise in the parameter.
struct CouplingFamily {
  std::string name;
  std::function<EpsilonBundle(double)> at;
};

/// Built-in families: "coulomb-electric" (v = -c/r), "coulomb-scalar",
/// "inverse-square-magnetic" (|B| = c/|x|^2, realized azimuthally in d=3),
/// "coulomb-anomalous" (phi = c ln r).
CouplingFamily make_family(const std::string& name, int d, Theorem t);

enum class ThresholdMethod { ClosedForm, Bisection };

/// Largest parameter at which the theorem's inequality still holds.
/// ClosedForm fits the (quadratic-in-parameter) left side exactly and solves
/// it; Bisection brackets and bisects to 1e-12 absolute. Returns +inf when
/// the epsilons do not grow. Throws if the inequality fails already at 0 or
/// the family is not monotone.
double critical_coupling(Theorem t, int d, double m, const CouplingFamily& family,
                         ThresholdMethod method = ThresholdMethod::ClosedForm);

/// Sampled falsification screen of the first-theorem hypothesis
/// ||V psi|| <= ||H_m(A) psi|| - m ||psi||: evaluates both sides per spinor
/// by quadrature. Can only refute, never certify.
struct ScreenRow {
  double lhs = 0;      // ||V psi||
  double rhs = 0;      // ||H_m(A) psi|| - m ||psi||
  bool violated = false;
};
struct ScreenReport {
  std::vector<ScreenRow> rows;
  int violations = 0;
  nlohmann::json to_json() const;
};

ScreenReport screen_theorem1(const PotentialSpec& vspec, const MagneticSpec& aspec,
                             const DiracRep& rep, double m, const BoxGrid& g,
                             const std::vector<TestSpinor>& spinors);

}  // namespace dirac
