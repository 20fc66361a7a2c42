#include "dirac/hardy.hpp"

#include <cmath>
#include <stdexcept>

#include "dirac/identities.hpp"

namespace dirac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Weight scale(const Weight& w, double f) { return {f * w.value, w.prov}; }
Weight root(const Weight& w) { return {std::sqrt(w.value), w.prov}; }

struct Term {
  double coeff;
  int slot_a;
  int slot_b;  // 0 for linear terms
  bool mass = false;
};

// the published left-hand-side combinations, coefficients as functions of d
std::vector<Term> terms_of(Theorem t, int d) {
  const double D = d - 2;
  switch (t) {
    case Theorem::General:
      return {{(4 * d - 6) / D, 1, 0},
              {4 / D, 2, 3},
              {2, 4, 4, true},
              {(8 * d - 8) / D, 3, 0},
              {(4 * d - 4) / D, 2, 0}};
    case Theorem::Electric:
      return {{(4 * d - 6) / D, 1, 0},
              {4 / D, 2, 3},
              {(8 * d - 8) / D, 3, 0},
              {2, 2, 0},
              {2, 4, 4, true}};
    case Theorem::MasslessElectric:
      return {{(4 * d - 7) / D, 1, 0}, {2, 2, 0}, {1, 2, 2}};
    case Theorem::Scalar:
      return {{(4 * d - 6) / D, 1, 0},
              {2, 2, 3},
              {2, 4, 4, true},
              {(4 * d - 4) / D, 2, 0}};
    case Theorem::Anomalous:
      return {{(4 * d - 6) / D, 1, 0},
              {(16 * d - 16) / D, 2, 0},
              {(8 * d - 8) / (D * D), 2, 2},
              {(4 * d - 4) / D, 3, 0}};
    case Theorem::Anomalous3d:
      return {{(4 * d - 6) / D, 1, 0},
              {(8 * d - 8) / (D * D), 2, 2},
              {(8 * d - 8) / (D * D), 4, 4},
              {(16 * d - 16) / (D * D), 2, 4},
              {(16 * d - 16) / D, 1, 0, true},
              {(16 * d - 16) / D, 2, 0},
              {(24 * d - 24) / D, 4, 0},
              {(4 * d - 4) / D, 3, 0},
              {(8 * d - 8) / D, 5, 0}};
  }
  return {};
}

std::vector<int> required_slots(Theorem t, double m) {
  switch (t) {
    case Theorem::General:
    case Theorem::Electric:
      return m > 0 ? std::vector<int>{1, 2, 3, 4} : std::vector<int>{1, 2, 3};
    case Theorem::MasslessElectric:
      return {1, 2};
    case Theorem::Scalar:
      return m > 0 ? std::vector<int>{1, 2, 3, 4} : std::vector<int>{1, 2, 3};
    case Theorem::Anomalous:
      return {1, 2, 3};
    case Theorem::Anomalous3d:
      return {1, 2, 3, 4, 5};
  }
  return {};
}

bool strict(Theorem t) { return t != Theorem::General; }

}  // namespace

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::General: return "general";
    case Theorem::Electric: return "electric";
    case Theorem::MasslessElectric: return "massless-electric";
    case Theorem::Scalar: return "scalar";
    case Theorem::Anomalous: return "anomalous";
    case Theorem::Anomalous3d: return "anomalous-3d";
  }
  return "?";
}

Theorem theorem_from_string(const std::string& name) {
  for (Theorem t : {Theorem::General, Theorem::Electric, Theorem::MasslessElectric,
                    Theorem::Scalar, Theorem::Anomalous, Theorem::Anomalous3d})
    if (to_string(t) == name) return t;
  throw std::invalid_argument("unknown theorem: " + name);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::NotCertifiable: return "not-certifiable";
  }
  return "?";
}

void EpsilonBundle::set(int slot, double value, Provenance prov) {
  if (slot < 1 || slot > 5) throw std::invalid_argument("epsilon slot out of range");
  if (value < 0) throw std::invalid_argument("epsilon must be nonnegative");
  eps[slot - 1] = Weight{value, prov};
}

double EpsilonBundle::value(int slot) const {
  if (!has(slot))
    throw std::invalid_argument("epsilon_" + std::to_string(slot) + " missing");
  return eps[slot - 1]->value;
}

bool EpsilonBundle::any_grid_estimate() const {
  for (const auto& e : eps)
    if (e && e->prov == Provenance::GridEstimate) return true;
  return false;
}

nlohmann::json EpsilonBundle::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (int s = 1; s <= 5; ++s) {
    if (!has(s)) {
      arr.push_back(nullptr);
      continue;
    }
    const auto& w = *eps[s - 1];
    arr.push_back({{"value", w.finite() ? nlohmann::json(w.value) : nlohmann::json("inf")},
                   {"provenance", to_string(w.prov)}});
  }
  return arr;
}

nlohmann::json HypothesisReport::to_json() const {
  return {{"theorem", to_string(theorem)}, {"d", d},          {"m", m},
          {"eps", eps.to_json()},          {"lhs", std::isfinite(lhs) ? nlohmann::json(lhs) : nlohmann::json("inf")},
          {"bound", bound},                {"margin", std::isfinite(margin) ? nlohmann::json(margin) : nlohmann::json("-inf")},
          {"verdict", to_string(verdict)}, {"notes", notes}};
}

EpsilonBundle derive_epsilons(const WeightTable& w, int d, Theorem t) {
  if (d < 3) throw std::invalid_argument("derive_epsilons: d must be >= 3");
  const double h = 2.0 / (d - 2);
  EpsilonBundle b;
  auto put = [&](int slot, const Weight& wt) { b.eps[slot - 1] = wt; };
  switch (t) {
    case Theorem::General:
    case Theorem::Electric:
      put(1, scale(w.x2B, h));
      put(2, scale(w.x2gradV, h));
      put(3, w.xV);  // direct sup, no Hardy reduction
      put(4, scale(root(w.x3gradV), h));
      break;
    case Theorem::MasslessElectric:
      put(1, scale(w.x2B, h));
      put(2, scale(w.xV, h));
      break;
    case Theorem::Scalar:
      put(1, scale(w.x2B, h));
      put(2, scale(w.x2gradV, h));
      put(3, scale(w.xV, h));
      put(4, scale(root(w.x3gradV), h));
      break;
    case Theorem::Anomalous:
      put(1, scale(w.x2B, h));
      put(2, w.xGradPhi);  // direct sup
      put(3, scale(w.x2LapPhi, h));
      break;
    case Theorem::Anomalous3d:
      put(1, scale(w.x2B, h));
      put(2, w.xGradPhi);
      put(3, scale(w.x2LapPhi, h));
      put(4, w.xB);  // direct sup
      put(5, scale(w.x2gradB, h));
      break;
  }
  return b;
}

HypothesisReport check_theorem(const EpsilonBundle& b, int d, double m, Theorem t) {
  if (d < 3) throw std::invalid_argument("check_theorem: d must be >= 3");
  if (m < 0) throw std::invalid_argument("check_theorem: mass must be nonnegative");
  if (t == Theorem::MasslessElectric && m != 0)
    throw std::invalid_argument("check_theorem: massless-electric requires m = 0");
  if (t == Theorem::Anomalous3d && d != 3)
    throw std::invalid_argument("check_theorem: anomalous-3d requires d = 3");

  HypothesisReport rep;
  rep.theorem = t;
  rep.d = d;
  rep.m = m;
  rep.bound = t == Theorem::MasslessElectric ? 1.0 : 2.0;
  rep.eps = b;

  for (int s : required_slots(t, m)) (void)b.value(s);  // throws naming the slot

  double lhs = 0;
  bool used_grid = false;
  for (const auto& term : terms_of(t, d)) {
    if (term.mass && m == 0) continue;
    double v = term.coeff * b.value(term.slot_a);
    if (term.slot_b) v *= b.value(term.slot_b);
    if (term.mass) v *= m;
    if (std::isinf(v) && term.mass)
      rep.notes.push_back("mass term divergent");
    for (int s : {term.slot_a, term.slot_b})
      if (s && b.eps[s - 1]->prov == Provenance::GridEstimate) used_grid = true;
    lhs += v;
  }
  rep.lhs = lhs;
  rep.margin = rep.bound - lhs;
  const bool ineq = strict(t) ? lhs < rep.bound : lhs <= rep.bound;
  rep.notes.push_back("epsilons derived with the free gradient (diamagnetic inequality)");
  if (!ineq) {
    rep.verdict = Verdict::Fails;
  } else if (used_grid) {
    rep.verdict = Verdict::NotCertifiable;
    rep.notes.push_back(
        "holds-numerically: grid-estimated epsilon is a lower bound and cannot certify");
  } else {
    rep.verdict = Verdict::Holds;
  }
  return rep;
}

CouplingFamily make_family(const std::string& name, int d, Theorem t) {
  CouplingFamily fam;
  fam.name = name;
  if (name == "coulomb-electric") {
    fam.at = [d, t](double c) {
      auto spec = PotentialSpec::electric(d, RadialProfile::power_law(-c, 1.0));
      return derive_epsilons(sup_weights(spec, MagneticSpec::zero(d), build_dirac_rep(d)),
                             d, t);
    };
  } else if (name == "coulomb-scalar") {
    fam.at = [d, t](double c) {
      auto spec = PotentialSpec::scalar(d, RadialProfile::power_law(-c, 1.0));
      return derive_epsilons(sup_weights(spec, MagneticSpec::zero(d), build_dirac_rep(d)),
                             d, t);
    };
  } else if (name == "inverse-square-magnetic") {
    fam.at = [d, t](double c) {
      WeightTable w;  // |B| = c/|x|^2 exactly: only the x^2|B| weight is finite
      w.x2B = {c, Provenance::ClosedForm};
      w.xB = Weight::infinite();
      w.x2gradB = Weight::infinite();
      return derive_epsilons(w, d, t);
    };
  } else if (name == "coulomb-anomalous") {
    fam.at = [d, t](double c) {
      auto spec = PotentialSpec::anomalous(d, RadialProfile::log_coulomb(c));
      return derive_epsilons(sup_weights(spec, MagneticSpec::zero(d), build_dirac_rep(d)),
                             d, t);
    };
  } else {
    throw std::invalid_argument("unknown coupling family: " + name);
  }
  return fam;
}

double critical_coupling(Theorem t, int d, double m, const CouplingFamily& family,
                         ThresholdMethod method) {
  const double bound = t == Theorem::MasslessElectric ? 1.0 : 2.0;
  auto lhs_at = [&](double c) { return check_theorem(family.at(c), d, m, t).lhs; };
  auto holds_at = [&](double c) {
    return check_theorem(family.at(c), d, m, t).verdict != Verdict::Fails;
  };

  if (!holds_at(0))
    throw std::runtime_error("critical_coupling: inequality fails already at 0");

  if (method == ThresholdMethod::ClosedForm) {
    const double L0 = lhs_at(0), L1 = lhs_at(1), L2 = lhs_at(2), L3 = lhs_at(3);
    if (!std::isfinite(L1) || !std::isfinite(L2) || !std::isfinite(L3))
      throw std::runtime_error(
          "critical_coupling: family diverges at finite parameter; use bisection");
    const double a = (L2 - 2 * L1 + L0) / 2;
    const double bq = L1 - L0 - a;
    const double fit3 = 9 * a + 3 * bq + L0;
    if (std::abs(fit3 - L3) > 1e-9 * std::max(1.0, std::abs(L3)))
      throw std::runtime_error(
          "critical_coupling: left side is not quadratic in the parameter; use bisection");
    if (a < -1e-14 || (a <= 0 && bq < -1e-14))
      throw std::runtime_error("critical_coupling: family not monotone nondecreasing");
    const double rhs = bound - L0;
    if (a <= 1e-14 && bq <= 1e-14) return kInf;  // epsilons do not grow
    if (a <= 1e-14) return rhs / bq;
    return (-bq + std::sqrt(bq * bq + 4 * a * rhs)) / (2 * a);
  }

  // bisection: bracket by doubling, monotonicity asserted along the way
  double lo = 0, hi = 1;
  double prev = lhs_at(0);
  while (holds_at(hi)) {
    const double cur = lhs_at(hi);
    if (cur < prev - 1e-12)
      throw std::runtime_error("critical_coupling: family not monotone nondecreasing");
    prev = cur;
    lo = hi;
    hi *= 2;
    if (hi > 1e15) return kInf;
  }
  while (hi - lo > 1e-12) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;  // double resolution floor
    if (holds_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

nlohmann::json ScreenReport::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"lhs", r.lhs}, {"rhs", r.rhs}, {"violated", r.violated}});
  return {{"rows", rows_j}, {"violations", violations}};
}

ScreenReport screen_theorem1(const PotentialSpec& vspec, const MagneticSpec& aspec,
                             const DiracRep& rep, double m, const BoxGrid& g,
                             const std::vector<TestSpinor>& spinors) {
  if (m < 0) throw std::invalid_argument("screen_theorem1: mass must be nonnegative");

  // quadrature self-estimate on the first spinor: full vs stride-2 trapezoid
  if (!spinors.empty()) {
    const Field env = sample_envelope(spinors.front(), g);
    double fine = 0, coarse = 0;
    const double h = g.h();
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const double v = std::norm(env(g.index(i, j, k)));
          fine += v;
          if (i % 2 == 0 && j % 2 == 0 && k % 2 == 0) coarse += v * 8;
        }
    fine *= h * h * h;
    coarse *= h * h * h;
    if (fine <= 0 || std::abs(fine - coarse) / fine > 1e-4)
      throw std::invalid_argument(
          "screen_theorem1: grid too coarse (quadrature self-estimate above 1e-4)");
  }

  ScreenReport out;
  const int skin = 4;
  for (const auto& sp : spinors) {
    GridSpinor psi = sample_spinor(sp, g, rep.N);
    GridSpinor hpsi = apply_dirac(rep, aspec, m, psi);

    // V psi pointwise; skip the (at most one) node at the singular origin
    GridSpinor vpsi;
    vpsi.g = g;
    vpsi.c.assign(rep.N, Field::Zero(g.size()));
    Eigen::VectorXcd val(rep.N);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const Eigen::Vector3d x = g.point(i, j, k);
          if (x.norm() < 1e-12) continue;
          const std::size_t idx = g.index(i, j, k);
          for (int b = 0; b < rep.N; ++b) val(b) = psi.c[b](idx);
          const Eigen::VectorXcd w = eval_potential(vspec, rep, x) * val;
          for (int b = 0; b < rep.N; ++b) vpsi.c[b](idx) = w(b);
        }

    ScreenRow row;
    row.lhs = std::sqrt(quad_norm2(vpsi, skin));
    row.rhs = std::sqrt(quad_norm2(hpsi, skin)) - m * std::sqrt(quad_norm2(psi, skin));
    row.violated = row.lhs > row.rhs + 1e-10 * std::max(1.0, row.lhs);
    if (row.violated) ++out.violations;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace dirac
