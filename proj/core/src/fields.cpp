#include "dirac/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dirac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonzero(const Vec& x) {
  if (x.norm() == 0.0)
    throw std::invalid_argument("field evaluation: singular at x = 0");
}

void require_dim(int want, int got, const char* what) {
  if (want != got)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(got) + " vs " + std::to_string(want) + ")");
}

// sup over r in (0, inf) of K * r^p  (K >= 0)
Weight power_sup(double K, double p) {
  if (K == 0.0) return {0.0, Provenance::ClosedForm};
  if (p == 0.0) return {K, Provenance::ClosedForm};
  return Weight::infinite();
}

Mat alpha_dot(const DiracRep& rep, const Vec& v) {
  Mat m = Mat::Zero(rep.N, rep.N);
  for (int j = 0; j < rep.d; ++j) m += v(j) * rep.alphas[j].to_complex();
  return m;
}

}  // namespace

// ---------------------------------------------------------------- profiles

RadialProfile RadialProfile::power_law(double c, double sigma) {
  RadialProfile p;
  p.kind = Kind::PowerLaw;
  p.c = c;
  p.sigma = sigma;
  p.validate();
  return p;
}

RadialProfile RadialProfile::log_coulomb(double c) {
  RadialProfile p;
  p.kind = Kind::LogCoulomb;
  p.c = c;
  return p;
}

RadialProfile RadialProfile::sampled(std::vector<std::pair<double, double>> table) {
  RadialProfile p;
  p.kind = Kind::Sampled;
  p.samples = std::move(table);
  p.validate();
  return p;
}

void RadialProfile::validate() const {
  if (kind == Kind::PowerLaw && sigma < 0)
    throw std::invalid_argument("RadialProfile: power-law requires sigma >= 0");
  if (kind == Kind::Sampled) {
    if (samples.size() < 2)
      throw std::invalid_argument("RadialProfile: sampled table needs >= 2 rows");
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (samples[i].first <= samples[i - 1].first)
        throw std::invalid_argument("RadialProfile: sampled radii must be strictly increasing");
    if (samples.front().first <= 0)
      throw std::invalid_argument("RadialProfile: sampled radii must be positive");
  }
}

double RadialProfile::value(double r) const {
  switch (kind) {
    case Kind::PowerLaw:
      return c * std::pow(r, -sigma);
    case Kind::LogCoulomb:
      return c * std::log(r);
    case Kind::Sampled: {
      if (r <= samples.front().first) return 0.0;
      if (r >= samples.back().first) return 0.0;
      auto it = std::lower_bound(samples.begin(), samples.end(), r,
                                 [](const auto& s, double v) { return s.first < v; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double t = (r - lo.first) / (hi.first - lo.first);
      return lo.second + t * (hi.second - lo.second);
    }
  }
  return 0.0;
}

double RadialProfile::derivative(double r) const {
  switch (kind) {
    case Kind::PowerLaw:
      return -sigma * c * std::pow(r, -sigma - 1.0);
    case Kind::LogCoulomb:
      return c / r;
    case Kind::Sampled: {
      const double h = 1e-5 * r;
      return (value(r + h) - value(r - h)) / (2 * h);
    }
  }
  return 0.0;
}

double RadialProfile::second_derivative(double r) const {
  switch (kind) {
    case Kind::PowerLaw:
      return sigma * (sigma + 1.0) * c * std::pow(r, -sigma - 2.0);
    case Kind::LogCoulomb:
      return -c / (r * r);
    case Kind::Sampled: {
      const double h = 1e-3 * r;
      return (value(r + h) - 2 * value(r) + value(r - h)) / (h * h);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------- specs

PotentialSpec PotentialSpec::zero(int d) {
  PotentialSpec s;
  s.variant = Variant::Zero;
  s.d = d;
  return s;
}
PotentialSpec PotentialSpec::matrix_coulomb(int d, double nu, double mu, double delta) {
  PotentialSpec s;
  s.variant = Variant::MatrixCoulomb;
  s.d = d;
  s.nu = nu;
  s.mu = mu;
  s.delta = delta;
  return s;
}
PotentialSpec PotentialSpec::electric(int d, RadialProfile v) {
  PotentialSpec s;
  s.variant = Variant::Electric;
  s.d = d;
  s.profile = std::move(v);
  return s;
}
PotentialSpec PotentialSpec::scalar(int d, RadialProfile v) {
  PotentialSpec s;
  s.variant = Variant::Scalar;
  s.d = d;
  s.profile = std::move(v);
  return s;
}
PotentialSpec PotentialSpec::anomalous(int d, RadialProfile phi) {
  PotentialSpec s;
  s.variant = Variant::Anomalous;
  s.d = d;
  s.profile = std::move(phi);
  return s;
}
PotentialSpec PotentialSpec::custom(int d, RadialProfile sampled_v) {
  PotentialSpec s;
  s.variant = Variant::Custom;
  s.d = d;
  s.profile = std::move(sampled_v);
  return s;
}

MagneticSpec MagneticSpec::zero(int d) {
  MagneticSpec s;
  s.variant = Variant::Zero;
  s.d = d;
  return s;
}
MagneticSpec MagneticSpec::azimuthal(RadialProfile g) {
  MagneticSpec s;
  s.variant = Variant::Azimuthal;
  s.d = 3;
  s.profile = std::move(g);
  return s;
}
MagneticSpec MagneticSpec::custom(int d, std::function<Vec(const Vec&)> A) {
  MagneticSpec s;
  s.variant = Variant::Custom;
  s.d = d;
  s.custom_A = std::move(A);
  return s;
}

Vec MagneticSpec::vector_potential(const Vec& x) const {
  switch (variant) {
    case Variant::Zero:
      return Vec::Zero(x.size());
    case Variant::Azimuthal: {
      require_dim(3, static_cast<int>(x.size()), "MagneticSpec");
      const double g = profile.value(x.norm());
      Vec A(3);
      A << -x(1) * g, x(0) * g, 0.0;
      return A;
    }
    case Variant::Custom:
      return custom_A(x);
  }
  return Vec::Zero(x.size());
}

// ---------------------------------------------------------------- evaluation

Mat eval_potential(const PotentialSpec& spec, const DiracRep& rep, const Vec& x) {
  require_nonzero(x);
  require_dim(spec.d, rep.d, "eval_potential(spec vs rep)");
  require_dim(spec.d, static_cast<int>(x.size()), "eval_potential(x)");
  const int N = rep.N;
  const double r = x.norm();
  switch (spec.variant) {
    case PotentialSpec::Variant::Zero:
      return Mat::Zero(N, N);
    case PotentialSpec::Variant::MatrixCoulomb: {
      const Mat beta = rep.beta.to_complex();
      Mat m = (spec.nu / r) * Mat::Identity(N, N) + (spec.mu / r) * beta;
      m += std::complex<double>(0, spec.delta / (r * r)) * beta * alpha_dot(rep, x);
      return m;
    }
    case PotentialSpec::Variant::Electric:
    case PotentialSpec::Variant::Custom:
      return spec.profile.value(r) * Mat::Identity(N, N);
    case PotentialSpec::Variant::Scalar:
      return spec.profile.value(r) * rep.beta.to_complex();
    case PotentialSpec::Variant::Anomalous: {
      // V_am = i beta (alpha . grad phi) with radial phi: grad phi = phi'(r) x/r
      const double dphi = spec.profile.derivative(r);
      return std::complex<double>(0, dphi / r) * rep.beta.to_complex() * alpha_dot(rep, x);
    }
  }
  return Mat::Zero(N, N);
}

std::vector<Mat> eval_grad_potential(const PotentialSpec& spec, const DiracRep& rep,
                                     const Vec& x) {
  require_nonzero(x);
  require_dim(spec.d, rep.d, "eval_grad_potential(spec vs rep)");
  const int N = rep.N;
  const int d = spec.d;
  const double r = x.norm();
  std::vector<Mat> g(d, Mat::Zero(N, N));
  switch (spec.variant) {
    case PotentialSpec::Variant::Zero:
      return g;
    case PotentialSpec::Variant::MatrixCoulomb: {
      const Mat beta = rep.beta.to_complex();
      const Mat core = spec.nu * Mat::Identity(N, N) + spec.mu * beta;
      const Mat ax = alpha_dot(rep, x);
      const std::complex<double> I(0, 1);
      for (int j = 0; j < d; ++j) {
        const Mat aj = rep.alphas[j].to_complex();
        g[j] = -(x(j) / (r * r * r)) * core +
               I * spec.delta * (beta * (aj / (r * r) - 2.0 * x(j) / (r * r * r * r) * ax));
      }
      return g;
    }
    case PotentialSpec::Variant::Electric:
    case PotentialSpec::Variant::Scalar: {
      const double dv = spec.profile.derivative(r);
      const Mat base = spec.variant == PotentialSpec::Variant::Electric
                           ? Mat(Mat::Identity(N, N))
                           : rep.beta.to_complex();
      for (int j = 0; j < d; ++j) g[j] = dv * x(j) / r * base;
      return g;
    }
    case PotentialSpec::Variant::Anomalous: {
      // d_j V_am = i beta [ alpha_j phi'/r + (alpha.x)(x_j/r)(phi''/r - phi'/r^2) ]
      const double dphi = spec.profile.derivative(r);
      const double ddphi = spec.profile.second_derivative(r);
      const Mat beta = rep.beta.to_complex();
      const Mat ax = alpha_dot(rep, x);
      const std::complex<double> I(0, 1);
      const double radial = ddphi / (r * r) - dphi / (r * r * r);
      for (int j = 0; j < d; ++j)
        g[j] = I * beta * (dphi / r * rep.alphas[j].to_complex() + radial * x(j) * ax);
      return g;
    }
    case PotentialSpec::Variant::Custom: {
      // sparse-table guard: local spacing must resolve the FD stencil
      const auto& t = spec.profile.samples;
      auto it = std::lower_bound(t.begin(), t.end(), r,
                                 [](const auto& s, double v) { return s.first < v; });
      if (it != t.begin() && it != t.end()) {
        const double spacing = it->first - (it - 1)->first;
        if (spacing > 0.02 * r)
          throw std::invalid_argument(
              "eval_grad_potential: sampled table too sparse at r = " + std::to_string(r) +
              " (spacing " + std::to_string(spacing) + " > 2% of r)");
      }
      const double dv = spec.profile.derivative(r);
      for (int j = 0; j < d; ++j) g[j] = dv * x(j) / r * Mat::Identity(N, N);
      return g;
    }
  }
  return g;
}

Eigen::MatrixXd eval_B(const MagneticSpec& aspec, const Vec& x) {
  require_nonzero(x);
  const int d = static_cast<int>(x.size());
  require_dim(aspec.d, d, "eval_B");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
  switch (aspec.variant) {
    case MagneticSpec::Variant::Zero:
      return B;
    case MagneticSpec::Variant::Azimuthal: {
      const double r = x.norm();
      const double g = aspec.profile.value(r);
      const double dg = aspec.profile.derivative(r);
      const double rho2 = x(0) * x(0) + x(1) * x(1);
      B(0, 1) = 2 * g + rho2 * dg / r;
      B(0, 2) = x(1) * x(2) * dg / r;
      B(1, 2) = -x(0) * x(2) * dg / r;
      B(1, 0) = -B(0, 1);
      B(2, 0) = -B(0, 2);
      B(2, 1) = -B(1, 2);
      return B;
    }
    case MagneticSpec::Variant::Custom: {
      const double h = 1e-5 * x.norm();
      Eigen::MatrixXd J(d, d);  // J(j,k) = d_j A_k
      for (int j = 0; j < d; ++j) {
        Vec xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        J.row(j) = ((aspec.custom_A(xp) - aspec.custom_A(xm)) / (2 * h)).transpose();
      }
      B = J - J.transpose();
      return B;
    }
  }
  return B;
}

Eigen::Vector3d b_vector_from_matrix(const Eigen::MatrixXd& B) {
  if (B.rows() != 3 || B.cols() != 3)
    throw std::invalid_argument("b_vector_from_matrix: requires d = 3");
  return {-B(1, 2), B(0, 2), -B(0, 1)};
}

double grad_norm(const std::vector<Mat>& gradV) {
  double s = 0;
  for (const auto& m : gradV) {
    const double n = operator_norm(m);
    s += n * n;
  }
  return std::sqrt(s);
}

FieldSample make_field_sample(const PotentialSpec& spec, const MagneticSpec& aspec,
                              const DiracRep& rep, const Vec& x) {
  FieldSample s;
  s.x = x;
  s.V = eval_potential(spec, rep, x);
  s.gradV = eval_grad_potential(spec, rep, x);
  s.B = eval_B(aspec, x);
  s.normV = operator_norm(s.V);
  s.normGradV = grad_norm(s.gradV);
  s.normB = s.B.rows() == 3 ? b_vector_from_matrix(s.B).norm()
                            : s.B.operatorNorm();
  return s;
}

// ---------------------------------------------------------------- sup weights

namespace {

// sup over the log radial grid of f(r), flagged as a lower-bound estimate
Weight grid_sup(const std::function<double(double)>& f) {
  double best = 0;
  const int per_decade = 1000;
  for (int i = -6 * per_decade; i <= 6 * per_decade; ++i) {
    const double r = std::pow(10.0, static_cast<double>(i) / per_decade);
    best = std::max(best, std::abs(f(r)));
  }
  return {best, Provenance::GridEstimate};
}

// |B|(r) extremal over directions for azimuthal power-law g = a r^-sigma:
// the direction factor is max(2, |sigma - 2|); |grad B| r^2 is sqrt(6)|a| at
// sigma = 1 and divergent otherwise.
void azimuthal_power_weights(double a, double sigma, WeightTable& w) {
  const double amp = std::abs(a) * std::max(2.0, std::abs(sigma - 2.0));
  w.xB = power_sup(amp, 1.0 - sigma);
  w.x2B = power_sup(amp, 2.0 - sigma);
  if (a == 0)
    w.x2gradB = {0.0, Provenance::ClosedForm};
  else if (sigma == 1.0)
    w.x2gradB = {std::sqrt(6.0) * std::abs(a), Provenance::ClosedForm};
  else
    w.x2gradB = Weight::infinite();
}

double pointwise_gradB_norm(const MagneticSpec& aspec, const Vec& x) {
  // FD gradient of the b-vector (d = 3 only)
  const double h = 1e-4 * x.norm();
  double s = 0;
  for (int l = 0; l < 3; ++l) {
    Vec xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    const Eigen::Vector3d db =
        (b_vector_from_matrix(eval_B(aspec, xp)) - b_vector_from_matrix(eval_B(aspec, xm))) /
        (2 * h);
    s += db.squaredNorm();
  }
  return std::sqrt(s);
}

}  // namespace

WeightTable sup_weights(const PotentialSpec& spec, const MagneticSpec& aspec,
                        const DiracRep& rep) {
  WeightTable w;
  const int d = spec.d;

  switch (spec.variant) {
    case PotentialSpec::Variant::Zero:
      break;
    case PotentialSpec::Variant::MatrixCoulomb: {
      const double vnorm = std::abs(spec.nu) +
                           std::sqrt(spec.mu * spec.mu + spec.delta * spec.delta);
      w.xV = {vnorm, Provenance::ClosedForm};
      if (vnorm == 0) break;
      // |grad V| scales exactly as r^-2; the matrix constant is direction
      // independent, evaluated once at a reference point
      Vec x0 = Vec::Zero(d);
      x0(0) = 1.0;
      w.x2gradV = {grad_norm(eval_grad_potential(spec, rep, x0)), Provenance::ClosedForm};
      w.x3gradV = Weight::infinite();
      break;
    }
    case PotentialSpec::Variant::Electric:
    case PotentialSpec::Variant::Scalar: {
      const auto& p = spec.profile;
      if (p.kind == RadialProfile::Kind::PowerLaw) {
        w.xV = power_sup(std::abs(p.c), 1.0 - p.sigma);
        w.x2gradV = power_sup(std::abs(p.c) * p.sigma, 1.0 - p.sigma);
        w.x3gradV = power_sup(std::abs(p.c) * p.sigma, 2.0 - p.sigma);
      } else if (p.kind == RadialProfile::Kind::LogCoulomb) {
        w.xV = p.c == 0 ? Weight{} : Weight::infinite();
        w.x2gradV = power_sup(std::abs(p.c), 1.0);
        w.x3gradV = power_sup(std::abs(p.c), 2.0);
      } else {
        w.xV = grid_sup([&](double r) { return r * p.value(r); });
        w.x2gradV = grid_sup([&](double r) { return r * r * p.derivative(r); });
        w.x3gradV = grid_sup([&](double r) { return r * r * r * p.derivative(r); });
      }
      break;
    }
    case PotentialSpec::Variant::Anomalous: {
      const auto& p = spec.profile;
      if (p.kind == RadialProfile::Kind::PowerLaw) {
        w.xGradPhi = power_sup(std::abs(p.c) * p.sigma, -p.sigma);
        w.x2LapPhi =
            power_sup(std::abs(p.c * p.sigma * (p.sigma + 2.0 - d)), -p.sigma);
      } else if (p.kind == RadialProfile::Kind::LogCoulomb) {
        w.xGradPhi = {std::abs(p.c), Provenance::ClosedForm};
        w.x2LapPhi = {std::abs(p.c) * (d - 2), Provenance::ClosedForm};
      } else {
        w.xGradPhi = grid_sup([&](double r) { return r * p.derivative(r); });
        w.x2LapPhi = grid_sup([&](double r) {
          return r * r *
                 (p.second_derivative(r) + (d - 1) * p.derivative(r) / r);
        });
      }
      // sup |x||V_am| = sup |x||grad phi| (|V_am| = |grad phi| pointwise)
      w.xV = w.xGradPhi;
      break;
    }
    case PotentialSpec::Variant::Custom: {
      const auto& p = spec.profile;
      w.xV = grid_sup([&](double r) { return r * p.value(r); });
      w.x2gradV = grid_sup([&](double r) { return r * r * p.derivative(r); });
      w.x3gradV = grid_sup([&](double r) { return r * r * r * p.derivative(r); });
      break;
    }
  }

  switch (aspec.variant) {
    case MagneticSpec::Variant::Zero:
      break;
    case MagneticSpec::Variant::Azimuthal: {
      const auto& g = aspec.profile;
      if (g.kind == RadialProfile::Kind::PowerLaw) {
        azimuthal_power_weights(g.c, g.sigma, w);
      } else {
        auto bmax = [&](double r) {
          // extremal direction is the polar axis or the equator
          Vec pole(3), eq(3);
          pole << 0, 0, r;
          eq << r, 0, 0;
          return std::max(b_vector_from_matrix(eval_B(aspec, pole)).norm(),
                          b_vector_from_matrix(eval_B(aspec, eq)).norm());
        };
        w.xB = grid_sup([&](double r) { return r * bmax(r); });
        w.x2B = grid_sup([&](double r) { return r * r * bmax(r); });
        Vec dir(3);
        dir << 0, 0, 1;
        w.x2gradB = grid_sup(
            [&](double r) { return r * r * pointwise_gradB_norm(aspec, r * dir); });
      }
      break;
    }
    case MagneticSpec::Variant::Custom: {
      // scan radii x a fixed set of directions
      std::mt19937_64 rng(12345);
      std::normal_distribution<double> nd;
      std::vector<Vec> dirs;
      for (int i = 0; i < 32; ++i) {
        Vec u(aspec.d);
        for (int j = 0; j < aspec.d; ++j) u(j) = nd(rng);
        dirs.push_back(u.normalized());
      }
      auto bsup = [&](double r) {
        double best = 0;
        for (const auto& u : dirs) {
          const Eigen::MatrixXd B = eval_B(aspec, r * u);
          best = std::max(best, aspec.d == 3 ? b_vector_from_matrix(B).norm()
                                             : B.operatorNorm());
        }
        return best;
      };
      w.xB = grid_sup([&](double r) { return r * bsup(r); });
      w.x2B = grid_sup([&](double r) { return r * r * bsup(r); });
      if (aspec.d == 3) {
        auto gsup = [&](double r) {
          double best = 0;
          for (const auto& u : dirs)
            best = std::max(best, pointwise_gradB_norm(aspec, r * u));
          return best;
        };
        w.x2gradB = grid_sup([&](double r) { return r * r * gsup(r); });
      } else {
        w.x2gradB = Weight::infinite();
      }
      break;
    }
  }

  return w;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm:
      return "closed-form";
    case Provenance::GridEstimate:
      return "grid-estimate";
    case Provenance::UserSupplied:
      return "user-supplied";
  }
  return "?";
}

namespace {
nlohmann::json weight_json(const Weight& w) {
  nlohmann::json j;
  j["value"] = w.finite() ? nlohmann::json(w.value) : nlohmann::json("inf");
  j["provenance"] = to_string(w.prov);
  return j;
}
}  // namespace

nlohmann::json WeightTable::to_json() const {
  return {{"sup_xV", weight_json(xV)},
          {"sup_x2_gradV", weight_json(x2gradV)},
          {"sup_x3_gradV", weight_json(x3gradV)},
          {"sup_x2_B", weight_json(x2B)},
          {"sup_x_gradPhi", weight_json(xGradPhi)},
          {"sup_x2_lapPhi", weight_json(x2LapPhi)},
          {"sup_x_B", weight_json(xB)},
          {"sup_x2_gradB", weight_json(x2gradB)}};
}

}  // namespace dirac
