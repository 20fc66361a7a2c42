#include "dirac/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dirac {
namespace {

// s: [0,1] -> [0,1], s(0)=0, s(1)=1, C^3 (degree 7) resp. C^4 (degree 9)
double smoothstep7(double t) {
  return ((( -20 * t + 70) * t - 84) * t + 35) * t * t * t * t;
}
double smoothstep7_d(double t) {
  const double a = t * (1 - t);
  return 140 * a * a * a;
}
double smoothstep9(double t) {
  return (((( 70 * t - 315) * t + 540) * t - 420) * t + 126) * t * t * t * t * t;
}
double smoothstep9_d(double t) {
  const double a = t * (1 - t);
  return 630 * a * a * a * a;
}

// C-infinity transition for the shell envelope
double expstep(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double fa = std::exp(-1.0 / t);
  const double fb = std::exp(-1.0 / (1 - t));
  return fa / (fa + fb);
}
double expstep_d(double t) {
  if (t <= 0 || t >= 1) return 0;
  const double fa = std::exp(-1.0 / t);
  const double fb = std::exp(-1.0 / (1 - t));
  const double da = fa / (t * t);
  const double db = fb / ((1 - t) * (1 - t));
  const double s = fa + fb;
  return (da * fb + db * fa) / (s * s);
}

struct Stencil {
  std::vector<double> c;  // one-sided taps c[1..] at offsets 1..w; c[0] center
};

const Stencil& d1_stencil(int order) {
  static const Stencil s2{{0, 1.0 / 2}};
  static const Stencil s4{{0, 2.0 / 3, -1.0 / 12}};
  static const Stencil s6{{0, 3.0 / 4, -3.0 / 20, 1.0 / 60}};
  static const Stencil s8{{0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280}};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
    case 8: return s8;
  }
  throw std::invalid_argument("diff: stencil order must be 2, 4, 6 or 8");
}

const Stencil& d2_stencil(int order) {
  static const Stencil s2{{-2.0, 1.0}};
  static const Stencil s4{{-5.0 / 2, 4.0 / 3, -1.0 / 12}};
  static const Stencil s6{{-49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90}};
  static const Stencil s8{{-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560}};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
    case 8: return s8;
  }
  throw std::invalid_argument("diff2: stencil order must be 2, 4, 6 or 8");
}

// shifted accumulate along one axis, zero beyond the box
void axis_apply(const BoxGrid& g, const Field& f, Field& out, int axis,
                const Stencil& st, bool odd, double scale) {
  const int n = g.n;
  const long stride = axis == 0 ? static_cast<long>(n) * n : axis == 1 ? n : 1;
  out.setZero(f.size());
  const int w = static_cast<int>(st.c.size()) - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const long idx = (static_cast<long>(i) * n + j) * n + k;
        const int pos = axis == 0 ? i : axis == 1 ? j : k;
        Cplx acc = st.c[0] * f(idx);
        for (int o = 1; o <= w; ++o) {
          if (pos + o < n) acc += st.c[o] * f(idx + o * stride);
          if (pos - o >= 0) acc += (odd ? -st.c[o] : st.c[o]) * f(idx - o * stride);
        }
        out(idx) = scale * acc;
      }
}

}  // namespace

BoxGrid::BoxGrid(double L_, int n_) : L(L_), n(n_) {
  if (n < 32) throw std::invalid_argument("BoxGrid: n must be >= 32");
  if (L <= 0) throw std::invalid_argument("BoxGrid: L must be positive");
}

nlohmann::json BoxGrid::to_json() const { return {{"L", L}, {"n", n}, {"h", h()}}; }

TestSpinor TestSpinor::gaussian(const Eigen::VectorXcd& u, Eigen::Vector3d center,
                                double width) {
  TestSpinor s;
  s.kind = Kind::GaussianBump;
  s.u = u.normalized();
  s.center = std::move(center);
  s.width = width;
  return s;
}

TestSpinor TestSpinor::polynomial_gaussian(const Eigen::VectorXcd& u, int degree,
                                           Eigen::Vector3d dir, double width) {
  TestSpinor s;
  s.kind = Kind::PolynomialGaussian;
  s.u = u.normalized();
  s.degree = degree;
  s.poly_dir = dir.normalized();
  s.width = width;
  return s;
}

TestSpinor TestSpinor::cutoff_composed(const Eigen::VectorXcd& u, double r_inner,
                                       double r_outer) {
  if (!(0 < r_inner && r_inner < r_outer))
    throw std::invalid_argument("TestSpinor: need 0 < r_inner < r_outer");
  TestSpinor s;
  s.kind = Kind::CutoffComposed;
  s.u = u.normalized();
  s.r_inner = r_inner;
  s.r_outer = r_outer;
  return s;
}

Cplx TestSpinor::envelope(const Eigen::Vector3d& x) const {
  const Cplx phase = kvec.isZero() ? Cplx(1, 0)
                                   : std::exp(Cplx(0, kvec.dot(x)));
  switch (kind) {
    case Kind::GaussianBump: {
      const double r2 = (x - center).squaredNorm();
      return phase * std::exp(-r2 / (2 * width * width));
    }
    case Kind::PolynomialGaussian: {
      const double r2 = (x - center).squaredNorm();
      const double p = std::pow(poly_dir.dot(x - center), degree);
      return phase * p * std::exp(-r2 / (2 * width * width));
    }
    case Kind::CutoffComposed: {
      const double r = x.norm();
      const double t = (r_outer - r_inner) / 4;
      const double shell =
          expstep((r - r_inner) / t) * expstep((r_outer - r) / t);
      return phase * shell;
    }
  }
  return {};
}

Eigen::Vector3cd TestSpinor::envelope_grad(const Eigen::Vector3d& x) const {
  const Cplx phase = kvec.isZero() ? Cplx(1, 0)
                                   : std::exp(Cplx(0, kvec.dot(x)));
  Eigen::Vector3cd g;
  switch (kind) {
    case Kind::GaussianBump: {
      const Eigen::Vector3d y = x - center;
      const double e = std::exp(-y.squaredNorm() / (2 * width * width));
      g = (-e / (width * width)) * y.cast<Cplx>();
      break;
    }
    case Kind::PolynomialGaussian: {
      const Eigen::Vector3d y = x - center;
      const double e = std::exp(-y.squaredNorm() / (2 * width * width));
      const double s = poly_dir.dot(y);
      const double p = std::pow(s, degree);
      const double dp = degree == 0 ? 0.0 : degree * std::pow(s, degree - 1);
      g = (dp * e) * poly_dir.cast<Cplx>() +
          (-p * e / (width * width)) * y.cast<Cplx>();
      break;
    }
    case Kind::CutoffComposed: {
      const double r = x.norm();
      if (r == 0) return Eigen::Vector3cd::Zero();
      const double t = (r_outer - r_inner) / 4;
      const double a = expstep((r - r_inner) / t);
      const double b = expstep((r_outer - r) / t);
      const double ds = (expstep_d((r - r_inner) / t) * b -
                         a * expstep_d((r_outer - r) / t)) / t;
      g = (ds / r) * x.cast<Cplx>();
      break;
    }
  }
  if (!kvec.isZero()) {
    const Cplx env = envelope(x) / phase;
    g = phase * g + Cplx(0, 1) * phase * env * kvec.cast<Cplx>();
  }
  return g;
}

double TestSpinor::support_radius() const {
  switch (kind) {
    case Kind::GaussianBump:
      return center.norm() + 8.1 * width;
    case Kind::PolynomialGaussian:
      return center.norm() + (8.1 + degree) * width;
    case Kind::CutoffComposed:
      return r_outer;
  }
  return 0;
}

Field sample_envelope(const TestSpinor& psi, const BoxGrid& g) {
  Field f(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        f(g.index(i, j, k)) = psi.envelope(g.point(i, j, k));
  return f;
}

Field sample_scalar(const BoxGrid& g,
                    const std::function<Cplx(const Eigen::Vector3d&)>& f) {
  Field out(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        out(g.index(i, j, k)) = f(g.point(i, j, k));
  return out;
}

GridSpinor sample_spinor(const TestSpinor& psi, const BoxGrid& g, int N) {
  if (psi.u.size() != N)
    throw std::invalid_argument("sample_spinor: spinor direction size mismatch");
  GridSpinor out;
  out.g = g;
  const Field env = sample_envelope(psi, g);
  out.c.reserve(N);
  for (int b = 0; b < N; ++b) out.c.push_back(psi.u(b) * env);
  return out;
}

Field diff(const BoxGrid& g, const Field& f, int axis, int order) {
  if (f.size() != static_cast<long>(g.size()))
    throw std::invalid_argument("diff: field/grid size mismatch");
  if (axis < 0 || axis > 2) throw std::invalid_argument("diff: axis out of range");
  Field out;
  axis_apply(g, f, out, axis, d1_stencil(order), true, 1.0 / g.h());
  return out;
}

Field diff2(const BoxGrid& g, const Field& f, int axis, int order) {
  if (f.size() != static_cast<long>(g.size()))
    throw std::invalid_argument("diff2: field/grid size mismatch");
  if (axis < 0 || axis > 2) throw std::invalid_argument("diff2: axis out of range");
  Field out;
  axis_apply(g, f, out, axis, d2_stencil(order), false, 1.0 / (g.h() * g.h()));
  return out;
}

Cplx quad_inner(const BoxGrid& g, const Field& a, const Field& b, int skin) {
  if (a.size() != b.size() || a.size() != static_cast<long>(g.size()))
    throw std::invalid_argument("quad_inner: size mismatch");
  Cplx s = 0;
  const int lo = skin, hi = g.n - 1 - skin;
  for (int i = lo; i <= hi; ++i)
    for (int j = lo; j <= hi; ++j) {
      const std::size_t base = g.index(i, j, 0);
      for (int k = lo; k <= hi; ++k)
        s += std::conj(a(base + k)) * b(base + k);
    }
  const double h = g.h();
  return s * (h * h * h);
}

double quad_norm2(const BoxGrid& g, const Field& a, int skin) {
  return quad_inner(g, a, a, skin).real();
}

Cplx quad_inner(const GridSpinor& a, const GridSpinor& b, int skin) {
  if (a.N() != b.N()) throw std::invalid_argument("quad_inner: component mismatch");
  Cplx s = 0;
  for (int c = 0; c < a.N(); ++c) s += quad_inner(a.g, a.c[c], b.c[c], skin);
  return s;
}

double quad_norm2(const GridSpinor& a, int skin) {
  return quad_inner(a, a, skin).real();
}

double boundary_mass(const GridSpinor& a) {
  double best = 0;
  const int n = a.g.n;
  auto probe = [&](int i, int j, int k) {
    const std::size_t idx = a.g.index(i, j, k);
    double s2 = 0;
    for (const auto& c : a.c) s2 += std::norm(c(idx));
    best = std::max(best, std::sqrt(s2));
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      probe(0, i, j);
      probe(n - 1, i, j);
      probe(i, 0, j);
      probe(i, n - 1, j);
      probe(i, j, 0);
      probe(i, j, n - 1);
    }
  return best;
}

double CutoffFamily::xi(double r) const {
  if (r <= 1) return 1;
  if (r >= 2) return 0;
  return profile == Profile::Smoothstep7 ? smoothstep7(2 - r) : smoothstep9(2 - r);
}

double CutoffFamily::dxi(double r) const {
  if (r <= 1 || r >= 2) return 0;
  return profile == Profile::Smoothstep7 ? -smoothstep7_d(2 - r)
                                         : -smoothstep9_d(2 - r);
}

double CutoffFamily::xi_R(double r, double R) const { return xi(r / R) - xi(R * r); }

double CutoffFamily::dxi_R(double r, double R) const {
  return dxi(r / R) / R - R * dxi(R * r);
}

double CutoffFamily::grad_sup() const {
  // max of the smoothstep derivative, attained at t = 1/2
  return profile == Profile::Smoothstep7 ? 140.0 / 64.0 : 630.0 / 256.0;
}

}  // namespace dirac
