#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace dirac {

/// Gaussian integer, the entry domain of exact Dirac-matrix arithmetic.
struct GInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  friend GInt operator+(GInt a, GInt b) { return {a.re + b.re, a.im + b.im}; }
  friend GInt operator-(GInt a, GInt b) { return {a.re - b.re, a.im - b.im}; }
  friend GInt operator-(GInt a) { return {-a.re, -a.im}; }
  friend GInt operator*(GInt a, GInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(GInt a, GInt b) = default;
  GInt conj() const { return {re, -im}; }
  GInt times_i() const { return {-im, re}; }
  bool zero() const { return re == 0 && im == 0; }
};

/// Dense square matrix with entries (re + i im) / 2^log2_den, exact.
///
/// Dirac matrices use log2_den = 0 (entries in {0, +-1, +-i}); the spin
/// matrices need halves, hence the power-of-two denominator.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(int n, int log2_den = 0)
      : n_(n), log2_den_(log2_den), a_(static_cast<std::size_t>(n) * n) {}

  static ExactMatrix identity(int n) {
    ExactMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = {1, 0};
    return m;
  }
  static ExactMatrix zero(int n) { return ExactMatrix(n); }

  int size() const { return n_; }
  int log2_den() const { return log2_den_; }

  GInt& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const GInt& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

  ExactMatrix operator*(const ExactMatrix& o) const {
    require_same_size(o);
    ExactMatrix r(n_, log2_den_ + o.log2_den_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const GInt aik = (*this)(i, k);
        if (aik.zero()) continue;
        for (int j = 0; j < n_; ++j) r(i, j) = r(i, j) + aik * o(k, j);
      }
    r.normalize();
    return r;
  }

  ExactMatrix operator+(const ExactMatrix& o) const {
    require_same_size(o);
    const int den = std::max(log2_den_, o.log2_den_);
    ExactMatrix r(n_, den);
    const std::int64_t sa = std::int64_t{1} << (den - log2_den_);
    const std::int64_t sb = std::int64_t{1} << (den - o.log2_den_);
    for (std::size_t k = 0; k < a_.size(); ++k)
      r.a_[k] = GInt{a_[k].re * sa, a_[k].im * sa} + GInt{o.a_[k].re * sb, o.a_[k].im * sb};
    r.normalize();
    return r;
  }

  ExactMatrix operator-(const ExactMatrix& o) const { return *this + (-o); }
  ExactMatrix operator-() const {
    ExactMatrix r = *this;
    for (auto& v : r.a_) v = -v;
    return r;
  }

  ExactMatrix times_i() const {
    ExactMatrix r = *this;
    for (auto& v : r.a_) v = v.times_i();
    return r;
  }

  ExactMatrix scaled_by_half(int k) const {
    ExactMatrix r = *this;
    r.log2_den_ += k;
    r.normalize();
    return r;
  }

  ExactMatrix adjoint() const {
    ExactMatrix r(n_, log2_den_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j).conj();
    return r;
  }

  /// Kronecker product, exact.
  ExactMatrix kron(const ExactMatrix& o) const {
    ExactMatrix r(n_ * o.n_, log2_den_ + o.log2_den_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const GInt v = (*this)(i, j);
        if (v.zero()) continue;
        for (int k = 0; k < o.n_; ++k)
          for (int l = 0; l < o.n_; ++l)
            r(i * o.n_ + k, j * o.n_ + l) = v * o(k, l);
      }
    r.normalize();
    return r;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.n_ != b.n_) return false;
    ExactMatrix x = a, y = b;
    x.normalize();
    y.normalize();
    return x.log2_den_ == y.log2_den_ && x.a_ == y.a_;
  }

  bool is_zero() const {
    for (const auto& v : a_)
      if (!v.zero()) return false;
    return true;
  }
  bool is_hermitian() const { return *this == adjoint(); }
  bool is_identity_times(std::int64_t c) const {
    ExactMatrix id = identity(n_);
    for (auto& v : id.a_) v = GInt{v.re * c, v.im * c};
    return *this == id;
  }

  /// Drop common factors of two between all numerators and the denominator.
  void normalize() {
    while (log2_den_ > 0) {
      for (const auto& v : a_)
        if ((v.re & 1) || (v.im & 1)) return;
      for (auto& v : a_) {
        v.re >>= 1;
        v.im >>= 1;
      }
      --log2_den_;
    }
  }

  Eigen::MatrixXcd to_complex() const {
    Eigen::MatrixXcd m(n_, n_);
    const double s = 1.0 / static_cast<double>(std::int64_t{1} << log2_den_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        m(i, j) = std::complex<double>((*this)(i, j).re * s, (*this)(i, j).im * s);
    return m;
  }

  /// Array-of-arrays of ["re","im"] decimal-string pairs.
  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < n_; ++j)
        row.push_back({decimal_string((*this)(i, j).re, log2_den_),
                       decimal_string((*this)(i, j).im, log2_den_)});
      rows.push_back(std::move(row));
    }
    return rows;
  }

  /// Exact decimal rendering of num / 2^k (always terminates).
  static std::string decimal_string(std::int64_t num, int k) {
    if (k == 0) return std::to_string(num);
    bool neg = num < 0;
    // num/2^k = num*5^k / 10^k
    std::int64_t p5 = 1;
    for (int i = 0; i < k; ++i) p5 *= 5;
    std::int64_t scaled = (neg ? -num : num) * p5;
    std::string digits = std::to_string(scaled);
    if (static_cast<int>(digits.size()) <= k)
      digits.insert(0, k + 1 - digits.size(), '0');
    digits.insert(digits.size() - k, ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return (neg ? "-" : "") + digits;
  }

 private:
  void require_same_size(const ExactMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("ExactMatrix: size mismatch");
  }

  int n_ = 0;
  int log2_den_ = 0;
  std::vector<GInt> a_;
};

}  // namespace dirac
