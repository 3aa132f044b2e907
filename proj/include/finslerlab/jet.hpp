#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>
#include <vector>

#include "finslerlab/errors.hpp"

namespace finslerlab {

// Truncated Taylor scalar: value plus partial derivatives up to `order` (at
// most 3) with respect to `nvars` variables. A jet constructed from a plain
// number is a *constant* (nvars == 0) and combines with jets of any shape, so
// literals flow through formulas without explicit seeding.
//
// Third-order coefficients are stored fully redundantly as nvars matrices,
// third[k](i,j) = d^3 f / dx_i dx_j dx_k; every operation preserves the full
// permutation symmetry exactly.
template <class F>
class TJet {
 public:
  using Scalar = F;
  using Vec = Eigen::Matrix<F, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic>;

  TJet() : val_(F(0)) {}
  TJet(F v) : val_(v) {}  // NOLINT: implicit constants are the point
  template <class G = F>
    requires(!std::is_same_v<G, double> && std::is_same_v<G, F>)
  TJet(double v) : val_(F(v)) {}  // NOLINT

  static TJet variable(F v, int nvars, int index, int order) {
    TJet j;
    j.val_ = v;
    j.resize(nvars, order);
    j.grad_(index) = F(1);
    return j;
  }

  static TJet constant_like(F v, const TJet& shape) {
    TJet j;
    j.val_ = v;
    if (!shape.is_constant()) j.resize(shape.nvars_, shape.order_);
    return j;
  }

  static TJet from_parts(F v, Vec grad, Mat hess, std::vector<Mat> third, int order) {
    TJet j;
    j.val_ = v;
    j.nvars_ = static_cast<int>(grad.size());
    j.order_ = order;
    j.grad_ = std::move(grad);
    j.hess_ = std::move(hess);
    j.third_ = std::move(third);
    return j;
  }

  bool is_constant() const { return nvars_ == 0; }
  int nvars() const { return nvars_; }
  int order() const { return order_; }

  F value() const { return val_; }
  F grad(int i) const { return is_constant() ? F(0) : grad_(i); }
  F hess(int i, int j) const {
    return (is_constant() || order_ < 2) ? F(0) : hess_(i, j);
  }
  F third(int i, int j, int k) const {
    return (is_constant() || order_ < 3) ? F(0) : third_[k](i, j);
  }

  const Vec& grad_vector() const { return grad_; }
  const Mat& hess_matrix() const { return hess_; }
  const Mat& third_slice(int k) const { return third_[k]; }

  bool all_finite() const {
    if (!finite_scalar(val_)) return false;
    for (int i = 0; i < grad_.size(); ++i)
      if (!finite_scalar(grad_(i))) return false;
    for (int i = 0; i < hess_.size(); ++i)
      if (!finite_scalar(hess_.data()[i])) return false;
    for (const Mat& t : third_)
      for (int i = 0; i < t.size(); ++i)
        if (!finite_scalar(t.data()[i])) return false;
    return true;
  }

  TJet operator-() const {
    TJet r = *this;
    r.val_ = -r.val_;
    r.grad_ = -r.grad_;
    r.hess_ = -r.hess_;
    for (auto& t : r.third_) t = -t;
    return r;
  }

  friend TJet operator+(const TJet& a, const TJet& b) {
    if (b.is_constant()) {
      TJet r = a;
      r.val_ += b.val_;
      return r;
    }
    if (a.is_constant()) {
      TJet r = b;
      r.val_ += a.val_;
      return r;
    }
    TJet r = prepare(a, b);
    r.val_ = a.val_ + b.val_;
    r.grad_ = a.grad_ + b.grad_;
    if (r.order_ >= 2) r.hess_ = a.hess_ + b.hess_;
    if (r.order_ >= 3)
      for (int k = 0; k < r.nvars_; ++k) r.third_[k] = a.third_[k] + b.third_[k];
    return r;
  }

  friend TJet operator-(const TJet& a, const TJet& b) { return a + (-b); }

  friend TJet operator*(const TJet& a, const TJet& b) {
    if (b.is_constant()) return scaled(a, b.val_);
    if (a.is_constant()) return scaled(b, a.val_);
    TJet r = prepare(a, b);
    r.val_ = a.val_ * b.val_;
    r.grad_ = a.val_ * b.grad_ + b.val_ * a.grad_;
    if (r.order_ >= 2) {
      r.hess_ = a.val_ * b.hess_ + b.val_ * a.hess_;
      r.hess_.noalias() += a.grad_ * b.grad_.transpose();
      r.hess_.noalias() += b.grad_ * a.grad_.transpose();
    }
    if (r.order_ >= 3) {
      for (int k = 0; k < r.nvars_; ++k) {
        Mat& t = r.third_[k];
        t = a.val_ * b.third_[k] + b.val_ * a.third_[k];
        t.noalias() += b.grad_(k) * a.hess_;
        t.noalias() += a.grad_(k) * b.hess_;
        t.noalias() += a.hess_.col(k) * b.grad_.transpose();
        t.noalias() += b.grad_ * a.hess_.col(k).transpose();
        t.noalias() += b.hess_.col(k) * a.grad_.transpose();
        t.noalias() += a.grad_ * b.hess_.col(k).transpose();
      }
    }
    return r;
  }

  friend TJet operator/(const TJet& a, const TJet& b) { return a * reciprocal(b); }

  friend TJet operator+(const TJet& a, F c) { return a + TJet(c); }
  friend TJet operator+(F c, const TJet& a) { return a + TJet(c); }
  friend TJet operator-(const TJet& a, F c) { return a + TJet(-c); }
  friend TJet operator-(F c, const TJet& a) { return (-a) + TJet(c); }
  friend TJet operator*(const TJet& a, F c) { return scaled(a, c); }
  friend TJet operator*(F c, const TJet& a) { return scaled(a, c); }
  friend TJet operator/(const TJet& a, F c) { return scaled(a, F(1) / c); }
  friend TJet operator/(F c, const TJet& a) { return scaled(reciprocal(a), c); }

  // Exact-match double overloads for non-double fields, so mixed expressions
  // like 2.0 * z do not hit a user-conversion ambiguity.
  friend TJet operator+(const TJet& a, double c)
    requires(!std::is_same_v<F, double>)
  { return a + TJet(F(c)); }
  friend TJet operator+(double c, const TJet& a)
    requires(!std::is_same_v<F, double>)
  { return a + TJet(F(c)); }
  friend TJet operator-(const TJet& a, double c)
    requires(!std::is_same_v<F, double>)
  { return a + TJet(F(-c)); }
  friend TJet operator-(double c, const TJet& a)
    requires(!std::is_same_v<F, double>)
  { return (-a) + TJet(F(c)); }
  friend TJet operator*(const TJet& a, double c)
    requires(!std::is_same_v<F, double>)
  { return scaled(a, F(c)); }
  friend TJet operator*(double c, const TJet& a)
    requires(!std::is_same_v<F, double>)
  { return scaled(a, F(c)); }
  friend TJet operator/(const TJet& a, double c)
    requires(!std::is_same_v<F, double>)
  { return scaled(a, F(1.0 / c)); }
  friend TJet operator/(double c, const TJet& a)
    requires(!std::is_same_v<F, double>)
  { return scaled(reciprocal(a), F(c)); }

  TJet& operator+=(const TJet& b) { return *this = *this + b; }
  TJet& operator-=(const TJet& b) { return *this = *this - b; }
  TJet& operator*=(const TJet& b) { return *this = *this * b; }
  TJet& operator/=(const TJet& b) { return *this = *this / b; }

  // Composition with a scalar function given by its derivatives at value():
  // returns h(f) for h with h(v)=h0, h'(v)=h1, h''(v)=h2, h'''(v)=h3.
  friend TJet compose(const TJet& f, F h0, F h1, F h2, F h3) {
    if (f.is_constant()) return TJet(h0);
    TJet r = prepare(f, f);
    r.val_ = h0;
    r.grad_ = h1 * f.grad_;
    if (r.order_ >= 2) {
      r.hess_ = h1 * f.hess_;
      r.hess_.noalias() += h2 * (f.grad_ * f.grad_.transpose());
    }
    if (r.order_ >= 3) {
      Mat gg = f.grad_ * f.grad_.transpose();
      for (int k = 0; k < r.nvars_; ++k) {
        Mat& t = r.third_[k];
        t = h1 * f.third_[k];
        t.noalias() += h2 * f.grad_(k) * f.hess_;
        t.noalias() += h2 * (f.hess_.col(k) * f.grad_.transpose());
        t.noalias() += h2 * (f.grad_ * f.hess_.col(k).transpose());
        t.noalias() += (h3 * f.grad_(k)) * gg;
      }
    }
    return r;
  }

  friend TJet reciprocal(const TJet& f) {
    const F v = f.val_;
    if constexpr (std::is_same_v<F, double>) {
      if (v == 0.0) throw DomainViolation("jet: division by zero");
    } else {
      if (std::abs(v) == 0.0) throw DomainViolation("jet: division by zero");
    }
    const F iv = F(1) / v;
    return compose(f, iv, -iv * iv, F(2) * iv * iv * iv, F(-6) * iv * iv * iv * iv);
  }

  friend TJet sqrt(const TJet& f) {
    const F v = f.val_;
    F r;
    if constexpr (std::is_same_v<F, double>) {
      if (!(v > 0.0)) throw DomainViolation("jet: sqrt of non-positive value");
      r = std::sqrt(v);
    } else {
      if (std::abs(v) == 0.0) throw DomainViolation("jet: sqrt at branch point");
      r = std::sqrt(v);  // principal branch, arg in (-pi, pi]
    }
    const F h1 = F(0.5) / r;
    const F h2 = F(-0.25) / (r * v);
    const F h3 = F(0.375) / (r * v * v);
    return compose(f, r, h1, h2, h3);
  }

  // f^p for real exponent p; requires f.value() > 0 (real) or != 0 (complex).
  friend TJet pow(const TJet& f, double p) {
    const F v = f.val_;
    if constexpr (std::is_same_v<F, double>) {
      if (!(v > 0.0)) throw DomainViolation("jet: pow of non-positive base");
    } else {
      if (std::abs(v) == 0.0) throw DomainViolation("jet: pow at zero base");
    }
    using std::pow;
    const F h0 = pow(v, F(p));
    const F h1 = F(p) * h0 / v;
    const F h2 = F(p - 1) * h1 / v;
    const F h3 = F(p - 2) * h2 / v;
    return compose(f, h0, h1, h2, h3);
  }

 private:
  static bool finite_scalar(double x) { return std::isfinite(x); }
  static bool finite_scalar(const std::complex<double>& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  }

  void resize(int nvars, int order) {
    nvars_ = nvars;
    order_ = order;
    grad_ = Vec::Zero(nvars);
    if (order >= 2) hess_ = Mat::Zero(nvars, nvars);
    if (order >= 3) third_.assign(nvars, Mat::Zero(nvars, nvars));
  }

  // Blank result carrying the common shape of two (non-constant) operands.
  static TJet prepare(const TJet& a, const TJet& b) {
    if (a.nvars_ != b.nvars_)
      throw std::logic_error("jet: operands have different variable counts");
    TJet r;
    r.resize(a.nvars_, std::min(a.order_, b.order_));
    return r;
  }

  static TJet scaled(const TJet& a, F c) {
    TJet r = a;
    r.val_ *= c;
    r.grad_ *= c;
    r.hess_ *= c;
    for (auto& t : r.third_) t *= c;
    return r;
  }

  int nvars_ = 0;
  int order_ = 3;
  F val_;
  Vec grad_;
  Mat hess_;
  std::vector<Mat> third_;
};

using Jet = TJet<double>;
using CJet = TJet<std::complex<double>>;
using JetVec = std::vector<Jet>;

// Lift a real jet into the complex field (imaginary parts zero).
inline CJet complexify(const Jet& j) {
  if (j.is_constant()) return CJet(std::complex<double>(j.value(), 0.0));
  const int m = j.nvars();
  CJet::Vec g = j.grad_vector().cast<std::complex<double>>();
  CJet::Mat h;
  if (j.order() >= 2) h = j.hess_matrix().cast<std::complex<double>>();
  std::vector<CJet::Mat> t;
  if (j.order() >= 3) {
    t.reserve(m);
    for (int k = 0; k < m; ++k) t.push_back(j.third_slice(k).cast<std::complex<double>>());
  }
  return CJet::from_parts(std::complex<double>(j.value(), 0.0), std::move(g), std::move(h),
                          std::move(t), j.order());
}

// Real part, coefficient-wise. Taking real parts commutes with d/dx for the
// real variables the jet tracks.
inline Jet real_part(const CJet& j) {
  if (j.is_constant()) return Jet(j.value().real());
  const int m = j.nvars();
  Jet::Vec g = j.grad_vector().real();
  Jet::Mat h;
  if (j.order() >= 2) h = j.hess_matrix().real();
  std::vector<Jet::Mat> t;
  if (j.order() >= 3) {
    t.reserve(m);
    for (int k = 0; k < m; ++k) t.push_back(j.third_slice(k).real());
  }
  return Jet::from_parts(j.value().real(), std::move(g), std::move(h), std::move(t), j.order());
}

// Seeding helpers. Joint seeding numbers the x variables 0..n-1 and the y
// variables n..2n-1.
inline JetVec seed_variables(const Eigen::VectorXd& x, int order, int nvars = -1, int offset = 0) {
  const int n = static_cast<int>(x.size());
  const int m = nvars < 0 ? n : nvars;
  JetVec out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(x(i), m, offset + i, order));
  return out;
}

inline JetVec seed_constants(const Eigen::VectorXd& x) {
  JetVec out;
  out.reserve(x.size());
  for (int i = 0; i < x.size(); ++i) out.push_back(Jet(x(i)));
  return out;
}

inline std::pair<JetVec, JetVec> seed_joint(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                            int order) {
  const int n = static_cast<int>(x.size());
  return {seed_variables(x, order, 2 * n, 0), seed_variables(y, order, 2 * n, n)};
}

}  // namespace finslerlab
