#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <type_traits>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"

namespace finslerlab {

enum class DiffMode { forward_jet, central_fd };

struct DiffConfig {
  DiffMode mode = DiffMode::forward_jet;
  // Relative step for first central differences; default cbrt(machine eps).
  double fd_step = 6.0554544523933429e-06;
  bool richardson = true;  // one extrapolation level in fd mode
};

// Value, gradient and Hessian of a scalar field at a point.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

namespace detail {

template <class Field>
constexpr bool jet_invocable_v = std::is_invocable_r_v<Jet, Field, std::span<const Jet>>;
template <class Field>
constexpr bool dbl_invocable_v = std::is_invocable_r_v<double, Field, std::span<const double>>;

template <class Field>
double fd_eval(Field&& f, const Eigen::VectorXd& p) {
  if constexpr (dbl_invocable_v<Field>) {
    const double v = f(std::span<const double>(p.data(), static_cast<size_t>(p.size())));
    if (!std::isfinite(v)) throw NonFiniteValue("central_fd: field evaluated to non-finite value");
    return v;
  } else {
    throw std::logic_error("field is not callable on doubles; central_fd unavailable");
  }
}

inline double step(double rel, double coord) { return rel * std::max(1.0, std::abs(coord)); }

// Second central differences need a larger step than first ones; with one
// Richardson level the O(h^4) truncation lets the step grow to sqrt(fd_step).
inline double hess_step_rel(const DiffConfig& cfg) {
  return cfg.richardson ? std::sqrt(cfg.fd_step) : std::pow(cfg.fd_step, 0.75);
}

template <class Eval>
double central1(Eval&& e, double h, bool richardson) {
  auto d = [&](double hh) { return (e(hh) - e(-hh)) / (2.0 * hh); };
  if (!richardson) return d(h);
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace detail

// Value, gradient, Hessian of f at x. In forward-jet mode the result is exact
// to rounding for compositions of arithmetic, sqrt and rational operations.
template <class Field>
Jet2 jet2(Field&& f, const Eigen::VectorXd& x, const DiffConfig& cfg = {}) {
  const int m = static_cast<int>(x.size());
  Jet2 out;
  out.grad.resize(m);
  out.hess.resize(m, m);

  if (cfg.mode == DiffMode::forward_jet) {
    if constexpr (detail::jet_invocable_v<Field>) {
      JetVec xs = seed_variables(x, 2);
      Jet r = f(std::span<const Jet>(xs.data(), xs.size()));
      if (!r.all_finite()) throw NonFiniteValue("jet2: non-finite derivative coefficients");
      out.value = r.value();
      for (int i = 0; i < m; ++i) {
        out.grad(i) = r.grad(i);
        for (int j = 0; j < m; ++j) out.hess(i, j) = r.hess(i, j);
      }
      return out;
    } else {
      throw std::logic_error("field is not callable on jets; use central_fd mode");
    }
  }

  Eigen::VectorXd p = x;
  auto at = [&](int i, double hi, int j, double hj) {
    p = x;
    p(i) += hi;
    if (j >= 0) p(j) += hj;
    return detail::fd_eval(f, p);
  };

  const double f0 = detail::fd_eval(f, x);
  out.value = f0;
  for (int i = 0; i < m; ++i) {
    const double h = detail::step(cfg.fd_step, x(i));
    out.grad(i) = detail::central1([&](double hh) { return at(i, hh, -1, 0.0); }, h, cfg.richardson);
  }
  const double h2rel = detail::hess_step_rel(cfg);
  for (int i = 0; i < m; ++i) {
    const double hi = detail::step(h2rel, x(i));
    auto diag = [&](double hh) { return (at(i, hh, -1, 0.0) - 2.0 * f0 + at(i, -hh, -1, 0.0)) / (hh * hh); };
    out.hess(i, i) = cfg.richardson ? (4.0 * diag(hi / 2) - diag(hi)) / 3.0 : diag(hi);
    for (int j = i + 1; j < m; ++j) {
      const double hj = detail::step(h2rel, x(j));
      auto cross = [&](double s) {
        const double a = s * hi, b = s * hj;
        return (at(i, a, j, b) - at(i, a, j, -b) - at(i, -a, j, b) + at(i, -a, j, -b)) /
               (4.0 * a * b);
      };
      const double v = cfg.richardson ? (4.0 * cross(0.5) - cross(1.0)) / 3.0 : cross(1.0);
      out.hess(i, j) = v;
      out.hess(j, i) = v;
    }
  }
  return out;
}

// Mixed third partial d^3 f / dx_i dx_j dx_k.
template <class Field>
double partial3(Field&& f, const Eigen::VectorXd& x, int i, int j, int k,
                const DiffConfig& cfg = {}) {
  if (cfg.mode == DiffMode::forward_jet) {
    if constexpr (detail::jet_invocable_v<Field>) {
      JetVec xs = seed_variables(x, 3);
      Jet r = f(std::span<const Jet>(xs.data(), xs.size()));
      if (!r.all_finite()) throw NonFiniteValue("partial3: non-finite derivative coefficients");
      return r.third(i, j, k);
    } else {
      throw std::logic_error("field is not callable on jets; use central_fd mode");
    }
  }
  // Outer central difference (in x_k) of the fd Hessian entry (i,j).
  const double h3 = detail::step(std::pow(cfg.fd_step, 2.0 / 3.0), x(k));
  auto hess_ij = [&](double shift) {
    Eigen::VectorXd p = x;
    p(k) += shift;
    DiffConfig inner = cfg;
    return jet2(f, p, inner).hess(i, j);
  };
  return detail::central1(hess_ij, h3, cfg.richardson);
}

}  // namespace finslerlab
