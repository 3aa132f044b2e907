#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"
#include "finslerlab/spray.hpp"

namespace finslerlab {

// Beltrami-type chart of a constant-sectional-curvature metric alpha together
// with a closed conformal 1-form beta:
//
//   alpha = sqrt((1+mu|x|^2)|y|^2 - mu<x,y>^2) / (1+mu|x|^2)
//   beta  = (lambda<x,y> + (1+mu|x|^2)<a,y> - mu<a,x><x,y>) / (1+mu|x|^2)^(3/2)
//
// kappa = lambda^2 + mu|a|^2 is the constant with c(x)^2 = kappa - mu b^2(x).
struct ProjectiveChart {
  int n = 3;
  double mu = 0.0;
  double lambda = 1.0;
  Eigen::VectorXd a;

  ProjectiveChart(int n_, double mu_, double lambda_, Eigen::VectorXd a_);

  double kappa() const { return lambda * lambda + mu * a.squaredNorm(); }
  bool kappa_zero(double tol = 1e-12) const { return std::abs(kappa()) < tol; }

  // 1 + mu|x|^2 bounded away from zero.
  bool admissible(const Eigen::VectorXd& x, double margin = 0.01) const {
    return 1.0 + mu * x.squaredNorm() > margin;
  }
};

namespace fieldops {

template <class T>
T dot(std::span<const T> u, std::span<const T> v) {
  T s = u[0] * v[0];
  for (size_t i = 1; i < u.size(); ++i) s = s + u[i] * v[i];
  return s;
}

template <class T>
T dot(const Eigen::VectorXd& c, std::span<const T> v) {
  T s = c(0) * v[0];
  for (size_t i = 1; i < v.size(); ++i) s = s + c(static_cast<int>(i)) * v[i];
  return s;
}

template <class T>
T squared_norm(std::span<const T> v) {
  return dot(v, v);
}

}  // namespace fieldops

// t(x) = 1 + mu |x|^2
template <class T>
T chart_factor(const ProjectiveChart& c, std::span<const T> x) {
  return 1.0 + c.mu * fieldops::squared_norm(x);
}

template <class T>
T alpha_squared(const ProjectiveChart& c, std::span<const T> x, std::span<const T> y) {
  using fieldops::dot;
  T t = chart_factor(c, x);
  T xy = dot(x, y);
  T rad = t * fieldops::squared_norm(y) - c.mu * xy * xy;
  return rad / (t * t);
}

template <class T>
T beta_form(const ProjectiveChart& c, std::span<const T> x, std::span<const T> y) {
  using fieldops::dot;
  T t = chart_factor(c, x);
  T xy = dot(x, y);
  T num = c.lambda * xy + t * dot(c.a, y) - c.mu * dot(c.a, x) * xy;
  return num / pow(t, 1.5);
}

// b^2(x) = a^{ij} b_i b_j with b_i the coefficients of beta; reduces to the
// closed expression below via a^{ij} = t (delta_ij + mu x_i x_j).
template <class T>
T b_squared(const ProjectiveChart& c, std::span<const T> x) {
  using fieldops::dot;
  T t = chart_factor(c, x);
  T ax = dot(c.a, x);
  T A = c.lambda - c.mu * ax;
  T x2 = fieldops::squared_norm(x);
  T inner = A * x2 + t * ax;
  T num = A * A * x2 + 2.0 * (A * (t * ax)) + (t * t) * c.a.squaredNorm() + c.mu * inner * inner;
  return num / (t * t);
}

// Conformal factor c(x) = (lambda - mu<a,x>) / sqrt(1 + mu|x|^2).
double conformal_factor(const ProjectiveChart& c, const Eigen::VectorXd& x);

double alpha_eval(const ProjectiveChart& c, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double beta_eval(const ProjectiveChart& c, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Jet-field adapters for the generic pipeline.
MetricField alpha_squared_field(const ProjectiveChart& c);
MetricField beta_jet_field(const ProjectiveChart& c);
ScalarXField b_squared_field(const ProjectiveChart& c);

// alpha-level tensors at (x, y): a_ij from the y-Hessian of alpha^2/2,
// Christoffel symbols from its x-derivatives, spray and projective factor.
struct AlphaTensors {
  Eigen::MatrixXd a;
  Eigen::MatrixXd a_inv;
  std::vector<Eigen::MatrixXd> christoffel;  // christoffel[i](j,k)
  Eigen::VectorXd alpha_spray;               // aG^i = (1/2) Gamma^i_jk y^j y^k
  double theta = 0.0;                        // <aG, y> / |y|^2 (Euclidean)
  double collinearity_residual = 0.0;        // |aG - theta y| (Euclidean)
};

AlphaTensors alpha_tensors(const ProjectiveChart& c, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y);

// Covariant data of beta: b_{i|j} and every r/s contraction used by the
// spray formula.
struct BetaData {
  Eigen::VectorXd b_i;
  double b2 = 0.0;
  Eigen::MatrixXd bij;   // b_{i|j}
  Eigen::MatrixXd r_ij;
  Eigen::MatrixXd s_ij;
  double r0 = 0.0, s0 = 0.0, r = 0.0;
  Eigen::VectorXd r_up, s_up, s_up0;  // r^i, s^i, s^i_0
  double c = 0.0;                     // conformal factor at x
  double r00 = 0.0;                   // r_ij y^i y^j
};

BetaData beta_data(const ProjectiveChart& c, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Riemann curvature R^i_j of alpha, by the generic spray route. The chart
// satisfies R^i_j = mu (alpha^2 delta^i_j - y^i y_j).
Eigen::MatrixXd alpha_riemann(const ProjectiveChart& c, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, const CurvatureConfig& cfg = {});

}  // namespace finslerlab
