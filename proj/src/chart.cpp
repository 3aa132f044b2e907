#include "finslerlab/chart.hpp"

#include <cmath>
#include <utility>

namespace finslerlab {

ProjectiveChart::ProjectiveChart(int n_, double mu_, double lambda_, Eigen::VectorXd a_)
    : n(n_), mu(mu_), lambda(lambda_), a(std::move(a_)) {
  if (n < 2) throw DomainViolation("chart dimension must be >= 2");
  if (a.size() != n) throw DomainViolation("chart vector a has wrong dimension");
}

double conformal_factor(const ProjectiveChart& c, const Eigen::VectorXd& x) {
  const double t = 1.0 + c.mu * x.squaredNorm();
  if (t <= 0.0) throw DomainViolation("x outside the chart domain (1 + mu|x|^2 <= 0)");
  return (c.lambda - c.mu * c.a.dot(x)) / std::sqrt(t);
}

double alpha_eval(const ProjectiveChart& c, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double t = 1.0 + c.mu * x.squaredNorm();
  if (t <= 0.0) throw DomainViolation("x outside the chart domain (1 + mu|x|^2 <= 0)");
  const double xy = x.dot(y);
  const double rad = t * y.squaredNorm() - c.mu * xy * xy;
  if (rad <= 0.0) throw DomainViolation("alpha radicand non-positive");
  return std::sqrt(rad) / t;
}

double beta_eval(const ProjectiveChart& c, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double t = 1.0 + c.mu * x.squaredNorm();
  if (t <= 0.0) throw DomainViolation("x outside the chart domain (1 + mu|x|^2 <= 0)");
  const double xy = x.dot(y);
  return (c.lambda * xy + t * c.a.dot(y) - c.mu * c.a.dot(x) * xy) / std::pow(t, 1.5);
}

MetricField alpha_squared_field(const ProjectiveChart& c) {
  return [c](std::span<const Jet> x, std::span<const Jet> y) { return alpha_squared(c, x, y); };
}

MetricField beta_jet_field(const ProjectiveChart& c) {
  return [c](std::span<const Jet> x, std::span<const Jet> y) { return beta_form(c, x, y); };
}

ScalarXField b_squared_field(const ProjectiveChart& c) {
  return [c](std::span<const Jet> x) { return b_squared(c, x); };
}

AlphaTensors alpha_tensors(const ProjectiveChart& c, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
  ConnectionData conn = connection_data(alpha_squared_field(c), x, y);
  AlphaTensors out;
  out.a = std::move(conn.a);
  out.a_inv = std::move(conn.a_inv);
  out.christoffel = std::move(conn.gamma);
  out.alpha_spray = std::move(conn.spray);
  const double y2 = y.squaredNorm();
  out.theta = out.alpha_spray.dot(y) / y2;
  out.collinearity_residual = (out.alpha_spray - out.theta * y).norm();
  return out;
}

BetaData beta_data(const ProjectiveChart& c, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  ConnectionData conn = connection_data(alpha_squared_field(c), x, y);
  OneFormData form = one_form_covariant(conn, beta_jet_field(c), x, y);

  BetaData out;
  out.b_i = form.b;
  out.b2 = form.b2;
  out.bij = form.bij;
  out.r_ij = 0.5 * (form.bij + form.bij.transpose());
  out.s_ij = 0.5 * (form.bij - form.bij.transpose());

  const Eigen::VectorXd b_up = conn.a_inv * form.b;
  const Eigen::VectorXd r_i = out.r_ij * b_up;             // r_i = b^j r_{ji}
  const Eigen::VectorXd s_i = out.s_ij.transpose() * b_up;  // s_i = b^j s_{ji}
  out.r0 = r_i.dot(y);
  out.s0 = s_i.dot(y);
  out.r = b_up.dot(r_i);
  out.r_up = conn.a_inv * r_i;
  out.s_up = conn.a_inv * s_i;
  out.s_up0 = conn.a_inv * (out.s_ij * y);  // s^i_0 = a^{ij} s_{jk} y^k
  out.r00 = y.dot(out.r_ij * y);
  out.c = conformal_factor(c, x);
  return out;
}

Eigen::MatrixXd alpha_riemann(const ProjectiveChart& c, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, const CurvatureConfig& cfg) {
  return riemann_from_spray(spray_provider(alpha_squared_field(c)), x, y, cfg);
}

}  // namespace finslerlab
