#include "finslerlab/spray.hpp"

#include <cmath>

namespace finslerlab {

namespace {

// Evaluate the field on order-`order` joint jets; throws NonFiniteValue if any
// coefficient is not finite.
Jet joint_eval(const MetricField& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
               int order) {
  auto [xj, yj] = seed_joint(x, y, order);
  Jet r = f(std::span<const Jet>(xj.data(), xj.size()), std::span<const Jet>(yj.data(), yj.size()));
  if (!r.all_finite()) throw NonFiniteValue("field evaluated to non-finite jet");
  return r;
}

Eigen::LDLT<Eigen::MatrixXd> factor_metric(const Eigen::MatrixXd& g) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw SingularMetric("fundamental tensor is not positive definite");
  const auto d = ldlt.vectorD();
  if (!(d.minCoeff() > 1e-12 * d.maxCoeff()))
    throw SingularMetric("fundamental tensor numerically singular");
  return ldlt;
}

}  // namespace

Eigen::VectorXd spray_values(const MetricField& f_squared, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  Jet F2 = joint_eval(f_squared, x, y, 2);

  Eigen::MatrixXd g(n, n);
  Eigen::VectorXd rhs(n);
  for (int l = 0; l < n; ++l) {
    for (int a = 0; a < n; ++a) g(a, l) = 0.5 * F2.hess(n + a, n + l);
    double h = -F2.grad(l);
    for (int k = 0; k < n; ++k) h += F2.hess(k, n + l) * y(k);
    rhs(l) = h;
  }
  return factor_metric(g).solve(0.25 * rhs);
}

SprayJet spray_jet(const MetricField& f_squared, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  const int m = 2 * n;
  Jet F2 = joint_eval(f_squared, x, y, 3);

  Eigen::MatrixXd g(n, n);
  Eigen::VectorXd rhs(n);
  for (int l = 0; l < n; ++l) {
    for (int a = 0; a < n; ++a) g(a, l) = 0.5 * F2.hess(n + a, n + l);
    double h = -F2.grad(l);
    for (int k = 0; k < n; ++k) h += F2.hess(k, n + l) * y(k);
    rhs(l) = h;
  }
  auto ldlt = factor_metric(g);

  SprayJet out;
  out.G = ldlt.solve(0.25 * rhs);
  out.dG.resize(n, m);

  Eigen::MatrixXd dg(n, n);
  Eigen::VectorXd drhs(n);
  for (int z = 0; z < m; ++z) {
    for (int l = 0; l < n; ++l) {
      for (int a = 0; a < n; ++a) dg(a, l) = 0.5 * F2.third(n + a, n + l, z);
      double dh = -F2.hess(l, z);
      for (int k = 0; k < n; ++k) dh += F2.third(k, n + l, z) * y(k);
      if (z >= n) dh += F2.hess(z - n, n + l);  // the explicit y^k factor
      drhs(l) = dh;
    }
    out.dG.col(z) = ldlt.solve(0.25 * drhs - dg * out.G);
  }
  return out;
}

SprayProvider spray_provider(MetricField f_squared) {
  return [f = std::move(f_squared)](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return spray_jet(f, x, y);
  };
}

Eigen::MatrixXd riemann_from_spray(const SprayProvider& provider, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const CurvatureConfig& cfg) {
  const int n = static_cast<int>(x.size());
  if (y.norm() == 0.0) throw DomainViolation("riemann tensor needs y != 0");

  SprayJet base = provider(x, y);
  Eigen::MatrixXd A = base.dG.leftCols(n);
  Eigen::MatrixXd B = base.dG.rightCols(n);

  auto y_block = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& yy) -> Eigen::MatrixXd {
    return provider(xx, yy).dG.rightCols(n);
  };

  const double ynorm = y.norm();
  const Eigen::VectorXd dirx = y / ynorm;
  const double hx = cfg.fd_step * std::max(1.0, x.norm());
  auto C_at = [&](double h) -> Eigen::MatrixXd {
    return ynorm * (y_block(x + h * dirx, y) - y_block(x - h * dirx, y)) / (2.0 * h);
  };
  Eigen::MatrixXd C = cfg.richardson ? ((4.0 * C_at(hx / 2) - C_at(hx)) / 3.0).eval() : C_at(hx);

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  const double gnorm = base.G.norm();
  if (gnorm > 0.0) {
    const Eigen::VectorXd diry = base.G / gnorm;
    const double hy = cfg.fd_step * std::max(1.0, y.norm());
    auto D_at = [&](double h) -> Eigen::MatrixXd {
      return gnorm * (y_block(x, y + h * diry) - y_block(x, y - h * diry)) / (2.0 * h);
    };
    D = cfg.richardson ? ((4.0 * D_at(hy / 2) - D_at(hy)) / 3.0).eval() : D_at(hy);
  }

  return 2.0 * A - C + 2.0 * D - B * B;
}

ConnectionData connection_data(const MetricField& a_squared, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  Jet A2 = joint_eval(a_squared, x, y, 3);

  ConnectionData out;
  out.a.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.a(i, j) = 0.5 * A2.hess(n + i, n + j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.a);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw SingularMetric("a_ij is not positive definite");
  out.a_inv = out.a.inverse();

  // da[k](i,j) = d a_ij / d x^k
  std::vector<Eigen::MatrixXd> da(n, Eigen::MatrixXd(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) da[k](i, j) = 0.5 * A2.third(n + i, n + j, k);

  out.gamma.assign(n, Eigen::MatrixXd(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += out.a_inv(i, l) * (da[j](l, k) + da[k](j, l) - da[l](j, k));
        out.gamma[i](j, k) = 0.5 * s;
      }
  }

  out.spray.resize(n);
  for (int i = 0; i < n; ++i) out.spray(i) = 0.5 * y.dot(out.gamma[i] * y);
  return out;
}

OneFormData one_form_covariant(const ConnectionData& conn, const MetricField& beta,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  Jet B = joint_eval(beta, x, y, 2);

  OneFormData out;
  out.b.resize(n);
  out.db.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.b(i) = B.grad(n + i);
    for (int j = 0; j < n; ++j) out.db(i, j) = B.hess(n + i, j);
  }
  out.bij.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = out.db(i, j);
      for (int k = 0; k < n; ++k) s -= conn.gamma[k](i, j) * out.b(k);
      out.bij(i, j) = s;
    }
  out.b2 = out.b.dot(conn.a_inv * out.b);
  return out;
}

}  // namespace finslerlab
