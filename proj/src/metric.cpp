#include "finslerlab/metric.hpp"

#include <cmath>

namespace finslerlab {

namespace {

constexpr double kSingularDirectionMargin = 0.98;  // |s| >= margin * b is off-limits for pm_b

void guard_singular_direction(const GeneralABMetric& m, double b2, double s) {
  if (m.singular != SingularDirections::pm_b) return;
  const double b = std::sqrt(std::max(b2, 0.0));
  if (std::abs(s) >= kSingularDirectionMargin * b)
    throw SingularDirection("evaluation too close to y = +-b directions");
}

}  // namespace

Jet GeneralABMetric::f_squared(std::span<const Jet> x, std::span<const Jet> y) const {
  Jet a2 = alpha_squared(chart, x, y);
  if (a2.value() <= 0.0) throw DomainViolation("alpha^2 non-positive");
  Jet al = sqrt(a2);
  Jet be = beta_form(chart, x, y);
  Jet b2 = b_squared(chart, x);
  Jet s = be / al;
  Jet phi = family.eval(b2, s);
  Jet F = al * phi;
  return F * F;
}

MetricField GeneralABMetric::f_squared_field() const {
  return [m = *this](std::span<const Jet> x, std::span<const Jet> y) { return m.f_squared(x, y); };
}

std::pair<double, double> GeneralABMetric::b2_s(const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& y) const {
  JetVec xc = seed_constants(x);
  const double b2 = b_squared(chart, std::span<const Jet>(xc.data(), xc.size())).value();
  const double s = beta_eval(chart, x, y) / alpha_eval(chart, x, y);
  return {b2, s};
}

SprayTerms spray_terms(const PhiJet& p, double b2, double s) {
  const double q1 = p.phi - s * p.phi2;
  const double q2 = q1 + (b2 - s * s) * p.phi22;
  const double scale = std::abs(p.phi) + std::abs(s * p.phi2);
  if (std::abs(q1) < 1e-14 * scale || std::abs(q2) < 1e-14 * scale)
    throw DomainViolation("spray terms: regularity denominator vanishes");
  SprayTerms t;
  t.Q = p.phi2 / q1;
  t.R = p.phi1 / q1;
  t.Theta = (q1 * p.phi2 - s * p.phi * p.phi22) / (2.0 * p.phi * q2);
  t.Psi = p.phi22 / (2.0 * q2);
  t.Pi = (q1 * p.phi12 - s * p.phi1 * p.phi22) / (q1 * q2);
  t.Omega = 2.0 * p.phi1 / p.phi - (s * p.phi + (b2 - s * s) * p.phi2) / p.phi * t.Pi;
  return t;
}

double metric_eval(const GeneralABMetric& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  auto [b2, s] = m.b2_s(x, y);
  guard_singular_direction(m, b2, s);
  const double al = alpha_eval(m.chart, x, y);
  return al * m.family(b2, s);
}

Eigen::MatrixXd fundamental_tensor(const GeneralABMetric& m, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  JetVec xc = seed_constants(x);
  JetVec yj = seed_variables(y, 2);
  Jet F2 = m.f_squared(std::span<const Jet>(xc.data(), xc.size()),
                       std::span<const Jet>(yj.data(), yj.size()));
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = 0.5 * F2.hess(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const double lo = es.eigenvalues().cwiseAbs().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lo > 1e-12 * hi)) throw SingularMetric("fundamental tensor numerically singular");
  return g;
}

Eigen::VectorXd spray_direct(const GeneralABMetric& m, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y) {
  return spray_values(m.f_squared_field(), x, y);
}

Eigen::VectorXd spray_formula(const GeneralABMetric& m, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
  AlphaTensors at = alpha_tensors(m.chart, x, y);
  BetaData bd = beta_data(m.chart, x, y);
  const double al = alpha_eval(m.chart, x, y);
  const double s = beta_eval(m.chart, x, y) / al;
  PhiJet pj = m.family.jet(bd.b2, s);
  SprayTerms st = spray_terms(pj, bd.b2, s);

  const Eigen::VectorXd b_up = at.a_inv * bd.b_i;
  const double core = -2.0 * al * st.Q * bd.s0 + bd.r00 + 2.0 * al * al * st.R * bd.r;
  Eigen::VectorXd G = at.alpha_spray;
  G += al * st.Q * bd.s_up0;
  G += (st.Theta * core + al * st.Omega * (bd.r0 + bd.s0)) / al * y;
  G += (st.Psi * core + al * st.Pi * (bd.r0 + bd.s0)) * b_up;
  G -= al * al * st.R * (bd.r_up + bd.s_up);
  return G;
}

Eigen::MatrixXd riemann_tensor(const GeneralABMetric& m, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const CurvatureConfig& cfg) {
  return riemann_from_spray(spray_provider(m.f_squared_field()), x, y, cfg);
}

Eigen::MatrixXd riemann_tensor_projective(const GeneralABMetric& m, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y, const CurvatureConfig& cfg) {
  (void)cfg;  // no finite differences on this route
  const int n = static_cast<int>(x.size());
  // With G = P y the curvature display closes at second derivatives of
  // P = F_{x^k} y^k / (2F), i.e. third derivatives of F: everything is exact
  // to rounding from one order-3 jet. This is the only usable route when g
  // degenerates, and the accurate one near pm_b directions where F -> 0.
  auto [xj, yj] = seed_joint(x, y, 3);
  Jet F2 = m.f_squared(std::span<const Jet>(xj.data(), xj.size()),
                       std::span<const Jet>(yj.data(), yj.size()));
  Jet F = sqrt(F2);
  const double Fv = F.value();
  const int mdim = 2 * n;

  // Q = F_{x^k} y^k and its first/second joint derivatives.
  double Q = 0.0;
  Eigen::VectorXd Qz(mdim);
  Eigen::MatrixXd Qzw(mdim, mdim);
  for (int k = 0; k < n; ++k) Q += F.grad(k) * y(k);
  for (int z = 0; z < mdim; ++z) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += F.hess(k, z) * y(k);
    if (z >= n) s += F.grad(z - n);
    Qz(z) = s;
  }
  for (int z = 0; z < mdim; ++z)
    for (int w = z; w < mdim; ++w) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += F.third(k, z, w) * y(k);
      if (z >= n) s += F.hess(z - n, w);
      if (w >= n) s += F.hess(w - n, z);
      Qzw(z, w) = s;
      Qzw(w, z) = s;
    }

  const double P = Q / (2.0 * Fv);
  Eigen::VectorXd Pz(mdim);
  for (int z = 0; z < mdim; ++z) Pz(z) = (Qz(z) - 2.0 * P * F.grad(z)) / (2.0 * Fv);
  Eigen::MatrixXd Pzw(mdim, mdim);
  for (int z = 0; z < mdim; ++z)
    for (int w = z; w < mdim; ++w) {
      const double v = (Qzw(z, w) - 2.0 * Pz(w) * F.grad(z) - 2.0 * Pz(z) * F.grad(w) -
                        2.0 * P * F.hess(z, w)) /
                       (2.0 * Fv);
      Pzw(z, w) = v;
      Pzw(w, z) = v;
    }

  // R^i_j = v_j y^i + c0 delta^i_j from the spray curvature display with
  // G^i = P y^i.
  double yPy = 0.0, yPx = 0.0;
  for (int k = 0; k < n; ++k) {
    yPy += y(k) * Pz(n + k);
    yPx += y(k) * Pz(k);
  }
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) {
    double yPxy = 0.0, yPyy = 0.0;
    for (int k = 0; k < n; ++k) {
      yPxy += y(k) * Pzw(k, n + j);
      yPyy += y(k) * Pzw(n + k, n + j);
    }
    v(j) = 2.0 * Pz(j) - yPxy + 2.0 * P * yPyy - yPy * Pz(n + j);
  }
  const double c0 = 2.0 * P * yPy - yPx - P * P;

  Eigen::MatrixXd R = c0 * Eigen::MatrixXd::Identity(n, n);
  R += y * v.transpose();
  return R;
}

double flag_curvature(const GeneralABMetric& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& u, const CurvatureConfig& cfg) {
  Eigen::MatrixXd g = fundamental_tensor(m, x, y);
  Eigen::MatrixXd R = riemann_tensor(m, x, y, cfg);
  const Eigen::VectorXd Ru = R * u;
  const double num = Ru.dot(g * u);
  const double gyy = y.dot(g * y);
  const double guu = u.dot(g * u);
  const double gyu = y.dot(g * u);
  const double den = gyy * guu - gyu * gyu;
  if (!(std::abs(den) > 1e-12 * std::abs(gyy * guu)))
    throw DegenerateFlag("flag plane numerically degenerate");
  return num / den;
}

CurvatureFit constant_K_fit(const GeneralABMetric& m, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y, CurvatureRoute route,
                            const CurvatureConfig& cfg) {
  const int n = static_cast<int>(x.size());
  if (route == CurvatureRoute::psi) throw std::logic_error("use psi_K for the psi route");
  Eigen::MatrixXd R = route == CurvatureRoute::tensor ? riemann_tensor(m, x, y, cfg)
                                                      : riemann_tensor_projective(m, x, y, cfg);
  // F and F_y from one y-jet.
  JetVec xc = seed_constants(x);
  JetVec yj = seed_variables(y, 1);
  Jet F2 = m.f_squared(std::span<const Jet>(xc.data(), xc.size()),
                       std::span<const Jet>(yj.data(), yj.size()));
  const double F = std::sqrt(F2.value());
  Eigen::VectorXd Fy(n);
  for (int i = 0; i < n; ++i) Fy(i) = F2.grad(i) / (2.0 * F);

  Eigen::MatrixXd proj = F * F * Eigen::MatrixXd::Identity(n, n) - F * (y * Fy.transpose());
  const double pp = proj.squaredNorm();
  CurvatureFit fit;
  fit.route = route;
  fit.K_fit = (R.cwiseProduct(proj)).sum() / pp;
  fit.residual = (R - fit.K_fit * proj).norm() / std::sqrt(pp);
  return fit;
}

double projective_K(const GeneralABMetric& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  // Collinearity precondition, when the fundamental tensor permits.
  try {
    Eigen::VectorXd G = spray_direct(m, x, y);
    const double theta = G.dot(y) / y.squaredNorm();
    if ((G - theta * y).norm() > 1e-7 * (G.norm() + 1e-9))
      throw NotProjectivelyFlat("spray not collinear with y");
  } catch (const SingularMetric&) {
    // Degenerate g: no spray to check; the K formula below still applies.
  }

  JetVec xj = seed_variables(x, 2);
  JetVec yc = seed_constants(y);
  Jet F2 = m.f_squared(std::span<const Jet>(xj.data(), xj.size()),
                       std::span<const Jet>(yc.data(), yc.size()));
  Jet F = sqrt(F2);
  const double Fv = F.value();
  double Q = 0.0, yHy = 0.0;
  for (int k = 0; k < n; ++k) {
    Q += F.grad(k) * y(k);
    for (int l = 0; l < n; ++l) yHy += F.hess(k, l) * y(k) * y(l);
  }
  const double P = Q / (2.0 * Fv);
  const double Pxy = yHy / (2.0 * Fv) - 2.0 * P * P;
  return (P * P - Pxy) / (Fv * Fv);
}

double psi_K(const GeneralABMetric& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  auto [b2, s] = m.b2_s(x, y);
  const double c = conformal_factor(m.chart, x);
  PhiJet pj = m.family.jet(b2, s);
  PsiJet ps = psi_jet(pj, s);
  const double mu = m.chart.mu;
  return (mu + mu * s * ps.psi + c * c * (ps.psi * ps.psi - (ps.psi2 + 2.0 * s * ps.psi1))) /
         (pj.phi * pj.phi);
}

}  // namespace finslerlab
