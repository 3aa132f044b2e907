#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>

#include "finslerlab/chart.hpp"
#include "finslerlab/phi.hpp"
#include "finslerlab/spray.hpp"

namespace finslerlab {

enum class SingularDirections { none, pm_b };

// F = alpha * phi(b^2, beta/alpha) over a projective chart.
struct GeneralABMetric {
  ProjectiveChart chart;
  PhiFamily family;
  std::optional<double> expected_K;
  SingularDirections singular = SingularDirections::none;

  GeneralABMetric(ProjectiveChart chart_, PhiFamily family_,
                  std::optional<double> expected_K_ = std::nullopt,
                  SingularDirections singular_ = SingularDirections::none)
      : chart(std::move(chart_)),
        family(std::move(family_)),
        expected_K(expected_K_),
        singular(singular_) {}

  Jet f_squared(std::span<const Jet> x, std::span<const Jet> y) const;
  MetricField f_squared_field() const;

  // (b^2, s) at a sample point.
  std::pair<double, double> b2_s(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
};

// Q, R, Theta, Psi, Omega, Pi of the closed spray formula.
struct SprayTerms {
  double Q = 0, R = 0, Theta = 0, Psi = 0, Omega = 0, Pi = 0;
};

SprayTerms spray_terms(const PhiJet& pj, double b2, double s);

double metric_eval(const GeneralABMetric& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// g_ij = 1/2 d^2 F^2 / dy^i dy^j; throws SingularMetric if numerically singular.
Eigen::MatrixXd fundamental_tensor(const GeneralABMetric& m, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y);

// Definition route: G^i = 1/4 g^{il}{[F^2]_{x^k y^l} y^k - [F^2]_{x^l}}.
Eigen::VectorXd spray_direct(const GeneralABMetric& m, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y);

// Closed-formula route assembled from SprayTerms, AlphaTensors and BetaData.
Eigen::VectorXd spray_formula(const GeneralABMetric& m, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

Eigen::MatrixXd riemann_tensor(const GeneralABMetric& m, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const CurvatureConfig& cfg = {});

// Riemann tensor through the projective spray G = P y (the only route that
// exists when g is degenerate); requires F > 0 along the sample.
Eigen::MatrixXd riemann_tensor_projective(const GeneralABMetric& m, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y,
                                          const CurvatureConfig& cfg = {});

double flag_curvature(const GeneralABMetric& m, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                      const CurvatureConfig& cfg = {});

enum class CurvatureRoute { tensor, projective, psi };

struct CurvatureFit {
  double K_fit = 0.0;
  // ||R - K_fit P||_F / ||P||_F with P^i_j = F^2 delta^i_j - F F_{y^j} y^i.
  // Normalizing by the projector keeps the number in curvature units and
  // defined at K = 0 (the absolute convention).
  double residual = 0.0;
  CurvatureRoute route = CurvatureRoute::tensor;
};

CurvatureFit constant_K_fit(const GeneralABMetric& m, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y,
                            CurvatureRoute route = CurvatureRoute::tensor,
                            const CurvatureConfig& cfg = {});

// K = (P^2 - P_{x^k} y^k) / F^2 with P = F_{x^k} y^k / (2F); checks that the
// spray is collinear with y first (tolerance 1e-7) when g is invertible.
double projective_K(const GeneralABMetric& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// K = (mu + mu s psi + c^2 [psi^2 - (psi_2 + 2 s psi_1)]) / phi^2.
double psi_K(const GeneralABMetric& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace finslerlab
