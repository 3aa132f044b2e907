#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"

namespace finslerlab {

// A scalar field of (x, y) evaluated on jets. Joint seeding numbers the x
// variables 0..n-1 and the y variables n..2n-1; the field itself never cares,
// it just combines the jets it is handed.
using MetricField = std::function<Jet(std::span<const Jet>, std::span<const Jet>)>;

// A scalar field of x alone.
using ScalarXField = std::function<Jet(std::span<const Jet>)>;

// Geodesic spray coefficients together with their exact first derivatives
// with respect to the 2n joint variables (x first, then y).
struct SprayJet {
  Eigen::VectorXd G;   // n
  Eigen::MatrixXd dG;  // n x 2n
};

using SprayProvider = std::function<SprayJet(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

struct CurvatureConfig {
  double fd_step = 1e-3;  // relative step of the outer directional difference
  bool richardson = true;
};

// G^i = (1/4) g^{il} { [F^2]_{x^k y^l} y^k - [F^2]_{x^l} } from a single
// order-2 joint jet of F^2.
Eigen::VectorXd spray_values(const MetricField& f_squared, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y);

// Same, but from an order-3 jet, so the returned first derivatives of G are
// exact to rounding.
SprayJet spray_jet(const MetricField& f_squared, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

SprayProvider spray_provider(MetricField f_squared);

// Riemann curvature R^i_j assembled from a spray provider:
//   R^i_j = 2 dG^i/dx^j - y^k d2G^i/dx^k dy^j + 2 G^k d2G^i/dy^k dy^j
//           - dG^i/dy^k dG^k/dy^j.
// The second-derivative contractions are single directional central
// differences of the provider's exact first derivatives.
Eigen::MatrixXd riemann_from_spray(const SprayProvider& provider, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const CurvatureConfig& cfg = {});

// Metric tensor, inverse, Christoffel symbols and Riemannian spray of a
// quadratic-in-y field a^2(x, y), from one order-3 joint jet.
struct ConnectionData {
  Eigen::MatrixXd a;
  Eigen::MatrixXd a_inv;
  std::vector<Eigen::MatrixXd> gamma;  // gamma[i](j,k), symmetric in (j,k)
  Eigen::VectorXd spray;               // (1/2) gamma^i_jk y^j y^k
};

ConnectionData connection_data(const MetricField& a_squared, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y);

// Covariant derivative data of a 1-form beta = b_i(x) y^i with respect to the
// connection of a^2: b_i from the y-gradient of beta, d_j b_i from its mixed
// second derivatives, b_{i|j} = d_j b_i - gamma^k_{ij} b_k.
struct OneFormData {
  Eigen::VectorXd b;    // b_i
  Eigen::MatrixXd db;   // d b_i / d x^j
  Eigen::MatrixXd bij;  // b_{i|j}
  double b2 = 0.0;      // a^{ij} b_i b_j
};

OneFormData one_form_covariant(const ConnectionData& conn, const MetricField& beta,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace finslerlab
