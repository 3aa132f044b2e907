#pragma once

#include <Eigen/Dense>

#include "finslerlab/chart.hpp"
#include "finslerlab/phi.hpp"
#include "finslerlab/spray.hpp"

namespace finslerlab {

// Deformed pair (abar, bbar) as wrapped evaluators over the original chart;
// curvature and covariant derivatives of the deformed objects run through the
// same generic pipeline as everything else.
struct DeformedPair {
  MetricField abar_squared;
  MetricField bbar;
  std::function<double(const Eigen::VectorXd&)> bbar_norm2;  // bbar^2(x)
  int lemma = 33;  // 33: kappa != 0 flattening, 34: kappa = 0 normalization
};

// kappa != 0, mu != 0, kappa > 0:
//   abar^2 = |mu|/(kappa - mu b^2) (alpha^2 + mu/(kappa - mu b^2) beta^2)
//   bbar   = |mu|^(3/2)/(kappa - mu b^2)^(3/2) beta
// Flattens alpha and makes bbar conformal with constant +-sqrt|mu|.
DeformedPair deform_nonzero(const ProjectiveChart& chart);

// kappa = 0, mu < 0: abar = alpha/b, bbar = beta/b^2; flat abar, parallel
// bbar, bbar-norm 1. Irreversible.
DeformedPair deform_zero(const ProjectiveChart& chart);

// Per-sample certificate quantities; which fields are meaningful depends on
// the lemma.
struct DeformCertificate {
  double flatness = 0.0;             // ||Rbar^i_j||_inf
  double conformal_dev = 0.0;        // ||bbar_{i|j} - chat abar_ij||_inf (3.3)
  double conformal_const_dev = 0.0;  // | |chat| - sqrt(|mu|) |            (3.3)
  double identity_dev = 0.0;         // |(k - mu b^2)(1/k + bbar^2/mu) - 1| (3.3)
  double parallel_dev = 0.0;         // ||bbar_{i|j}||_inf                 (3.4)
  double bbar_norm_dev = 0.0;        // |bbar - 1|                         (3.4)
  double roundtrip_dev = 0.0;        // reversed deformation error         (3.3)
};

DeformCertificate certify_deform33(const ProjectiveChart& chart, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const CurvatureConfig& cfg = {});

DeformCertificate certify_deform34(const ProjectiveChart& chart, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const CurvatureConfig& cfg = {});

// Example 8.5: the phi that pairs with the original (alpha, beta) when
// phibar solves the mu = 0 equations.
double phi_transfer(const PhiFamily& phibar, double mu, double kappa, double b2, double s);

}  // namespace finslerlab
