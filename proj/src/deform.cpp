#include "finslerlab/deform.hpp"

#include <cmath>

namespace finslerlab {

namespace {

Jet delta_field(const ProjectiveChart& chart, std::span<const Jet> x) {
  Jet delta = chart.kappa() - chart.mu * b_squared(chart, x);
  if (delta.value() <= 0.0) throw DomainViolation("deformation: kappa - mu b^2 <= 0");
  return delta;
}

}  // namespace


namespace {

// bbar^2 through the generic pipeline: a_ij of abar^2 plus the y-gradient of
// bbar at an arbitrary probe direction.
std::function<double(const Eigen::VectorXd&)> norm2_of(MetricField abar2, MetricField bbar) {
  return [abar2 = std::move(abar2), bbar = std::move(bbar)](const Eigen::VectorXd& x) {
    Eigen::VectorXd probe = Eigen::VectorXd::Zero(x.size());
    probe(0) = 1.0;
    ConnectionData conn = connection_data(abar2, x, probe);
    return one_form_covariant(conn, bbar, x, probe).b2;
  };
}

}  // namespace

DeformedPair deform_nonzero(const ProjectiveChart& chart) {
  const double kappa = chart.kappa();
  if (chart.mu == 0.0 || std::abs(kappa) < 1e-12)
    throw DomainViolation("deform_nonzero needs kappa != 0 and mu != 0");
  if (kappa < 0.0)
    throw UnsupportedSignature("kappa < 0 gives a pseudo-Riemannian abar; not covered");

  DeformedPair out;
  out.lemma = 33;
  const double mu = chart.mu;
  const double amu = std::abs(mu);
  out.abar_squared = [chart, mu, amu](std::span<const Jet> x, std::span<const Jet> y) {
    Jet delta = delta_field(chart, x);
    Jet be = beta_form(chart, x, y);
    return amu / delta * (alpha_squared(chart, x, y) + mu / delta * (be * be));
  };
  out.bbar = [chart, amu](std::span<const Jet> x, std::span<const Jet> y) {
    Jet delta = delta_field(chart, x);
    return std::pow(amu, 1.5) * pow(delta, -1.5) * beta_form(chart, x, y);
  };
  out.bbar_norm2 = norm2_of(out.abar_squared, out.bbar);
  return out;
}

DeformedPair deform_zero(const ProjectiveChart& chart) {
  if (!chart.kappa_zero() || chart.mu >= 0.0)
    throw DomainViolation("deform_zero needs kappa = 0 and mu < 0");

  DeformedPair out;
  out.lemma = 34;
  out.abar_squared = [chart](std::span<const Jet> x, std::span<const Jet> y) {
    Jet b2 = b_squared(chart, x);
    if (b2.value() <= 0.0) throw DomainViolation("deform_zero: b = 0");
    return alpha_squared(chart, x, y) / b2;
  };
  out.bbar = [chart](std::span<const Jet> x, std::span<const Jet> y) {
    Jet b2 = b_squared(chart, x);
    if (b2.value() <= 0.0) throw DomainViolation("deform_zero: b = 0");
    return beta_form(chart, x, y) / b2;
  };
  out.bbar_norm2 = norm2_of(out.abar_squared, out.bbar);
  return out;
}

DeformCertificate certify_deform33(const ProjectiveChart& chart, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const CurvatureConfig& cfg) {
  DeformedPair d = deform_nonzero(chart);
  const double mu = chart.mu;
  const double kappa = chart.kappa();

  DeformCertificate cert;
  cert.flatness =
      riemann_from_spray(spray_provider(d.abar_squared), x, y, cfg).lpNorm<Eigen::Infinity>();

  ConnectionData conn = connection_data(d.abar_squared, x, y);
  OneFormData form = one_form_covariant(conn, d.bbar, x, y);
  const double chat = (form.bij.cwiseProduct(conn.a)).sum() / conn.a.squaredNorm();
  cert.conformal_dev = (form.bij - chat * conn.a).lpNorm<Eigen::Infinity>();
  cert.conformal_const_dev = std::abs(std::abs(chat) - std::sqrt(std::abs(mu)));

  JetVec xc = seed_constants(x);
  const double b2 = b_squared(chart, std::span<const Jet>(xc.data(), xc.size())).value();
  const double delta = kappa - mu * b2;
  cert.identity_dev = std::abs(delta * (1.0 / kappa + form.b2 / mu) - 1.0);

  // Reversed deformation (with bbar^2 in both factors) recovers alpha, beta.
  JetVec yc = seed_constants(y);
  auto xs = std::span<const Jet>(xc.data(), xc.size());
  auto ys = std::span<const Jet>(yc.data(), yc.size());
  const double abar2 = d.abar_squared(xs, ys).value();
  const double bbar = d.bbar(xs, ys).value();
  const double dbar = 1.0 / kappa + form.b2 / mu;
  const double a2_rt = (abar2 - (1.0 / mu) / dbar * bbar * bbar) / (std::abs(mu) * dbar);
  const double beta_rt = std::pow(std::abs(mu), -1.5) * std::pow(dbar, -1.5) * bbar;
  const double a2 = alpha_squared(chart, xs, ys).value();
  const double be = beta_eval(chart, x, y);
  cert.roundtrip_dev = std::max(std::abs(a2_rt - a2), std::abs(beta_rt - be));
  return cert;
}

DeformCertificate certify_deform34(const ProjectiveChart& chart, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const CurvatureConfig& cfg) {
  DeformedPair d = deform_zero(chart);

  DeformCertificate cert;
  cert.flatness =
      riemann_from_spray(spray_provider(d.abar_squared), x, y, cfg).lpNorm<Eigen::Infinity>();
  ConnectionData conn = connection_data(d.abar_squared, x, y);
  OneFormData form = one_form_covariant(conn, d.bbar, x, y);
  cert.parallel_dev = form.bij.lpNorm<Eigen::Infinity>();
  cert.bbar_norm_dev = std::abs(std::sqrt(form.b2) - 1.0);
  return cert;
}

double phi_transfer(const PhiFamily& phibar, double mu, double kappa, double b2, double s) {
  return PhiFamily::transfer(phibar, mu, kappa)(b2, s);
}

}  // namespace finslerlab
