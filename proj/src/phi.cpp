#include "finslerlab/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finslerlab/quadrature.hpp"

namespace finslerlab {

namespace {

using phiimpl::Bryant;
using phiimpl::Constant;
using phiimpl::Custom;
using phiimpl::Funk;
using phiimpl::GeneralSolution;
using phiimpl::K0TwoSign;
using phiimpl::Km1Const;
using phiimpl::Km1Nested;
using phiimpl::Km1Sqrt;
using phiimpl::Kp1;
using phiimpl::Semidef;
using phiimpl::Shen;
using phiimpl::SolvedQ;
using phiimpl::Solution3;
using phiimpl::SquareB;
using phiimpl::Transfer;

Jet eval_impl(const Constant& f, const Jet& b2, const Jet& s) {
  (void)b2;
  (void)s;
  return Jet(f.c);
}

Jet eval_impl(const Funk& f, const Jet& b2, const Jet& s) {
  Jet rad = f.C - b2 + s * s;
  if (rad.value() <= 0.0) throw DomainViolation("funk: C - b^2 + s^2 <= 0");
  Jet den = (2.0 * std::sqrt(-f.sigma)) * (sqrt(rad) + double(f.sign) * s);
  if (den.value() == 0.0) throw DomainViolation("funk: zero denominator");
  return 1.0 / den;
}

Jet eval_impl(const SolvedQ& f, const Jet& b2, const Jet& s) {
  Jet u = b2 - s * s;
  Jet w;
  if (std::abs(f.D) < 1e-15) {
    Jet den = u - f.C;
    if (std::abs(den.value()) < 1e-15) throw DomainViolation("solved-q: u = C with D = 0");
    w = f.sigma / den;
  } else {
    Jet disc = (u - f.C) * (u - f.C) + (4.0 * f.D * f.D * f.sigma);
    if (disc.value() < 0.0) throw DomainViolation("solved-q: negative discriminant");
    w = ((f.C - u) + double(f.w_branch) * sqrt(disc)) / (2.0 * f.D * f.D);
  }
  if (w.value() <= 0.0) throw DomainViolation("solved-q: selected q^2 branch non-positive");
  Jet q = double(f.q_sign) * sqrt(w);
  Jet dq = f.D * q + s;
  Jet den = q * q * dq * dq + f.sigma;
  if (std::abs(den.value()) < 1e-300) throw DomainViolation("solved-q: zero denominator");
  return q / den;
}

Jet eval_impl(const Bryant&, const Jet& b2, const Jet& s) {
  CJet cb2 = complexify(b2);
  CJet cs = complexify(s);
  CJet arg = std::complex<double>(1.0, 2.0) + cb2 - cs * cs;
  CJet den = sqrt(arg) + std::complex<double>(0.0, 1.0) * cs;
  return real_part(reciprocal(den));
}

Jet eval_impl(const Shen& f, const Jet& b2, const Jet& s) {
  const double e = f.eps, e2 = e * e;
  Jet rad_a = 1.0 - b2 + s * s;
  Jet rad_b = 1.0 - e2 * b2 + e2 * (s * s);
  if (rad_a.value() <= 0.0 || rad_b.value() <= 0.0)
    throw DomainViolation("shen: radicand non-positive");
  Jet den_a = 1.0 - b2;
  Jet den_b = 1.0 - e2 * b2;
  if (den_a.value() <= 0.0 || den_b.value() <= 0.0) throw DomainViolation("shen: b^2 too large");
  return 0.5 * ((sqrt(rad_a) + s) / den_a - (e * sqrt(rad_b) + e2 * s) / den_b);
}

Jet require_b(const Jet& b2) {
  if (b2.value() <= 0.0) throw DomainViolation("family needs b > 0");
  return sqrt(b2);
}

Jet eval_impl(const SquareB&, const Jet& b2, const Jet& s) {
  Jet e = require_b(b2) + s;
  return e * e;
}

Jet eval_impl(const Semidef&, const Jet& b2, const Jet& s) {
  Jet u = b2 - s * s;
  if (u.value() <= 0.0) throw DomainViolation("semidefinite: b^2 - s^2 <= 0");
  if (b2.value() <= 0.0) throw DomainViolation("semidefinite: b = 0");
  return sqrt(u) / b2;
}

Jet eval_impl(const K0TwoSign& f, const Jet& b2, const Jet& s) {
  Jet u = b2 - s * s;
  Jet inner = 1.0 + double(f.c1) * u;
  if (inner.value() <= 0.0) throw DomainViolation("k0-two-sign: 1 + c1 u <= 0");
  Jet w = sqrt(inner);
  Jet b = require_b(b2);
  Jet e = b + s;
  Jet one_c2w = 1.0 + double(f.c2) * w;
  Jet num = one_c2w * one_c2w * (e * e);
  Jet braces = 1.0 + double(f.c1) * (b * e) + double(f.c2) * w;
  Jet den = w * braces * braces;
  if (std::abs(den.value()) < 1e-300) throw DomainViolation("k0-two-sign: zero denominator");
  return num / den;
}

Jet eval_impl(const Km1Const& f, const Jet& b2, const Jet& s) {
  Jet u = b2 - s * s;
  Jet inner = 1.0 + double(f.c1) * u;
  if (inner.value() <= 0.0) throw DomainViolation("km1-const: 1 + c1 u <= 0");
  Jet e = require_b(b2) + s;
  Jet den = 2.0 * (1.0 + double(f.c1) * (require_b(b2) * e) + double(f.c2) * sqrt(inner));
  if (std::abs(den.value()) < 1e-300) throw DomainViolation("km1-const: zero denominator");
  return e * e / den;
}

Jet eval_impl(const Km1Sqrt& f, const Jet& b2, const Jet& s) {
  Jet u = b2 - s * s;
  Jet inner = 1.0 + double(f.c1) * u;
  if (inner.value() <= 0.0) throw DomainViolation("km1-sqrt: 1 + c1 u <= 0");
  Jet b = require_b(b2);
  Jet den = 2.0 * b * (b * sqrt(inner) + double(f.c2) * s);
  if (std::abs(den.value()) < 1e-300) throw DomainViolation("km1-sqrt: zero denominator");
  return u / den;
}

Jet eval_impl(const Km1Nested& f, const Jet& b2, const Jet& s) {
  Jet u = b2 - s * s;
  if (std::abs(u.value()) >= 1.0) throw DomainViolation("km1-nested: |b^2 - s^2| >= 1");
  // 1 - sqrt(1-u^2) written cancellation-free on the c = -1 branch
  Jet w = f.c > 0 ? 1.0 + sqrt(1.0 - u * u) : u * u / (1.0 + sqrt(1.0 - u * u));
  if (w.value() <= 0.0) throw DomainViolation("km1-nested: 1 + c sqrt(1-u^2) <= 0");
  Jet sw = sqrt(w);
  const double rt2 = std::sqrt(2.0);
  Jet t = rt2 * sw + u;
  Jet e = require_b(b2) + s;
  Jet e2 = e * e;
  Jet braces = t * e2 - w * w;
  Jet den = 2.0 * (w * w * w) - braces * braces;
  if (std::abs(den.value()) < 1e-300) throw DomainViolation("km1-nested: zero denominator");
  return (2.0 * rt2) * t * (w * sw) * e2 / den;
}

Jet eval_impl(const Kp1&, const Jet& b2, const Jet& s) {
  Jet u = b2 - s * s;
  // sqrt(1+u^2) - 1 written cancellation-free
  Jet w = u * u / (sqrt(1.0 + u * u) + 1.0);
  if (w.value() <= 0.0) throw DomainViolation("kp1: u = 0");
  Jet sw = sqrt(w);
  const double rt2 = std::sqrt(2.0);
  Jet t = rt2 * sw + u;
  Jet e = require_b(b2) + s;
  Jet e2 = e * e;
  Jet braces = t * e2 + w * w;
  Jet den = 2.0 * (w * w * w) + braces * braces;
  return (2.0 * rt2) * t * (w * sw) * e2 / den;
}

Jet eval_impl(const Solution3& f, const Jet& b2, const Jet& s) {
  return eval_solution3(f.pq, b2 - s * s, s, f.sign);
}

Jet eval_impl(const GeneralSolution& f, const Jet& b2, const Jet& s) {
  if (!f.f) throw Error("general-solution: missing f");
  const int ord = std::max(b2.is_constant() ? 0 : b2.order(), s.is_constant() ? 0 : s.order());
  if (ord > 2) throw Error("general-solution family supports jets of order <= 2");
  Jet u = b2 - s * s;
  Jet phi = compose_scalar(f.f, u);
  Jet s2 = s * s;
  auto integrand = [&](double t) {
    Jet arg = b2 - s2 * (t * t);
    return compose_scalar_derivative(f.f, arg);
  };
  phi += 2.0 * s2 * integrate_jet(integrand, 0.0, 1.0, f.quad_tol);
  if (f.g) phi += compose_scalar(f.g, b2) * s;
  return phi;
}

Jet eval_impl(const Transfer& f, const Jet& b2, const Jet& s) {
  const double mu = f.mu, kappa = f.kappa;
  Jet delta = kappa - mu * b2;
  if (delta.value() <= 0.0) throw DomainViolation("transfer: kappa - mu b^2 <= 0");
  Jet delta_s = delta + mu * (s * s);
  if (delta_s.value() <= 0.0) throw DomainViolation("transfer: kappa - mu b^2 + mu s^2 <= 0");
  Jet bar_b2 = (mu * mu / kappa) * b2 / delta;
  Jet bar_s = std::abs(mu) * s / sqrt(delta * delta_s);
  Jet scale = std::sqrt(std::abs(mu)) * sqrt(delta_s) / delta;
  return scale * f.inner->eval(bar_b2, bar_s);
}

Jet eval_impl(const Custom& f, const Jet& b2, const Jet& s) { return f.fn(b2, s); }

}  // namespace

PsiJet psi_jet(const PhiJet& pj, double s) {
  PsiJet out;
  out.psi = (pj.phi2 + 2.0 * s * pj.phi1) / (2.0 * pj.phi);
  out.psi1 = (pj.phi12 + 2.0 * s * pj.phi11) / (2.0 * pj.phi) - out.psi * pj.phi1 / pj.phi;
  out.psi2 =
      (pj.phi22 + 2.0 * pj.phi1 + 2.0 * s * pj.phi12) / (2.0 * pj.phi) - out.psi * pj.phi2 / pj.phi;
  return out;
}

// ---------------------------------------------------------------------------
// p/q pairs
// ---------------------------------------------------------------------------

PQPair pq_square_b() {
  PQPair out;
  out.name = "p=0,q=2/u^2";
  out.tau = 0.0;
  out.p = [](const Jet& u) { return Jet::constant_like(0.0, u); };
  out.q = [](const Jet& u) { return 2.0 / (u * u); };
  return out;
}

PQPair pq_semidefinite() {
  PQPair out;
  out.name = "p=sqrt(u)/2,q=1/(2 sqrt u)";
  out.tau = 0.0;
  out.p = [](const Jet& u) { return 0.5 * sqrt(u); };
  out.q = [](const Jet& u) { return 0.5 * reciprocal(sqrt(u)); };
  return out;
}

PQPair pq_k0_two_sign(int c1, int c2) {
  PQPair out;
  out.name = "k0-two-sign";
  out.tau = 0.0;
  out.p = [c1](const Jet& u) { return (0.5 * c1) * sqrt(1.0 + double(c1) * u); };
  out.q = [c1, c2](const Jet& u) {
    Jet w = sqrt(1.0 + double(c1) * u);
    Jet t = 1.0 + double(c2) * w;
    return w * t * t / (2.0 * u * u);
  };
  return out;
}

PQPair pq_km1_const(int c1, int c2) {
  PQPair out;
  out.name = "km1-const";
  out.tau = -1.0;
  out.p = [c1](const Jet& u) { return Jet::constant_like(double(c1), u); };
  out.q = [c1, c2](const Jet& u) {
    Jet t = 1.0 + double(c2) * sqrt(1.0 + double(c1) * u);
    return 2.0 * t * t / (u * u);
  };
  return out;
}

PQPair pq_km1_sqrt(int c1, int c2) {
  PQPair out;
  out.name = "km1-sqrt";
  out.tau = -1.0;
  out.p = [c1](const Jet& u) { return sqrt(1.0 + double(c1) * u); };
  out.q = [c1, c2](const Jet& u) {
    return double(c1) / (sqrt(1.0 + double(c1) * u) + double(c2));
  };
  return out;
}

PQPair pq_km1_nested(int c) {
  PQPair out;
  out.name = "km1-nested";
  out.tau = -1.0;
  const double rt2 = std::sqrt(2.0);
  auto wfn = [c](const Jet& u) {
    return c > 0 ? 1.0 + sqrt(1.0 - u * u) : u * u / (1.0 + sqrt(1.0 - u * u));
  };
  out.p = [wfn, rt2](const Jet& u) { return sqrt(wfn(u)) / rt2; };
  out.q = [wfn, rt2](const Jet& u) {
    Jet w = wfn(u);
    return -(rt2 * sqrt(w) + u) / (rt2 * w * sqrt(w));
  };
  return out;
}

PQPair pq_kp1() {
  PQPair out;
  out.name = "kp1";
  out.tau = 1.0;
  const double rt2 = std::sqrt(2.0);
  out.p = [rt2](const Jet& u) {
    Jet w = u * u / (sqrt(1.0 + u * u) + 1.0);
    return sqrt(w) / rt2;
  };
  out.q = [rt2](const Jet& u) {
    Jet w = u * u / (sqrt(1.0 + u * u) + 1.0);
    return (2.0 * sqrt(w) + rt2 * u) / (2.0 * w * sqrt(w));
  };
  return out;
}

PQPair family3_pq(double tau, PQBranch branch, double C, double D, int sign_p, int sign_inner,
                  int sign_q) {
  PQPair out;
  out.tau = tau;
  if (branch == PQBranch::constant_p) {
    if (tau > 0.0) throw DomainViolation("family3: constant-p branch needs tau <= 0");
    const double pval = sign_p * std::sqrt(-tau);
    out.name = "family3-constp";
    out.p = [pval](const Jet& u) { return Jet::constant_like(pval, u); };
    out.q = [pval, C, sign_inner, sign_q](const Jet& u) {
      if (u.value() == 0.0) throw DomainViolation("family3: u = 0");
      Jet rad = C * C + 8.0 * pval * u;
      if (rad.value() < 0.0) throw BranchUndefined("family3: C^2 + 8 p u < 0");
      Jet t = C + double(sign_inner) * sqrt(rad);
      return double(sign_q) * t * t / (4.0 * u * u);
    };
    return out;
  }
  const double dn = 2.0 * (C * C - D);
  if (dn == 0.0) throw DomainViolation("family3: C^2 = D degenerates the p formula");
  auto pfn = [tau, C, D, dn, sign_p, sign_inner](const Jet& u) {
    Jet lin = C * tau - 2.0 * u;
    Jet rad = D * (lin * lin) - (D * (C * C - D) * tau * tau);
    if (rad.value() < 0.0) throw BranchUndefined("family3: radicand of p negative");
    Jet num = -(C * C - D) * tau - C * lin + double(sign_inner) * sqrt(rad);
    Jet frac = num / dn;
    if (frac.value() <= 0.0) throw BranchUndefined("family3: p^2 formula non-positive");
    return double(sign_p) * sqrt(frac);
  };
  out.name = "family3-general";
  out.p = pfn;
  out.q = [pfn, tau, sign_q](const Jet& u) {
    if (u.value() == 0.0) throw DomainViolation("family3: u = 0");
    Jet p = pfn(u);
    Jet pd = compose_scalar_derivative(pfn, u);
    if (pd.value() == 0.0) throw DomainViolation("family3: p' = 0 on the general branch");
    // Roots of u^2 p' q^2 - 2 (p^2 + tau - u p p') q + (p^2 + tau) p' = 0;
    // the discriminant carries (p')^2.
    Jet a = p * p + tau - u * p * pd;
    Jet rad = a * a - (p * p + tau) * ((u * pd) * (u * pd));
    const double scale = 1.0 + a.value() * a.value();
    if (rad.value() < -1e-13 * scale) throw BranchUndefined("family3: radicand of q negative");
    if (rad.value() <= 1e-13 * scale) return a / ((u * u) * pd);  // double root
    return (a + double(sign_q) * sqrt(rad)) / ((u * u) * pd);
  };
  return out;
}

std::array<double, 3> residual_ode_system(const PQPair& pq, double u) {
  Jet uj = Jet::variable(u, 1, 0, 1);
  Jet p = pq.p(uj);
  Jet q = pq.q(uj);
  const double pv = p.value(), pd = p.grad(0);
  const double qv = q.value(), qd = q.grad(0);
  const double tau = pq.tau;
  const double r1 = u * qv * qv * pd + (pv * pv + tau) * qd;
  const double r2 = qv * pd - 2.0 * pv * qd - u * qv * qd - 2.0 * qv * qv;
  const double r3 =
      u * u * pd * qv * qv - 2.0 * (pv * pv + tau - u * pv * pd) * qv + (pv * pv + tau) * pd;
  return {r1, r2, r3};
}

Jet eval_solution3(const PQPair& pq, const Jet& u, const Jet& v, int sign) {
  Jet rad = u + v * v;
  if (rad.value() <= 0.0) throw DomainViolation("solution3: u + v^2 <= 0");
  Jet w = sqrt(rad) + double(sign) * v;
  w = w * w;
  Jet p = pq.p(u);
  Jet q = pq.q(u);
  Jet t = q * w + p;
  Jet den = t * t + pq.tau;
  if (std::abs(den.value()) < 1e-14) throw DomainViolation("solution3: zero denominator");
  return 2.0 * q * w / den;
}

std::vector<double> solve_q_quartic(double u, double sigma, double C, double D) {
  const double a = D * D;
  const double b = u - C;
  const double c = -sigma;

  std::vector<double> ws;
  if (std::abs(D) < 1e-15) {
    if (std::abs(b) < 1e-15) throw NoRealRoot("quartic degenerates: no q dependence");
    ws.push_back(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw NoRealRoot("quartic has no real q^2");
    const double sd = std::sqrt(disc);
    const double t = -0.5 * (b + (b >= 0.0 ? sd : -sd));
    if (t != 0.0) {
      ws.push_back(t / a);
      ws.push_back(c / t);
    } else {
      ws.push_back(0.0);
    }
  }

  std::vector<double> out;
  for (double w : ws) {
    if (!(w > 1e-14)) continue;
    for (double sign : {-1.0, 1.0}) {
      double q = sign * std::sqrt(w);
      for (int it = 0; it < 3; ++it) {
        const double fq = ((a * q * q + b) * q * q) + c;
        const double dq = (4.0 * a * q * q + 2.0 * b) * q;
        if (dq != 0.0) q -= fq / dq;
      }
      out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-12 * (1.0 + std::abs(x)); }),
            out.end());
  if (out.empty()) throw NoRealRoot("quartic has no nonzero real roots");
  return out;
}

// ---------------------------------------------------------------------------
// PhiFamily
// ---------------------------------------------------------------------------

PhiFamily PhiFamily::constant(double c) { return PhiFamily("constant", Constant{c}); }
PhiFamily PhiFamily::funk(double sigma, double C, int sign) {
  if (sigma >= 0.0) throw DomainViolation("funk family needs sigma < 0");
  return PhiFamily("funk", Funk{sigma, C, sign});
}
PhiFamily PhiFamily::solved_q(double sigma, double C, double D, int w_branch, int q_sign) {
  return PhiFamily("solved-q", SolvedQ{sigma, C, D, w_branch, q_sign});
}
PhiFamily PhiFamily::bryant() { return PhiFamily("bryant", Bryant{}); }
PhiFamily PhiFamily::shen(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainViolation("shen family needs 0 < eps < 1");
  return PhiFamily("shen", Shen{eps});
}
PhiFamily PhiFamily::square_b() { return PhiFamily("square-b", SquareB{}); }
PhiFamily PhiFamily::semidefinite() { return PhiFamily("semidefinite", Semidef{}); }
PhiFamily PhiFamily::k0_two_sign(int c1, int c2) {
  return PhiFamily("k0-two-sign", K0TwoSign{c1, c2});
}
PhiFamily PhiFamily::km1_const(int c1, int c2) { return PhiFamily("km1-const", Km1Const{c1, c2}); }
PhiFamily PhiFamily::km1_sqrt(int c1, int c2) { return PhiFamily("km1-sqrt", Km1Sqrt{c1, c2}); }
PhiFamily PhiFamily::km1_nested(int c) { return PhiFamily("km1-nested", Km1Nested{c}); }
PhiFamily PhiFamily::kp1() { return PhiFamily("kp1", Kp1{}); }
PhiFamily PhiFamily::solution3(PQPair pq, int sign) {
  std::string name = "solution3[" + pq.name + "]";
  return PhiFamily(std::move(name), Solution3{std::move(pq), sign});
}
PhiFamily PhiFamily::general_solution(std::function<Jet(const Jet&)> f,
                                      std::function<Jet(const Jet&)> g, double quad_tol) {
  return PhiFamily("general-solution", GeneralSolution{std::move(f), std::move(g), quad_tol});
}
PhiFamily PhiFamily::transfer(PhiFamily inner, double mu, double kappa) {
  if (mu == 0.0 || kappa == 0.0) throw DomainViolation("transfer needs mu != 0 and kappa != 0");
  std::string name = "transfer[" + inner.name() + "]";
  auto ptr = std::make_shared<PhiFamily>(std::move(inner));
  return PhiFamily(std::move(name), Transfer{std::move(ptr), mu, kappa});
}
PhiFamily PhiFamily::custom(std::string label, std::function<Jet(const Jet&, const Jet&)> fn) {
  return PhiFamily(std::move(label), Custom{std::move(fn)});
}

Jet PhiFamily::eval(const Jet& b2, const Jet& s) const {
  const double b2v = b2.value();
  if (b2v < -1e-15) throw DomainViolation(name_ + ": b^2 < 0");
  const double bv = std::sqrt(std::max(b2v, 0.0));
  if (std::abs(s.value()) > bv * (1.0 + 1e-9) + 1e-12)
    throw DomainViolation(name_ + ": |s| > b");
  Jet phi = std::visit([&](const auto& fam) { return eval_impl(fam, b2, s); }, impl_);
  if (!(phi.value() > 0.0)) throw DomainViolation(name_ + ": phi not positive");
  if (!phi.all_finite()) throw NonFiniteValue(name_ + ": non-finite phi jet");
  return phi;
}

PhiJet PhiFamily::jet(double b2, double s, const DiffConfig& cfg) const {
  PhiJet out;
  if (cfg.mode == DiffMode::forward_jet) {
    Jet jb = Jet::variable(b2, 2, 0, 2);
    Jet js = Jet::variable(s, 2, 1, 2);
    Jet r = eval(jb, js);
    out.phi = r.value();
    out.phi1 = r.grad(0);
    out.phi2 = r.grad(1);
    out.phi11 = r.hess(0, 0);
    out.phi12 = r.hess(0, 1);
    out.phi22 = r.hess(1, 1);
  } else {
    auto fd = [this](std::span<const double> p) { return (*this)(p[0], p[1]); };
    Eigen::VectorXd x(2);
    x << b2, s;
    Jet2 r = jet2(fd, x, cfg);
    out.phi = r.value;
    out.phi1 = r.grad(0);
    out.phi2 = r.grad(1);
    out.phi11 = r.hess(0, 0);
    out.phi12 = r.hess(0, 1);
    out.phi22 = r.hess(1, 1);
  }
  out.psi = (out.phi2 + 2.0 * s * out.phi1) / (2.0 * out.phi);
  return out;
}

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

double residual_pde(const PhiFamily& fam, double b2, double s, const DiffConfig& cfg) {
  PhiJet pj = fam.jet(b2, s, cfg);
  return pj.phi22 - 2.0 * (pj.phi1 - s * pj.phi12);
}

double residual_pde2(const PhiFamily& fam, double b2, double s, double kappa, double mu, double K,
                     const DiffConfig& cfg) {
  PhiJet pj = fam.jet(b2, s, cfg);
  PsiJet ps = psi_jet(pj, s);
  return (kappa - mu * b2) * (ps.psi * ps.psi - (ps.psi2 + 2.0 * s * ps.psi1)) + mu * s * ps.psi +
         mu - K * pj.phi * pj.phi;
}

double residual_pde5(const PhiFamily& fam, double u, double v, double kappa, double mu, double K) {
  if (u + v * v <= 0.0) throw DomainViolation("pde5: u + v^2 <= 0");
  Jet uj = Jet::variable(u, 2, 0, 2);
  Jet vj = Jet::variable(v, 2, 1, 2);
  Jet phi = fam.eval(uj + vj * vj, vj);
  Jet f = pow(phi, -0.5);
  const double f_inv_cubed = std::pow(phi.value(), 1.5);
  return (kappa - mu * (u + v * v)) * f.hess(1, 1) - mu * v * f.grad(1) + mu * f.value() -
         K * f_inv_cubed;
}

double eqn01_residual(const PhiFamily& fam, double u, double v, double sigma) {
  Jet uj = Jet::variable(u, 2, 0, 2);
  Jet vj = Jet::variable(v, 2, 1, 2);
  Jet phi = fam.eval(uj + vj * vj, vj);
  Jet f = pow(phi, -0.5);
  return f.hess(1, 1) - sigma * std::pow(phi.value(), 1.5);
}

RegularityReport regularity_check(const PhiFamily& fam, double b_lo, double b_hi, int grid_b,
                                  int grid_s, double s_frac) {
  RegularityReport out;
  out.min_q1 = std::numeric_limits<double>::infinity();
  out.min_q2 = std::numeric_limits<double>::infinity();
  out.boundary_min_q1 = std::numeric_limits<double>::infinity();
  out.violation_b = std::numeric_limits<double>::quiet_NaN();
  out.violation_s = std::numeric_limits<double>::quiet_NaN();

  double interior_ref = 0.0;
  for (int ib = 0; ib < grid_b; ++ib) {
    const double b = b_lo + (b_hi - b_lo) * (grid_b == 1 ? 0.5 : double(ib) / (grid_b - 1));
    for (int is = 0; is < grid_s; ++is) {
      const double frac = -s_frac + 2.0 * s_frac * (grid_s == 1 ? 0.5 : double(is) / (grid_s - 1));
      const double s = frac * b;
      double q1, q2;
      try {
        PhiJet pj = fam.jet(b * b, s);
        q1 = pj.phi - s * pj.phi2;
        q2 = q1 + (b * b - s * s) * pj.phi22;
      } catch (const Error&) {
        q1 = q2 = -std::numeric_limits<double>::infinity();  // undefined counts as violation
      }
      if ((q1 <= 0.0 || q2 <= 0.0) && out.positive) {
        out.positive = false;
        out.violation_b = b;
        out.violation_s = s;
      }
      out.min_q1 = std::min(out.min_q1, q1);
      out.min_q2 = std::min(out.min_q2, q2);
      if (is == 0 || is == grid_s - 1) out.boundary_min_q1 = std::min(out.boundary_min_q1, q1);
      if (std::abs(frac) < 0.5) interior_ref = std::max(interior_ref, std::abs(q1));
    }
  }
  out.pm_b_singular = out.boundary_min_q1 < 0.05 * std::max(interior_ref, 1e-12);
  return out;
}

}  // namespace finslerlab
