#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "finslerlab/diff.hpp"
#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"

namespace finslerlab {

// Value and partial derivatives of phi(b^2, s); subscript 1 is d/d(b^2),
// subscript 2 is d/ds. psi = (phi2 + 2 s phi1) / (2 phi).
struct PhiJet {
  double phi = 0, phi1 = 0, phi2 = 0, phi11 = 0, phi12 = 0, phi22 = 0;
  double psi = 0;
};

struct PsiJet {
  double psi = 0, psi1 = 0, psi2 = 0;
};

PsiJet psi_jet(const PhiJet& pj, double s);

// ---------------------------------------------------------------------------
// p/q pairs for the kappa = 0 solution family
// ---------------------------------------------------------------------------

struct PQPair {
  std::string name;
  double tau = 0.0;
  std::function<Jet(const Jet&)> p, q;
};

// Closed-form pairs behind the constructed examples.
PQPair pq_square_b();                       // tau 0:  p = 0,          q = 2/u^2
PQPair pq_semidefinite();                   // tau 0:  p = sqrt(u)/2,  q = 1/(2 sqrt u)
PQPair pq_k0_two_sign(int c1, int c2);      // tau 0
PQPair pq_km1_const(int c1, int c2);        // tau -1: p constant
PQPair pq_km1_sqrt(int c1, int c2);         // tau -1: p = sqrt(1 + c1 u)
PQPair pq_km1_nested(int c);                // tau -1: nested sqrt(1 - u^2)
PQPair pq_kp1();                            // tau +1

// Constructive branches: either p' = 0 (p = sign_p sqrt(-tau)) with
// q = sign_q (C + sign_inner sqrt(C^2 + 8 p u))^2 / (4 u^2), or the general
// branch where p(u) comes from u = C (p^2+tau) +- sqrt(D) p sqrt(p^2+tau)
// solved for p, and q from the quadratic q-equation using p'.
enum class PQBranch { constant_p, general };
PQPair family3_pq(double tau, PQBranch branch, double C, double D, int sign_p, int sign_inner,
                  int sign_q);

// Residuals (r1, r2, r3) of the ODE system
//   r1 = u q^2 p' + (p^2 + tau) q'
//   r2 = q p' - 2 p q' - u q q' - 2 q^2
//   r3 = u^2 p' q^2 - 2 (p^2 + tau - u p p') q + (p^2 + tau) p'
std::array<double, 3> residual_ode_system(const PQPair& pq, double u);

// phi(u, v) = 2 q (sqrt(u+v^2) + sign v)^2 / ([q (sqrt(u+v^2) + sign v)^2 + p]^2 + tau)
Jet eval_solution3(const PQPair& pq, const Jet& u, const Jet& v, int sign);

// All nonzero real roots q of D^2 q^4 + (u - C) q^2 - sigma = 0, ascending.
std::vector<double> solve_q_quartic(double u, double sigma, double C, double D);

// ---------------------------------------------------------------------------
// PhiFamily
// ---------------------------------------------------------------------------

class PhiFamily;

namespace phiimpl {

struct Constant {
  double c = 1.0;
};
struct Funk {  // 1 / (2 sqrt(-sigma) (sqrt(C - b2 + s^2) + sign s))
  double sigma = -0.25, C = 1.0;
  int sign = -1;
};
struct SolvedQ {  // q / (q^2 (D q + s)^2 + sigma), q from the quartic
  double sigma = 0.0, C = 1.0, D = 1.0;
  int w_branch = +1;  // +- in the quadratic for q^2
  int q_sign = +1;
};
struct Bryant {};  // Re 1 / (sqrt(1 + 2i + b2 - s^2) + i s)
struct Shen {      // two-term sigma = -1 member; epsilon in (0,1)
  double eps = 0.5;
};
struct SquareB {};  // (b + s)^2
struct Semidef {};  // sqrt(b2 - s^2) / b2
struct K0TwoSign {
  int c1 = 1, c2 = 1;
};
struct Km1Const {
  int c1 = 1, c2 = 1;
};
struct Km1Sqrt {
  int c1 = 1, c2 = 1;
};
struct Km1Nested {
  int c = 1;
};
struct Kp1 {};
struct Solution3 {
  PQPair pq;
  int sign = +1;
};
struct GeneralSolution {
  std::function<Jet(const Jet&)> f;
  std::function<Jet(const Jet&)> g;  // may be empty
  double quad_tol = 1e-10;
};
struct Transfer {
  std::shared_ptr<const PhiFamily> inner;
  double mu = -1.0, kappa = 1.0;
};
struct Custom {
  std::function<Jet(const Jet&, const Jet&)> fn;
};

using Variant = std::variant<Constant, Funk, SolvedQ, Bryant, Shen, SquareB, Semidef, K0TwoSign,
                             Km1Const, Km1Sqrt, Km1Nested, Kp1, Solution3, GeneralSolution,
                             Transfer, Custom>;

}  // namespace phiimpl

class PhiFamily {
 public:
  static PhiFamily constant(double c = 1.0);
  static PhiFamily funk(double sigma = -0.25, double C = 1.0, int sign = -1);
  static PhiFamily solved_q(double sigma, double C, double D, int w_branch = +1, int q_sign = +1);
  static PhiFamily bryant();
  static PhiFamily shen(double eps = 0.5);
  static PhiFamily square_b();
  static PhiFamily semidefinite();
  static PhiFamily k0_two_sign(int c1 = 1, int c2 = 1);
  static PhiFamily km1_const(int c1 = 1, int c2 = 1);
  static PhiFamily km1_sqrt(int c1 = 1, int c2 = 1);
  static PhiFamily km1_nested(int c = 1);
  static PhiFamily kp1();
  static PhiFamily solution3(PQPair pq, int sign);
  static PhiFamily general_solution(std::function<Jet(const Jet&)> f,
                                    std::function<Jet(const Jet&)> g = {},
                                    double quad_tol = 1e-10);
  static PhiFamily transfer(PhiFamily inner, double mu, double kappa);
  static PhiFamily custom(std::string label, std::function<Jet(const Jet&, const Jet&)> fn);

  // Evaluate phi at jets of (b^2, s). Throws DomainViolation when (b2, s)
  // leaves the family domain or phi fails to be positive.
  Jet eval(const Jet& b2, const Jet& s) const;

  double operator()(double b2, double s) const { return eval(Jet(b2), Jet(s)).value(); }

  // Value and first/second partials; forward jets by default, central fd as
  // the independent oracle mode.
  PhiJet jet(double b2, double s, const DiffConfig& cfg = {}) const;

  const std::string& name() const { return name_; }

 private:
  PhiFamily(std::string name, phiimpl::Variant v) : name_(std::move(name)), impl_(std::move(v)) {}

  std::string name_;
  phiimpl::Variant impl_;
};

// ---------------------------------------------------------------------------
// Residual checkers
// ---------------------------------------------------------------------------

// phi_22 - 2 (phi_1 - s phi_12)
double residual_pde(const PhiFamily& fam, double b2, double s, const DiffConfig& cfg = {});

// (kappa - mu b^2) [psi^2 - (psi_2 + 2 s psi_1)] + mu s psi + mu - K phi^2
double residual_pde2(const PhiFamily& fam, double b2, double s, double kappa, double mu, double K,
                     const DiffConfig& cfg = {});

// [kappa - mu (u+v^2)] f_vv - mu v f_v + mu f - K f^-3 with f = 1/sqrt(phi)
// differentiated in the (u, v) = (b^2 - s^2, s) coordinates.
double residual_pde5(const PhiFamily& fam, double u, double v, double kappa, double mu, double K);

// f_vv - sigma f^-3 at fixed u (the kappa != 0, mu = 0 reduction).
double eqn01_residual(const PhiFamily& fam, double u, double v, double sigma);

// ---------------------------------------------------------------------------
// Regularity scan
// ---------------------------------------------------------------------------

struct RegularityReport {
  double min_q1 = 0.0;        // min of phi - s phi_2 over the grid
  double min_q2 = 0.0;        // min of phi - s phi_2 + (b^2 - s^2) phi_22
  bool positive = true;       // both quantities > 0 everywhere sampled
  double violation_b = 0.0;   // first grid point violating positivity
  double violation_s = 0.0;
  double boundary_min_q1 = 0.0;  // min of q1 on the |s| = s_frac * b ring
  bool pm_b_singular = false;    // q1 collapses toward zero at |s| -> b
};

RegularityReport regularity_check(const PhiFamily& fam, double b_lo, double b_hi,
                                  int grid_b = 24, int grid_s = 33, double s_frac = 0.999);

}  // namespace finslerlab
