#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "finslerlab/phi.hpp"
#include "finslerlab/quadrature.hpp"
#include "finslerlab/rng.hpp"

using namespace finslerlab;

namespace {

// Uniform (b, s) sample with |s| <= frac * b.
std::pair<double, double> draw_bs(SplitMix64& rng, double b_lo, double b_hi, double frac) {
  const double b = rng.uniform(b_lo, b_hi);
  const double s = rng.uniform(-frac, frac) * b;
  return {b * b, s};
}

}  // namespace

TEST_CASE("eval_phi: closed-form values") {
  PhiFamily funk = PhiFamily::funk(-0.25, 1.0, -1);
  CHECK(funk(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // (sqrt(1 - b^2 + s^2) + s)/(1 - b^2)
  CHECK(funk(0.25, 0.1) ==
        doctest::Approx((std::sqrt(1 - 0.25 + 0.01) + 0.1) / 0.75).epsilon(1e-14));

  CHECK(PhiFamily::square_b()(0.25, 0.1) == doctest::Approx(0.36).epsilon(1e-14));

  // Bryant at (0,0): Re 1/sqrt(1+2i), principal branch computed independently
  const std::complex<double> root = std::sqrt(std::complex<double>(1.0, 2.0));
  CHECK(root.real() == doctest::Approx(1.272019649514069).epsilon(1e-12));
  CHECK(PhiFamily::bryant()(0.0, 0.0) ==
        doctest::Approx((1.0 / root).real()).epsilon(1e-14));
  CHECK(PhiFamily::bryant()(0.0, 0.0) == doctest::Approx(0.5688644810057831).epsilon(1e-12));
}

TEST_CASE("eval_phi: domain violations") {
  PhiFamily funk = PhiFamily::funk(-0.25, 1.0, -1);
  CHECK_THROWS_AS((void)funk(1.2, 0.3), DomainViolation);  // C - b^2 + s^2 < 0 and |s|<b
  PhiFamily sqb = PhiFamily::square_b();
  CHECK_THROWS_AS((void)sqb(0.25, -0.5), DomainViolation);  // phi = 0 at s = -b
  CHECK_THROWS_AS((void)sqb(0.25, 0.51), DomainViolation);  // |s| > b
  PhiFamily semi = PhiFamily::semidefinite();
  CHECK_THROWS_AS((void)semi(0.25, 0.5), DomainViolation);  // u = 0 at s = b
}

TEST_CASE("phi_jet: square-b hand derivatives, confirmed by central fd") {
  PhiFamily sqb = PhiFamily::square_b();
  PhiJet pj = sqb.jet(0.25, 0.1);
  CHECK(pj.phi == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(pj.phi2 == doctest::Approx(1.2).epsilon(1e-14));   // 2(b+s)
  CHECK(pj.phi1 == doctest::Approx(1.2).epsilon(1e-14));   // (b+s)/b
  CHECK(pj.psi == doctest::Approx(2.0).epsilon(1e-13));    // 1/b

  DiffConfig fd;
  fd.mode = DiffMode::central_fd;
  PhiJet pf = sqb.jet(0.25, 0.1, fd);
  CHECK(pf.phi1 == doctest::Approx(pj.phi1).epsilon(1e-9));
  CHECK(pf.phi12 == doctest::Approx(pj.phi12).epsilon(1e-7));
  CHECK(pf.phi22 == doctest::Approx(pj.phi22).epsilon(1e-7));
  CHECK(pf.phi11 == doctest::Approx(pj.phi11).epsilon(1e-7));

  PhiJet pc = PhiFamily::constant(1.0).jet(0.3, 0.1);
  CHECK(pc.psi == doctest::Approx(0.0));
}

TEST_CASE("residual_pde on solutions and the non-solution witness") {
  SplitMix64 rng(101);
  PhiFamily funk = PhiFamily::funk(-0.25, 1.0, -1);
  for (int i = 0; i < 50; ++i) {
    auto [b2, s] = draw_bs(rng, 0.05, 0.9, 0.9);
    CHECK(std::abs(residual_pde(funk, b2, s)) < 1e-9);
  }
  PhiFamily sqb = PhiFamily::square_b();
  for (int i = 0; i < 50; ++i) {
    auto [b2, s] = draw_bs(rng, 0.1, 0.9, 0.9);
    CHECK(std::abs(residual_pde(sqb, b2, s)) < 1e-9);
  }
  PhiFamily witness = PhiFamily::custom(
      "one-plus-s2", [](const Jet& b2, const Jet& s) { return 1.0 + s * s + 0.0 * b2; });
  CHECK(residual_pde(witness, 0.25, 0.1) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("residual_pde2 on the Funk / square-b / constant families") {
  SplitMix64 rng(103);
  PhiFamily funk = PhiFamily::funk(-0.25, 1.0, -1);
  for (int i = 0; i < 30; ++i) {
    auto [b2, s] = draw_bs(rng, 0.05, 0.9, 0.9);
    CHECK(std::abs(residual_pde2(funk, b2, s, 1.0, 0.0, -0.25)) < 1e-8);
  }
  PhiFamily sqb = PhiFamily::square_b();
  for (int i = 0; i < 30; ++i) {
    auto [b2, s] = draw_bs(rng, 0.1, 0.9, 0.9);
    CHECK(std::abs(residual_pde2(sqb, b2, s, 0.0, -1.0, 0.0)) < 1e-8);
  }
  CHECK(residual_pde2(PhiFamily::constant(1.0), 0.3, 0.1, 0.0, 0.0, 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("residual_pde5: change-of-variables consistency and the pde6 reduction") {
  PhiFamily funk = PhiFamily::funk(-0.25, 1.0, -1);
  PhiFamily sqb = PhiFamily::square_b();
  PhiFamily bry = PhiFamily::bryant();
  SplitMix64 rng(107);
  for (int i = 0; i < 25; ++i) {
    const double u = rng.uniform(0.05, 0.6);
    const double v = rng.uniform(-0.4, 0.4);
    CHECK(std::abs(residual_pde5(funk, u, v, 1.0, 0.0, -0.25)) < 1e-8);
    CHECK(std::abs(residual_pde5(sqb, u, v, 0.0, -1.0, 0.0)) < 1e-8);
    CHECK(std::abs(residual_pde5(bry, u, v, 1.0, 0.0, 1.0)) < 1e-8);
  }
  // kappa = 0 reduction: residual_pde5 = -mu [ (u+v^2) f_vv + v f_v - f - tau f^-3 ]
  {
    const double u = 0.21, v = 0.15, mu = -1.0, K = 0.0, tau = -K / mu;
    Jet uj = Jet::variable(u, 2, 0, 2);
    Jet vj = Jet::variable(v, 2, 1, 2);
    Jet phi = sqb.eval(uj + vj * vj, vj);
    Jet f = pow(phi, -0.5);
    const double pde6 = (u + v * v) * f.hess(1, 1) + v * f.grad(1) - f.value() -
                        tau * std::pow(phi.value(), 1.5);
    CHECK(residual_pde5(sqb, u, v, 0.0, mu, K) == doctest::Approx(-mu * pde6).epsilon(1e-12));
  }
  CHECK(residual_pde5(PhiFamily::constant(1.0), 0.3, 0.1, 1.0, 0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("eqn01 residual: both closed solution forms") {
  // first form: phi = 1/(p + 2 sqrt(-sigma) v) with p = 1, sigma = -1
  PhiFamily first = PhiFamily::custom(
      "l61-first", [](const Jet& b2, const Jet& s) { return 1.0 / (1.0 + 2.0 * s) + 0.0 * b2; });
  // second form: phi = q/((p + q v)^2 + sigma) with p = 0, q = 1, sigma = 1
  PhiFamily second = PhiFamily::custom(
      "l61-second", [](const Jet& b2, const Jet& s) { return 1.0 / (s * s + 1.0) + 0.0 * b2; });
  SplitMix64 rng(109);
  for (int i = 0; i < 20; ++i) {
    const double u = rng.uniform(0.1, 0.5);
    const double v = rng.uniform(-0.2, 0.2);
    CHECK(std::abs(eqn01_residual(first, u, v, -1.0)) < 1e-9);
    CHECK(std::abs(eqn01_residual(second, u, v, 1.0)) < 1e-9);
  }
  CHECK(eqn01_residual(PhiFamily::constant(1.0), 0.3, 0.1, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("general_solution: trivial f, polynomial f, and the semidefinite generator") {
  PhiFamily one = PhiFamily::general_solution([](const Jet& u) { return 1.0 + 0.0 * u; });
  CHECK(one(0.3, 0.2) == doctest::Approx(1.0).epsilon(1e-12));

  // f(u) = u gives phi = b^2 + s^2 (hand integration oracle)
  PhiFamily lin = PhiFamily::general_solution([](const Jet& u) { return u; });
  SplitMix64 rng(113);
  for (int i = 0; i < 10; ++i) {
    auto [b2, s] = draw_bs(rng, 0.2, 0.9, 0.9);
    CHECK(lin(b2, s) == doctest::Approx(b2 + s * s).epsilon(1e-10));
    CHECK(std::abs(residual_pde(lin, b2, s)) < 1e-7);
  }

  // f(u) = u^{-1/2} reproduces sqrt(b^2 - s^2)/b^2 exactly (g == 0)
  PhiFamily gen = PhiFamily::general_solution([](const Jet& u) { return pow(u, -0.5); });
  PhiFamily semi = PhiFamily::semidefinite();
  for (int i = 0; i < 10; ++i) {
    auto [b2, s] = draw_bs(rng, 0.3, 0.9, 0.8);
    CHECK(gen(b2, s) == doctest::Approx(semi(b2, s)).epsilon(1e-10));
  }

  // arbitrary smooth (f, g) still solves the pde
  PhiFamily fancy = PhiFamily::general_solution(
      [](const Jet& u) { return sqrt(1.0 + u); },
      [](const Jet& b2) { return 0.3 * b2 * b2 + 0.1; });
  for (int i = 0; i < 10; ++i) {
    auto [b2, s] = draw_bs(rng, 0.2, 0.8, 0.8);
    CHECK(std::abs(residual_pde(fancy, b2, s)) < 1e-7);
  }
}

TEST_CASE("integrate_jet: Gauss-Kronrod baseline") {
  Jet v = integrate_jet([](double t) { return Jet(1.0 / (1.0 + t * t)); }, 0.0, 1.0, 1e-12);
  CHECK(v.value() == doctest::Approx(M_PI / 4).epsilon(1e-13));
  // jet-valued integrand: d/da int_0^1 exp-free rational in (a t) dt
  Jet a = Jet::variable(0.7, 1, 0, 2);
  Jet I = integrate_jet(
      [&](double t) {
        Jet at = a * t;
        return 1.0 / (1.0 + at * at);
      },
      0.0, 1.0, 1e-12);
  // I(a) = atan(a)/a; I'(a) = 1/(a(1+a^2)) - atan(a)/a^2
  const double aa = 0.7;
  CHECK(I.value() == doctest::Approx(std::atan(aa) / aa).epsilon(1e-12));
  CHECK(I.grad(0) ==
        doctest::Approx(1.0 / (aa * (1.0 + aa * aa)) - std::atan(aa) / (aa * aa)).epsilon(1e-11));
}

TEST_CASE("solve_q_quartic: degenerate, factored, and empty cases") {
  // D = 0: q^2 = sigma/(u - C); sigma=1, C=1, u=2 -> q = +-1
  auto roots = solve_q_quartic(2.0, 1.0, 1.0, 0.0);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-13));

  // sigma = 0, D = 1, C = 0, u = -1: q^2(q^2 - 1) = 0 -> q = +-1
  roots = solve_q_quartic(-1.0, 0.0, 0.0, 1.0);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-1.0));
  CHECK(roots[1] == doctest::Approx(1.0));

  // no real roots: D=1, sigma=-1/4, C=1, u=0.5
  CHECK_THROWS_AS((void)solve_q_quartic(0.5, -0.25, 1.0, 1.0), NoRealRoot);

  // random parameters: every returned root satisfies the quartic to 1e-12
  SplitMix64 rng(127);
  int found = 0;
  for (int i = 0; i < 40; ++i) {
    const double u = rng.uniform(-1.0, 1.0), sig = rng.uniform(-1.0, 1.0);
    const double C = rng.uniform(-1.0, 1.0), D = rng.uniform(-1.0, 1.0);
    try {
      for (double q : solve_q_quartic(u, sig, C, D)) {
        const double val = D * D * q * q * q * q + (u - C) * q * q - sig;
        CHECK(std::abs(val) < 1e-12 * (1.0 + std::abs(u - C) + D * D));
        CHECK(q != 0.0);
        ++found;
      }
    } catch (const NoRealRoot&) {
    }
  }
  CHECK(found > 20);
}

TEST_CASE("solved-q family: quartic-branch members solve both PDEs") {
  SplitMix64 rng(131);
  struct Row {
    PhiFamily fam;
    double sigma;
  };
  const double eps = 0.5;
  std::vector<Row> rows;
  rows.push_back({PhiFamily::solved_q(0.0, 1.0, 1.0, +1, +1), 0.0});
  rows.push_back({PhiFamily::solved_q(-1.0, 0.5 * (1 + 1 / (eps * eps)),
                                      0.25 * (1 - 1 / (eps * eps)), +1, +1),
                  -1.0});
  rows.push_back({PhiFamily::solved_q(-1.0, 2.0, 0.5, +1, +1), -1.0});
  for (auto& r : rows) {
    for (int i = 0; i < 20; ++i) {
      auto [b2, s] = draw_bs(rng, 0.1, 0.85, 0.9);
      CHECK(std::abs(residual_pde(r.fam, b2, s)) < 1e-8);
      // kappa = 1, mu = 0, K = sigma * kappa
      CHECK(std::abs(residual_pde2(r.fam, b2, s, 1.0, 0.0, r.sigma)) < 1e-8);
    }
  }
  // berwald member equals 1/(q (q+s)^2) with q = sqrt(1 - u) from the quartic
  for (int i = 0; i < 10; ++i) {
    auto [b2, s] = draw_bs(rng, 0.1, 0.85, 0.9);
    const double u = b2 - s * s;
    auto roots = solve_q_quartic(u, 0.0, 1.0, 1.0);
    const double q = roots.back();  // positive root
    CHECK(rows[0].fam(b2, s) == doctest::Approx(1.0 / (q * (q + s) * (q + s))).epsilon(1e-12));
  }
  // shen closed form matches its solved-q reconstruction
  PhiFamily shen = PhiFamily::shen(eps);
  for (int i = 0; i < 10; ++i) {
    auto [b2, s] = draw_bs(rng, 0.1, 0.85, 0.9);
    CHECK(shen(b2, s) == doctest::Approx(rows[1].fam(b2, s)).epsilon(1e-12));
  }
}

TEST_CASE("residual_ode_system: hand cases and all catalog pq pairs") {
  // p = 0, q = 2/u^2, tau = 0: every residual vanishes (hand algebra)
  auto r = residual_ode_system(pq_square_b(), 0.37);
  CHECK(std::abs(r[0]) < 1e-12);
  CHECK(std::abs(r[1]) < 1e-10);
  CHECK(std::abs(r[2]) < 1e-12);

  // constant q is not a solution: r2 = -2 q^2
  PQPair constq;
  constq.name = "const";
  constq.tau = -1.0;
  constq.p = [](const Jet& u) { return Jet::constant_like(1.0, u); };
  constq.q = [](const Jet& u) { return Jet::constant_like(2.0, u); };
  auto rc = residual_ode_system(constq, 0.4);
  CHECK(rc[0] == doctest::Approx(0.0));
  CHECK(rc[1] == doctest::Approx(-8.0).epsilon(1e-14));

  // all constructed pairs over 50 u-samples
  std::vector<PQPair> pqs = {pq_square_b(),       pq_semidefinite(),   pq_k0_two_sign(1, 1),
                             pq_k0_two_sign(1, -1), pq_km1_const(1, 1), pq_km1_const(-1, 1),
                             pq_km1_sqrt(1, 1),   pq_km1_sqrt(1, -1),  pq_km1_nested(1),
                             pq_kp1()};
  for (const auto& pq : pqs) {
    for (int i = 0; i < 50; ++i) {
      const double u = 0.1 + 0.8 * i / 49.0;
      auto rr = residual_ode_system(pq, u);
      CHECK(std::abs(rr[0]) < 1e-8);
      CHECK(std::abs(rr[1]) < 1e-8);
      CHECK(std::abs(rr[2]) < 1e-8);
    }
  }
}

TEST_CASE("family3_pq branches reconstruct the closed pairs and satisfy the ODEs") {
  // constant-p branch with C = sqrt(2) reproduces p = 0, q = 2/u^2
  PQPair a = family3_pq(0.0, PQBranch::constant_p, std::sqrt(2.0), 0.0, +1, +1, +1);
  Jet u(0.36);
  CHECK(a.q(u).value() == doctest::Approx(2.0 / (0.36 * 0.36)).epsilon(1e-12));

  // constant-p with C = 2 sqrt(2), tau = -1 reproduces pq_km1_const(1,1)
  PQPair b = family3_pq(-1.0, PQBranch::constant_p, 2.0 * std::sqrt(2.0), 0.0, +1, +1, +1);
  PQPair closed = pq_km1_const(1, 1);
  CHECK(b.p(u).value() == doctest::Approx(closed.p(u).value()).epsilon(1e-13));
  CHECK(b.q(u).value() == doctest::Approx(closed.q(u).value()).epsilon(1e-12));

  // general branch with C = 5, D = 1, tau = 0 reproduces the semidefinite pair
  PQPair c = family3_pq(0.0, PQBranch::general, 5.0, 1.0, +1, +1, +1);
  CHECK(c.p(u).value() == doctest::Approx(0.5 * std::sqrt(0.36)).epsilon(1e-12));
  CHECK(c.q(u).value() == doctest::Approx(0.5 / std::sqrt(0.36)).epsilon(1e-12));

  // generic general-branch parameters: valid sign combinations solve the ODEs
  for (int si : {+1, -1})
    for (int sq : {+1, -1}) {
      PQPair g = family3_pq(-1.0, PQBranch::general, 1.0, 0.5, +1, si, sq);
      for (int i = 0; i < 20; ++i) {
        const double uu = 0.1 + 0.6 * i / 19.0;
        auto rr = residual_ode_system(g, uu);
        CHECK(std::abs(rr[0]) < 1e-8);
        CHECK(std::abs(rr[1]) < 1e-8);
        CHECK(std::abs(rr[2]) < 1e-8);
      }
    }

  // undefined branch: constant-p with p = -1 and C^2 + 8 p u < 0
  PQPair bad = family3_pq(-1.0, PQBranch::constant_p, 1.0, 0.0, -1, +1, +1);
  Jet u_big(0.5);
  CHECK_THROWS_AS((void)bad.q(u_big), BranchUndefined);
}

TEST_CASE("eval_solution3 matches the constructed closed forms") {
  SplitMix64 rng(137);
  for (int i = 0; i < 50; ++i) {
    auto [b2, s] = draw_bs(rng, 0.2, 0.9, 0.85);
    Jet u(b2 - s * s), v(s);
    CHECK(eval_solution3(pq_square_b(), u, v, -1).value() ==
          doctest::Approx(PhiFamily::square_b()(b2, s)).epsilon(1e-10));
    CHECK(eval_solution3(pq_semidefinite(), u, v, +1).value() ==
          doctest::Approx(PhiFamily::semidefinite()(b2, s)).epsilon(1e-10));
    CHECK(eval_solution3(pq_km1_sqrt(1, 1), u, v, -1).value() ==
          doctest::Approx(PhiFamily::km1_sqrt(1, 1)(b2, s)).epsilon(1e-10));
    CHECK(eval_solution3(pq_k0_two_sign(1, 1), u, v, -1).value() ==
          doctest::Approx(PhiFamily::k0_two_sign(1, 1)(b2, s)).epsilon(1e-10));
    CHECK(eval_solution3(pq_km1_const(1, 1), u, v, -1).value() ==
          doctest::Approx(PhiFamily::km1_const(1, 1)(b2, s)).epsilon(1e-10));
    CHECK(eval_solution3(pq_km1_nested(1), u, v, +1).value() ==
          doctest::Approx(PhiFamily::km1_nested(1)(b2, s)).epsilon(1e-10));
    CHECK(eval_solution3(pq_kp1(), u, v, +1).value() ==
          doctest::Approx(PhiFamily::kp1()(b2, s)).epsilon(1e-10));
  }
}

TEST_CASE("kappa = 0 closure: constructed families solve both PDEs") {
  SplitMix64 rng(139);
  struct Row {
    PhiFamily fam;
    double K;
  };
  std::vector<Row> rows;
  rows.push_back({PhiFamily::square_b(), 0.0});
  rows.push_back({PhiFamily::semidefinite(), 0.0});
  rows.push_back({PhiFamily::k0_two_sign(1, 1), 0.0});
  rows.push_back({PhiFamily::km1_const(1, 1), -1.0});
  rows.push_back({PhiFamily::km1_sqrt(1, 1), -1.0});
  rows.push_back({PhiFamily::km1_nested(1), -1.0});
  rows.push_back({PhiFamily::kp1(), 1.0});
  for (auto& r : rows) {
    for (int i = 0; i < 20; ++i) {
      auto [b2, s] = draw_bs(rng, 0.2, 0.85, 0.85);
      CHECK(std::abs(residual_pde(r.fam, b2, s)) < 1e-8);
      CHECK(std::abs(residual_pde2(r.fam, b2, s, 0.0, -1.0, r.K)) < 1e-8);
    }
  }
}

TEST_CASE("transfer family: Example 8.5 residual certification") {
  PhiFamily tf = PhiFamily::transfer(PhiFamily::funk(-0.25, 1.0, -1), -1.0, 1.0);
  SplitMix64 rng(149);
  for (int i = 0; i < 25; ++i) {
    auto [b2, s] = draw_bs(rng, 0.1, 0.9, 0.9);
    CHECK(tf(b2, s) > 0.0);
    CHECK(std::abs(residual_pde(tf, b2, s)) < 1e-7);
    // kbar = |mu| = 1, sigma_bar = -1/4 -> K = sigma_bar * kbar = -1/4
    CHECK(std::abs(residual_pde2(tf, b2, s, 1.0, -1.0, -0.25)) < 1e-7);
  }
  // transferred berwald: K = 0
  PhiFamily tb = PhiFamily::transfer(PhiFamily::solved_q(0.0, 1.0, 1.0, +1, +1), -1.0, 1.0);
  for (int i = 0; i < 15; ++i) {
    auto [b2, s] = draw_bs(rng, 0.1, 0.9, 0.9);
    CHECK(std::abs(residual_pde2(tb, b2, s, 1.0, -1.0, 0.0)) < 1e-7);
  }
}

TEST_CASE("regularity_check: Funk regular, square-b singular at s = +-b, constant trivial") {
  RegularityReport funk = regularity_check(PhiFamily::funk(-0.25, 1.0, -1), 0.05, 0.9);
  CHECK(funk.positive);
  CHECK(funk.min_q1 > 0.0);
  CHECK(funk.min_q2 > 0.0);
  CHECK_FALSE(funk.pm_b_singular);

  RegularityReport sqb = regularity_check(PhiFamily::square_b(), 0.1, 0.9);
  CHECK(sqb.pm_b_singular);
  // the identity phi - s phi_2 = b^2 - s^2 for (b+s)^2
  PhiJet pj = PhiFamily::square_b().jet(0.49, 0.3);
  CHECK(pj.phi - 0.3 * pj.phi2 == doctest::Approx(0.49 - 0.09).epsilon(1e-13));
  // second regularity quantity: 3 (b^2 - s^2)
  CHECK(pj.phi - 0.3 * pj.phi2 + (0.49 - 0.09) * pj.phi22 ==
        doctest::Approx(3 * 0.4).epsilon(1e-13));

  RegularityReport one = regularity_check(PhiFamily::constant(1.0), 0.1, 0.9);
  CHECK(one.min_q1 == doctest::Approx(1.0));
  CHECK(one.min_q2 == doctest::Approx(1.0));
  CHECK_FALSE(one.pm_b_singular);
}

TEST_CASE("psi invariant: psi = (phi2 + 2 s phi1) / (2 phi) exactly as computed") {
  SplitMix64 rng(151);
  PhiFamily fam = PhiFamily::shen(0.5);
  for (int i = 0; i < 20; ++i) {
    auto [b2, s] = draw_bs(rng, 0.1, 0.85, 0.9);
    PhiJet pj = fam.jet(b2, s);
    CHECK(pj.psi == doctest::Approx((pj.phi2 + 2 * s * pj.phi1) / (2 * pj.phi)).epsilon(1e-15));
  }
}
