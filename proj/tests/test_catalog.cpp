#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <regex>

#include "finslerlab/verify.hpp"

using namespace finslerlab;

TEST_CASE("catalog: deterministic order and the named anchor entries") {
  const auto& cat = builtin_catalog();
  REQUIRE(cat.size() >= 13);
  auto find = [&](const std::string& n) -> const CatalogEntry* {
    for (const auto& e : cat)
      if (e.name == n) return &e;
    return nullptr;
  };
  const CatalogEntry* funk = find("funk");
  REQUIRE(funk != nullptr);
  CHECK(*funk->expected_K == doctest::Approx(-0.25));

  const CatalogEntry* sqb = find("square-b");
  REQUIRE(sqb != nullptr);
  CHECK(*sqb->expected_K == doctest::Approx(0.0));
  CHECK(sqb->regularity == Regularity::singular_pm_b);
  CHECK(sqb->kappa() == doctest::Approx(0.0));  // length condition holds at load time

  const CatalogEntry* bry = find("bryant");
  REQUIRE(bry != nullptr);
  CHECK(*bry->expected_K == doctest::Approx(1.0));

  // order is stable across calls
  const auto& again = builtin_catalog();
  for (size_t i = 0; i < cat.size(); ++i) CHECK(cat[i].name == again[i].name);

  // every kappa = 0 family entry satisfies the length condition
  for (const auto& e : cat)
    if (e.pq) CHECK(std::abs(e.kappa()) < 1e-12);
}

TEST_CASE("draw_sample: deterministic given (seed, index) and respects the domain") {
  auto entry = *find_entry("square-b");
  for (int i = 0; i < 20; ++i) {
    SamplePoint a = draw_sample(entry, 3, 42, i);
    SamplePoint b = draw_sample(entry, 3, 42, i);
    CHECK((a.x - b.x).norm() == 0.0);
    CHECK((a.y - b.y).norm() == 0.0);
    const double bnorm = std::sqrt(a.b2);
    CHECK(bnorm >= entry.domain.b_min);
    CHECK(bnorm <= entry.domain.b_max);
    CHECK(std::abs(a.s) <= entry.domain.s_frac * bnorm + 1e-12);
  }
  // different seed, different stream
  SamplePoint a = draw_sample(entry, 3, 42, 0);
  SamplePoint c = draw_sample(entry, 3, 43, 0);
  CHECK((a.x - c.x).norm() > 0.0);
}

TEST_CASE("run_verify: funk passes and reports K statistics") {
  auto entry = *find_entry("funk");
  VerificationReport rep = run_verify(entry, 3, 20, 7, tol_profile("jet"));
  CHECK(rep.pass);
  CHECK(rep.K_fit_mean == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK(rep.K_fit_max_dev < 1e-6);
  bool has_spray = false;
  for (const auto& c : rep.checks) has_spray = has_spray || c.name == "spray_agreement";
  CHECK(has_spray);
}

TEST_CASE("run_verify: fd tolerance profile also passes on funk") {
  auto entry = *find_entry("funk");
  VerificationReport rep = run_verify(entry, 3, 10, 7, tol_profile("fd"));
  CHECK(rep.pass);
}

TEST_CASE("reports are byte-identical for identical (name, samples, seed, tol)") {
  auto entry = *find_entry("berwald");
  VerificationReport a = run_verify(entry, 3, 10, 11, tol_profile("jet"));
  VerificationReport b = run_verify(entry, 3, 10, 11, tol_profile("jet"));
  a.wall_time_ms = 0.0;
  b.wall_time_ms = 0.0;
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("run_verify: witness entry fails with the PDE residual at 2") {
  auto entry = *find_entry("witness-nonsolution");
  VerificationReport rep = run_verify(entry, 3, 5, 7, tol_profile("jet"));
  CHECK_FALSE(rep.pass);
  for (const auto& c : rep.checks)
    if (c.name == "pde_residual") CHECK(c.max_residual == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("run_pde_scan: catalog families pass at 1e-8; degenerate entry skips sprays") {
  for (const char* name : {"funk", "bryant", "k0-example-2", "km1-example-3"}) {
    auto entry = *find_entry(name);
    VerificationReport rep = run_pde_scan(entry, 10, 10, tol_profile("jet"));
    CHECK(rep.pass);
  }
  auto deg = run_verify(*find_entry("k0-example-2"), 3, 10, 7, tol_profile("jet"));
  CHECK(deg.pass);
  for (const auto& c : deg.checks) CHECK(c.name != "spray_agreement");
}

TEST_CASE("run_deform_check: routing and certificates") {
  VerificationReport d33 = run_deform_check(*find_entry("lemma33-hyperbolic"), 3, 10, 7, {});
  CHECK(d33.pass);
  VerificationReport d34 = run_deform_check(*find_entry("lemma34-k0"), 3, 10, 7, {});
  CHECK(d34.pass);
  CHECK_THROWS_AS((void)run_deform_check(*find_entry("lemma34-k0"), 3, 5, 7, 33),
                  DomainViolation);
  CHECK_THROWS_AS((void)run_deform_check(*find_entry("funk"), 3, 5, 7, {}), DomainViolation);
}

TEST_CASE("catalog files: parse, validate, reject unknown keys") {
  const std::string path = "/tmp/finslerlab_test_catalog.ini";
  {
    std::ofstream f(path);
    f << "# extra catalog\n"
      << "[my-funk]\n"
      << "family = funk\n"
      << "sigma = -0.25\n"
      << "C = 1\n"
      << "sign = -1\n"
      << "mu = 0\n"
      << "lambda = 1\n"
      << "a1 = 0.1\n"
      << "expected_K = -0.25\n"
      << "x_radius = 0.5\n"
      << "b_max = 0.8\n"
      << "regularity = regular\n";
  }
  auto entries = load_catalog_file(path);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].name == "my-funk");
  VerificationReport rep = run_verify(entries[0], 3, 10, 3, tol_profile("jet"));
  CHECK(rep.pass);

  {
    std::ofstream f(path);
    f << "[bad]\nfamily = funk\nnot_a_key = 1\n";
  }
  CHECK_THROWS_AS((void)load_catalog_file(path), DomainViolation);

  // kappa = 0 family on a chart with kappa != 0 is rejected at load time
  {
    std::ofstream f(path);
    f << "[bad-chart]\nfamily = square-b\nmu = -1\nlambda = 1\na1 = 0.5\nexpected_K = 0\n";
  }
  CHECK_THROWS_AS((void)load_catalog_file(path), DomainViolation);
  std::remove(path.c_str());
}

TEST_CASE("report JSON carries the schema and the documented fields") {
  auto rep = run_verify(*find_entry("funk"), 3, 5, 9, tol_profile("jet"));
  const std::string j = rep.to_json();
  for (const char* key : {"\"schema\"", "\"finsler-lab/1\"", "\"metric\"", "\"samples\"",
                          "\"seed\"", "\"rng\"", "\"splitmix64\"", "\"checks\"", "\"K_expected\"",
                          "\"K_fit_mean\"", "\"K_fit_max_dev\"", "\"wall_time_ms\"", "\"pass\""})
    CHECK(j.find(key) != std::string::npos);
}
