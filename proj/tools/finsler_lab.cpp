#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "finslerlab/verify.hpp"

using namespace finslerlab;

namespace {

int emit(const VerificationReport& rep, const std::string& out_path) {
  const std::string text = rep.to_json();
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    f << text << "\n";
  }
  return rep.pass ? 0 : 1;
}

CatalogEntry need_entry(const std::string& name) {
  auto e = find_entry(name);
  if (!e) throw CLI::ValidationError("name", "unknown catalog metric '" + name + "'");
  return *e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finsler-lab: numerical certification of projectively flat general "
               "(alpha,beta)-metrics with constant flag curvature"};
  app.require_subcommand(1);

  auto* cmd_list = app.add_subcommand("list", "list the metric catalog");

  std::string name;
  auto* cmd_info = app.add_subcommand("info", "describe one catalog entry");
  cmd_info->add_option("name", name, "catalog metric name")->required();

  int samples = 100;
  std::uint64_t seed = 1;
  int dim = 3;
  std::string profile = "jet";
  std::string out_path;
  auto* cmd_verify = app.add_subcommand("verify", "randomized verification of one metric");
  cmd_verify->add_option("name", name, "catalog metric name")->required();
  cmd_verify->add_option("--samples", samples, "number of random samples")->check(CLI::PositiveNumber);
  cmd_verify->add_option("--seed", seed, "RNG seed");
  cmd_verify->add_option("--dim", dim, "dimension n (default 3)")->check(CLI::Range(2, 8));
  cmd_verify->add_option("--tol-profile", profile, "tolerance tier")
      ->check(CLI::IsMember({"jet", "fd"}));
  cmd_verify->add_option("--out", out_path, "write the JSON report to a file");

  std::string grid = "20x20";
  auto* cmd_scan = app.add_subcommand("pde-scan", "grid scan of PDE/ODE residuals");
  cmd_scan->add_option("name", name, "catalog metric name")->required();
  cmd_scan->add_option("--grid", grid, "grid AxB over (b, s)");
  cmd_scan->add_option("--tol-profile", profile, "tolerance tier")
      ->check(CLI::IsMember({"jet", "fd"}));
  cmd_scan->add_option("--out", out_path, "write the JSON report to a file");

  int lemma = 0;
  auto* cmd_deform = app.add_subcommand("deform-check", "certify the metric deformations");
  cmd_deform->add_option("name", name, "catalog metric name")->required();
  cmd_deform->add_option("--lemma", lemma, "force 33 or 34 (guards the routing)")
      ->check(CLI::IsMember({33, 34}));
  cmd_deform->add_option("--samples", samples, "number of random samples")
      ->check(CLI::PositiveNumber);
  cmd_deform->add_option("--seed", seed, "RNG seed");
  cmd_deform->add_option("--dim", dim, "dimension n (default 3)")->check(CLI::Range(2, 8));
  cmd_deform->add_option("--out", out_path, "write the JSON report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_list->parsed()) {
      for (const auto& e : full_catalog()) {
        std::string k = e.expected_K ? std::to_string(*e.expected_K) : "-";
        std::printf("%-20s K=%-10s %-14s %s\n", e.name.c_str(), k.c_str(),
                    to_string(e.regularity).c_str(), e.description.c_str());
      }
      return 0;
    }
    if (cmd_info->parsed()) {
      const CatalogEntry e = need_entry(name);
      std::printf("name:        %s\n", e.name.c_str());
      std::printf("description: %s\n", e.description.c_str());
      std::printf("family:      %s\n", e.phi.name().c_str());
      std::printf("chart:       mu=%g lambda=%g a=%g e1 (kappa=%g)\n", e.mu, e.lambda, e.a1,
                  e.kappa());
      if (e.expected_K)
        std::printf("expected_K:  %g (tolerance %g)\n", *e.expected_K, e.k_tol);
      else
        std::printf("expected_K:  none\n");
      std::printf("domain:      x in B(%g e1, %g), b in [%g, %g], |s| <= %g b\n",
                  e.domain.x_center1, e.domain.x_radius, e.domain.b_min, e.domain.b_max,
                  e.domain.s_frac);
      std::printf("regularity:  %s\n", to_string(e.regularity).c_str());
      if (e.pq) std::printf("pq pair:     %s (tau=%g)\n", e.pq->name.c_str(), e.pq->tau);
      return 0;
    }
    if (dim == 2)
      std::cerr << "warning: n = 2 is outside the n >= 3 regime the identities are stated for\n";

    if (cmd_verify->parsed()) {
      const CatalogEntry e = need_entry(name);
      return emit(run_verify(e, dim, samples, seed, tol_profile(profile)), out_path);
    }
    if (cmd_scan->parsed()) {
      const CatalogEntry e = need_entry(name);
      int gb = 20, gs = 20;
      if (std::sscanf(grid.c_str(), "%dx%d", &gb, &gs) != 2 || gb < 1 || gs < 1) {
        std::cerr << "bad --grid, expected AxB\n";
        return 2;
      }
      return emit(run_pde_scan(e, gb, gs, tol_profile(profile)), out_path);
    }
    if (cmd_deform->parsed()) {
      const CatalogEntry e = need_entry(name);
      std::optional<int> forced;
      if (lemma != 0) forced = lemma;
      return emit(run_deform_check(e, dim, samples, seed, forced), out_path);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
