#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finslerlab/catalog.hpp"
#include "finslerlab/diff.hpp"

namespace finslerlab {

// Tolerance tiers. "jet" is the default; "fd" re-runs the phi-level residuals
// through central differences (the independent differentiation oracle) with
// correspondingly relaxed bounds.
struct TolProfile {
  std::string name = "jet";
  DiffConfig phi_diff{};  // mode used for PhiJet-based residuals
  double pde = 1e-8;
  double pde2 = 1e-8;
  double spray = 1e-8;
  double k_fit_vs_proj = 1e-6;
  double k_proj_vs_psi = 1e-7;
  double k_tol_factor = 1.0;  // multiplies the entry's K tolerance
  double ode = 1e-8;
};

TolProfile tol_profile(const std::string& name);

struct CheckRow {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string schema = "finsler-lab/1";
  std::string kind = "verify";  // verify | pde-scan | deform-check
  std::string metric;
  int n = 3;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string rng = "splitmix64";
  std::vector<CheckRow> checks;
  std::optional<double> K_expected;
  double K_fit_mean = 0.0;
  double K_fit_max_dev = 0.0;
  double wall_time_ms = 0.0;
  bool pass = false;

  std::string to_json(int indent = 2) const;
};

// Randomized per-sample verification: PDE residuals, the spray dual-route
// check, the three curvature routes and the K-vs-expected comparison.
VerificationReport run_verify(const CatalogEntry& entry, int n, int samples, std::uint64_t seed,
                              const TolProfile& tol);

// Grid scan of every residual the entry's family supports.
VerificationReport run_pde_scan(const CatalogEntry& entry, int grid_b, int grid_s,
                                const TolProfile& tol);

// Deformation certificates; the 33/34 route may be forced to exercise the
// routing guard, which throws DomainViolation on a mismatch.
VerificationReport run_deform_check(const CatalogEntry& entry, int n, int samples,
                                    std::uint64_t seed, std::optional<int> lemma);

// Deterministic admissible sample for entry (used by the runner and tests).
struct SamplePoint {
  Eigen::VectorXd x, y;
  double b2 = 0.0, s = 0.0;
};
SamplePoint draw_sample(const CatalogEntry& entry, int n, std::uint64_t seed, std::uint64_t index);

}  // namespace finslerlab
