#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finslerlab/metric.hpp"
#include "finslerlab/phi.hpp"

namespace finslerlab {

// Sampling domain of a catalog entry. Chart vectors are along e1, so entries
// stay dimension-agnostic: a = a1 e1, x-ball center = x_center1 e1.
struct DomainSpec {
  double x_center1 = 0.0;
  double x_radius = 0.5;
  double b_min = 0.02;
  double b_max = 10.0;
  double s_frac = 1.0;  // |s| <= s_frac * b
};

enum class Regularity { regular, singular_pm_b, degenerate_g, witness };

std::string to_string(Regularity r);

struct CatalogEntry {
  std::string name;
  std::string description;
  double mu = 0.0;
  double lambda = 1.0;
  double a1 = 0.0;
  PhiFamily phi = PhiFamily::constant(1.0);
  std::optional<double> expected_K;
  double k_tol = 1e-6;
  DomainSpec domain;
  Regularity regularity = Regularity::regular;
  std::optional<PQPair> pq;  // the (p, q) pair behind kappa = 0 entries

  double kappa() const { return lambda * lambda + mu * a1 * a1; }
  ProjectiveChart chart(int n) const;
  GeneralABMetric metric(int n) const;

  // Structural consistency: the kappa = 0 condition where claimed, and the
  // K relation implied by the family parameters.
  void validate() const;  // throws DomainViolation with the reason
};

const std::vector<CatalogEntry>& builtin_catalog();

// Parse a declarative catalog file (one [name] table per metric, key = value
// lines). Unknown keys are an error.
std::vector<CatalogEntry> load_catalog_file(const std::string& path);

// Builtin entries plus any files named by FINSLER_LAB_CATALOG
// (colon-separated paths).
std::vector<CatalogEntry> full_catalog();

std::optional<CatalogEntry> find_entry(const std::string& name);

}  // namespace finslerlab
