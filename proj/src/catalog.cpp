#include "finslerlab/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace finslerlab {

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::regular: return "regular";
    case Regularity::singular_pm_b: return "singular-pm-b";
    case Regularity::degenerate_g: return "degenerate";
    case Regularity::witness: return "witness";
  }
  return "?";
}

ProjectiveChart CatalogEntry::chart(int n) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  a(0) = a1;
  return ProjectiveChart(n, mu, lambda, a);
}

GeneralABMetric CatalogEntry::metric(int n) const {
  const SingularDirections sd = (regularity == Regularity::singular_pm_b ||
                                 regularity == Regularity::degenerate_g)
                                    ? SingularDirections::pm_b
                                    : SingularDirections::none;
  return GeneralABMetric(chart(n), phi, expected_K, sd);
}

void CatalogEntry::validate() const {
  if (domain.b_min < 0.0 || domain.b_max <= domain.b_min)
    throw DomainViolation(name + ": bad b range");
  if (domain.s_frac <= 0.0 || domain.s_frac > 1.0)
    throw DomainViolation(name + ": s_frac must be in (0, 1]");
  if (mu != 0.0 && domain.x_radius + std::abs(domain.x_center1) >= 1.0 / std::sqrt(std::abs(mu)) &&
      mu < 0.0)
    throw DomainViolation(name + ": x ball leaves the chart domain");
  // kappa = 0 families require the length condition lambda^2 + mu a1^2 = 0.
  const bool k0_family = pq.has_value();
  if (k0_family && std::abs(kappa()) > 1e-12)
    throw DomainViolation(name + ": kappa = 0 family on a chart with kappa != 0");
  if (k0_family && expected_K.has_value() && pq) {
    const double want = -pq->tau * mu;  // tau = -K/mu
    if (std::abs(want - *expected_K) > 1e-12)
      throw DomainViolation(name + ": expected_K inconsistent with tau and mu");
  }
}

namespace {

CatalogEntry make_entry(std::string name, std::string descr, double mu, double lambda, double a1,
                        PhiFamily phi, std::optional<double> K, double k_tol, DomainSpec dom,
                        Regularity reg, std::optional<PQPair> pq = std::nullopt) {
  CatalogEntry e;
  e.name = std::move(name);
  e.description = std::move(descr);
  e.mu = mu;
  e.lambda = lambda;
  e.a1 = a1;
  e.phi = std::move(phi);
  e.expected_K = K;
  e.k_tol = k_tol;
  e.domain = dom;
  e.regularity = reg;
  e.pq = std::move(pq);
  return e;
}

std::vector<CatalogEntry> build_builtin() {
  std::vector<CatalogEntry> v;

  const DomainSpec flatdom{0.0, 0.55, 0.02, 0.85, 1.0};
  v.push_back(make_entry("funk", "generalized Funk metric (Randers type), K = -1/4", 0.0, 1.0,
                         0.2, PhiFamily::funk(-0.25, 1.0, -1), -0.25, 1e-6, flatdom,
                         Regularity::regular));
  v.push_back(make_entry("berwald", "generalized Berwald square metric, K = 0", 0.0, 1.0, 0.2,
                         PhiFamily::solved_q(0.0, 1.0, 1.0, +1, +1), 0.0, 1e-6, flatdom,
                         Regularity::regular));
  v.push_back(make_entry("bryant", "Bryant-type metric (complex branch), K = 1", 0.0, 1.0, 0.2,
                         PhiFamily::bryant(), 1.0, 1e-5, flatdom, Regularity::regular));
  v.push_back(make_entry("shen-eps", "two-term family including Shen's metrics, K = -1 (eps=0.5)",
                         0.0, 1.0, 0.2, PhiFamily::shen(0.5), -1.0, 1e-5, flatdom,
                         Regularity::regular));

  const DomainSpec sqbdom{0.0, 0.5, 0.1, 5.0, 0.95};
  v.push_back(make_entry("square-b", "F = (b alpha + beta)^2 / alpha, K = 0", -1.0, 1.0, 1.0,
                         PhiFamily::square_b(), 0.0, 1e-6, sqbdom, Regularity::singular_pm_b,
                         pq_square_b()));

  const DomainSpec semidom{0.0, 0.5, 0.2, 5.0, 0.9};
  v.push_back(make_entry("k0-example-2", "degenerate Riemannian sqrt(b^2 a^2 - beta^2)/b^2, K = 0",
                         -1.0, 1.0, 1.0, PhiFamily::semidefinite(), 0.0, 1e-5, semidom,
                         Regularity::degenerate_g, pq_semidefinite()));
  v.push_back(make_entry("k0-example-3", "two-sign kappa = 0 family (c1 = c2 = 1), K = 0", -1.0,
                         1.0, 1.0, PhiFamily::k0_two_sign(1, 1), 0.0, 1e-5, sqbdom,
                         Regularity::singular_pm_b, pq_k0_two_sign(1, 1)));
  v.push_back(make_entry("km1-example-1", "constant-p family (c1 = c2 = 1), K = -1", -1.0, 1.0,
                         1.0, PhiFamily::km1_const(1, 1), -1.0, 1e-5, sqbdom,
                         Regularity::singular_pm_b, pq_km1_const(1, 1)));
  v.push_back(make_entry("km1-example-2", "sqrt-p family (c1 = c2 = 1), K = -1", -1.0, 1.0, 1.0,
                         PhiFamily::km1_sqrt(1, 1), -1.0, 1e-5, sqbdom,
                         Regularity::singular_pm_b, pq_km1_sqrt(1, 1)));

  const DomainSpec narrow{-0.35, 0.3, 0.3, 0.9, 0.9};
  v.push_back(make_entry("km1-example-3", "nested-radical family (c = 1), K = -1", -1.0, 1.0, 1.0,
                         PhiFamily::km1_nested(1), -1.0, 1e-5, narrow,
                         Regularity::singular_pm_b, pq_km1_nested(1)));
  v.push_back(make_entry("kp1-example-1", "positive-curvature family, K = 1", -1.0, 1.0, 1.0,
                         PhiFamily::kp1(), 1.0, 1e-5, narrow, Regularity::singular_pm_b,
                         pq_kp1()));

  v.push_back(make_entry("lemma33-hyperbolic", "hyperbolic chart (kappa = 1) deformation target",
                         -1.0, 1.0, 0.0, PhiFamily::constant(1.0), -1.0, 1e-6,
                         DomainSpec{0.0, 0.45, 0.0, 10.0, 1.0}, Regularity::regular));
  v.push_back(make_entry("lemma34-k0", "kappa = 0 chart deformation target", -1.0, 1.0, 1.0,
                         PhiFamily::square_b(), 0.0, 1e-6, sqbdom, Regularity::singular_pm_b,
                         pq_square_b()));

  v.push_back(make_entry("witness-nonsolution", "phi = 1 + s^2: not a PDE solution (expected to fail)",
                         0.0, 1.0, 0.2,
                         PhiFamily::custom("one-plus-s2",
                                           [](const Jet& b2, const Jet& s) {
                                             return 1.0 + s * s + 0.0 * b2;
                                           }),
                         std::nullopt, 1e-6, flatdom, Regularity::witness));
  return v;
}

}  // namespace

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    auto v = build_builtin();
    for (const auto& e : v) e.validate();
    return v;
  }();
  return entries;
}

namespace {

struct Table {
  std::string name;
  std::map<std::string, std::string> kv;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double num(const Table& t, const std::string& key, double dflt) {
  auto it = t.kv.find(key);
  return it == t.kv.end() ? dflt : std::stod(it->second);
}

int integer(const Table& t, const std::string& key, int dflt) {
  auto it = t.kv.find(key);
  return it == t.kv.end() ? dflt : std::stoi(it->second);
}

PhiFamily family_from_table(const Table& t, std::optional<PQPair>* pq_out) {
  auto it = t.kv.find("family");
  if (it == t.kv.end()) throw DomainViolation("catalog [" + t.name + "]: missing family");
  const std::string f = it->second;
  if (f == "constant") return PhiFamily::constant(num(t, "c", 1.0));
  if (f == "funk")
    return PhiFamily::funk(num(t, "sigma", -0.25), num(t, "C", 1.0), integer(t, "sign", -1));
  if (f == "solved-q")
    return PhiFamily::solved_q(num(t, "sigma", 0.0), num(t, "C", 1.0), num(t, "D", 1.0),
                               integer(t, "w_branch", +1), integer(t, "q_sign", +1));
  if (f == "bryant") return PhiFamily::bryant();
  if (f == "shen") return PhiFamily::shen(num(t, "eps", 0.5));
  if (f == "square-b") { *pq_out = pq_square_b(); return PhiFamily::square_b(); }
  if (f == "semidefinite") { *pq_out = pq_semidefinite(); return PhiFamily::semidefinite(); }
  if (f == "k0-two-sign") {
    const int c1 = integer(t, "c1", 1), c2 = integer(t, "c2", 1);
    *pq_out = pq_k0_two_sign(c1, c2);
    return PhiFamily::k0_two_sign(c1, c2);
  }
  if (f == "km1-const") {
    const int c1 = integer(t, "c1", 1), c2 = integer(t, "c2", 1);
    *pq_out = pq_km1_const(c1, c2);
    return PhiFamily::km1_const(c1, c2);
  }
  if (f == "km1-sqrt") {
    const int c1 = integer(t, "c1", 1), c2 = integer(t, "c2", 1);
    *pq_out = pq_km1_sqrt(c1, c2);
    return PhiFamily::km1_sqrt(c1, c2);
  }
  if (f == "km1-nested") {
    const int c = integer(t, "c", 1);
    *pq_out = pq_km1_nested(c);
    return PhiFamily::km1_nested(c);
  }
  if (f == "kp1") { *pq_out = pq_kp1(); return PhiFamily::kp1(); }
  throw DomainViolation("catalog [" + t.name + "]: unknown family '" + f + "'");
}

Regularity regularity_from(const std::string& s) {
  if (s == "regular") return Regularity::regular;
  if (s == "singular-pm-b") return Regularity::singular_pm_b;
  if (s == "degenerate") return Regularity::degenerate_g;
  if (s == "witness") return Regularity::witness;
  throw DomainViolation("unknown regularity class '" + s + "'");
}

const char* kKnownKeys[] = {"family", "c",  "sigma", "C",  "D",   "sign",  "w_branch", "q_sign",
                            "eps",    "c1", "c2",    "mu", "lambda", "a1", "expected_K", "k_tol",
                            "x_center1", "x_radius", "b_min", "b_max", "s_frac", "regularity",
                            "description"};

}  // namespace

std::vector<CatalogEntry> load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainViolation("cannot open catalog file: " + path);

  std::vector<Table> tables;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw DomainViolation(path + ": malformed section header");
      tables.push_back({trim(s.substr(1, s.size() - 2)), {}, lineno});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos || tables.empty())
      throw DomainViolation(path + ": line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    if (!known) throw DomainViolation(path + ": unknown key '" + key + "'");
    tables.back().kv[key] = trim(s.substr(eq + 1));
  }

  std::vector<CatalogEntry> out;
  for (const Table& t : tables) {
    CatalogEntry e;
    e.name = t.name;
    auto d = t.kv.find("description");
    e.description = d == t.kv.end() ? ("catalog file entry (" + path + ")") : d->second;
    e.mu = num(t, "mu", 0.0);
    e.lambda = num(t, "lambda", 1.0);
    e.a1 = num(t, "a1", 0.0);
    std::optional<PQPair> pq;
    e.phi = family_from_table(t, &pq);
    e.pq = std::move(pq);
    if (t.kv.count("expected_K")) e.expected_K = num(t, "expected_K", 0.0);
    e.k_tol = num(t, "k_tol", 1e-6);
    e.domain.x_center1 = num(t, "x_center1", 0.0);
    e.domain.x_radius = num(t, "x_radius", 0.5);
    e.domain.b_min = num(t, "b_min", 0.02);
    e.domain.b_max = num(t, "b_max", 10.0);
    e.domain.s_frac = num(t, "s_frac", 1.0);
    auto r = t.kv.find("regularity");
    e.regularity = r == t.kv.end() ? Regularity::regular : regularity_from(r->second);
    e.validate();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CatalogEntry> full_catalog() {
  std::vector<CatalogEntry> all = builtin_catalog();
  if (const char* env = std::getenv("FINSLER_LAB_CATALOG")) {
    std::stringstream ss(env);
    std::string path;
    while (std::getline(ss, path, ':')) {
      if (path.empty()) continue;
      for (auto& e : load_catalog_file(path)) all.push_back(std::move(e));
    }
  }
  return all;
}

std::optional<CatalogEntry> find_entry(const std::string& name) {
  for (auto& e : full_catalog())
    if (e.name == name) return e;
  return std::nullopt;
}

}  // namespace finslerlab
