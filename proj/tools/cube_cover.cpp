// cube-cover: command-line front end for the cubecover library.
//
// Exit codes: 0 success / Pass, 1 verification Fail, 2 parse error, 3 cap exceeded,
// 4 search budget exceeded.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cubecover/bounds.hpp"
#include "cubecover/catalog.hpp"
#include "cubecover/core.hpp"
#include "cubecover/permutation_oracle.hpp"
#include "cubecover/solver.hpp"

namespace {

using namespace cubecover;
using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kFail = 1, kParse = 2, kCap = 3, kBudget = 4 };

struct Globals {
  bool approx = false;
  bool timing = false;
  bool as_json = false;
  unsigned jobs = 1;
};

std::string rat(const Rational& q, const Globals& g) {
  std::string s = format_rational(q);
  if (g.approx && !is_integer(q)) s += " (~" + format_approx(q) + ")";
  return s;
}

Hyperplane parse_plane(int n, const std::string& coeffs) {
  Hyperplane h = Hyperplane::parse(coeffs);
  if (h.dimension() != n)
    throw ParseError(0, "--coeffs has " + std::to_string(h.dimension()) + " entries, expected " + std::to_string(n));
  return h;
}

std::string verdict_conditions(const Weight1Verdict& v) {
  std::string s;
  for (auto c : v.failed_conditions) {
    if (!s.empty()) s += ",";
    s += to_string(c);
  }
  return s.empty() ? "none" : s;
}

// ---------------------------------------------------------------------------
// Catalog acquisition with optional on-disk cache

PlaneCatalog obtain_catalog(int n, CatalogKind kind, const Globals& g, bool allow_override = false) {
  std::optional<std::filesystem::path> cached;
  if (const char* dir = std::getenv("CUBE_COVER_CACHE_DIR"); dir && *dir) {
    cached = std::filesystem::path(dir) / (std::string(to_string(kind)) + "-n" + std::to_string(n) + ".catalog");
    if (std::filesystem::exists(*cached)) {
      PlaneCatalog cat = load_catalog(cached->string());
      if (cat.dimension == n && cat.kind == kind) return cat;
    }
  }
  PlaneCatalog cat;
  if (kind == CatalogKind::Weight1) {
    cat = enumerate_weight1(n);
  } else {
    MaximalOptions opts;
    opts.allow_override = allow_override;
    opts.jobs = g.jobs;
    if (n >= 6)
      opts.progress = [](std::size_t done, std::size_t total) {
        if (done % 8 == 0 || done == total) std::cerr << "maximal: " << done << "/" << total << " branches\n";
      };
    cat = enumerate_maximal(n, opts);
  }
  if (cached) {
    std::filesystem::create_directories(cached->parent_path());
    save_catalog(cat, cached->string());
  }
  return cat;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_weight(int n, const std::string& coeffs, bool list_points, const Globals& g) {
  Hyperplane h = parse_plane(n, coeffs);
  auto pts = covered_points(h);
  Rational w = plane_weight(h);
  auto v = classify_weight1(h);
  if (g.as_json) {
    json j = {{"n", n},
              {"coeffs", h.to_string(",")},
              {"weight", format_rational(w)},
              {"covered_points", pts.size()},
              {"weight1", v.is_weight1},
              {"failed_conditions", verdict_conditions(v)},
              {"stability_gap", format_rational(stability_gap(h))}};
    std::cout << j.dump() << '\n';
    return kOk;
  }
  std::cout << "n=" << n << '\n'
            << "coeffs=" << h.to_string(",") << '\n'
            << "weight=" << rat(w, g) << '\n'
            << "covered_points=" << pts.size() << '\n'
            << "weight1=" << (v.is_weight1 ? "true" : "false") << '\n'
            << "failed_conditions=" << verdict_conditions(v) << '\n'
            << "stability_gap=" << rat(stability_gap(h), g) << '\n';
  if (list_points)
    for (const auto& p : pts) std::cout << "point=" << p.to_string() << " w=" << format_rational(point_weight(p)) << '\n';
  return kOk;
}

int cmd_classify(int n, const std::string& coeffs) {
  Hyperplane h = parse_plane(n, coeffs);
  auto v = classify_weight1(h);
  std::cout << "weight1=" << (v.is_weight1 ? "true" : "false") << '\n'
            << "failed_conditions=" << verdict_conditions(v) << '\n';
  return kOk;
}

int cmd_oracle(int n, const std::string& coeffs, const Globals& g) {
  Hyperplane h = parse_plane(n, coeffs);
  GbrCounts c = gbr_counts(h, g.jobs);
  Rational via = Rational(Integer(static_cast<unsigned long>(c.good)), factorial(static_cast<unsigned long>(n)));
  via.canonicalize();
  Rational direct = plane_weight(h);
  const bool match = via == direct;
  if (g.as_json) {
    json j = {{"n", n},           {"good", c.good},
              {"bad", c.bad},     {"redundant", c.redundant},
              {"weight_oracle", format_rational(via)},
              {"weight_direct", format_rational(direct)},
              {"match", match}};
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "gbr=(" << c.good << "," << c.bad << "," << c.redundant << ")\n"
              << "good=" << c.good << '\n'
              << "bad=" << c.bad << '\n'
              << "redundant=" << c.redundant << '\n'
              << "weight_oracle=" << rat(via, g) << '\n'
              << "weight_direct=" << rat(direct, g) << '\n'
              << (match ? "MATCH" : "MISMATCH") << '\n';
  }
  return match ? kOk : kFail;
}

int cmd_enumerate(int n, const std::string& kind_name, const std::string& out, bool allow_n6, const Globals& g) {
  CatalogKind kind = parse_catalog_kind(kind_name);
  PlaneCatalog cat = obtain_catalog(n, kind, g, allow_n6);
  if (!out.empty()) save_catalog(cat, out);
  std::cout << "count=" << cat.size() << '\n';
  return kOk;
}

json bound_json(const BoundReport& r) {
  return {{"n", r.n},
          {"k", r.k.get_str()},
          {"lp_bound", r.lp_bound.get_str()},
          {"deficit", format_rational(r.deficit)},
          {"improved", r.improved},
          {"final_lower", r.final_lower.get_str()},
          {"weight1_forced", r.weight1_forced},
          {"threshold", format_rational(r.threshold)}};
}

int cmd_bounds(int n, const std::string& k_text, const Globals& g) {
  Integer k;
  if (k.set_str(k_text, 10) != 0 || k < 1) throw ParseError(0, "--k must be a positive integer");
  BoundReport r = improved_lower_bound(n, k);
  if (g.as_json) {
    std::cout << bound_json(r).dump() << '\n';
    return kOk;
  }
  HarmonicFraction h = harmonic(n);
  std::cout << "n=" << n << '\n'
            << "k=" << r.k << '\n'
            << "harmonic=" << rat(h.value, g) << '\n'
            << "lp=" << r.lp_bound << '\n'
            << "deficit=" << rat(r.deficit, g) << '\n'
            << "threshold=" << rat(r.threshold, g) << '\n'
            << "improved=" << (r.improved ? "true" : "false") << '\n'
            << "final_lower=" << r.final_lower << '\n'
            << "weight1_forced=" << (r.weight1_forced ? "true" : "false") << '\n';
  return kOk;
}

int cmd_verify(int n, long k, const std::string& path, bool accounting) {
  CoverList cover = load_cover(path, n);
  CoverVerdict v = verify_cover(n, k, cover);
  std::cout << (v.pass ? "PASS" : "FAIL") << '\n'
            << "planes=" << v.total << '\n'
            << "min_coverage=" << v.min_coverage << '\n'
            << "max_coverage=" << v.max_coverage << '\n';
  for (const auto& [cov, count] : v.histogram()) std::cout << "coverage[" << cov << "]=" << count << '\n';
  if (accounting) {
    CoverAccounting a = cover_accounting(n, k, cover);
    std::cout << "size_minus_bound=" << format_rational(a.size_minus_bound) << '\n'
              << "over_coverage=" << format_rational(a.over_coverage) << '\n'
              << "weight_deficit=" << format_rational(a.weight_deficit) << '\n'
              << "accounting=" << (a.balanced() ? "balanced" : "UNBALANCED") << '\n';
  }
  return v.pass ? kOk : kFail;
}

int cmd_solve(int n, long k, const std::string& space_name, std::optional<long> size, std::uint64_t budget_nodes,
              double budget_seconds, const std::string& out, const Globals& g) {
  CatalogKind space = parse_catalog_kind(space_name);
  PlaneCatalog cat = obtain_catalog(n, space, g);
  SearchBudget budget{budget_nodes, budget_seconds};
  CoverInstance inst = build_instance(n, k, cat);

  IlpResult res;
  std::optional<Certificate> cert;
  if (size) {
    res = feasibility_at_size(inst, *size, budget);
  } else {
    FResult f = compute_f(n, k, cat, budget);
    res = f.search;
    cert = f.certificate;
  }
  BoundReport bounds = improved_lower_bound(n, Integer(k));

  json record;
  record["n"] = n;
  record["k"] = k;
  record["space"] = to_string(space);
  record["status"] = to_string(res.status);
  record["objective"] = res.solution ? json(res.solution->total) : json(nullptr);
  record["nodes"] = res.stats.nodes;
  record["time_ms"] = g.timing ? json(res.stats.wall_ms) : json(nullptr);
  json c = {{"lp_bound", bounds.lp_bound.get_str()},
            {"improved_lower", bounds.final_lower.get_str()},
            {"weight1_forced", bounds.weight1_forced}};
  if (size) c["size"] = *size;
  if (cert) {
    c["lower_bound"] = cert->lower_bound.get_str();
    c["exact"] = cert->exact;
    c["reason"] = cert->reason;
  }
  if (res.status == IlpStatus::BudgetExceeded) c["search_lower_bound"] = res.lower_bound.get_str();
  record["certificate"] = c;

  if (res.solution && !out.empty()) {
    std::ofstream f(out);
    f << "# cover n=" << n << " k=" << k << " planes=" << res.solution->total << '\n';
    write_cover(f, res.solution->to_cover(cat));
  }

  if (g.as_json) {
    std::cout << record.dump() << '\n';
  } else {
    std::cout << "n=" << n << '\n' << "k=" << k << '\n' << "space=" << to_string(space) << '\n';
    if (size) std::cout << "size=" << *size << '\n';
    std::cout << "status=" << to_string(res.status) << '\n';
    if (res.solution) std::cout << "objective=" << res.solution->total << '\n';
    std::cout << "nodes=" << res.stats.nodes << '\n';
    if (g.timing) std::cout << "time_ms=" << res.stats.wall_ms << '\n';
    std::cout << "lp_bound=" << bounds.lp_bound << '\n' << "improved_lower=" << bounds.final_lower << '\n';
    if (cert) {
      std::cout << "lower_bound=" << cert->lower_bound << '\n'
                << "exact=" << (cert->exact ? "true" : "false") << '\n'
                << "certificate=" << cert->reason << '\n';
    }
    if (res.status == IlpStatus::BudgetExceeded) std::cout << "search_lower_bound=" << res.lower_bound << '\n';
  }
  return res.status == IlpStatus::BudgetExceeded ? kBudget : kOk;
}

/// Known catalog sizes: weight-1 planes (binomial count) and maximal planes.
int cmd_table1(int max_maximal_n, const Globals& g) {
  const std::vector<std::size_t> weight1_expected = {1, 3, 10, 35, 126, 462};
  const std::vector<std::size_t> maximal_expected = {1, 3, 11, 95, 2629};
  bool all = true;
  for (int n = 1; n <= 6; ++n) {
    std::size_t count = 0;
    for_each_weight1(n, [&](const std::vector<long>&) { ++count; });
    bool ok = count == weight1_expected[static_cast<std::size_t>(n - 1)];
    all = all && ok;
    std::cout << "weight1 n=" << n << " count=" << count << " expected=" << weight1_expected[static_cast<std::size_t>(n - 1)]
              << (ok ? " match" : " MISMATCH") << '\n';
  }
  for (int n = 1; n <= max_maximal_n; ++n) {
    std::size_t count = obtain_catalog(n, CatalogKind::Maximal, g, n == 6).size();
    if (n <= 5) {
      bool ok = count == maximal_expected[static_cast<std::size_t>(n - 1)];
      all = all && ok;
      std::cout << "maximal n=" << n << " count=" << count << " expected=" << maximal_expected[static_cast<std::size_t>(n - 1)]
                << (ok ? " match" : " MISMATCH") << '\n';
    } else {
      std::cout << "maximal n=" << n << " count=" << count << " expected=unknown\n";
    }
  }
  std::cout << "table1=" << (all ? "MATCH" : "MISMATCH") << '\n';
  return all ? kOk : kFail;
}

/// Bundled solved values for n = 6, certified in this repository.
std::map<long, std::int64_t> bundled_known_values() { return {{20, 49}}; }

int cmd_composition(int n, const std::vector<long>& ks, const std::vector<std::string>& extra_known) {
  auto known = bundled_known_values();
  for (const auto& entry : extra_known) {
    auto eq = entry.find('=');
    if (eq == std::string::npos) throw ParseError(0, "--known expects k=u, got '" + entry + "'");
    try {
      known[std::stol(entry.substr(0, eq))] = std::stoll(entry.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError(0, "--known expects k=u, got '" + entry + "'");
    }
  }
  for (long k : ks) {
    if (k < 1) throw ParseError(0, "k values must be positive");
    BoundReport b = improved_lower_bound(n, Integer(k));
    auto upper = combine_upper(known, k);
    std::string status = !upper ? "open" : Integer(*upper) == b.final_lower ? "exact" : "gap";
    std::cout << "n=" << n << " k=" << k << " lower=" << b.final_lower
              << " upper=" << (upper ? std::to_string(*upper) : std::string("none")) << " status=" << status;
    if (upper && status == "exact") std::cout << " f=" << *upper;
    std::cout << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact toolkit for almost k-covers of the hypercube by hyperplanes"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--approx", g.approx, "Also print decimal approximations");
  app.add_flag("--timing", g.timing, "Report wall-clock times (output is then not reproducible)");
  app.add_flag("--json", g.as_json, "Print a machine-readable record");
  app.add_option("--jobs", g.jobs, "Worker threads for enumeration")->check(CLI::PositiveNumber);

  int n = 0;
  long k = 0;
  std::string coeffs;
  bool list_points = false;

  auto* weight = app.add_subcommand("weight", "Exact weight of a hyperplane");
  weight->add_option("--n", n)->required();
  weight->add_option("--coeffs", coeffs, "Comma-separated rationals c1,...,cn")->required();
  weight->add_flag("--points", list_points, "List covered points");

  auto* classify = app.add_subcommand("classify", "Weight-1 classification");
  classify->add_option("--n", n)->required();
  classify->add_option("--coeffs", coeffs)->required();

  auto* oracle = app.add_subcommand("oracle", "Good/bad/redundant permutation counts");
  oracle->add_option("--n", n)->required();
  oracle->add_option("--coeffs", coeffs)->required();

  std::string kind = "weight1", out;
  bool allow_n6 = false;
  auto* enumerate = app.add_subcommand("enumerate", "Write a plane catalog");
  enumerate->add_option("--n", n)->required();
  enumerate->add_option("--kind", kind)->check(CLI::IsMember({"weight1", "maximal"}));
  enumerate->add_option("--out", out, "Catalog file to write");
  enumerate->add_flag("--allow-n6", allow_n6, "Permit the n = 6 maximal enumeration");

  std::string k_text;
  auto* bounds = app.add_subcommand("bounds", "Lower-bound report for f(n,k)");
  bounds->add_option("--n", n)->required();
  bounds->add_option("--k", k_text)->required();

  std::string space = "maximal";
  std::optional<long> size;
  std::uint64_t budget_nodes = 1'000'000;
  double budget_seconds = 600;
  auto* solve = app.add_subcommand("solve", "Branch-and-bound for f(n,k) or a fixed cover size");
  solve->add_option("--n", n)->required();
  solve->add_option("--k", k)->required();
  solve->add_option("--space", space)->check(CLI::IsMember({"weight1", "maximal"}));
  solve->add_option("--size", size, "Decide whether a cover with exactly this many planes exists");
  solve->add_option("--budget-nodes", budget_nodes);
  solve->add_option("--budget-seconds", budget_seconds);
  solve->add_option("--out", out, "Witness cover file");

  std::string cover_path;
  bool accounting = false;
  auto* verify = app.add_subcommand("verify", "Check a cover file");
  verify->add_option("--n", n)->required();
  verify->add_option("--k", k)->required();
  verify->add_option("--cover", cover_path)->required();
  verify->add_flag("--accounting", accounting, "Print the size/weight accounting identity");

  std::string which;
  int max_n = 5;
  int table_n = 6;
  std::vector<long> ks = {20, 40, 60, 80, 100};
  std::vector<std::string> known;
  auto* table = app.add_subcommand("table", "Reproduction tables");
  table->add_option("--which", which)->required()->check(CLI::IsMember({"table1", "thm14"}));
  table->add_option("--max-n", max_n, "Largest n for the maximal row (6 runs the long enumeration)")
      ->check(CLI::Range(1, 6));
  table->add_option("--n", table_n, "Dimension for thm14");
  table->add_option("--k", ks, "k values for thm14")->delimiter(',');
  table->add_option("--known", known, "Extra solved values k=u for thm14")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*weight) return cmd_weight(n, coeffs, list_points, g);
    if (*classify) return cmd_classify(n, coeffs);
    if (*oracle) return cmd_oracle(n, coeffs, g);
    if (*enumerate) return cmd_enumerate(n, kind, out, allow_n6, g);
    if (*bounds) return cmd_bounds(n, k_text, g);
    if (*solve) return cmd_solve(n, k, space, size, budget_nodes, budget_seconds, out, g);
    if (*verify) return cmd_verify(n, k, cover_path, accounting);
    if (*table) return which == "table1" ? cmd_table1(max_n, g) : cmd_composition(table_n, ks, known);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::CapExceeded) return kCap;
    if (e.kind() == ErrorKind::DimensionMismatch || e.kind() == ErrorKind::InvalidInput ||
        e.kind() == ErrorKind::InvalidPoint)
      return kParse;
    return kFail;
  }
  return kOk;
}
