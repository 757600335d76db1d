#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldffed/decomposer.hpp"
#include "ldffed/error.hpp"
#include "ldffed/executor.hpp"
#include "ldffed/harness.hpp"
#include "ldffed/planner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kLoadError = 2;
constexpr int kTimeout = 3;
constexpr int kInvariant = 4;

using namespace ldffed;

struct QueryArgs {
  std::string manifest;
  std::string query;
  std::string variant = "decomposer_ps_pbj";
};

void add_query_args(CLI::App* cmd, QueryArgs& args, bool with_variant) {
  cmd->add_option("--manifest", args.manifest, "federation manifest (JSON)")->required();
  cmd->add_option("--query", args.query, "SPARQL query file")->required();
  if (with_variant) {
    cmd->add_option("--variant", args.variant,
                    "baseline | decomposer | decomposer_ps | decomposer_ps_pbj");
  }
}

Variant variant_of(const std::string& name) {
  auto v = parse_variant(name);
  if (!v) throw LoadError("unknown variant '" + name + "'");
  return *v;
}

nlohmann::json mappings_json(const MappingSet& set) {
  auto out = nlohmann::json::array();
  for (const auto& mu : set) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [var, term] : mu) row[var.substr(1)] = term.to_string();
    out.push_back(row);
  }
  return out;
}

int cmd_run(const QueryArgs& args, double timeout, int reps, const std::string& out) {
  RunConfig cfg;
  cfg.manifest = args.manifest;
  cfg.query = args.query;
  cfg.variant = variant_of(args.variant);
  cfg.timeout_s = timeout;
  cfg.repetitions = reps;
  if (!out.empty()) cfg.out = out;
  const auto report = run(cfg);
  std::cout << report.json.dump(2) << "\n";
  return report.timed_out ? kTimeout : kOk;
}

struct Loaded {
  Federation f;
  std::vector<TriplePattern> bgp;
};

Loaded load(const QueryArgs& args) {
  return {load_federation(args.manifest), load_query_bgp(args.query)};
}

nlohmann::json decomposition_json(const Decomposition& d, const Federation& f,
                                  const SourceMap& sources) {
  auto entries = nlohmann::json::array();
  for (const auto& e : d.entries) {
    auto uris = nlohmann::json::array();
    for (ServiceIndex c : e.sources) uris.push_back(f.uri(c));
    entries.push_back({{"patterns", e.patterns}, {"se", e.se.to_string()}, {"sources", uris}});
  }
  const auto languages = service_languages(f);
  return {{"entries", entries},
          {"density", density(d, sources, exclusive_groups(sources)).to_string()},
          {"cost", cost(d, languages)}};
}

nlohmann::json plan_json(const PlanNode& node, const Federation& f) {
  if (node.is_access()) {
    const auto& a = node.access();
    auto uris = nlohmann::json::array();
    for (ServiceIndex c : a.sources) uris.push_back(f.uri(c));
    return {{"access", a.se.to_string()}, {"sources", uris}, {"card", a.card.total}};
  }
  const auto& j = node.join();
  nlohmann::json out = {{"join", to_string(j.op)},
                        {"card", j.est_card},
                        {"r_shj", j.r_shj},
                        {"left", plan_json(*j.left, f)},
                        {"right", plan_json(*j.right, f)}};
  if (j.r_pbj) out["r_pbj"] = *j.r_pbj;
  return out;
}

int cmd_decompose(const QueryArgs& args, bool explain_text) {
  auto [f, bgp] = load(args);
  const auto feat = features(variant_of(args.variant));
  const auto sources = select_sources(f, bgp);
  if (sources.any_empty()) {
    std::cout << "no decomposition: some triple pattern has no relevant source\n";
    return kOk;
  }
  const auto languages = service_languages(f);
  const Decomposition d = feat.merge ? decompose(bgp, sources, languages, feat.prune)
                                     : *atomic_decomposition(bgp, sources);
  if (!is_compliant(d, languages)) throw InvariantViolation("decomposition is not compliant");
  if (explain_text) {
    std::cout << explain(d, f, sources);
  } else {
    std::cout << decomposition_json(d, f, sources).dump(2) << "\n";
  }
  return kOk;
}

int cmd_plan(const QueryArgs& args, bool explain_text) {
  auto [f, bgp] = load(args);
  const auto feat = features(variant_of(args.variant));
  const auto sources = select_sources(f, bgp);
  if (sources.any_empty()) {
    std::cout << "no plan: some triple pattern has no relevant source\n";
    return kOk;
  }
  const auto languages = service_languages(f);
  const Decomposition d = feat.merge ? decompose(bgp, sources, languages, feat.prune)
                                     : *atomic_decomposition(bgp, sources);
  const auto root = plan(d, f, PlannerOptions{feat.pbj});
  if (explain_text) {
    std::cout << explain_plan(*root, f);
  } else {
    std::cout << plan_json(*root, f).dump(2) << "\n";
  }
  return kOk;
}

int cmd_oracle_check(const QueryArgs& args) {
  auto [f, bgp] = load(args);
  const Variant v = variant_of(args.variant);
  const auto cmp = oracle_check(f, bgp, v);
  nlohmann::json j = {{"variant", to_string(v)},
                      {"equal", cmp.equal},
                      {"missing", mappings_json(cmp.missing)},
                      {"extra", mappings_json(cmp.extra)}};
  std::cout << j.dump(2) << "\n";
  if (!cmp.extra.empty()) return kInvariant;
  if (!cmp.missing.empty() && !features(v).prune) return kInvariant;
  return kOk;
}

int cmd_enumerate(const QueryArgs& args) {
  auto [f, bgp] = load(args);
  const auto sources = select_sources(f, bgp);
  if (sources.any_empty()) {
    std::cout << "no decompositions: some triple pattern has no relevant source\n";
    return kOk;
  }
  const auto all = enumerate_decompositions(bgp, sources, service_languages(f));
  for (const auto& e : all) {
    std::cout << "density=" << e.density.to_string() << " cost=" << e.cost
              << (e.compliant ? " compliant" : " non-compliant")
              << (e.pareto_optimal ? " pareto" : "") << "\n";
    std::string body = explain(e.decomposition, f, sources);
    std::string line;
    for (char ch : body) {
      if (ch == '\n') {
        std::cout << "  " << line << "\n";
        line.clear();
      } else {
        line += ch;
      }
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated BGP evaluation over heterogeneous Linked Data Fragment services"};
  app.require_subcommand(1);

  QueryArgs args;
  double timeout = 900;
  int reps = 1;
  std::string out;
  bool explain_flag = false;

  auto* run_cmd = app.add_subcommand("run", "run a variant and report metrics");
  add_query_args(run_cmd, args, true);
  run_cmd->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
  run_cmd->add_option("--reps", reps, "repetitions")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out, "prefix for trace and summary files");

  auto* decompose_cmd = app.add_subcommand("decompose", "print the query decomposition");
  add_query_args(decompose_cmd, args, true);
  decompose_cmd->add_flag("--explain", explain_flag, "one line per subexpression");

  auto* plan_cmd = app.add_subcommand("plan", "print the query plan");
  add_query_args(plan_cmd, args, true);
  plan_cmd->add_flag("--explain", explain_flag, "operator tree with cards and request estimates");

  auto* oracle_cmd = app.add_subcommand("oracle-check", "compare answers against the oracle");
  add_query_args(oracle_cmd, args, true);

  auto* enum_cmd = app.add_subcommand("enumerate-decompositions",
                                      "all decompositions of a BGP with at most four patterns");
  add_query_args(enum_cmd, args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kLoadError;
  }

  try {
    if (*run_cmd) return cmd_run(args, timeout, reps, out);
    if (*decompose_cmd) return cmd_decompose(args, explain_flag);
    if (*plan_cmd) return cmd_plan(args, explain_flag);
    if (*oracle_cmd) return cmd_oracle_check(args);
    if (*enum_cmd) return cmd_enumerate(args);
  } catch (const Timeout& e) {
    std::cerr << "timeout: " << e.what() << "\n";
    return kTimeout;
  } catch (const LoadError& e) {
    std::cerr << "load error: " << e.what() << "\n";
    return kLoadError;
  } catch (const NotExecutable& e) {
    std::cerr << "load error: " << e.what() << "\n";
    return kLoadError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const InterfaceViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  }
  return kOk;
}
