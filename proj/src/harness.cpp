#include "ldffed/harness.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ldffed/error.hpp"
#include "ldffed/expression.hpp"

namespace ldffed {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Baseline:
      return "baseline";
    case Variant::Decomposer:
      return "decomposer";
    case Variant::DecomposerPs:
      return "decomposer_ps";
    case Variant::DecomposerPsPbj:
      return "decomposer_ps_pbj";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : all_variants()) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

std::vector<Variant> all_variants() {
  return {Variant::Baseline, Variant::Decomposer, Variant::DecomposerPs, Variant::DecomposerPsPbj};
}

VariantFeatures features(Variant v) {
  switch (v) {
    case Variant::Baseline:
      return {false, false, false};
    case Variant::Decomposer:
      return {true, false, false};
    case Variant::DecomposerPs:
      return {true, true, false};
    case Variant::DecomposerPsPbj:
      return {true, true, true};
  }
  return {};
}

namespace {

std::vector<std::uint64_t> diff(const std::vector<std::uint64_t>& after,
                                const std::vector<std::uint64_t>& before) {
  std::vector<std::uint64_t> out(after.size());
  for (std::size_t i = 0; i < after.size(); ++i) out[i] = after[i] - before[i];
  return out;
}

}  // namespace

PipelineResult run_pipeline(const Federation& f, std::span<const TriplePattern> bgp, Variant v,
                            double timeout_s) {
  if (bgp.empty()) throw LoadError("query has no triple patterns");
  const auto feat = features(v);
  PipelineResult result;

  const auto c0 = f.request_counts();
  result.sources = select_sources(f, bgp);
  const auto c1 = f.request_counts();

  auto atomic = atomic_decomposition(bgp, result.sources);
  std::vector<std::uint64_t> c2 = c1;
  if (atomic) {
    const auto languages = service_languages(f);
    const auto exclusives = exclusive_groups(result.sources);
    result.decomposition = feat.merge ? decompose(bgp, result.sources, languages, feat.prune)
                                      : *atomic;
    result.density = density(*result.decomposition, result.sources, exclusives);
    result.cost = cost(*result.decomposition, languages);
    result.atomic_cost = cost(*atomic, languages);
    result.plan = plan(*result.decomposition, f, PlannerOptions{feat.pbj});
    c2 = f.request_counts();
    auto exec = execute(*result.plan, f, ExecuteOptions{timeout_s});
    result.answers = std::move(exec.answers);
    result.trace = std::move(exec.trace);
  }

  const auto selection = diff(c1, c0);
  const auto planning = diff(c2, c1);
  auto& trace = result.trace;
  trace.per_service.resize(f.size());
  trace.requests.source_selection = 0;
  trace.requests.planning = 0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    trace.per_service[c].source_selection = selection[c];
    trace.per_service[c].planning = planning[c];
    trace.requests.source_selection += selection[c];
    trace.requests.planning += planning[c];
  }
  return result;
}

double dief_at_t(const ExecutionTrace& trace, double t) {
  if (t < 0) throw std::invalid_argument("dief@t needs t >= 0");
  double area = 0;
  for (const auto& a : trace.answers) {
    if (a.t <= t) area += t - a.t;
  }
  return area;
}

MappingSet oracle_answers(const Federation& f, std::span<const TriplePattern> bgp) {
  return eval_bgp_oracle(f.union_graph(), bgp);
}

OracleComparison compare_answers(const MappingSet& engine, const MappingSet& oracle) {
  OracleComparison out;
  std::set_difference(oracle.begin(), oracle.end(), engine.begin(), engine.end(),
                      std::inserter(out.missing, out.missing.end()));
  std::set_difference(engine.begin(), engine.end(), oracle.begin(), oracle.end(),
                      std::inserter(out.extra, out.extra.end()));
  out.equal = out.missing.empty() && out.extra.empty();
  return out;
}

OracleComparison oracle_check(const Federation& f, std::span<const TriplePattern> bgp, Variant v) {
  const auto result = run_pipeline(f, bgp, v);
  return compare_answers(result.answers, oracle_answers(f, bgp));
}

std::vector<TriplePattern> load_query_bgp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open query file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return basic_graph_pattern(parse_query(text.str()));
}

namespace {

nlohmann::json requests_json(const PhaseRequests& r) {
  return {{"source_selection", r.source_selection},
          {"planning", r.planning},
          {"execution", r.execution},
          {"total", r.total()}};
}

}  // namespace

RunReport run(const RunConfig& cfg) {
  using nlohmann::json;
  if (cfg.repetitions < 1) throw LoadError("repetitions must be at least 1");
  const Federation f = load_federation(cfg.manifest);
  const auto bgp = load_query_bgp(cfg.query);

  RunReport report;
  json runs = json::array();
  double runtime_sum = 0;
  double pipeline_sum = 0;
  double requests_sum = 0;
  double answers_sum = 0;
  double dief_sum = 0;
  std::optional<PipelineResult> last;

  for (int i = 0; i < cfg.repetitions; ++i) {
    const auto start = std::chrono::steady_clock::now();
    auto result = run_pipeline(f, bgp, cfg.variant, cfg.timeout_s);
    const double pipeline_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& trace = result.trace;
    const double dief = dief_at_t(trace, trace.runtime_s);

    if (cfg.out) {
      auto path = cfg.out->string() + ".run" + std::to_string(i + 1) + ".jsonl";
      std::ofstream out(path);
      if (!out) throw LoadError("cannot write " + path);
      trace.write_jsonl(out);
    }

    json per_service = json::array();
    for (std::size_t c = 0; c < f.size(); ++c) {
      per_service.push_back({{"uri", f.uri(c)}, {"requests", requests_json(trace.per_service[c])}});
    }
    runs.push_back({{"run", i + 1},
                    {"answers", trace.answers.size()},
                    {"runtime_s", trace.runtime_s},
                    {"pipeline_runtime_s", pipeline_s},
                    {"requests", requests_json(trace.requests)},
                    {"per_service", per_service},
                    {"dief_at_runtime", dief},
                    {"timeout", trace.timed_out}});
    report.timed_out = report.timed_out || trace.timed_out;
    runtime_sum += trace.runtime_s;
    pipeline_sum += pipeline_s;
    requests_sum += static_cast<double>(trace.requests.total());
    answers_sum += static_cast<double>(trace.answers.size());
    dief_sum += dief;
    last = std::move(result);
  }

  const double n = cfg.repetitions;
  json& j = report.json;
  j["variant"] = to_string(cfg.variant);
  j["manifest"] = cfg.manifest.string();
  j["query"] = cfg.query.string();
  j["repetitions"] = cfg.repetitions;
  if (last->density) {
    j["density"] = last->density->to_string();
    j["density_value"] = last->density->value();
    j["cost"] = *last->cost;
    j["atomic_cost"] = *last->atomic_cost;
    j["normalized_cost"] =
        static_cast<double>(*last->cost) / static_cast<double>(*last->atomic_cost);
    j["decomposition"] = explain(*last->decomposition, f, last->sources);
  } else {
    j["density"] = nullptr;
    j["cost"] = nullptr;
  }
  j["mean"] = {{"runtime_s", runtime_sum / n},
               {"pipeline_runtime_s", pipeline_sum / n},
               {"requests_total", requests_sum / n},
               {"answers", answers_sum / n},
               {"dief_at_runtime", dief_sum / n}};
  j["runs"] = std::move(runs);
  j["timeout"] = report.timed_out;
  j["total_includes_source_selection"] = true;

  if (cfg.out) {
    auto path = cfg.out->string() + ".summary.json";
    std::ofstream out(path);
    if (!out) throw LoadError("cannot write " + path);
    out << j.dump(2) << "\n";
  }
  return report;
}

}  // namespace ldffed
