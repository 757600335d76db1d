#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ldffed/decomposer.hpp"
#include "ldffed/executor.hpp"
#include "ldffed/federation.hpp"
#include "ldffed/planner.hpp"

namespace ldffed {

enum class Variant { Baseline, Decomposer, DecomposerPs, DecomposerPsPbj };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
std::vector<Variant> all_variants();

struct VariantFeatures {
  bool merge = false;
  bool prune = false;
  bool pbj = false;
};

VariantFeatures features(Variant v);

struct PipelineResult {
  SourceMap sources;
  /// Absent when some pattern has no relevant source; the answer is then
  /// empty and nothing is planned or executed.
  std::optional<Decomposition> decomposition;
  std::optional<Rational> density;
  std::optional<std::size_t> cost;
  std::optional<std::size_t> atomic_cost;
  PlanPtr plan;
  MappingSet answers;
  /// All three request phases filled in.
  ExecutionTrace trace;
};

/// select_sources -> decompose (or atomic) -> plan -> execute.
PipelineResult run_pipeline(const Federation& f, std::span<const TriplePattern> bgp, Variant v,
                            double timeout_s = 0);

/// Area under the answers-vs-time step function on [0, t].
double dief_at_t(const ExecutionTrace& trace, double t);

struct OracleComparison {
  bool equal = false;
  MappingSet missing;
  MappingSet extra;
};

MappingSet oracle_answers(const Federation& f, std::span<const TriplePattern> bgp);
OracleComparison compare_answers(const MappingSet& engine, const MappingSet& oracle);
OracleComparison oracle_check(const Federation& f, std::span<const TriplePattern> bgp, Variant v);

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path query;
  Variant variant = Variant::DecomposerPsPbj;
  double timeout_s = 900;
  int repetitions = 1;
  /// When set, run i's trace goes to <out>.run<i>.jsonl and the report to
  /// <out>.summary.json.
  std::optional<std::filesystem::path> out;
};

struct RunReport {
  nlohmann::json json;
  bool timed_out = false;
};

/// Loads manifest and query (LoadError on failure) and runs the pipeline
/// `repetitions` times.
RunReport run(const RunConfig& cfg);

std::vector<TriplePattern> load_query_bgp(const std::filesystem::path& path);

}  // namespace ldffed
