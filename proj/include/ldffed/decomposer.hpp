#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ldffed/expression.hpp"
#include "ldffed/federation.hpp"

namespace ldffed {

/// Exact nonnegative fraction, always in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  bool operator==(const Rational&) const = default;
  std::strong_ordering operator<=>(const Rational& other) const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// One (SE, S) pair. `patterns` are indices into the BGP.
struct DecompositionEntry {
  std::vector<std::size_t> patterns;
  Expression se;
  ServiceSet sources;
};

struct Decomposition {
  std::vector<DecompositionEntry> entries;

  /// Every BGP index appears in exactly one entry.
  bool partitions(std::size_t bgp_size) const;
};

struct ExclusiveGroup {
  ServiceIndex source;
  std::vector<std::size_t> patterns;
};

/// Undirected graph over triple-pattern and service vertices.
class DecompositionGraph {
 public:
  struct Vertex {
    bool is_service;
    std::size_t id;
    auto operator<=>(const Vertex&) const = default;
  };
  using Edge = std::pair<Vertex, Vertex>;

  static Vertex pattern(std::size_t tp) { return {false, tp}; }
  static Vertex source(ServiceIndex c) { return {true, c}; }

  void add_vertex(Vertex v) { vertices_.insert(v); }
  void add_edge(Vertex a, Vertex b);
  void remove_edge(Vertex a, Vertex b);
  bool has_edge(Vertex a, Vertex b) const;

  const std::set<Vertex>& vertices() const noexcept { return vertices_; }
  const std::set<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Patterns adjacent to a service vertex.
  std::vector<std::size_t> patterns_of(ServiceIndex c) const;
  /// Services adjacent to a pattern vertex.
  ServiceSet sources_of(std::size_t tp) const;

 private:
  static Edge normalized(Vertex a, Vertex b);

  std::set<Vertex> vertices_;
  std::set<Edge> edges_;
};

/// (tp_i, r(tp_i)) in BGP order, or nullopt when some r(tp) is empty (the
/// answer over the federation is then empty).
std::optional<Decomposition> atomic_decomposition(std::span<const TriplePattern> bgp,
                                                  const SourceMap& sources);

/// Patterns with a single relevant source, grouped by that source in
/// federation order.
std::vector<ExclusiveGroup> exclusive_groups(const SourceMap& sources);

/// Pattern-source edges where a pattern is evaluated, plus pattern-pattern
/// edges for exclusive groups, for a single subexpression at a single
/// source, and for pairs that never co-occur.
DecompositionGraph build_graph(const Decomposition& d, const SourceMap& sources,
                               std::span<const ExclusiveGroup> exclusives);

/// |E| / |E*|, with E* the edges of the atomic decomposition's graph.
Rational density(const Decomposition& d, const SourceMap& sources,
                 std::span<const ExclusiveGroup> exclusives);

/// Size of the smallest interface-compliant split of `se` at a service with
/// language `lang`.
std::size_t theta_star_size(const Expression& se, InterfaceLanguage lang);

/// Languages of the federation's services, indexed by ServiceIndex.
std::vector<InterfaceLanguage> service_languages(const Federation& f);

/// |S| + sum over c in S of (|theta*_c(SE)| - 1).
std::size_t entry_cost(const DecompositionEntry& entry, std::span<const InterfaceLanguage> languages);
std::size_t cost(const Decomposition& d, std::span<const InterfaceLanguage> languages);

/// Out-degree source pruning on an atomic decomposition. Sources are visited
/// by non-increasing degree in the atomic graph (ties: federation order).
/// Patterns sharing a constant subject with another pattern keep all sources.
Decomposition prune_sources(const Decomposition& atomic, std::span<const TriplePattern> bgp);

/// Interface-aware decomposer: atomic decomposition, optional pruning, then
/// pairwise merging until fixpoint. Requires every r(tp) to be nonempty.
Decomposition decompose(std::span<const TriplePattern> bgp, const SourceMap& sources,
                        std::span<const InterfaceLanguage> languages, bool prune);

/// Every (SE in L_c for all c in S) check over a decomposition.
bool is_compliant(const Decomposition& d, std::span<const InterfaceLanguage> languages);

struct EnumeratedDecomposition {
  Decomposition decomposition;
  Rational density;
  std::size_t cost = 0;
  bool compliant = false;
  bool pareto_optimal = false;
};

/// Exhaustive enumeration for BGPs of at most four patterns: every partition
/// of the patterns, every nonempty subset of relevant sources per block.
/// Marks the density/cost Pareto front.
std::vector<EnumeratedDecomposition> enumerate_decompositions(
    std::span<const TriplePattern> bgp, const SourceMap& sources,
    std::span<const InterfaceLanguage> languages);

/// `SE{1,2} @ {uri} | density=a/b cost=k`, one line per entry, then a total.
std::string explain(const Decomposition& d, const Federation& f, const SourceMap& sources);

}  // namespace ldffed
