#include "ldffed/decomposer.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "ldffed/error.hpp"

namespace ldffed {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) throw InvariantViolation("rational must be nonnegative with positive denominator");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering Rational::operator<=>(const Rational& other) const {
  return num_ * other.den_ <=> other.num_ * den_;
}

bool Decomposition::partitions(std::size_t bgp_size) const {
  std::vector<int> seen(bgp_size, 0);
  for (const auto& e : entries) {
    for (std::size_t tp : e.patterns) {
      if (tp >= bgp_size) return false;
      ++seen[tp];
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; });
}

DecompositionGraph::Edge DecompositionGraph::normalized(Vertex a, Vertex b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

void DecompositionGraph::add_edge(Vertex a, Vertex b) {
  if (a == b) throw InvariantViolation("self loop in decomposition graph");
  if (a.is_service && b.is_service) throw InvariantViolation("service-service edge");
  vertices_.insert(a);
  vertices_.insert(b);
  edges_.insert(normalized(a, b));
}

void DecompositionGraph::remove_edge(Vertex a, Vertex b) { edges_.erase(normalized(a, b)); }

bool DecompositionGraph::has_edge(Vertex a, Vertex b) const {
  return edges_.contains(normalized(a, b));
}

std::vector<std::size_t> DecompositionGraph::patterns_of(ServiceIndex c) const {
  std::vector<std::size_t> out;
  const Vertex s = source(c);
  for (const auto& [a, b] : edges_) {
    if (a == s && !b.is_service) out.push_back(b.id);
    if (b == s && !a.is_service) out.push_back(a.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ServiceSet DecompositionGraph::sources_of(std::size_t tp) const {
  ServiceSet out;
  const Vertex p = pattern(tp);
  for (const auto& [a, b] : edges_) {
    if (a == p && b.is_service) out.insert(b.id);
    if (b == p && a.is_service) out.insert(a.id);
  }
  return out;
}

std::optional<Decomposition> atomic_decomposition(std::span<const TriplePattern> bgp,
                                                  const SourceMap& sources) {
  if (sources.size() != bgp.size()) throw InvariantViolation("source map does not match BGP");
  if (sources.any_empty()) return std::nullopt;
  Decomposition d;
  for (std::size_t i = 0; i < bgp.size(); ++i) {
    d.entries.push_back({{i}, Expression::triple(bgp[i]), sources[i]});
  }
  return d;
}

std::vector<ExclusiveGroup> exclusive_groups(const SourceMap& sources) {
  std::map<ServiceIndex, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].size() == 1) by_source[*sources[i].begin()].push_back(i);
  }
  std::vector<ExclusiveGroup> out;
  for (auto& [c, tps] : by_source) out.push_back({c, std::move(tps)});
  return out;
}

DecompositionGraph build_graph(const Decomposition& d, const SourceMap& sources,
                               std::span<const ExclusiveGroup> exclusives) {
  using G = DecompositionGraph;
  G g;
  const std::size_t n = sources.size();
  for (std::size_t i = 0; i < n; ++i) {
    g.add_vertex(G::pattern(i));
    for (ServiceIndex c : sources[i]) g.add_vertex(G::source(c));
  }

  // Pattern -- relevant source it is evaluated at.
  for (const auto& e : d.entries) {
    for (std::size_t tp : e.patterns) {
      for (ServiceIndex c : e.sources) {
        if (sources[tp].contains(c)) g.add_edge(G::pattern(tp), G::source(c));
      }
    }
  }
  // Pairs within an exclusive group.
  for (const auto& group : exclusives) {
    for (std::size_t a = 0; a < group.patterns.size(); ++a) {
      for (std::size_t b = a + 1; b < group.patterns.size(); ++b) {
        g.add_edge(G::pattern(group.patterns[a]), G::pattern(group.patterns[b]));
      }
    }
  }
  // A single subexpression at a single source connects all pairs.
  const bool single = d.entries.size() == 1 && d.entries.front().sources.size() == 1;
  // Remaining pairs that never co-occur in a subexpression.
  std::vector<std::size_t> owner(n, n);
  for (std::size_t k = 0; k < d.entries.size(); ++k) {
    for (std::size_t tp : d.entries[k].patterns) owner.at(tp) = k;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (single || owner[a] != owner[b]) g.add_edge(G::pattern(a), G::pattern(b));
    }
  }
  return g;
}

Rational density(const Decomposition& d, const SourceMap& sources,
                 std::span<const ExclusiveGroup> exclusives) {
  if (d.entries.empty()) throw InvariantViolation("density of an empty decomposition");
  Decomposition atomic;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    // The SE is irrelevant to the graph; only pattern indices and sources are read.
    atomic.entries.push_back({{i}, d.entries.front().se, sources[i]});
  }
  const auto full = build_graph(atomic, sources, exclusives).edge_count();
  const auto actual = build_graph(d, sources, exclusives).edge_count();
  if (full == 0) throw InvariantViolation("atomic decomposition graph has no edges");
  return Rational(static_cast<std::int64_t>(actual), static_cast<std::int64_t>(full));
}

std::size_t theta_star_size(const Expression& se, InterfaceLanguage lang) {
  if (in_language(se, lang)) return 1;
  // TP and TP+VALUES services only conjoin triple patterns client-side.
  return se.triple_patterns().size();
}

std::vector<InterfaceLanguage> service_languages(const Federation& f) {
  std::vector<InterfaceLanguage> out;
  for (ServiceIndex c = 0; c < f.size(); ++c) out.push_back(f.spec(c).language);
  return out;
}

std::size_t entry_cost(const DecompositionEntry& entry,
                       std::span<const InterfaceLanguage> languages) {
  std::size_t total = entry.sources.size();
  for (ServiceIndex c : entry.sources) total += theta_star_size(entry.se, languages[c]) - 1;
  return total;
}

std::size_t cost(const Decomposition& d, std::span<const InterfaceLanguage> languages) {
  std::size_t total = 0;
  for (const auto& e : d.entries) total += entry_cost(e, languages);
  return total;
}

Decomposition prune_sources(const Decomposition& atomic, std::span<const TriplePattern> bgp) {
  using G = DecompositionGraph;
  for (const auto& e : atomic.entries) {
    if (e.patterns.size() != 1) throw InvariantViolation("pruning expects an atomic decomposition");
  }

  G graph;
  std::map<ServiceIndex, std::size_t> degree;
  for (const auto& e : atomic.entries) {
    for (ServiceIndex c : e.sources) {
      graph.add_edge(G::pattern(e.patterns.front()), G::source(c));
      ++degree[c];
    }
  }

  // Patterns whose constant subject also appears as subject of another pattern.
  std::vector<bool> exempt(bgp.size(), false);
  for (std::size_t a = 0; a < bgp.size(); ++a) {
    if (bgp[a].s.kind() != TermKind::Uri) continue;
    for (std::size_t b = 0; b < bgp.size(); ++b) {
      if (a != b && bgp[a].s == bgp[b].s) exempt[a] = true;
    }
  }

  std::vector<ServiceIndex> order;
  for (const auto& [c, _] : degree) order.push_back(c);
  std::stable_sort(order.begin(), order.end(),
                   [&](ServiceIndex x, ServiceIndex y) { return degree[x] > degree[y]; });

  for (ServiceIndex c : order) {
    for (std::size_t tp : graph.patterns_of(c)) {
      if (exempt[tp]) continue;
      for (ServiceIndex other : graph.sources_of(tp)) {
        if (other != c) graph.remove_edge(G::pattern(tp), G::source(other));
      }
    }
  }

  Decomposition out = atomic;
  for (auto& e : out.entries) e.sources = graph.sources_of(e.patterns.front());
  return out;
}

namespace {

bool share_variable(const Expression& a, const Expression& b) {
  auto va = a.vars();
  auto vb = b.vars();
  std::vector<std::string> common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  return !common.empty();
}

}  // namespace

Decomposition decompose(std::span<const TriplePattern> bgp, const SourceMap& sources,
                        std::span<const InterfaceLanguage> languages, bool prune) {
  auto atomic = atomic_decomposition(bgp, sources);
  if (!atomic) throw InvariantViolation("decompose called with a pattern lacking sources");
  Decomposition d = prune ? prune_sources(*atomic, bgp) : std::move(*atomic);

  bool updated = true;
  while (updated) {
    updated = false;
    for (std::size_t i = 0; i < d.entries.size() && !updated; ++i) {
      for (std::size_t j = i + 1; j < d.entries.size(); ++j) {
        auto& a = d.entries[i];
        auto& b = d.entries[j];
        if (!share_variable(a.se, b.se)) continue;
        ServiceSet both = a.sources;
        both.insert(b.sources.begin(), b.sources.end());
        if (both.size() != 1) continue;
        Expression merged = Expression::conj(a.se, b.se);
        if (!in_language(merged, languages[*both.begin()])) continue;

        a.se = std::move(merged);
        a.patterns.insert(a.patterns.end(), b.patterns.begin(), b.patterns.end());
        std::sort(a.patterns.begin(), a.patterns.end());
        d.entries.erase(d.entries.begin() + static_cast<std::ptrdiff_t>(j));
        updated = true;
        break;
      }
    }
  }
  return d;
}

bool is_compliant(const Decomposition& d, std::span<const InterfaceLanguage> languages) {
  for (const auto& e : d.entries) {
    for (ServiceIndex c : e.sources) {
      if (!in_language(e.se, languages[c])) return false;
    }
  }
  return true;
}

std::vector<EnumeratedDecomposition> enumerate_decompositions(
    std::span<const TriplePattern> bgp, const SourceMap& sources,
    std::span<const InterfaceLanguage> languages) {
  const std::size_t n = bgp.size();
  if (n == 0 || n > 4) throw InvariantViolation("enumeration supports 1 to 4 patterns");
  if (sources.any_empty()) return {};
  const auto exclusives = exclusive_groups(sources);

  std::vector<EnumeratedDecomposition> out;
  // Restricted growth strings enumerate set partitions.
  std::vector<std::size_t> block_of(n, 0);
  auto next_partition = [&]() {
    for (std::size_t i = n; i-- > 1;) {
      std::size_t max_prefix = *std::max_element(block_of.begin(), block_of.begin() + static_cast<std::ptrdiff_t>(i));
      if (block_of[i] <= max_prefix) {
        ++block_of[i];
        std::fill(block_of.begin() + static_cast<std::ptrdiff_t>(i) + 1, block_of.end(), 0);
        return true;
      }
    }
    return false;
  };

  do {
    const std::size_t blocks = *std::max_element(block_of.begin(), block_of.end()) + 1;
    std::vector<std::vector<std::size_t>> members(blocks);
    for (std::size_t i = 0; i < n; ++i) members[block_of[i]].push_back(i);

    std::vector<std::vector<ServiceSet>> choices(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      ServiceSet pool;
      for (std::size_t tp : members[b]) pool.insert(sources[tp].begin(), sources[tp].end());
      std::vector<ServiceIndex> items(pool.begin(), pool.end());
      for (std::size_t mask = 1; mask < (std::size_t{1} << items.size()); ++mask) {
        ServiceSet s;
        for (std::size_t k = 0; k < items.size(); ++k) {
          if (mask & (std::size_t{1} << k)) s.insert(items[k]);
        }
        choices[b].push_back(std::move(s));
      }
    }

    std::vector<std::size_t> pick(blocks, 0);
    for (;;) {
      Decomposition d;
      for (std::size_t b = 0; b < blocks; ++b) {
        std::vector<TriplePattern> tps;
        for (std::size_t tp : members[b]) tps.push_back(bgp[tp]);
        d.entries.push_back({members[b], and_chain(tps), choices[b][pick[b]]});
      }
      EnumeratedDecomposition item{d, density(d, sources, exclusives), cost(d, languages),
                                   is_compliant(d, languages), false};
      out.push_back(std::move(item));

      std::size_t b = 0;
      while (b < blocks && ++pick[b] == choices[b].size()) pick[b++] = 0;
      if (b == blocks) break;
    }
  } while (next_partition());

  for (auto& candidate : out) {
    candidate.pareto_optimal = std::none_of(out.begin(), out.end(), [&](const auto& other) {
      return other.density >= candidate.density && other.cost <= candidate.cost &&
             (other.density > candidate.density || other.cost < candidate.cost);
    });
  }
  return out;
}

std::string explain(const Decomposition& d, const Federation& f, const SourceMap& sources) {
  const auto languages = service_languages(f);
  const auto exclusives = exclusive_groups(sources);
  const std::string dens = density(d, sources, exclusives).to_string();
  std::ostringstream out;
  for (const auto& e : d.entries) {
    out << "SE{";
    for (std::size_t k = 0; k < e.patterns.size(); ++k) out << (k ? "," : "") << e.patterns[k] + 1;
    out << "} @ {";
    bool first = true;
    for (ServiceIndex c : e.sources) {
      out << (first ? "" : ",") << f.uri(c);
      first = false;
    }
    out << "} | density=" << dens << " cost=" << entry_cost(e, languages) << "\n";
  }
  out << "total | density=" << dens << " cost=" << cost(d, languages) << "\n";
  return out.str();
}

}  // namespace ldffed
