#include "ldffed/service.hpp"

#include <algorithm>
#include <unordered_map>

#include "ldffed/error.hpp"

namespace ldffed {

std::string_view to_string(InterfaceKind kind) {
  switch (kind) {
    case InterfaceKind::Tpf:
      return "tpf";
    case InterfaceKind::BrTpf:
      return "brtpf";
    case InterfaceKind::Sparql:
      return "sparql";
  }
  return "?";
}

std::optional<InterfaceKind> parse_interface_kind(std::string_view tag) {
  if (tag == "tpf") return InterfaceKind::Tpf;
  if (tag == "brtpf") return InterfaceKind::BrTpf;
  if (tag == "sparql") return InterfaceKind::Sparql;
  return std::nullopt;
}

std::string_view to_string(RequestKind kind) {
  switch (kind) {
    case RequestKind::Evaluate:
      return "evaluate";
    case RequestKind::ValuesEvaluate:
      return "values";
    case RequestKind::Count:
      return "count";
    case RequestKind::Ask:
      return "ask";
  }
  return "?";
}

InterfaceSpec InterfaceSpec::tpf(std::size_t page_size) {
  return {InterfaceKind::Tpf, InterfaceLanguage::Tp, MetadataKind::TpfCount, page_size, 1};
}

InterfaceSpec InterfaceSpec::brtpf(std::size_t page_size, std::size_t block_size) {
  return {InterfaceKind::BrTpf, InterfaceLanguage::TpValues, MetadataKind::BrTpfCount, page_size,
          block_size};
}

InterfaceSpec InterfaceSpec::sparql(std::size_t page_size, std::size_t block_size) {
  return {InterfaceKind::Sparql, InterfaceLanguage::CoreSparql, MetadataKind::Empty, page_size,
          block_size};
}

InterfaceSpec InterfaceSpec::defaults(InterfaceKind kind) {
  switch (kind) {
    case InterfaceKind::Tpf:
      return tpf();
    case InterfaceKind::BrTpf:
      return brtpf();
    case InterfaceKind::Sparql:
      return sparql();
  }
  return tpf();
}

// ---------------------------------------------------------------------------

namespace {

// Variables bound in every mapping of the set.
std::vector<std::string> certain_vars(const MappingSet& s) {
  if (s.empty()) return {};
  std::vector<std::string> acc = s.begin()->domain();
  for (const auto& mu : s) {
    std::erase_if(acc, [&](const std::string& v) { return !mu.contains(v); });
    if (acc.empty()) break;
  }
  return acc;
}

MappingSet hash_join(const MappingSet& a, const MappingSet& b) {
  MappingSet out;
  if (a.empty() || b.empty()) return out;
  auto va = certain_vars(a);
  auto vb = certain_vars(b);
  std::vector<std::string> key_vars;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(key_vars));

  const MappingSet& build = a.size() <= b.size() ? a : b;
  const MappingSet& probe = a.size() <= b.size() ? b : a;
  std::unordered_map<SolutionMapping, std::vector<const SolutionMapping*>, SolutionMappingHash>
      table;
  for (const auto& mu : build) table[mu.project(key_vars)].push_back(&mu);
  for (const auto& mu : probe) {
    auto it = table.find(mu.project(key_vars));
    if (it == table.end()) continue;
    for (const SolutionMapping* other : it->second) {
      if (mu.compatible(*other)) out.insert(mu.merged(*other));
    }
  }
  return out;
}

MappingSet values_of(const Expression& child, const DataBlock& block, const Graph& g) {
  MappingSet out;
  if (child.is_triple()) {
    for (const auto& row : block.mappings()) {
      for (auto& mu : g.match(child.pattern().instantiate(row))) {
        if (mu.compatible(row)) out.insert(mu.merged(row));
      }
    }
    return out;
  }
  auto rows = block.mappings();
  return hash_join(evaluate_expression(child, g), MappingSet(rows.begin(), rows.end()));
}

std::vector<SolutionMapping> canonical_results(const Expression& p, const Graph& g) {
  if (p.is_triple()) return g.match(p.pattern());
  auto set = evaluate_expression(p, g);
  return {set.begin(), set.end()};
}

}  // namespace

MappingSet evaluate_expression(const Expression& p, const Graph& g) {
  switch (p.kind()) {
    case ExprKind::Triple:
      return match_pattern(g, p.pattern());
    case ExprKind::And:
      return hash_join(evaluate_expression(p.left(), g), evaluate_expression(p.right(), g));
    case ExprKind::Union: {
      auto out = evaluate_expression(p.left(), g);
      out.merge(evaluate_expression(p.right(), g));
      return out;
    }
    case ExprKind::Values:
      return values_of(p.child(), p.block(), g);
    case ExprKind::Select: {
      auto inner = evaluate_expression(p.child(), g);
      if (!p.projection()) return inner;
      MappingSet out;
      for (const auto& mu : inner) out.insert(mu.project(*p.projection()));
      return out;
    }
    case ExprKind::Optional:
    case ExprKind::Filter:
      throw NotExecutable("OPTIONAL and FILTER are not executable: " + p.to_string());
  }
  return {};
}

// ---------------------------------------------------------------------------

SimulatedService::SimulatedService(std::string uri, InterfaceSpec spec, Graph graph)
    : uri_(std::move(uri)), spec_(spec), graph_(std::move(graph)) {
  if (spec_.page_size == 0) throw LoadError("page_size must be positive for " + uri_);
  if (spec_.block_size == 0) throw LoadError("block_size must be positive for " + uri_);
}

void SimulatedService::record(RequestKind kind, std::string summary, std::size_t page) {
  ++requests_;
  std::lock_guard lock(log_mutex_);
  log_.push_back(RequestRecord{kind, std::move(summary), page});
}

std::vector<RequestRecord> SimulatedService::request_log() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

void SimulatedService::set_count_noise(std::function<std::size_t(std::size_t)> noise) {
  count_noise_ = std::move(noise);
}

std::size_t SimulatedService::reported_count(std::size_t exact) const {
  return count_noise_ ? count_noise_(exact) : exact;
}

Page SimulatedService::slice(std::vector<SolutionMapping> results, PageToken page) const {
  const std::size_t total = results.size();
  const std::size_t pages = std::max<std::size_t>(1, (total + spec_.page_size - 1) / spec_.page_size);
  if (page.index >= pages) {
    throw InvalidPageToken(uri_ + ": page " + std::to_string(page.index) + " of " +
                           std::to_string(pages));
  }
  Page out;
  const std::size_t begin = page.index * spec_.page_size;
  const std::size_t end = std::min(total, begin + spec_.page_size);
  out.mappings.assign(std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(begin)),
                      std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(end)));
  if (spec_.metadata != MetadataKind::Empty) out.total_estimate = reported_count(total);
  if (page.index + 1 < pages) out.next_page = PageToken{page.index + 1};
  return out;
}

Page SimulatedService::evaluate(const Expression& p, PageToken page) {
  record(RequestKind::Evaluate, p.to_string(), page.index);
  if (!in_language(p, spec_.language)) {
    ++polite_empty_;
    Page empty;
    if (spec_.metadata != MetadataKind::Empty) empty.total_estimate = 0;
    return empty;
  }
  return slice(canonical_results(p, graph_), page);
}

Page SimulatedService::values_evaluate(const Expression& se, const DataBlock& block,
                                       PageToken page) {
  record(RequestKind::ValuesEvaluate,
         se.to_string() + " VALUES[" + std::to_string(block.rows.size()) + "]", page.index);
  if (spec_.language == InterfaceLanguage::Tp || spec_.language == InterfaceLanguage::Bgp) {
    throw InterfaceViolation(uri_ + " (" + std::string(to_string(spec_.kind)) +
                             ") does not accept VALUES blocks");
  }
  Expression request = Expression::values(se, block);
  if (!in_language(request, spec_.language)) {
    ++polite_empty_;
    Page empty;
    if (spec_.metadata != MetadataKind::Empty) empty.total_estimate = 0;
    return empty;
  }
  auto set = values_of(se, block, graph_);
  return slice(std::vector<SolutionMapping>(set.begin(), set.end()), page);
}

std::size_t SimulatedService::count(const Expression& p) {
  record(RequestKind::Count, p.to_string(), 0);
  if (spec_.kind != InterfaceKind::Sparql) {
    if (!p.is_triple()) {
      throw InterfaceViolation(uri_ + ": count metadata exists only for triple patterns");
    }
    return reported_count(graph_.count(p.pattern()));
  }
  if (p.is_triple()) return reported_count(graph_.count(p.pattern()));
  return reported_count(evaluate_expression(p, graph_).size());
}

bool SimulatedService::ask(const TriplePattern& tp) {
  record(RequestKind::Ask, tp.to_string(), 0);
  return graph_.count(tp) > 0;
}

}  // namespace ldffed
