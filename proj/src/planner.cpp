#include "ldffed/planner.hpp"

#include <algorithm>
#include <sstream>

#include "ldffed/error.hpp"

namespace ldffed {

std::string_view to_string(JoinOperator op) {
  return op == JoinOperator::Pbj ? "PBJ" : "SHJ";
}

std::size_t PlanNode::est_card() const {
  return is_access() ? access().card.total : join().est_card;
}

std::vector<std::string> PlanNode::vars() const {
  std::vector<std::string> out;
  for (const AccessPlan* leaf : leaves()) {
    auto v = leaf->se.vars();
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<const AccessPlan*> PlanNode::leaves() const {
  if (is_access()) return {&access()};
  auto out = join().left->leaves();
  auto right = join().right->leaves();
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

bool shares_variable(const std::vector<std::string>& sorted_a, const std::vector<std::string>& b) {
  return std::any_of(b.begin(), b.end(), [&](const std::string& v) {
    return std::binary_search(sorted_a.begin(), sorted_a.end(), v);
  });
}

}  // namespace

CardinalityEstimate estimate_cardinality(const Expression& se, const ServiceSet& sources,
                                         const Federation& f) {
  CardinalityEstimate out;
  for (ServiceIndex c : sources) {
    const std::size_t n = f.service(c).count(se);
    out.per_source[c] = n;
    out.total += n;
  }
  return out;
}

std::size_t requests_access(const AccessPlan& t, const Federation& f) {
  std::size_t total = 0;
  for (ServiceIndex c : t.sources) {
    auto it = t.card.per_source.find(c);
    const std::size_t card = it == t.card.per_source.end() ? 0 : it->second;
    total += std::max<std::size_t>(1, ceil_div(card, f.spec(c).page_size));
  }
  return total;
}

std::size_t requests_bind(std::size_t outer_card, const AccessPlan& inner, const Federation& f) {
  std::size_t total = 0;
  for (ServiceIndex c : inner.sources) total += ceil_div(outer_card, f.spec(c).block_size);
  return total;
}

OperatorChoice choose_operator(const PlanNode& outer, const PlanNode& inner, const Federation& f,
                               bool allow_pbj) {
  OperatorChoice out;
  const std::size_t acc_outer = outer.is_access() ? requests_access(outer.access(), f) : 0;
  const std::size_t acc_inner = inner.is_access() ? requests_access(inner.access(), f) : 0;
  out.r_shj = acc_outer + acc_inner;
  if (!inner.is_access()) return out;
  out.r_pbj = acc_outer + requests_bind(outer.est_card(), inner.access(), f);
  if (allow_pbj && *out.r_pbj < out.r_shj) out.op = JoinOperator::Pbj;
  return out;
}

PlanPtr make_access_plan(AccessPlan access) {
  return std::make_shared<const PlanNode>(PlanNode{std::move(access)});
}

PlanPtr make_join_plan(PlanPtr left, PlanPtr right, JoinOperator op, const Federation& f) {
  if (!left || !right) throw InvariantViolation("join plan with a missing input");
  if (op == JoinOperator::Pbj && !right->is_access()) {
    throw InvariantViolation("bind join needs an access plan as inner input");
  }
  const auto choice = choose_operator(*left, *right, f, true);
  JoinPlan j;
  j.est_card = std::min(left->est_card(), right->est_card());
  j.r_shj = choice.r_shj;
  j.r_pbj = choice.r_pbj;
  j.op = op;
  j.left = std::move(left);
  j.right = std::move(right);
  return std::make_shared<const PlanNode>(PlanNode{std::move(j)});
}

PlanPtr plan(const Decomposition& d, const Federation& f, PlannerOptions options) {
  if (d.entries.empty()) throw InvariantViolation("cannot plan an empty decomposition");

  std::vector<AccessPlan> pending;
  for (const auto& e : d.entries) {
    pending.push_back({e.se, e.patterns, e.sources, estimate_cardinality(e.se, e.sources, f)});
  }
  std::stable_sort(pending.begin(), pending.end(), [](const AccessPlan& a, const AccessPlan& b) {
    return a.card.total < b.card.total;
  });

  PlanPtr tree = make_access_plan(std::move(pending.front()));
  pending.erase(pending.begin());
  while (!pending.empty()) {
    const auto bound = tree->vars();
    auto pick = std::find_if(pending.begin(), pending.end(), [&](const AccessPlan& a) {
      return shares_variable(bound, a.se.vars());
    });
    // Cartesian product: no remaining entry shares a variable.
    if (pick == pending.end()) pick = pending.begin();
    PlanPtr inner = make_access_plan(std::move(*pick));
    pending.erase(pick);

    const auto choice = choose_operator(*tree, *inner, f, options.allow_pbj);
    tree = make_join_plan(std::move(tree), std::move(inner), choice.op, f);
  }
  return tree;
}

namespace {

void explain_node(const PlanNode& node, const Federation& f, int depth, std::ostringstream& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  if (node.is_access()) {
    const auto& a = node.access();
    out << indent << "Access " << a.se.to_string() << " @ {";
    bool first = true;
    for (ServiceIndex c : a.sources) {
      out << (first ? "" : ", ") << f.uri(c) << ":" << a.card.per_source.at(c);
      first = false;
    }
    out << "} card=" << a.card.total << " requests=" << requests_access(a, f) << "\n";
    return;
  }
  const auto& j = node.join();
  out << indent << to_string(j.op) << " card=" << j.est_card << " R_SHJ=" << j.r_shj;
  if (j.r_pbj) out << " R_PBJ=" << *j.r_pbj;
  out << "\n";
  explain_node(*j.left, f, depth + 1, out);
  explain_node(*j.right, f, depth + 1, out);
}

}  // namespace

std::string explain_plan(const PlanNode& root, const Federation& f) {
  std::ostringstream out;
  explain_node(root, f, 0, out);
  return out.str();
}

}  // namespace ldffed
