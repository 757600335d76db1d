#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ldffed/decomposer.hpp"
#include "ldffed/federation.hpp"

namespace ldffed {

enum class JoinOperator { Shj, Pbj };

std::string_view to_string(JoinOperator op);

struct CardinalityEstimate {
  std::map<ServiceIndex, std::size_t> per_source;
  std::size_t total = 0;
};

/// Union of `se` evaluated at every service in `sources`.
struct AccessPlan {
  Expression se;
  std::vector<std::size_t> patterns;
  ServiceSet sources;
  CardinalityEstimate card;
};

struct PlanNode;
using PlanPtr = std::shared_ptr<const PlanNode>;

struct JoinPlan {
  PlanPtr left;
  PlanPtr right;
  JoinOperator op = JoinOperator::Shj;
  /// min(left, right)
  std::size_t est_card = 0;
  std::size_t r_shj = 0;
  /// Absent when the inner side is not an access plan.
  std::optional<std::size_t> r_pbj;
};

struct PlanNode {
  std::variant<AccessPlan, JoinPlan> node;

  bool is_access() const noexcept { return std::holds_alternative<AccessPlan>(node); }
  const AccessPlan& access() const { return std::get<AccessPlan>(node); }
  const JoinPlan& join() const { return std::get<JoinPlan>(node); }

  std::size_t est_card() const;
  /// Sorted variables of all leaves.
  std::vector<std::string> vars() const;
  /// Access plans left to right.
  std::vector<const AccessPlan*> leaves() const;
};

PlanPtr make_access_plan(AccessPlan access);
/// Builds a join node and fills in est_card, r_shj and r_pbj. `op` is taken
/// as given; use choose_operator for the planner's choice.
PlanPtr make_join_plan(PlanPtr left, PlanPtr right, JoinOperator op, const Federation& f);

/// card^c per source via COUNT (endpoints) or count metadata (TPF/brTPF).
/// Issues |sources| requests.
CardinalityEstimate estimate_cardinality(const Expression& se, const ServiceSet& sources,
                                         const Federation& f);

/// Sum over sources of ceil(card^c / page_size_c); a zero card still costs
/// one request.
std::size_t requests_access(const AccessPlan& t, const Federation& f);
/// Sum over inner sources of ceil(outer_card / block_size_c).
std::size_t requests_bind(std::size_t outer_card, const AccessPlan& inner, const Federation& f);

struct OperatorChoice {
  JoinOperator op = JoinOperator::Shj;
  std::size_t r_shj = 0;
  std::optional<std::size_t> r_pbj;
};

/// PBJ iff the inner side is an access plan and R_PBJ < R_SHJ.
OperatorChoice choose_operator(const PlanNode& outer, const PlanNode& inner, const Federation& f,
                               bool allow_pbj = true);

struct PlannerOptions {
  bool allow_pbj = true;
};

/// Left-deep plan over the decomposition entries, ordered by non-decreasing
/// estimated cardinality and preferring entries that share a variable with
/// the plan built so far.
PlanPtr plan(const Decomposition& d, const Federation& f, PlannerOptions options = {});

/// Indented operator tree with cards, chosen operators and request estimates.
std::string explain_plan(const PlanNode& root, const Federation& f);

}  // namespace ldffed
