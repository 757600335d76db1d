#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ldffed/error.hpp"
#include "ldffed/federation.hpp"
#include "ldffed/planner.hpp"

namespace ldffed {

/// Thrown by operators once the deadline has passed; execute() catches it.
class Timeout : public Error {
 public:
  using Error::Error;
};

class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(Clock::time_point at) : at_(at) {}
  static Deadline after(double seconds);

  bool expired() const { return at_ && Clock::now() >= *at_; }
  void check() const;

 private:
  std::optional<Clock::time_point> at_;
};

/// Single-consumer pull stream of solution mappings.
class Operator {
 public:
  virtual ~Operator() = default;
  virtual std::optional<SolutionMapping> next() = 0;
  /// Variables bound in every produced mapping, sorted.
  virtual const std::vector<std::string>& vars() const = 0;
};

using OperatorPtr = std::unique_ptr<Operator>;

/// Replays a fixed list; used to feed operators in tests.
class VectorSource final : public Operator {
 public:
  VectorSource(std::vector<std::string> vars, std::vector<SolutionMapping> rows);
  std::optional<SolutionMapping> next() override;
  const std::vector<std::string>& vars() const override { return vars_; }

 private:
  std::vector<std::string> vars_;
  std::vector<SolutionMapping> rows_;
  std::size_t pos_ = 0;
};

/// Drains every page of `se` at each source in turn, deduplicating across
/// sources.
class AccessOperator final : public Operator {
 public:
  AccessOperator(Expression se, ServiceSet sources, const Federation& f, Deadline deadline = {});
  std::optional<SolutionMapping> next() override;
  const std::vector<std::string>& vars() const override { return vars_; }

 private:
  bool fetch();

  Expression se_;
  std::vector<ServiceIndex> sources_;
  const Federation& f_;
  Deadline deadline_;
  std::vector<std::string> vars_;

  std::size_t source_pos_ = 0;
  std::optional<PageToken> page_;
  std::deque<SolutionMapping> buffer_;
  std::unordered_set<SolutionMapping, SolutionMappingHash> seen_;
};

/// Symmetric hash join on the shared variables (cartesian product when there
/// are none). Pulls left and right alternately.
class ShjOperator final : public Operator {
 public:
  ShjOperator(OperatorPtr left, OperatorPtr right);
  std::optional<SolutionMapping> next() override;
  const std::vector<std::string>& vars() const override { return vars_; }

 private:
  using Table = std::unordered_map<SolutionMapping, std::vector<SolutionMapping>, SolutionMappingHash>;

  void consume(const SolutionMapping& mu, Table& own, const Table& other, bool from_left);

  OperatorPtr left_;
  OperatorPtr right_;
  std::vector<std::string> shared_;
  std::vector<std::string> vars_;
  bool left_done_ = false;
  bool right_done_ = false;
  bool pull_left_ = true;
  Table left_table_;
  Table right_table_;
  std::deque<SolutionMapping> out_;
  std::unordered_set<SolutionMapping, SolutionMappingHash> seen_;
};

struct PbjStats {
  std::size_t outer_mappings = 0;
  std::size_t flushes = 0;
  /// Flushes that produced at least one new answer.
  std::size_t productive_flushes = 0;
  std::size_t max_batch = 0;
  std::size_t inner_requests = 0;
};

/// Polymorphic bind join: one reservoir of distinct projected bindings per
/// inner service, flushed at that service's block size and at end of outer.
class PbjOperator final : public Operator {
 public:
  PbjOperator(OperatorPtr outer, Expression inner_se, ServiceSet inner_sources,
              const Federation& f, Deadline deadline = {});
  std::optional<SolutionMapping> next() override;
  const std::vector<std::string>& vars() const override { return vars_; }
  const PbjStats& stats() const noexcept { return stats_; }

 private:
  struct Reservoir {
    ServiceIndex service;
    std::size_t capacity;
    std::vector<SolutionMapping> bindings;
    std::unordered_map<SolutionMapping, std::vector<SolutionMapping>, SolutionMappingHash> outer;
  };

  void add(const SolutionMapping& mu);
  void flush(Reservoir& r);
  std::vector<SolutionMapping> drain(ServiceIndex c, const Expression& se);
  std::vector<SolutionMapping> drain_values(ServiceIndex c, const DataBlock& block);
  void emit(const SolutionMapping& mu, bool& produced);

  OperatorPtr outer_;
  Expression se_;
  const Federation& f_;
  Deadline deadline_;
  std::vector<std::string> shared_;
  std::vector<std::string> vars_;
  std::vector<Reservoir> reservoirs_;
  bool outer_done_ = false;
  std::deque<SolutionMapping> out_;
  std::unordered_set<SolutionMapping, SolutionMappingHash> seen_;
  PbjStats stats_;
};

struct PhaseRequests {
  std::uint64_t source_selection = 0;
  std::uint64_t planning = 0;
  std::uint64_t execution = 0;

  std::uint64_t total() const noexcept { return source_selection + planning + execution; }
  PhaseRequests& operator+=(const PhaseRequests& o);
};

struct TimedAnswer {
  SolutionMapping mapping;
  double t = 0;
};

struct ExecutionTrace {
  std::vector<TimedAnswer> answers;
  /// Indexed by ServiceIndex.
  std::vector<PhaseRequests> per_service;
  PhaseRequests requests;
  /// Wall clock of the execution phase only.
  double runtime_s = 0;
  bool timed_out = false;
  /// One entry per PBJ operator, bottom-up.
  std::vector<PbjStats> pbj;

  void write_jsonl(std::ostream& out) const;
};

struct ExecutionResult {
  MappingSet answers;
  ExecutionTrace trace;
};

struct ExecuteOptions {
  /// Non-positive means no limit.
  double timeout_s = 0;
};

/// Evaluates the plan with pull-based operators. Fills the execution-phase
/// request counts of the trace; the other phases are left at zero.
ExecutionResult execute(const PlanNode& plan, const Federation& f, ExecuteOptions options = {});

/// The operator tree for a plan. `pbj` receives pointers to the PBJ
/// operators so their statistics can be read after draining.
OperatorPtr build_operator(const PlanNode& plan, const Federation& f, Deadline deadline,
                           std::vector<const PbjOperator*>* pbj = nullptr);

}  // namespace ldffed
