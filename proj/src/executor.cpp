#include "ldffed/executor.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "ldffed/error.hpp"

namespace ldffed {

namespace {

std::vector<std::string> sorted_union(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::string> sorted_intersection(const std::vector<std::string>& a,
                                             const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Deadline Deadline::after(double seconds) {
  if (seconds <= 0) return {};
  return Deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(seconds)));
}

void Deadline::check() const {
  if (expired()) throw Timeout("execution deadline exceeded");
}

// ---------------------------------------------------------------------------

VectorSource::VectorSource(std::vector<std::string> vars, std::vector<SolutionMapping> rows)
    : vars_(std::move(vars)), rows_(std::move(rows)) {
  std::sort(vars_.begin(), vars_.end());
}

std::optional<SolutionMapping> VectorSource::next() {
  if (pos_ >= rows_.size()) return std::nullopt;
  return rows_[pos_++];
}

// ---------------------------------------------------------------------------

AccessOperator::AccessOperator(Expression se, ServiceSet sources, const Federation& f,
                               Deadline deadline)
    : se_(std::move(se)),
      sources_(sources.begin(), sources.end()),
      f_(f),
      deadline_(deadline),
      vars_(se_.vars()) {}

bool AccessOperator::fetch() {
  while (buffer_.empty()) {
    if (source_pos_ >= sources_.size()) return false;
    deadline_.check();
    Page page = f_.service(sources_[source_pos_]).evaluate(se_, page_.value_or(PageToken{}));
    for (auto& mu : page.mappings) {
      if (seen_.insert(mu).second) buffer_.push_back(std::move(mu));
    }
    if (page.next_page) {
      page_ = page.next_page;
    } else {
      page_.reset();
      ++source_pos_;
    }
  }
  return true;
}

std::optional<SolutionMapping> AccessOperator::next() {
  if (!fetch()) return std::nullopt;
  SolutionMapping mu = std::move(buffer_.front());
  buffer_.pop_front();
  return mu;
}

// ---------------------------------------------------------------------------

ShjOperator::ShjOperator(OperatorPtr left, OperatorPtr right)
    : left_(std::move(left)), right_(std::move(right)) {
  shared_ = sorted_intersection(left_->vars(), right_->vars());
  vars_ = sorted_union(left_->vars(), right_->vars());
}

void ShjOperator::consume(const SolutionMapping& mu, Table& own, const Table& other,
                          bool from_left) {
  SolutionMapping key = mu.project(shared_);
  auto it = other.find(key);
  if (it != other.end()) {
    for (const auto& match : it->second) {
      if (!mu.compatible(match)) continue;
      SolutionMapping joined = from_left ? mu.merged(match) : match.merged(mu);
      if (seen_.insert(joined).second) out_.push_back(std::move(joined));
    }
  }
  own[std::move(key)].push_back(mu);
}

std::optional<SolutionMapping> ShjOperator::next() {
  while (out_.empty()) {
    if (left_done_ && right_done_) return std::nullopt;
    const bool take_left = right_done_ || (pull_left_ && !left_done_);
    pull_left_ = !pull_left_;
    if (take_left) {
      auto mu = left_->next();
      if (!mu) {
        left_done_ = true;
        continue;
      }
      consume(*mu, left_table_, right_table_, true);
    } else {
      auto mu = right_->next();
      if (!mu) {
        right_done_ = true;
        continue;
      }
      consume(*mu, right_table_, left_table_, false);
    }
  }
  SolutionMapping mu = std::move(out_.front());
  out_.pop_front();
  return mu;
}

// ---------------------------------------------------------------------------

PbjOperator::PbjOperator(OperatorPtr outer, Expression inner_se, ServiceSet inner_sources,
                         const Federation& f, Deadline deadline)
    : outer_(std::move(outer)), se_(std::move(inner_se)), f_(f), deadline_(deadline) {
  const auto inner_vars = se_.vars();
  shared_ = sorted_intersection(outer_->vars(), inner_vars);
  vars_ = sorted_union(outer_->vars(), inner_vars);
  if (inner_sources.empty()) throw InvariantViolation("bind join without inner sources");
  for (ServiceIndex c : inner_sources) {
    const auto& spec = f_.spec(c);
    if (spec.kind != InterfaceKind::Sparql && !se_.is_triple()) {
      throw InvariantViolation("bind join of " + se_.to_string() + " at " + f_.uri(c) +
                               " needs a triple pattern");
    }
    reservoirs_.push_back(Reservoir{c, spec.block_size, {}, {}});
  }
}

std::vector<SolutionMapping> PbjOperator::drain(ServiceIndex c, const Expression& se) {
  std::vector<SolutionMapping> out;
  std::optional<PageToken> token = PageToken{};
  while (token) {
    deadline_.check();
    Page page = f_.service(c).evaluate(se, *token);
    ++stats_.inner_requests;
    out.insert(out.end(), std::make_move_iterator(page.mappings.begin()),
               std::make_move_iterator(page.mappings.end()));
    token = page.next_page;
  }
  return out;
}

std::vector<SolutionMapping> PbjOperator::drain_values(ServiceIndex c, const DataBlock& block) {
  std::vector<SolutionMapping> out;
  std::optional<PageToken> token = PageToken{};
  while (token) {
    deadline_.check();
    Page page = f_.service(c).values_evaluate(se_, block, *token);
    ++stats_.inner_requests;
    out.insert(out.end(), std::make_move_iterator(page.mappings.begin()),
               std::make_move_iterator(page.mappings.end()));
    token = page.next_page;
  }
  return out;
}

void PbjOperator::emit(const SolutionMapping& mu, bool& produced) {
  if (seen_.insert(mu).second) {
    out_.push_back(mu);
    produced = true;
  }
}

void PbjOperator::flush(Reservoir& r) {
  if (r.bindings.empty()) return;
  ++stats_.flushes;
  stats_.max_batch = std::max(stats_.max_batch, r.bindings.size());
  bool produced = false;

  if (f_.spec(r.service).kind == InterfaceKind::Tpf) {
    // No VALUES support: one instantiated pattern per binding.
    for (const auto& binding : r.bindings) {
      auto inner = Expression::triple(se_.pattern().instantiate(binding));
      for (const auto& mu : drain(r.service, inner)) {
        const SolutionMapping full = mu.merged(binding);
        for (const auto& outer : r.outer.at(binding)) {
          if (outer.compatible(full)) emit(outer.merged(full), produced);
        }
      }
    }
  } else {
    const auto block = DataBlock::from_mappings(shared_, r.bindings);
    for (const auto& mu : drain_values(r.service, block)) {
      auto it = r.outer.find(mu.project(shared_));
      if (it == r.outer.end()) continue;
      for (const auto& outer : it->second) {
        if (outer.compatible(mu)) emit(outer.merged(mu), produced);
      }
    }
  }

  if (produced) ++stats_.productive_flushes;
  r.bindings.clear();
  r.outer.clear();
}

void PbjOperator::add(const SolutionMapping& mu) {
  ++stats_.outer_mappings;
  SolutionMapping key = mu.project(shared_);
  for (auto& r : reservoirs_) {
    auto [it, inserted] = r.outer.try_emplace(key);
    if (inserted) r.bindings.push_back(key);
    it->second.push_back(mu);
    if (r.bindings.size() >= r.capacity) flush(r);
  }
}

std::optional<SolutionMapping> PbjOperator::next() {
  while (out_.empty()) {
    if (outer_done_) return std::nullopt;
    auto mu = outer_->next();
    if (mu) {
      add(*mu);
      continue;
    }
    outer_done_ = true;
    for (auto& r : reservoirs_) flush(r);
  }
  SolutionMapping mu = std::move(out_.front());
  out_.pop_front();
  return mu;
}

// ---------------------------------------------------------------------------

PhaseRequests& PhaseRequests::operator+=(const PhaseRequests& o) {
  source_selection += o.source_selection;
  planning += o.planning;
  execution += o.execution;
  return *this;
}

void ExecutionTrace::write_jsonl(std::ostream& out) const {
  using nlohmann::json;
  for (const auto& a : answers) {
    json answer = json::object();
    for (const auto& [var, term] : a.mapping) answer[var.substr(1)] = term.to_string();
    out << json{{"t", a.t}, {"answer", answer}}.dump() << "\n";
  }
  json summary = {
      {"requests",
       {{"source_selection", requests.source_selection},
        {"planning", requests.planning},
        {"execution", requests.execution},
        {"total", requests.total()}}},
      {"answers", answers.size()},
      {"runtime_s", runtime_s},
      {"timeout", timed_out},
      {"total_includes_source_selection", true},
  };
  out << summary.dump() << "\n";
}

OperatorPtr build_operator(const PlanNode& plan, const Federation& f, Deadline deadline,
                           std::vector<const PbjOperator*>* pbj) {
  if (plan.is_access()) {
    const auto& a = plan.access();
    return std::make_unique<AccessOperator>(a.se, a.sources, f, deadline);
  }
  const auto& j = plan.join();
  OperatorPtr left = build_operator(*j.left, f, deadline, pbj);
  if (j.op == JoinOperator::Pbj) {
    if (!j.right->is_access()) throw InvariantViolation("bind join inner side is not an access plan");
    const auto& inner = j.right->access();
    auto op = std::make_unique<PbjOperator>(std::move(left), inner.se, inner.sources, f, deadline);
    if (pbj) pbj->push_back(op.get());
    return op;
  }
  OperatorPtr right = build_operator(*j.right, f, deadline, pbj);
  return std::make_unique<ShjOperator>(std::move(left), std::move(right));
}

ExecutionResult execute(const PlanNode& plan, const Federation& f, ExecuteOptions options) {
  using Clock = std::chrono::steady_clock;
  ExecutionResult result;
  auto& trace = result.trace;
  const auto before = f.request_counts();
  const auto start = Clock::now();
  const Deadline deadline = Deadline::after(options.timeout_s);

  std::vector<const PbjOperator*> pbj;
  try {
    OperatorPtr root = build_operator(plan, f, deadline, &pbj);
    while (auto mu = root->next()) {
      const double t = std::chrono::duration<double>(Clock::now() - start).count();
      if (result.answers.insert(*mu).second) trace.answers.push_back({std::move(*mu), t});
      deadline.check();
    }
    for (const auto* op : pbj) trace.pbj.push_back(op->stats());
  } catch (const Timeout&) {
    trace.timed_out = true;
  }
  trace.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();

  const auto after = f.request_counts();
  trace.per_service.resize(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    trace.per_service[c].execution = after[c] - before[c];
    trace.requests.execution += after[c] - before[c];
  }
  return result;
}

}  // namespace ldffed
