#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldffed/expression.hpp"
#include "ldffed/rdf.hpp"

namespace ldffed {

enum class InterfaceKind { Tpf, BrTpf, Sparql };

/// Metadata an interface attaches to its responses. Endpoints attach none;
/// TPF and brTPF attach a match count.
enum class MetadataKind { Empty, TpfCount, BrTpfCount };

std::string_view to_string(InterfaceKind kind);
/// Accepts the manifest tags "tpf", "brtpf" and "sparql".
std::optional<InterfaceKind> parse_interface_kind(std::string_view tag);

struct InterfaceSpec {
  InterfaceKind kind = InterfaceKind::Tpf;
  InterfaceLanguage language = InterfaceLanguage::Tp;
  MetadataKind metadata = MetadataKind::TpfCount;
  /// Maximum number of mappings per response page.
  std::size_t page_size = 100;
  /// Number of bindings a bind join ships per request.
  std::size_t block_size = 1;

  static constexpr std::size_t kTpfPageSize = 100;
  static constexpr std::size_t kBrTpfPageSize = 100;
  static constexpr std::size_t kSparqlPageSize = 10000;
  static constexpr std::size_t kBrTpfBlockSize = 30;
  static constexpr std::size_t kSparqlBlockSize = 50;

  static InterfaceSpec tpf(std::size_t page_size = kTpfPageSize);
  static InterfaceSpec brtpf(std::size_t page_size = kBrTpfPageSize,
                             std::size_t block_size = kBrTpfBlockSize);
  static InterfaceSpec sparql(std::size_t page_size = kSparqlPageSize,
                              std::size_t block_size = kSparqlBlockSize);
  static InterfaceSpec defaults(InterfaceKind kind);
};

struct PageToken {
  std::size_t index = 0;
  bool operator==(const PageToken&) const = default;
};

struct Page {
  std::vector<SolutionMapping> mappings;
  /// Present iff the interface provides count metadata.
  std::optional<std::size_t> total_estimate;
  std::optional<PageToken> next_page;
};

enum class RequestKind { Evaluate, ValuesEvaluate, Count, Ask };

std::string_view to_string(RequestKind kind);

struct RequestRecord {
  RequestKind kind;
  std::string summary;
  std::size_t page = 0;
};

/// The contract the engine relies on. A remote client can implement it in
/// place of the simulator. Every call is exactly one request.
class LdfService {
 public:
  virtual ~LdfService() = default;

  virtual const std::string& uri() const = 0;
  virtual const InterfaceSpec& spec() const = 0;

  /// [[p]]_c, paged. Expressions outside the service language yield an empty
  /// page (and still cost a request).
  virtual Page evaluate(const Expression& p, PageToken page) = 0;
  /// (se VALUES block), paged. Throws InterfaceViolation on TPF services.
  virtual Page values_evaluate(const Expression& se, const DataBlock& block, PageToken page) = 0;
  /// |[[p]]|. Endpoints use COUNT; TPF/brTPF read the count metadata of a
  /// triple pattern and throw InterfaceViolation for anything else.
  virtual std::size_t count(const Expression& p) = 0;
  virtual bool ask(const TriplePattern& tp) = 0;

  virtual std::uint64_t request_count() const = 0;
  /// Requests answered through the "not in language" empty branch.
  virtual std::uint64_t polite_empty_count() const = 0;
};

/// Set-semantics evaluation of And/Union/Values/Select trees over a graph.
/// Throws NotExecutable for Optional and Filter.
MappingSet evaluate_expression(const Expression& p, const Graph& g);

/// In-process service backed by an immutable graph. Thread-safe.
class SimulatedService final : public LdfService {
 public:
  SimulatedService(std::string uri, InterfaceSpec spec, Graph graph);

  const std::string& uri() const override { return uri_; }
  const InterfaceSpec& spec() const override { return spec_; }
  const Graph& graph() const { return graph_; }

  Page evaluate(const Expression& p, PageToken page) override;
  Page values_evaluate(const Expression& se, const DataBlock& block, PageToken page) override;
  std::size_t count(const Expression& p) override;
  bool ask(const TriplePattern& tp) override;

  std::uint64_t request_count() const override { return requests_.load(); }
  std::uint64_t polite_empty_count() const override { return polite_empty_.load(); }
  std::vector<RequestRecord> request_log() const;

  /// Transforms exact counts before they are reported. Off by default.
  void set_count_noise(std::function<std::size_t(std::size_t)> noise);

 private:
  void record(RequestKind kind, std::string summary, std::size_t page);
  Page slice(std::vector<SolutionMapping> results, PageToken page) const;
  std::size_t reported_count(std::size_t exact) const;

  std::string uri_;
  InterfaceSpec spec_;
  Graph graph_;
  std::function<std::size_t(std::size_t)> count_noise_;

  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> polite_empty_{0};
  mutable std::mutex log_mutex_;
  std::vector<RequestRecord> log_;
};

}  // namespace ldffed
