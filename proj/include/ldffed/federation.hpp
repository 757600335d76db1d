#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldffed/rdf.hpp"
#include "ldffed/service.hpp"

namespace ldffed {

/// Position of a service in its federation (manifest order).
using ServiceIndex = std::size_t;
using ServiceSet = std::set<ServiceIndex>;

/// An ordered set of LDF services with distinct URIs, each able to evaluate
/// triple patterns.
class Federation {
 public:
  Federation() = default;
  Federation(Federation&&) noexcept = default;
  Federation& operator=(Federation&&) noexcept = default;

  /// Throws LoadError on a duplicate URI.
  ServiceIndex add(std::unique_ptr<LdfService> service);
  SimulatedService& add_simulated(std::string uri, InterfaceSpec spec, Graph graph);

  std::size_t size() const noexcept { return services_.size(); }
  LdfService& service(ServiceIndex i) const { return *services_.at(i); }
  const std::string& uri(ServiceIndex i) const { return services_.at(i)->uri(); }
  const InterfaceSpec& spec(ServiceIndex i) const { return services_.at(i)->spec(); }
  std::optional<ServiceIndex> find(std::string_view uri) const;

  std::vector<std::uint64_t> request_counts() const;
  std::uint64_t total_requests() const;
  std::uint64_t polite_empty_total() const;

  /// Union of ep(c) over all services. Only available when every service is
  /// simulated; reads the graphs directly without issuing requests.
  Graph union_graph() const;

 private:
  std::vector<std::unique_ptr<LdfService>> services_;
};

/// Loads `{"services":[{"uri","interface","data","page_size"?,"block_size"?}]}`.
/// Data paths are resolved relative to the manifest's directory.
Federation load_federation(const std::filesystem::path& manifest);
Federation parse_federation(std::string_view manifest_json, const std::filesystem::path& base_dir);

/// r(tp) for every pattern of a BGP.
struct SourceMap {
  std::vector<ServiceSet> relevant;

  std::size_t size() const noexcept { return relevant.size(); }
  const ServiceSet& operator[](std::size_t tp) const { return relevant.at(tp); }
  /// True when some pattern has no relevant source; the BGP answer is then empty.
  bool any_empty() const;
};

/// Probes every service with every pattern (one ASK or count request each).
SourceMap select_sources(const Federation& f, std::span<const TriplePattern> bgp);

}  // namespace ldffed
