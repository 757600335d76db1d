#include "ldffed/federation.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ldffed/error.hpp"

namespace ldffed {

ServiceIndex Federation::add(std::unique_ptr<LdfService> service) {
  if (!service) throw InvariantViolation("null service");
  if (find(service->uri())) throw LoadError("duplicate service uri " + service->uri());
  if (!language_contained(InterfaceLanguage::Tp, service->spec().language)) {
    throw LoadError("service " + service->uri() + " cannot evaluate triple patterns");
  }
  services_.push_back(std::move(service));
  return services_.size() - 1;
}

SimulatedService& Federation::add_simulated(std::string uri, InterfaceSpec spec, Graph graph) {
  auto service = std::make_unique<SimulatedService>(std::move(uri), spec, std::move(graph));
  auto& ref = *service;
  add(std::move(service));
  return ref;
}

std::optional<ServiceIndex> Federation::find(std::string_view uri) const {
  for (ServiceIndex i = 0; i < services_.size(); ++i) {
    if (services_[i]->uri() == uri) return i;
  }
  return std::nullopt;
}

std::vector<std::uint64_t> Federation::request_counts() const {
  std::vector<std::uint64_t> out;
  out.reserve(services_.size());
  for (const auto& s : services_) out.push_back(s->request_count());
  return out;
}

std::uint64_t Federation::total_requests() const {
  std::uint64_t n = 0;
  for (const auto& s : services_) n += s->request_count();
  return n;
}

std::uint64_t Federation::polite_empty_total() const {
  std::uint64_t n = 0;
  for (const auto& s : services_) n += s->polite_empty_count();
  return n;
}

Graph Federation::union_graph() const {
  std::vector<const Graph*> graphs;
  for (const auto& s : services_) {
    const auto* sim = dynamic_cast<const SimulatedService*>(s.get());
    if (sim == nullptr) throw InvariantViolation("union graph needs simulated services");
    graphs.push_back(&sim->graph());
  }
  return Graph::merge(graphs);
}

Federation parse_federation(std::string_view manifest_json, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(manifest_json);
  } catch (const json::parse_error& e) {
    throw LoadError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw LoadError("manifest must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "services") throw LoadError("unknown manifest key '" + key + "'");
  }
  if (!doc.contains("services") || !doc["services"].is_array()) {
    throw LoadError("manifest needs a \"services\" array");
  }

  Federation fed;
  for (const auto& entry : doc["services"]) {
    if (!entry.is_object()) throw LoadError("service entry must be an object");
    for (const auto& [key, _] : entry.items()) {
      if (key != "uri" && key != "interface" && key != "data" && key != "page_size" &&
          key != "block_size") {
        throw LoadError("unknown service key '" + key + "'");
      }
    }
    auto string_field = [&](const char* name) {
      if (!entry.contains(name) || !entry[name].is_string()) {
        throw LoadError(std::string("service entry needs string field '") + name + "'");
      }
      return entry[name].get<std::string>();
    };
    auto size_field = [&](const char* name, std::size_t fallback) -> std::size_t {
      if (!entry.contains(name)) return fallback;
      const auto& v = entry[name];
      if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw LoadError(std::string("'") + name + "' must be a positive integer");
      }
      return v.get<std::size_t>();
    };

    std::string uri = string_field("uri");
    std::string tag = string_field("interface");
    auto kind = parse_interface_kind(tag);
    if (!kind) throw LoadError("unknown interface tag '" + tag + "' for " + uri);
    InterfaceSpec spec = InterfaceSpec::defaults(*kind);
    spec.page_size = size_field("page_size", spec.page_size);
    spec.block_size = size_field("block_size", spec.block_size);
    if (*kind == InterfaceKind::Tpf && spec.block_size != 1) {
      throw LoadError("TPF services bind one mapping per request; block_size must be 1");
    }
    std::filesystem::path data = string_field("data");
    if (data.is_relative()) data = base_dir / data;
    fed.add_simulated(std::move(uri), spec, load_ntriples(data));
  }
  return fed;
}

Federation load_federation(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw LoadError("cannot read manifest " + manifest.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_federation(buffer.str(), manifest.parent_path());
}

bool SourceMap::any_empty() const {
  for (const auto& s : relevant) {
    if (s.empty()) return true;
  }
  return false;
}

SourceMap select_sources(const Federation& f, std::span<const TriplePattern> bgp) {
  SourceMap out;
  out.relevant.resize(bgp.size());
  for (std::size_t t = 0; t < bgp.size(); ++t) {
    for (ServiceIndex c = 0; c < f.size(); ++c) {
      if (f.service(c).ask(bgp[t])) out.relevant[t].insert(c);
    }
  }
  return out;
}

}  // namespace ldffed
