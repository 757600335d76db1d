#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ldffed/federation.hpp"
#include "ldffed/rdf.hpp"

namespace ldffed::testing {

std::filesystem::path fixture_dir();
std::filesystem::path fixture(const std::string& relative);

Term ex(const std::string& local);
TriplePattern tp(const std::string& s, const std::string& p, const std::string& o);
Triple triple(const std::string& s, const std::string& p, const std::string& o);

/// The running example: G_c1, G_c2 and the four-pattern BGP.
Graph fex4_c1();
Graph fex4_c2();
std::vector<TriplePattern> fex4_bgp();
/// `c1` and `c2` select the interfaces of the two services.
Federation fex4_federation(InterfaceSpec c1, InterfaceSpec c2);

struct RandomInstance {
  Federation federation;
  std::vector<TriplePattern> bgp;
  std::string description;
};

struct RandomInstanceOptions {
  std::size_t max_services = 3;
  std::size_t max_triples = 50;
  std::size_t min_patterns = 2;
  std::size_t max_patterns = 4;
  /// Draw page and block sizes small enough to exercise paging and batching.
  bool small_pages = true;
};

/// Random federation and BGP in which every pattern has a relevant source.
RandomInstance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& options = {});

/// Deterministic five-service federation: two endpoints, two TPF servers and
/// one brTPF server over about two thousand triples of linked entity data.
Federation synthetic_federation();
/// Ten star and path queries over the synthetic federation.
std::vector<std::vector<TriplePattern>> synthetic_queries();

}  // namespace ldffed::testing
