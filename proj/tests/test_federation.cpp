#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "ldffed/error.hpp"
#include "ldffed/federation.hpp"

namespace ldffed {
namespace {

using testing::tp;

const std::string kC1 = "http://c1.example.org/";
const std::string kC2 = "http://c2.example.org/";

TEST(LoadFederation, RunningExampleManifest) {
  const Federation f = load_federation(testing::fixture("fex4/fex4.json"));
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.uri(0), kC1);
  EXPECT_EQ(f.spec(0).kind, InterfaceKind::Sparql);
  EXPECT_EQ(f.spec(0).language, InterfaceLanguage::CoreSparql);
  EXPECT_EQ(f.spec(0).metadata, MetadataKind::Empty);
  EXPECT_EQ(f.spec(1).kind, InterfaceKind::Tpf);
  EXPECT_EQ(f.spec(1).page_size, 100u);
  EXPECT_EQ(f.union_graph().size(), 4u);
}

TEST(LoadFederation, SwappedInterfacesDifferOnlyInSpecs) {
  const Federation f1 = load_federation(testing::fixture("fex4/f1.json"));
  const Federation f2 = load_federation(testing::fixture("fex4/f2.json"));
  ASSERT_EQ(f1.size(), f2.size());
  EXPECT_EQ(f1.spec(0).kind, InterfaceKind::Sparql);
  EXPECT_EQ(f1.spec(1).kind, InterfaceKind::Sparql);
  EXPECT_EQ(f2.spec(0).kind, InterfaceKind::Tpf);
  EXPECT_EQ(f2.spec(1).kind, InterfaceKind::Sparql);
  for (ServiceIndex c = 0; c < f1.size(); ++c) {
    EXPECT_EQ(f1.uri(c), f2.uri(c));
    EXPECT_EQ(dynamic_cast<SimulatedService&>(f1.service(c)).graph().triples(),
              dynamic_cast<SimulatedService&>(f2.service(c)).graph().triples());
  }
}

std::string entry(const std::string& uri, const std::string& iface, const std::string& extra = "") {
  return R"({"uri":")" + uri + R"(","interface":")" + iface + R"(","data":"fex4/c1.nt")" + extra +
         "}";
}

Federation parse(const std::string& services) {
  return parse_federation(R"({"services":[)" + services + "]}", testing::fixture_dir());
}

TEST(ParseFederation, OverridesAndDefaults) {
  const Federation f = parse(entry("a", "brtpf", R"(,"page_size":7)") + "," +
                             entry("b", "sparql", R"(,"block_size":3)"));
  EXPECT_EQ(f.spec(0).page_size, 7u);
  EXPECT_EQ(f.spec(0).block_size, 30u);
  EXPECT_EQ(f.spec(1).page_size, 10000u);
  EXPECT_EQ(f.spec(1).block_size, 3u);
}

TEST(ParseFederation, Errors) {
  EXPECT_THROW(parse(entry("a", "tpf") + "," + entry("a", "sparql")), LoadError);
  EXPECT_THROW(parse(entry("a", "hdt")), LoadError);
  EXPECT_THROW(parse(entry("a", "tpf", R"(,"colour":"red")")), LoadError);
  EXPECT_THROW(parse(entry("a", "tpf", R"(,"page_size":0)")), LoadError);
  EXPECT_THROW(parse(entry("a", "tpf", R"(,"block_size":5)")), LoadError);
  EXPECT_THROW(parse(R"({"uri":"a","interface":"tpf","data":"missing.nt"})"), LoadError);
  EXPECT_THROW(parse_federation(R"({"services":[],"extra":1})", testing::fixture_dir()), LoadError);
  EXPECT_THROW(parse_federation("not json", testing::fixture_dir()), LoadError);
  EXPECT_THROW(load_federation(testing::fixture("nope.json")), LoadError);
}

TEST(Federation, DuplicateUriViaAdd) {
  Federation f;
  f.add_simulated("u", InterfaceSpec::tpf(), Graph{});
  EXPECT_THROW(f.add_simulated("u", InterfaceSpec::sparql(), Graph{}), LoadError);
  EXPECT_EQ(f.find("u"), ServiceIndex{0});
  EXPECT_FALSE(f.find("v").has_value());
}

TEST(SelectSources, RunningExample) {
  Federation f = testing::fex4_federation(InterfaceSpec::sparql(), InterfaceSpec::tpf());
  const auto bgp = testing::fex4_bgp();
  const SourceMap r = select_sources(f, bgp);
  EXPECT_EQ(r[0], (ServiceSet{0}));
  EXPECT_EQ(r[1], (ServiceSet{0}));
  EXPECT_EQ(r[2], (ServiceSet{0, 1}));
  EXPECT_EQ(r[3], (ServiceSet{1}));
  EXPECT_FALSE(r.any_empty());
  EXPECT_EQ(f.total_requests(), 8u);
}

TEST(SelectSources, PatternMatchingNothing) {
  Federation f = testing::fex4_federation(InterfaceSpec::sparql(), InterfaceSpec::tpf());
  const std::vector<TriplePattern> bgp = {tp("?x", "position", "president"),
                                          tp("?x", "unknown", "?z")};
  const SourceMap r = select_sources(f, bgp);
  EXPECT_TRUE(r[1].empty());
  EXPECT_TRUE(r.any_empty());
}

TEST(SelectSourcesProperty, RelevanceMatchesNonEmptyEvaluation) {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 200; ++round) {
    auto inst = testing::random_instance(rng);
    const auto before = inst.federation.total_requests();
    const SourceMap r = select_sources(inst.federation, inst.bgp);
    ASSERT_EQ(inst.federation.total_requests() - before, inst.federation.size() * inst.bgp.size());
    for (std::size_t t = 0; t < inst.bgp.size(); ++t) {
      for (ServiceIndex c = 0; c < inst.federation.size(); ++c) {
        const auto& g = dynamic_cast<SimulatedService&>(inst.federation.service(c)).graph();
        ASSERT_EQ(r[t].contains(c), g.count(inst.bgp[t]) > 0) << inst.description;
      }
    }
    ASSERT_EQ(select_sources(inst.federation, inst.bgp).relevant, r.relevant);
  }
}

}  // namespace
}  // namespace ldffed
