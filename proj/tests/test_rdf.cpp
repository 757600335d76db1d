#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "instances.hpp"
#include "ldffed/error.hpp"
#include "ldffed/rdf.hpp"

namespace ldffed {
namespace {

using testing::ex;
using testing::tp;
using testing::triple;

SolutionMapping mu(std::initializer_list<std::pair<const char*, const char*>> bindings) {
  SolutionMapping out;
  for (const auto& [var, local] : bindings) out.bind(Term::variable(var).lexical(), ex(local));
  return out;
}

TEST(Term, VariablesAreNormalizedToQuestionMark) {
  EXPECT_EQ(Term::variable("x").lexical(), "?x");
  EXPECT_EQ(Term::variable("$x").lexical(), "?x");
  EXPECT_EQ(Term::variable("?x").lexical(), "?x");
  EXPECT_TRUE(Term::variable("x").is_variable());
  EXPECT_TRUE(ex("a").is_constant());
  EXPECT_TRUE(Term::literal("\"a\"").is_constant());
}

TEST(Term, TriplesRejectVariablesAndMisplacedLiterals) {
  EXPECT_THROW(Triple::make(Term::variable("x"), ex("p"), ex("o")), LoadError);
  EXPECT_THROW(Triple::make(Term::literal("\"s\""), ex("p"), ex("o")), LoadError);
  EXPECT_THROW(Triple::make(ex("s"), Term::literal("\"p\""), ex("o")), LoadError);
  EXPECT_NO_THROW(Triple::make(ex("s"), ex("p"), Term::literal("\"o\"")));
  EXPECT_THROW(TriplePattern::make(Term::literal("\"s\""), ex("p"), ex("o")), LoadError);
  EXPECT_NO_THROW(TriplePattern::make(Term::variable("s"), Term::variable("p"), Term::variable("o")));
}

TEST(SolutionMapping, BindRefusesConflicts) {
  SolutionMapping m;
  EXPECT_TRUE(m.bind("?x", ex("a")));
  EXPECT_TRUE(m.bind("?x", ex("a")));
  EXPECT_FALSE(m.bind("?x", ex("b")));
  EXPECT_EQ(*m.find("?x"), ex("a"));
  EXPECT_THROW(m.bind("?y", Term::variable("z")), InvariantViolation);
}

TEST(SolutionMapping, CompatibilityAndMerge) {
  const auto a = mu({{"x", "1"}});
  const auto b = mu({{"x", "1"}, {"y", "2"}});
  const auto c = mu({{"x", "2"}});
  EXPECT_TRUE(a.compatible(b));
  EXPECT_FALSE(a.compatible(c));
  EXPECT_EQ(a.merged(b), b);
  EXPECT_TRUE(SolutionMapping{}.compatible(c));
  const std::vector<std::string> keep = {"?y"};
  EXPECT_EQ(b.project(keep), mu({{"y", "2"}}));
}

TEST(MatchPattern, SingleMatchingTriple) {
  const Graph g({triple("a", "p", "b")});
  EXPECT_EQ(match_pattern(g, tp("?x", "p", "?y")), MappingSet{mu({{"x", "a"}, {"y", "b"}})});
}

TEST(MatchPattern, NoPredicateMatch) {
  const Graph g({triple("a", "p", "b")});
  EXPECT_TRUE(match_pattern(g, tp("?x", "q", "?y")).empty());
}

TEST(MatchPattern, PresidentInFirstExampleGraph) {
  EXPECT_EQ(match_pattern(testing::fex4_c1(), tp("?x", "position", "president")),
            MappingSet{mu({{"x", "p1"}})});
}

TEST(MatchPattern, RepeatedVariableMustBindConsistently) {
  const Graph g({triple("a", "p", "a"), triple("a", "p", "b")});
  EXPECT_EQ(match_pattern(g, tp("?x", "p", "?x")), MappingSet{mu({{"x", "a"}})});
}

TEST(JoinMappings, CompatiblePair) {
  EXPECT_EQ(join_mappings({mu({{"x", "1"}})}, {mu({{"x", "1"}, {"y", "2"}})}),
            MappingSet{mu({{"x", "1"}, {"y", "2"}})});
}

TEST(JoinMappings, ConflictingBinding) {
  EXPECT_TRUE(join_mappings({mu({{"x", "1"}})}, {mu({{"x", "2"}})}).empty());
}

TEST(JoinMappings, EmptyMappingIsIdentity) {
  EXPECT_EQ(join_mappings({SolutionMapping{}}, {mu({{"y", "2"}})}), MappingSet{mu({{"y", "2"}})});
}

TEST(Oracle, RunningExampleHasOneAnswer) {
  const Graph c1 = testing::fex4_c1();
  const Graph c2 = testing::fex4_c2();
  const Graph* parts[] = {&c1, &c2};
  const Graph g = Graph::merge(parts);
  EXPECT_EQ(g.size(), 4u);  // the sameAs triple is shared
  const auto bgp = testing::fex4_bgp();
  EXPECT_EQ(eval_bgp_oracle(g, bgp),
            MappingSet{mu({{"x", "p1"}, {"party", "dems"}, {"y", "y1"}, {"predecessor", "p0"}})});
}

TEST(Oracle, EmptyFactorAnnihilates) {
  const Graph g({triple("a", "p", "b"), triple("b", "p", "c")});
  const std::vector<TriplePattern> bgp = {tp("?x", "p", "?y"), tp("?y", "nothing", "?z")};
  EXPECT_TRUE(eval_bgp_oracle(g, bgp).empty());
}

TEST(Oracle, PathWithoutSecondHop) {
  const Graph g({triple("a", "p", "b")});
  const std::vector<TriplePattern> bgp = {tp("?x", "p", "?y"), tp("?y", "p", "?z")};
  EXPECT_TRUE(eval_bgp_oracle(g, bgp).empty());
}

// ---------------------------------------------------------------------------

Graph random_graph(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> e(0, 5);
  std::uniform_int_distribution<int> p(0, 2);
  std::vector<Triple> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(triple("e" + std::to_string(e(rng)), "p" + std::to_string(p(rng)),
                         "e" + std::to_string(e(rng))));
  }
  return Graph(out);
}

TriplePattern random_pattern(std::mt19937_64& rng) {
  static const std::vector<std::string> vars = {"?a", "?b", "?c"};
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<int> e(0, 5);
  std::uniform_int_distribution<int> pred(0, 2);
  std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
  auto s = coin(rng) ? vars[v(rng)] : "e" + std::to_string(e(rng));
  auto p = coin(rng) == 0 ? vars[v(rng)] : "p" + std::to_string(pred(rng));
  auto o = coin(rng) ? vars[v(rng)] : "e" + std::to_string(e(rng));
  return tp(s, p, o);
}

TEST(MatchPatternProperty, EveryMappingInstantiatesToAGraphTriple) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    const Graph g = random_graph(rng, 30);
    const TriplePattern pattern = random_pattern(rng);
    auto expected_domain = pattern.vars();
    std::sort(expected_domain.begin(), expected_domain.end());
    for (const auto& m : match_pattern(g, pattern)) {
      const TriplePattern inst = pattern.instantiate(m);
      ASSERT_TRUE(g.contains(Triple::make(inst.s, inst.p, inst.o)));
      ASSERT_EQ(m.domain(), expected_domain);
    }
    // Brute force over the triples gives the same count.
    std::size_t brute = 0;
    for (const auto& t : g.triples()) {
      const Graph single({t});
      brute += single.count(pattern);
    }
    ASSERT_EQ(match_pattern(g, pattern).size(), brute);
  }
}

TEST(OracleProperty, InvariantUnderPatternPermutation) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    const Graph g = random_graph(rng, 25);
    std::vector<TriplePattern> bgp;
    const std::size_t n = 2 + round % 3;
    for (std::size_t i = 0; i < n; ++i) bgp.push_back(random_pattern(rng));
    const auto reference = eval_bgp_oracle(g, bgp);
    std::sort(bgp.begin(), bgp.end());
    do {
      ASSERT_EQ(eval_bgp_oracle(g, bgp), reference);
    } while (std::next_permutation(bgp.begin(), bgp.end()));
  }
}

TEST(JoinProperty, EmptyMappingSetIdentity) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 100; ++round) {
    const Graph g = random_graph(rng, 20);
    const auto a = match_pattern(g, random_pattern(rng));
    EXPECT_EQ(join_mappings(a, {SolutionMapping{}}), a);
    EXPECT_EQ(join_mappings({SolutionMapping{}}, a), a);
  }
}

// ---------------------------------------------------------------------------

TEST(NTriples, ReadsUrisLiteralsAndSkipsComments) {
  std::istringstream in(
      "# comment\n"
      "\n"
      "<http://a> <http://p> <http://b> .\n"
      "<http://a> <http://p> \"x y\" .\n"
      "<http://a> <http://p> \"chat\"@fr .\n"
      "<http://a> <http://p> \"1\"^^<http://www.w3.org/2001/XMLSchema#int> .\n"
      "<http://a> <http://p> <http://b> .\n");
  const Graph g = read_ntriples(in);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_TRUE(g.contains(Triple::make(Term::uri("http://a"), Term::uri("http://p"),
                                      Term::literal("\"chat\"@fr"))));
}

TEST(NTriples, BlankNodesAreALoadError) {
  std::istringstream in("_:b1 <http://p> <http://b> .\n");
  EXPECT_THROW(read_ntriples(in), LoadError);
  std::istringstream in2("<http://a> <http://p> _:b2 .\n");
  EXPECT_THROW(read_ntriples(in2), LoadError);
}

TEST(NTriples, MalformedLineIsALoadError) {
  std::istringstream in("<http://a> <http://p> .\n");
  EXPECT_THROW(read_ntriples(in), LoadError);
  std::istringstream missing_dot("<http://a> <http://p> <http://b>\n");
  EXPECT_THROW(read_ntriples(missing_dot), LoadError);
}

TEST(NTriples, MissingFileIsALoadError) {
  EXPECT_THROW(load_ntriples(testing::fixture("does-not-exist.nt")), LoadError);
}

TEST(NTriples, FixtureFilesLoad) {
  EXPECT_EQ(load_ntriples(testing::fixture("fex4/c1.nt")).triples(), testing::fex4_c1().triples());
  EXPECT_EQ(load_ntriples(testing::fixture("fex4/c2.nt")).triples(), testing::fex4_c2().triples());
}

}  // namespace
}  // namespace ldffed
