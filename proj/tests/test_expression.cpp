#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "instances.hpp"
#include "ldffed/error.hpp"
#include "ldffed/expression.hpp"

namespace ldffed {
namespace {

using testing::tp;
using L = InterfaceLanguage;

Expression t(const std::string& s, const std::string& p, const std::string& o) {
  return Expression::triple(tp(s, p, o));
}

DataBlock block_x() { return DataBlock::make({"?x"}, {{testing::ex("a")}, {testing::ex("b")}}); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Parse, SinglePattern) {
  const auto q = parse_query("SELECT * WHERE { ?x <http://example.org/p> <http://example.org/o> . }");
  ASSERT_EQ(q.kind(), ExprKind::Select);
  EXPECT_FALSE(q.projection().has_value());
  EXPECT_EQ(q.child(), t("?x", "p", "o"));
}

TEST(Parse, ExampleQueryWithPrefixesIsAnAndChain) {
  const auto q = parse_query(read_file(testing::fixture("prefixed_query.rq")));
  const auto bgp = basic_graph_pattern(q);
  ASSERT_EQ(bgp.size(), 5u);
  const auto wdt = [](const std::string& local) {
    return Term::uri("http://www.wikidata.org/prop/direct/" + local);
  };
  EXPECT_EQ(bgp[0], TriplePattern::make(Term::variable("x"), wdt("P39"),
                                        Term::uri("http://www.wikidata.org/entity/Q11696")));
  EXPECT_EQ(bgp[1], TriplePattern::make(Term::variable("x"), wdt("P102"), Term::variable("party")));
  EXPECT_EQ(bgp[2].p, Term::uri("http://www.w3.org/2002/07/owl#sameAs"));
  EXPECT_EQ(bgp[4].p, Term::uri("http://dbpedia.org/ontology/successor"));
  EXPECT_EQ(q.child(), and_chain(bgp));
  // Left-deep: the outermost right operand is the last pattern.
  EXPECT_EQ(q.child().right(), Expression::triple(bgp[4]));
}

TEST(Parse, EmptyGroupIsASyntaxError) {
  try {
    parse_query("SELECT * WHERE { }");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Parse, ErrorsCarryLineAndColumn) {
  try {
    parse_query("SELECT * WHERE {\n  ?x <http://p> .\n}");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_query("SELECT * WHERE { ?x undeclared:p ?y . }"), SyntaxError);
  EXPECT_THROW(parse_query("SELECT * WHERE { ?x <http://p> ?y . "), SyntaxError);
  EXPECT_THROW(parse_query("ASK { ?x <http://p> ?y }"), SyntaxError);
}

TEST(Parse, RdfTypeShorthand) {
  const auto q = parse_query("SELECT * WHERE { ?x a <http://example.org/C> }");
  EXPECT_EQ(q.child().pattern().p, Term::uri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"));
}

TEST(Parse, ProjectionAndLiterals) {
  const auto q = parse_query(
      "PREFIX ex: <http://example.org/>\n"
      "SELECT ?x ?n WHERE { ?x ex:label \"Bob\"@en . ?x ex:age \"4\"^^<http://www.w3.org/2001/XMLSchema#int> . ?x ex:name ?n }");
  ASSERT_TRUE(q.projection().has_value());
  EXPECT_EQ(*q.projection(), (std::vector<std::string>{"?x", "?n"}));
  const auto bgp = basic_graph_pattern(q);
  EXPECT_EQ(bgp[0].o, Term::literal("\"Bob\"@en"));
  EXPECT_EQ(bgp[1].o, Term::literal("\"4\"^^<http://www.w3.org/2001/XMLSchema#int>"));
}

TEST(Parse, OptionalFilterUnionValuesBuildTheirNodes) {
  const auto q = parse_query(
      "PREFIX : <http://example.org/>\n"
      "SELECT * WHERE {\n"
      "  { ?x :p ?y } UNION { ?x :q ?y }\n"
      "  OPTIONAL { ?y :r ?z }\n"
      "  FILTER (?z < 3 && (?y != :a))\n"
      "  VALUES ?x { :a :b }\n"
      "}");
  const Expression& body = q.child();
  ASSERT_EQ(body.kind(), ExprKind::Filter);
  EXPECT_EQ(body.condition(), "?z < 3 && (?y != :a)");
  ASSERT_EQ(body.child().kind(), ExprKind::Values);
  EXPECT_EQ(body.child().block(), block_x());
  ASSERT_EQ(body.child().child().kind(), ExprKind::Optional);
  EXPECT_EQ(body.child().child().left().kind(), ExprKind::Union);
  EXPECT_THROW(basic_graph_pattern(q), NotExecutable);
}

TEST(Vars, ConjunctionUnionsVariables) {
  const auto e = Expression::conj(t("?x", "p", "?y"), t("?y", "q", "?z"));
  EXPECT_EQ(e.vars(), (std::vector<std::string>{"?x", "?y", "?z"}));
  EXPECT_EQ(e.triple_patterns().size(), 2u);
}

TEST(InLanguage, TriplePatternIsEverywhere) {
  for (L lang : {L::Tp, L::TpValues, L::Bgp, L::CoreSparql}) {
    EXPECT_TRUE(in_language(t("?x", "p", "o"), lang));
  }
}

TEST(InLanguage, ConjunctionIsNotATriplePattern) {
  const auto e = Expression::conj(t("?x", "p", "?y"), t("?x", "q", "?z"));
  EXPECT_FALSE(in_language(e, L::Tp));
  EXPECT_TRUE(in_language(e, L::Bgp));
  EXPECT_FALSE(in_language(e, L::TpValues));
  EXPECT_TRUE(in_language(e, L::CoreSparql));
}

TEST(InLanguage, ValuesOverTriplePattern) {
  const auto v = Expression::values(t("?x", "p", "?y"), block_x());
  EXPECT_TRUE(in_language(v, L::TpValues));
  EXPECT_FALSE(in_language(v, L::Bgp));
  EXPECT_FALSE(in_language(v, L::Tp));
  const auto over_bgp =
      Expression::values(Expression::conj(t("?x", "p", "?y"), t("?x", "q", "?z")), block_x());
  EXPECT_FALSE(in_language(over_bgp, L::TpValues));
  EXPECT_TRUE(in_language(over_bgp, L::CoreSparql));
}

TEST(LanguageContained, KnownPairs) {
  EXPECT_TRUE(language_contained(L::Tp, L::Bgp));
  EXPECT_TRUE(language_contained(L::Tp, L::TpValues));
  EXPECT_TRUE(language_contained(L::Bgp, L::CoreSparql));
  EXPECT_TRUE(language_contained(L::TpValues, L::CoreSparql));
  EXPECT_FALSE(language_contained(L::Bgp, L::TpValues));
  EXPECT_FALSE(language_contained(L::TpValues, L::Bgp));
  EXPECT_FALSE(language_contained(L::CoreSparql, L::Bgp));
  for (L a : {L::Tp, L::TpValues, L::Bgp, L::CoreSparql}) EXPECT_TRUE(language_contained(a, a));
}

// Every expression up to depth three over two leaf patterns.
std::vector<Expression> all_expressions(int depth) {
  std::vector<Expression> out = {t("?x", "p", "?y"), t("?y", "q", "?z")};
  if (depth <= 1) return out;
  const auto smaller = all_expressions(depth - 1);
  for (const auto& a : smaller) {
    out.push_back(Expression::filter(a, "?x != ?y"));
    out.push_back(Expression::values(a, block_x()));
    out.push_back(Expression::select(std::nullopt, a));
    for (const auto& b : smaller) {
      out.push_back(Expression::conj(a, b));
      out.push_back(Expression::disj(a, b));
      out.push_back(Expression::optional(a, b));
    }
  }
  return out;
}

TEST(LanguageContainedProperty, ContainmentImpliesMembership) {
  const auto exprs = all_expressions(3);
  ASSERT_GT(exprs.size(), 1000u);
  const std::vector<L> langs = {L::Tp, L::TpValues, L::Bgp, L::CoreSparql};
  for (L a : langs) {
    for (L b : langs) {
      bool counterexample = false;
      for (const auto& e : exprs) {
        if (in_language(e, a) && !in_language(e, b)) {
          counterexample = true;
          if (language_contained(a, b)) FAIL() << to_string(a) << " in " << to_string(b) << ": " << e.to_string();
        }
      }
      // Non-containment is witnessed within the generated space.
      EXPECT_EQ(language_contained(a, b), !counterexample) << to_string(a) << " vs " << to_string(b);
    }
  }
}

// ---------------------------------------------------------------------------

Expression random_body(std::mt19937_64& rng, int depth) {
  static const std::vector<std::string> vars = {"?a", "?b", "?c"};
  std::uniform_int_distribution<int> kind(0, depth <= 1 ? 0 : 6);
  std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
  std::uniform_int_distribution<int> n(0, 3);
  switch (kind(rng)) {
    case 0:
    case 1:
      return t(vars[v(rng)], "p" + std::to_string(n(rng)),
               n(rng) == 0 ? "\"lit " + std::to_string(n(rng)) + "\"" : vars[v(rng)]);
    case 2:
      return Expression::conj(random_body(rng, depth - 1), random_body(rng, depth - 1));
    case 3:
      return Expression::disj(random_body(rng, depth - 1), random_body(rng, depth - 1));
    case 4:
      return Expression::optional(random_body(rng, depth - 1), random_body(rng, depth - 1));
    case 5:
      return Expression::filter(random_body(rng, depth - 1),
                                "?a != \"x)\" || (?b < " + std::to_string(n(rng)) + ")");
    default:
      return Expression::values(
          random_body(rng, depth - 1),
          DataBlock::make({"?a", "?b"}, {{testing::ex("u"), Term::literal("\"1\"")},
                                         {testing::ex("v"), testing::ex("w")}}));
  }
}

TEST(PrettyPrintProperty, ParsePrintParseIsAFixedPoint) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 500; ++round) {
    const auto q = Expression::select(std::nullopt, random_body(rng, 1 + round % 4));
    const std::string text = pretty_print(q);
    Expression reparsed = parse_query(text);
    ASSERT_EQ(reparsed, q) << text;
    ASSERT_EQ(pretty_print(reparsed), text);
  }
}

TEST(PrettyPrint, CanonicalLayout) {
  const auto q = parse_query("PREFIX : <http://example.org/> SELECT ?x WHERE {?x :p ?y.?y :q :o}");
  EXPECT_EQ(pretty_print(q),
            "SELECT ?x WHERE {\n"
            "  ?x <http://example.org/p> ?y .\n"
            "  ?y <http://example.org/q> <http://example.org/o> .\n"
            "}\n");
}

TEST(DataBlock, RejectsArityMismatchAndVariables) {
  EXPECT_THROW(DataBlock::make({"?x"}, {{testing::ex("a"), testing::ex("b")}}), LoadError);
  EXPECT_THROW(DataBlock::make({"?x"}, {{Term::variable("y")}}), LoadError);
  EXPECT_THROW(parse_query("SELECT * WHERE { ?x <http://p> ?y VALUES (?x ?y) { (<http://a>) } }"),
               SyntaxError);
}

}  // namespace
}  // namespace ldffed
