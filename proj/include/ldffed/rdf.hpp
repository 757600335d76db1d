#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ldffed {

enum class TermKind : std::uint8_t { Uri, Literal, Variable };

/// An RDF term or a query variable. Blank nodes are not representable.
///
/// Lexical forms:
///   Uri      - the IRI without angle brackets
///   Literal  - the quoted N-Triples form, including any ^^ or @ suffix;
///              literals compare by this exact text
///   Variable - the name with its leading '?'
class Term {
 public:
  Term() = default;

  static Term uri(std::string iri);
  static Term literal(std::string quoted);
  /// Accepts "?x", "$x" or "x"; always stored as "?x".
  static Term variable(std::string_view name);

  TermKind kind() const noexcept { return kind_; }
  const std::string& lexical() const noexcept { return lexical_; }
  bool is_variable() const noexcept { return kind_ == TermKind::Variable; }
  bool is_constant() const noexcept { return kind_ != TermKind::Variable; }

  /// N-Triples / SPARQL surface form: <iri>, "lit", ?x.
  std::string to_string() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

 private:
  Term(TermKind kind, std::string lexical)
      : kind_(kind), lexical_(std::move(lexical)) {}

  TermKind kind_ = TermKind::Uri;
  std::string lexical_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

struct Triple {
  Term s;
  Term p;
  Term o;

  /// Validates (U) x (U) x (U u L). Throws LoadError otherwise.
  static Triple make(Term s, Term p, Term o);

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

class SolutionMapping;

struct TriplePattern {
  Term s;
  Term p;
  Term o;

  /// Validates (U u V) x (U u V) x (U u L u V). Throws LoadError otherwise.
  static TriplePattern make(Term s, Term p, Term o);

  /// Distinct variable names in s, p, o order.
  std::vector<std::string> vars() const;
  /// Replaces every variable bound by `mu`.
  TriplePattern instantiate(const SolutionMapping& mu) const;
  std::string to_string() const;

  auto operator<=>(const TriplePattern&) const = default;
  bool operator==(const TriplePattern&) const = default;
};

/// A partial function from variables to constant terms. Bindings are kept
/// sorted by variable name so that equal mappings have equal representations.
class SolutionMapping {
 public:
  using Binding = std::pair<std::string, Term>;

  SolutionMapping() = default;
  SolutionMapping(std::initializer_list<Binding> bindings);

  /// Returns false (and leaves the mapping unchanged) when `var` is already
  /// bound to a different term. Throws InvariantViolation for non-constants.
  bool bind(const std::string& var, const Term& value);
  const Term* find(std::string_view var) const;
  bool contains(std::string_view var) const { return find(var) != nullptr; }

  bool compatible(const SolutionMapping& other) const;
  /// mu1 u mu2; the caller guarantees compatibility.
  SolutionMapping merged(const SolutionMapping& other) const;
  /// Restriction to `vars` (variables not in the domain are skipped).
  SolutionMapping project(std::span<const std::string> vars) const;

  std::vector<std::string> domain() const;
  std::size_t size() const noexcept { return bindings_.size(); }
  bool empty() const noexcept { return bindings_.empty(); }
  auto begin() const noexcept { return bindings_.begin(); }
  auto end() const noexcept { return bindings_.end(); }

  std::string to_string() const;

  auto operator<=>(const SolutionMapping&) const = default;
  bool operator==(const SolutionMapping&) const = default;

 private:
  std::vector<Binding> bindings_;
};

struct SolutionMappingHash {
  std::size_t operator()(const SolutionMapping& mu) const noexcept;
};

/// Duplicate-free, canonically ordered set of solution mappings.
using MappingSet = std::set<SolutionMapping>;

/// An immutable set of RDF triples with per-position hash indexes.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::vector<Triple> triples);

  /// Triples in lexicographic (s, p, o) order.
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  bool contains(const Triple& t) const;

  /// Matching mappings in (s, p, o) order of the matched triples.
  std::vector<SolutionMapping> match(const TriplePattern& tp) const;
  std::size_t count(const TriplePattern& tp) const;

  static Graph merge(std::span<const Graph* const> graphs);

 private:
  template <typename Visitor>
  void for_each_match(const TriplePattern& tp, Visitor&& visit) const;

  using Index = std::unordered_map<Term, std::vector<std::uint32_t>, TermHash>;

  std::vector<Triple> triples_;
  Index by_s_;
  Index by_p_;
  Index by_o_;
};

/// Mappings mu with dom(mu) = vars(tp) and mu(tp) in g.
MappingSet match_pattern(const Graph& g, const TriplePattern& tp);

/// { mu1 u mu2 | mu1 in a, mu2 in b, mu1 ~ mu2 }.
MappingSet join_mappings(const MappingSet& a, const MappingSet& b);

/// Ground truth: left fold of join_mappings over match_pattern results.
/// Nested-loop on purpose; it shares no code with the engine's join paths.
MappingSet eval_bgp_oracle(const Graph& g, std::span<const TriplePattern> bgp);

/// Reads the N-Triples subset `<s> <p> <o|"lit"> .`, one triple per line.
/// '#' lines and blank lines are skipped; blank nodes are a LoadError.
Graph read_ntriples(std::istream& in, std::string_view source_name = "<input>");
Graph load_ntriples(const std::filesystem::path& path);

}  // namespace ldffed
