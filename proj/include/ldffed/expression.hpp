#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldffed/rdf.hpp"

namespace ldffed {

/// Languages of the LDF interfaces the engine knows about.
enum class InterfaceLanguage { Tp, TpValues, Bgp, CoreSparql };

std::string_view to_string(InterfaceLanguage lang);

/// A VALUES data block. Rows are positional and hold constants only.
struct DataBlock {
  std::vector<std::string> vars;
  std::vector<std::vector<Term>> rows;

  /// Validates arity and that every cell is a constant.
  static DataBlock make(std::vector<std::string> vars, std::vector<std::vector<Term>> rows);
  /// Builds a block from mappings that all share the domain `vars`.
  static DataBlock from_mappings(std::vector<std::string> vars,
                                 std::span<const SolutionMapping> mappings);

  std::vector<SolutionMapping> mappings() const;

  bool operator==(const DataBlock&) const = default;
};

enum class ExprKind { Triple, And, Union, Optional, Filter, Values, Select };

/// Immutable SPARQL expression tree. Copies share structure.
class Expression {
 public:
  static Expression triple(TriplePattern tp);
  static Expression conj(Expression left, Expression right);
  static Expression disj(Expression left, Expression right);
  static Expression optional(Expression left, Expression right);
  /// The filter condition is kept as opaque text; nothing evaluates it.
  static Expression filter(Expression child, std::string condition);
  static Expression values(Expression child, DataBlock block);
  /// `projection == nullopt` stands for SELECT *.
  static Expression select(std::optional<std::vector<std::string>> projection, Expression child);

  ExprKind kind() const noexcept;
  bool is_triple() const noexcept { return kind() == ExprKind::Triple; }

  const TriplePattern& pattern() const;
  const Expression& left() const;
  const Expression& right() const;
  /// Child of Filter, Values and Select.
  const Expression& child() const;
  const std::string& condition() const;
  const DataBlock& block() const;
  const std::optional<std::vector<std::string>>& projection() const;

  /// Sorted, distinct variables.
  std::vector<std::string> vars() const;
  /// Triple-pattern leaves in left-to-right order.
  std::vector<TriplePattern> triple_patterns() const;
  /// Compact single-line algebra form, for logs and explain output.
  std::string to_string() const;

  bool operator==(const Expression& other) const;

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Left-deep conjunction of the patterns in order. Requires a nonempty span.
Expression and_chain(std::span<const TriplePattern> patterns);

bool in_language(const Expression& p, InterfaceLanguage lang);
bool language_contained(InterfaceLanguage a, InterfaceLanguage b);

/// Parses `PREFIX ... SELECT (*|?v...) WHERE { ... }`. Group bodies may hold
/// triple patterns, nested groups, UNION, OPTIONAL, FILTER (...) and VALUES.
/// Throws SyntaxError with line and column.
Expression parse_query(std::string_view text);

/// Canonical text: full IRIs, one pattern per line, two-space indentation.
/// parse_query(pretty_print(q)) == q for every parsed query.
std::string pretty_print(const Expression& query);

/// The triple patterns of a query that is a Select over a conjunction of
/// triple patterns. Throws NotExecutable for anything else.
std::vector<TriplePattern> basic_graph_pattern(const Expression& query);

}  // namespace ldffed
