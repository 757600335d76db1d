#include "ldffed/expression.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "ldffed/error.hpp"

namespace ldffed {

std::string_view to_string(InterfaceLanguage lang) {
  switch (lang) {
    case InterfaceLanguage::Tp:
      return "TP";
    case InterfaceLanguage::TpValues:
      return "TP+VALUES";
    case InterfaceLanguage::Bgp:
      return "BGP";
    case InterfaceLanguage::CoreSparql:
      return "CORE_SPARQL";
  }
  return "?";
}

DataBlock DataBlock::make(std::vector<std::string> vars, std::vector<std::vector<Term>> rows) {
  for (auto& v : vars) v = Term::variable(v).lexical();
  for (const auto& row : rows) {
    if (row.size() != vars.size()) {
      throw LoadError("VALUES row has " + std::to_string(row.size()) + " entries, expected " +
                      std::to_string(vars.size()));
    }
    for (const auto& cell : row) {
      if (!cell.is_constant()) throw LoadError("VALUES rows must hold constants");
    }
  }
  return DataBlock{std::move(vars), std::move(rows)};
}

DataBlock DataBlock::from_mappings(std::vector<std::string> vars,
                                   std::span<const SolutionMapping> mappings) {
  std::vector<std::vector<Term>> rows;
  rows.reserve(mappings.size());
  for (const auto& mu : mappings) {
    std::vector<Term> row;
    row.reserve(vars.size());
    for (const auto& v : vars) {
      const Term* t = mu.find(v);
      if (t == nullptr) throw InvariantViolation("binding for " + v + " missing in VALUES row");
      row.push_back(*t);
    }
    rows.push_back(std::move(row));
  }
  return make(std::move(vars), std::move(rows));
}

std::vector<SolutionMapping> DataBlock::mappings() const {
  std::vector<SolutionMapping> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    SolutionMapping mu;
    bool ok = true;
    for (std::size_t i = 0; i < vars.size(); ++i) ok = ok && mu.bind(vars[i], row[i]);
    if (ok) out.push_back(std::move(mu));
  }
  return out;
}

struct Expression::Node {
  struct Binary {
    Expression left;
    Expression right;
  };
  struct Filtered {
    Expression child;
    std::string condition;
  };
  struct WithValues {
    Expression child;
    DataBlock block;
  };
  struct Projected {
    std::optional<std::vector<std::string>> projection;
    Expression child;
  };

  ExprKind kind;
  std::variant<TriplePattern, Binary, Filtered, WithValues, Projected> data;
};

Expression Expression::triple(TriplePattern tp) {
  return Expression(std::make_shared<const Node>(Node{ExprKind::Triple, std::move(tp)}));
}

Expression Expression::conj(Expression left, Expression right) {
  return Expression(std::make_shared<const Node>(
      Node{ExprKind::And, Node::Binary{std::move(left), std::move(right)}}));
}

Expression Expression::disj(Expression left, Expression right) {
  return Expression(std::make_shared<const Node>(
      Node{ExprKind::Union, Node::Binary{std::move(left), std::move(right)}}));
}

Expression Expression::optional(Expression left, Expression right) {
  return Expression(std::make_shared<const Node>(
      Node{ExprKind::Optional, Node::Binary{std::move(left), std::move(right)}}));
}

Expression Expression::filter(Expression child, std::string condition) {
  return Expression(std::make_shared<const Node>(
      Node{ExprKind::Filter, Node::Filtered{std::move(child), std::move(condition)}}));
}

Expression Expression::values(Expression child, DataBlock block) {
  return Expression(std::make_shared<const Node>(
      Node{ExprKind::Values, Node::WithValues{std::move(child), std::move(block)}}));
}

Expression Expression::select(std::optional<std::vector<std::string>> projection,
                              Expression child) {
  if (projection) {
    for (auto& v : *projection) v = Term::variable(v).lexical();
  }
  return Expression(std::make_shared<const Node>(
      Node{ExprKind::Select, Node::Projected{std::move(projection), std::move(child)}}));
}

ExprKind Expression::kind() const noexcept { return node_->kind; }

const TriplePattern& Expression::pattern() const {
  if (kind() != ExprKind::Triple) throw InvariantViolation("expression is not a triple pattern");
  return std::get<TriplePattern>(node_->data);
}

const Expression& Expression::left() const {
  const auto* b = std::get_if<Node::Binary>(&node_->data);
  if (b == nullptr) throw InvariantViolation("expression has no left operand");
  return b->left;
}

const Expression& Expression::right() const {
  const auto* b = std::get_if<Node::Binary>(&node_->data);
  if (b == nullptr) throw InvariantViolation("expression has no right operand");
  return b->right;
}

const Expression& Expression::child() const {
  if (const auto* f = std::get_if<Node::Filtered>(&node_->data)) return f->child;
  if (const auto* v = std::get_if<Node::WithValues>(&node_->data)) return v->child;
  if (const auto* s = std::get_if<Node::Projected>(&node_->data)) return s->child;
  throw InvariantViolation("expression has no single child");
}

const std::string& Expression::condition() const {
  const auto* f = std::get_if<Node::Filtered>(&node_->data);
  if (f == nullptr) throw InvariantViolation("expression is not a filter");
  return f->condition;
}

const DataBlock& Expression::block() const {
  const auto* v = std::get_if<Node::WithValues>(&node_->data);
  if (v == nullptr) throw InvariantViolation("expression is not a values expression");
  return v->block;
}

const std::optional<std::vector<std::string>>& Expression::projection() const {
  const auto* s = std::get_if<Node::Projected>(&node_->data);
  if (s == nullptr) throw InvariantViolation("expression is not a select");
  return s->projection;
}

namespace {

void collect_vars(const Expression& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::Triple:
      for (auto& v : e.pattern().vars()) out.insert(std::move(v));
      return;
    case ExprKind::And:
    case ExprKind::Union:
    case ExprKind::Optional:
      collect_vars(e.left(), out);
      collect_vars(e.right(), out);
      return;
    case ExprKind::Filter:
      collect_vars(e.child(), out);
      return;
    case ExprKind::Values:
      collect_vars(e.child(), out);
      out.insert(e.block().vars.begin(), e.block().vars.end());
      return;
    case ExprKind::Select:
      if (e.projection()) {
        out.insert(e.projection()->begin(), e.projection()->end());
      } else {
        collect_vars(e.child(), out);
      }
      return;
  }
}

void collect_patterns(const Expression& e, std::vector<TriplePattern>& out) {
  switch (e.kind()) {
    case ExprKind::Triple:
      out.push_back(e.pattern());
      return;
    case ExprKind::And:
    case ExprKind::Union:
    case ExprKind::Optional:
      collect_patterns(e.left(), out);
      collect_patterns(e.right(), out);
      return;
    case ExprKind::Filter:
    case ExprKind::Values:
    case ExprKind::Select:
      collect_patterns(e.child(), out);
      return;
  }
}

std::string block_to_string(const DataBlock& block) {
  std::string out = "(";
  for (std::size_t i = 0; i < block.vars.size(); ++i) {
    if (i > 0) out += " ";
    out += block.vars[i];
  }
  out += ") {";
  for (const auto& row : block.rows) {
    out += " (";
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += " ";
      out += row[i].to_string();
    }
    out += ")";
  }
  return out + " }";
}

}  // namespace

std::vector<std::string> Expression::vars() const {
  std::set<std::string> acc;
  collect_vars(*this, acc);
  return {acc.begin(), acc.end()};
}

std::vector<TriplePattern> Expression::triple_patterns() const {
  std::vector<TriplePattern> out;
  collect_patterns(*this, out);
  return out;
}

std::string Expression::to_string() const {
  switch (kind()) {
    case ExprKind::Triple:
      return "(" + pattern().to_string() + ")";
    case ExprKind::And:
      return "(" + left().to_string() + " AND " + right().to_string() + ")";
    case ExprKind::Union:
      return "(" + left().to_string() + " UNION " + right().to_string() + ")";
    case ExprKind::Optional:
      return "(" + left().to_string() + " OPT " + right().to_string() + ")";
    case ExprKind::Filter:
      return "(" + child().to_string() + " FILTER (" + condition() + "))";
    case ExprKind::Values:
      return "(" + child().to_string() + " VALUES " + block_to_string(block()) + ")";
    case ExprKind::Select: {
      std::string head = "SELECT";
      if (projection()) {
        for (const auto& v : *projection()) head += " " + v;
      } else {
        head += " *";
      }
      return head + " " + child().to_string();
    }
  }
  return "?";
}

bool Expression::operator==(const Expression& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case ExprKind::Triple:
      return pattern() == other.pattern();
    case ExprKind::And:
    case ExprKind::Union:
    case ExprKind::Optional:
      return left() == other.left() && right() == other.right();
    case ExprKind::Filter:
      return condition() == other.condition() && child() == other.child();
    case ExprKind::Values:
      return block() == other.block() && child() == other.child();
    case ExprKind::Select:
      return projection() == other.projection() && child() == other.child();
  }
  return false;
}

Expression and_chain(std::span<const TriplePattern> patterns) {
  if (patterns.empty()) throw InvariantViolation("and_chain over zero patterns");
  Expression acc = Expression::triple(patterns.front());
  for (std::size_t i = 1; i < patterns.size(); ++i) {
    acc = Expression::conj(std::move(acc), Expression::triple(patterns[i]));
  }
  return acc;
}

namespace {

bool is_conjunctive(const Expression& p) {
  if (p.kind() == ExprKind::Triple) return true;
  if (p.kind() == ExprKind::And) return is_conjunctive(p.left()) && is_conjunctive(p.right());
  return false;
}

}  // namespace

bool in_language(const Expression& p, InterfaceLanguage lang) {
  switch (lang) {
    case InterfaceLanguage::Tp:
      return p.kind() == ExprKind::Triple;
    case InterfaceLanguage::TpValues:
      return p.kind() == ExprKind::Triple ||
             (p.kind() == ExprKind::Values && p.child().kind() == ExprKind::Triple);
    case InterfaceLanguage::Bgp:
      return is_conjunctive(p);
    case InterfaceLanguage::CoreSparql:
      return true;
  }
  return false;
}

bool language_contained(InterfaceLanguage a, InterfaceLanguage b) {
  using L = InterfaceLanguage;
  if (a == b || b == L::CoreSparql) return true;
  if (a == L::Tp) return b == L::Bgp || b == L::TpValues;
  return false;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

enum class Tok { Iri, PName, Var, Literal, Word, Punct, Condition, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      if (pos_ >= src_.size()) {
        out.push_back(Token{Tok::End, "", line_, col_, pos_});
        return out;
      }
      out.push_back(next());
      if (out.back().kind == Tok::Word && upper(out.back().text) == "FILTER") {
        skip_space_and_comments();
        out.push_back(condition());
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line_, col_); }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  // Raw text of a balanced '( ... )' following FILTER, without the outer
  // parentheses and surrounding whitespace.
  Token condition() {
    Token tok{Tok::Condition, "", line_, col_, pos_};
    if (pos_ >= src_.size() || src_[pos_] != '(') fail("expected '(' after FILTER");
    int depth = 0;
    std::size_t start = pos_ + 1;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '"') {
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"') {
          if (src_[pos_] == '\\') advance();
          advance();
        }
      } else if (c == '(') {
        ++depth;
      } else if (c == ')') {
        if (--depth == 0) break;
      }
      advance();
    }
    if (pos_ >= src_.size()) fail("unbalanced FILTER condition");
    std::string text(src_.substr(start, pos_ - start));
    advance();
    auto first = text.find_first_not_of(" \t\r\n");
    auto last = text.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) fail("empty FILTER condition");
    tok.text = text.substr(first, last - first + 1);
    return tok;
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           static_cast<unsigned char>(c) >= 0x80;
  }

  Token next() {
    Token tok{Tok::Punct, "", line_, col_, pos_};
    char c = src_[pos_];
    if (c == '<') {
      auto close = src_.find('>', pos_);
      if (close == std::string_view::npos) fail("unterminated IRI");
      tok.kind = Tok::Iri;
      tok.text = std::string(src_.substr(pos_ + 1, close - pos_ - 1));
      advance(close - pos_ + 1);
      return tok;
    }
    if (c == '?' || c == '$') {
      std::size_t i = pos_ + 1;
      while (i < src_.size() && name_char(src_[i])) ++i;
      if (i == pos_ + 1) fail("empty variable name");
      tok.kind = Tok::Var;
      tok.text = "?" + std::string(src_.substr(pos_ + 1, i - pos_ - 1));
      advance(i - pos_);
      return tok;
    }
    if (c == '"') {
      std::size_t i = pos_ + 1;
      while (i < src_.size() && src_[i] != '"') {
        if (src_[i] == '\\') ++i;
        if (i < src_.size() && src_[i] == '\n') fail("newline in literal");
        ++i;
      }
      if (i >= src_.size()) fail("unterminated literal");
      ++i;
      if (i < src_.size() && src_[i] == '@') {
        ++i;
        while (i < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '-')) ++i;
      } else if (src_.substr(i, 3) == "^^<") {
        auto close = src_.find('>', i);
        if (close == std::string_view::npos) fail("unterminated datatype IRI");
        i = close + 1;
      }
      tok.kind = Tok::Literal;
      tok.text = std::string(src_.substr(pos_, i - pos_));
      advance(i - pos_);
      return tok;
    }
    if (std::string_view("{}().*,;").find(c) != std::string_view::npos) {
      tok.text = std::string(1, c);
      advance();
      return tok;
    }
    if (name_char(c) || c == ':') {
      std::size_t i = pos_;
      while (i < src_.size() && (name_char(src_[i]) || src_[i] == ':' || src_[i] == '.')) ++i;
      // A trailing '.' terminates the pattern, it is not part of the name.
      while (i > pos_ && src_[i - 1] == '.') --i;
      std::string word(src_.substr(pos_, i - pos_));
      tok.kind = word.find(':') != std::string::npos ? Tok::PName : Tok::Word;
      tok.text = std::move(word);
      advance(i - pos_);
      return tok;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> toks) : src_(src), toks_(std::move(toks)) {}

  Expression query() {
    while (is_word("PREFIX")) prefix_decl();
    expect_word("SELECT");
    std::optional<std::vector<std::string>> projection;
    if (is_punct("*")) {
      ++pos_;
    } else {
      projection.emplace();
      while (peek().kind == Tok::Var) projection->push_back(take().text);
      if (projection->empty()) fail("expected '*' or variables after SELECT");
    }
    if (is_word("WHERE")) ++pos_;
    Expression body = group();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return Expression::select(std::move(projection), std::move(body));
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw SyntaxError(msg + (t.kind == Tok::End ? " (at end of input)" : " near '" + t.text + "'"),
                      t.line, t.column);
  }

  bool is_word(std::string_view kw) const {
    return peek().kind == Tok::Word && upper(peek().text) == kw;
  }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  void expect_word(std::string_view kw) {
    if (!is_word(kw)) fail("expected " + std::string(kw));
    ++pos_;
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
    ++pos_;
  }

  void prefix_decl() {
    ++pos_;
    if (peek().kind != Tok::PName || peek().text.back() != ':') fail("expected prefix name");
    std::string name = take().text;
    name.pop_back();
    if (peek().kind != Tok::Iri) fail("expected IRI in PREFIX");
    prefixes_[name] = take().text;
  }

  Term term(bool allow_literal) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Iri:
        ++pos_;
        return Term::uri(t.text);
      case Tok::PName: {
        auto colon = t.text.find(':');
        auto it = prefixes_.find(t.text.substr(0, colon));
        if (it == prefixes_.end()) fail("undeclared prefix");
        ++pos_;
        return Term::uri(it->second + t.text.substr(colon + 1));
      }
      case Tok::Var:
        ++pos_;
        return Term::variable(t.text);
      case Tok::Literal:
        if (!allow_literal) fail("literal not allowed here");
        ++pos_;
        return Term::literal(t.text);
      case Tok::Word:
        if (t.text == "a") {
          ++pos_;
          return Term::uri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
        }
        [[fallthrough]];
      default:
        fail("expected RDF term");
    }
  }

  Expression triple_pattern() {
    Term s = term(false);
    Term p = term(false);
    Term o = term(true);
    if (is_punct(".")) ++pos_;
    return Expression::triple(TriplePattern::make(std::move(s), std::move(p), std::move(o)));
  }

  Expression group() {
    expect_punct("{");
    std::optional<Expression> current;
    std::vector<std::string> filters;
    auto join = [&](Expression e) {
      current = current ? Expression::conj(std::move(*current), std::move(e)) : std::move(e);
    };
    while (!is_punct("}")) {
      if (peek().kind == Tok::End) fail("unterminated group");
      if (is_punct("{")) {
        Expression g = group();
        while (is_word("UNION")) {
          ++pos_;
          g = Expression::disj(std::move(g), group());
        }
        if (is_punct(".")) ++pos_;
        join(std::move(g));
      } else if (is_word("OPTIONAL")) {
        if (!current) fail("OPTIONAL needs a preceding pattern");
        ++pos_;
        current = Expression::optional(std::move(*current), group());
      } else if (is_word("FILTER")) {
        ++pos_;
        filters.push_back(filter_condition());
      } else if (is_word("VALUES")) {
        if (!current) fail("VALUES needs a preceding pattern");
        ++pos_;
        current = Expression::values(std::move(*current), data_block());
      } else if (is_word("UNION")) {
        fail("UNION must follow a group");
      } else {
        join(triple_pattern());
      }
    }
    if (!current) fail("empty group pattern");
    ++pos_;
    for (auto& f : filters) current = Expression::filter(std::move(*current), std::move(f));
    return std::move(*current);
  }

  std::string filter_condition() {
    if (peek().kind != Tok::Condition) fail("expected FILTER condition");
    return take().text;
  }

  DataBlock data_block() {
    std::vector<std::string> vars;
    std::vector<std::vector<Term>> rows;
    if (peek().kind == Tok::Var) {
      vars.push_back(take().text);
      expect_punct("{");
      while (!is_punct("}")) rows.push_back({value_term()});
      ++pos_;
    } else {
      expect_punct("(");
      while (peek().kind == Tok::Var) vars.push_back(take().text);
      expect_punct(")");
      expect_punct("{");
      while (!is_punct("}")) {
        expect_punct("(");
        std::vector<Term> row;
        while (!is_punct(")")) row.push_back(value_term());
        ++pos_;
        if (row.size() != vars.size()) fail("VALUES row arity mismatch");
        rows.push_back(std::move(row));
      }
      ++pos_;
    }
    return DataBlock::make(std::move(vars), std::move(rows));
  }

  Term value_term() {
    if (peek().kind == Tok::Var) fail("VALUES rows must hold constants");
    if (is_word("UNDEF")) fail("UNDEF is not supported in VALUES");
    return term(true);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> prefixes_;
};

// ---------------------------------------------------------------------------
// Pretty printer

class Printer {
 public:
  std::string query(const Expression& q) {
    if (q.kind() != ExprKind::Select) throw InvariantViolation("pretty_print expects a query");
    out_ << "SELECT";
    if (q.projection()) {
      for (const auto& v : *q.projection()) out_ << " " << v;
    } else {
      out_ << " *";
    }
    out_ << " WHERE {\n";
    body(q.child(), 1);
    out_ << "}\n";
    return out_.str();
  }

 private:
  void line(int depth, const std::string& text) {
    out_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << text << "\n";
  }

  void nested(const Expression& e, int depth) {
    line(depth, "{");
    body(e, depth + 1);
    line(depth, "}");
  }

  // Left operands are printed inline unless they end in a FILTER, which the
  // parser would otherwise hoist to the enclosing group.
  void left_body(const Expression& e, int depth) {
    if (e.kind() == ExprKind::Filter) {
      nested(e, depth);
    } else {
      body(e, depth);
    }
  }

  void body(const Expression& e, int depth) {
    switch (e.kind()) {
      case ExprKind::Triple:
        line(depth, e.pattern().to_string() + " .");
        return;
      case ExprKind::And:
        left_body(e.left(), depth);
        element(e.right(), depth);
        return;
      case ExprKind::Union:
        union_chain(e, depth);
        return;
      case ExprKind::Optional:
        left_body(e.left(), depth);
        line(depth, "OPTIONAL {");
        body(e.right(), depth + 1);
        line(depth, "}");
        return;
      case ExprKind::Filter:
        body(e.child(), depth);
        line(depth, "FILTER (" + e.condition() + ")");
        return;
      case ExprKind::Values:
        left_body(e.child(), depth);
        line(depth, "VALUES " + block_to_string(e.block()));
        return;
      case ExprKind::Select:
        throw InvariantViolation("nested SELECT cannot be printed");
    }
  }

  void element(const Expression& e, int depth) {
    if (e.kind() == ExprKind::Triple) {
      body(e, depth);
    } else if (e.kind() == ExprKind::Union) {
      union_chain(e, depth);
    } else {
      nested(e, depth);
    }
  }

  void union_chain(const Expression& e, int depth) {
    if (e.left().kind() == ExprKind::Union) {
      union_chain(e.left(), depth);
    } else {
      nested(e.left(), depth);
    }
    line(depth, "UNION");
    nested(e.right(), depth);
  }

  std::ostringstream out_;
};

}  // namespace

Expression parse_query(std::string_view text) {
  Lexer lexer(text);
  Parser parser(text, lexer.run());
  return parser.query();
}

std::string pretty_print(const Expression& query) { return Printer{}.query(query); }

std::vector<TriplePattern> basic_graph_pattern(const Expression& query) {
  const Expression& body = query.kind() == ExprKind::Select ? query.child() : query;
  if (!in_language(body, InterfaceLanguage::Bgp)) {
    throw NotExecutable("only basic graph patterns are executable; got " + body.to_string());
  }
  return body.triple_patterns();
}

}  // namespace ldffed
