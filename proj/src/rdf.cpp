#include "ldffed/rdf.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "ldffed/error.hpp"

namespace ldffed {

namespace {

void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

Term Term::uri(std::string iri) {
  if (iri.empty()) throw LoadError("empty IRI");
  if (iri.rfind("_:", 0) == 0) throw LoadError("blank nodes are not supported: " + iri);
  return Term(TermKind::Uri, std::move(iri));
}

Term Term::literal(std::string quoted) {
  if (quoted.size() < 2 || quoted.front() != '"') {
    throw LoadError("literal must be quoted: " + quoted);
  }
  return Term(TermKind::Literal, std::move(quoted));
}

Term Term::variable(std::string_view name) {
  if (!name.empty() && (name.front() == '?' || name.front() == '$')) {
    name.remove_prefix(1);
  }
  if (name.empty()) throw LoadError("empty variable name");
  return Term(TermKind::Variable, "?" + std::string(name));
}

std::string Term::to_string() const {
  switch (kind_) {
    case TermKind::Uri:
      return "<" + lexical_ + ">";
    case TermKind::Literal:
    case TermKind::Variable:
      return lexical_;
  }
  return lexical_;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t seed = std::hash<std::string>{}(t.lexical());
  hash_combine(seed, static_cast<std::size_t>(t.kind()));
  return seed;
}

Triple Triple::make(Term s, Term p, Term o) {
  if (s.kind() != TermKind::Uri) throw LoadError("triple subject must be an IRI");
  if (p.kind() != TermKind::Uri) throw LoadError("triple predicate must be an IRI");
  if (o.is_variable()) throw LoadError("triple object must be an IRI or literal");
  return Triple{std::move(s), std::move(p), std::move(o)};
}

TriplePattern TriplePattern::make(Term s, Term p, Term o) {
  if (s.kind() == TermKind::Literal) throw LoadError("literal in subject position");
  if (p.kind() == TermKind::Literal) throw LoadError("literal in predicate position");
  return TriplePattern{std::move(s), std::move(p), std::move(o)};
}

std::vector<std::string> TriplePattern::vars() const {
  std::vector<std::string> out;
  for (const Term* t : {&s, &p, &o}) {
    if (t->is_variable() &&
        std::find(out.begin(), out.end(), t->lexical()) == out.end()) {
      out.push_back(t->lexical());
    }
  }
  return out;
}

TriplePattern TriplePattern::instantiate(const SolutionMapping& mu) const {
  auto sub = [&](const Term& t) -> Term {
    if (!t.is_variable()) return t;
    const Term* bound = mu.find(t.lexical());
    return bound != nullptr ? *bound : t;
  };
  return TriplePattern{sub(s), sub(p), sub(o)};
}

std::string TriplePattern::to_string() const {
  return s.to_string() + " " + p.to_string() + " " + o.to_string();
}

SolutionMapping::SolutionMapping(std::initializer_list<Binding> bindings) {
  for (const auto& [var, value] : bindings) {
    if (!bind(var, value)) throw InvariantViolation("conflicting binding for " + var);
  }
}

bool SolutionMapping::bind(const std::string& var, const Term& value) {
  if (!value.is_constant()) {
    throw InvariantViolation("variable " + var + " bound to a non-constant");
  }
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), var,
      [](const Binding& b, const std::string& v) { return b.first < v; });
  if (it != bindings_.end() && it->first == var) return it->second == value;
  bindings_.insert(it, Binding{var, value});
  return true;
}

const Term* SolutionMapping::find(std::string_view var) const {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), var,
      [](const Binding& b, std::string_view v) { return b.first < v; });
  if (it != bindings_.end() && it->first == var) return &it->second;
  return nullptr;
}

bool SolutionMapping::compatible(const SolutionMapping& other) const {
  auto a = bindings_.begin();
  auto b = other.bindings_.begin();
  while (a != bindings_.end() && b != other.bindings_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      if (a->second != b->second) return false;
      ++a;
      ++b;
    }
  }
  return true;
}

SolutionMapping SolutionMapping::merged(const SolutionMapping& other) const {
  SolutionMapping out;
  out.bindings_.reserve(bindings_.size() + other.bindings_.size());
  std::set_union(bindings_.begin(), bindings_.end(), other.bindings_.begin(),
                 other.bindings_.end(), std::back_inserter(out.bindings_),
                 [](const Binding& x, const Binding& y) { return x.first < y.first; });
  return out;
}

SolutionMapping SolutionMapping::project(std::span<const std::string> vars) const {
  SolutionMapping out;
  for (const auto& v : vars) {
    if (const Term* t = find(v)) out.bind(v, *t);
  }
  return out;
}

std::vector<std::string> SolutionMapping::domain() const {
  std::vector<std::string> out;
  out.reserve(bindings_.size());
  for (const auto& b : bindings_) out.push_back(b.first);
  return out;
}

std::string SolutionMapping::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (i > 0) out += ", ";
    out += bindings_[i].first + "->" + bindings_[i].second.to_string();
  }
  return out + "}";
}

std::size_t SolutionMappingHash::operator()(const SolutionMapping& mu) const noexcept {
  std::size_t seed = mu.size();
  for (const auto& [var, term] : mu) {
    hash_combine(seed, std::hash<std::string>{}(var));
    hash_combine(seed, TermHash{}(term));
  }
  return seed;
}

Graph::Graph(std::vector<Triple> triples) : triples_(std::move(triples)) {
  std::sort(triples_.begin(), triples_.end());
  triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
  for (std::uint32_t i = 0; i < triples_.size(); ++i) {
    by_s_[triples_[i].s].push_back(i);
    by_p_[triples_[i].p].push_back(i);
    by_o_[triples_[i].o].push_back(i);
  }
}

bool Graph::contains(const Triple& t) const {
  return std::binary_search(triples_.begin(), triples_.end(), t);
}

template <typename Visitor>
void Graph::for_each_match(const TriplePattern& tp, Visitor&& visit) const {
  // Choose the smallest candidate list among the bound positions.
  const std::vector<std::uint32_t>* candidates = nullptr;
  bool any_bound = false;
  auto narrow = [&](const Term& t, const Index& index) {
    if (t.is_variable()) return;
    any_bound = true;
    auto it = index.find(t);
    static const std::vector<std::uint32_t> kNone;
    const auto* list = it == index.end() ? &kNone : &it->second;
    if (candidates == nullptr || list->size() < candidates->size()) candidates = list;
  };
  narrow(tp.s, by_s_);
  narrow(tp.p, by_p_);
  narrow(tp.o, by_o_);

  auto try_triple = [&](const Triple& t) {
    SolutionMapping mu;
    auto unify = [&](const Term& pattern, const Term& value) {
      if (pattern.is_variable()) return mu.bind(pattern.lexical(), value);
      return pattern == value;
    };
    if (unify(tp.s, t.s) && unify(tp.p, t.p) && unify(tp.o, t.o)) visit(std::move(mu));
  };

  if (!any_bound) {
    for (const auto& t : triples_) try_triple(t);
    return;
  }
  for (std::uint32_t idx : *candidates) try_triple(triples_[idx]);
}

std::vector<SolutionMapping> Graph::match(const TriplePattern& tp) const {
  std::vector<SolutionMapping> out;
  for_each_match(tp, [&](SolutionMapping mu) { out.push_back(std::move(mu)); });
  return out;
}

std::size_t Graph::count(const TriplePattern& tp) const {
  std::size_t n = 0;
  for_each_match(tp, [&](const SolutionMapping&) { ++n; });
  return n;
}

Graph Graph::merge(std::span<const Graph* const> graphs) {
  std::vector<Triple> all;
  for (const Graph* g : graphs) all.insert(all.end(), g->triples().begin(), g->triples().end());
  return Graph(std::move(all));
}

MappingSet match_pattern(const Graph& g, const TriplePattern& tp) {
  auto matches = g.match(tp);
  return MappingSet(std::make_move_iterator(matches.begin()),
                    std::make_move_iterator(matches.end()));
}

MappingSet join_mappings(const MappingSet& a, const MappingSet& b) {
  MappingSet out;
  for (const auto& mu1 : a) {
    for (const auto& mu2 : b) {
      if (mu1.compatible(mu2)) out.insert(mu1.merged(mu2));
    }
  }
  return out;
}

MappingSet eval_bgp_oracle(const Graph& g, std::span<const TriplePattern> bgp) {
  MappingSet acc{SolutionMapping{}};
  for (const auto& tp : bgp) {
    acc = join_mappings(acc, match_pattern(g, tp));
    if (acc.empty()) break;
  }
  return acc;
}

namespace {

class LineScanner {
 public:
  LineScanner(std::string_view line, std::string_view source, std::size_t line_no)
      : line_(line), source_(source), line_no_(line_no) {}

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }

  Term term(bool allow_literal) {
    skip_ws();
    if (pos_ >= line_.size()) fail("unexpected end of line");
    char c = line_[pos_];
    if (c == '<') {
      auto close = line_.find('>', pos_);
      if (close == std::string_view::npos) fail("unterminated IRI");
      std::string iri(line_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return Term::uri(std::move(iri));
    }
    if (c == '_' && pos_ + 1 < line_.size() && line_[pos_ + 1] == ':') {
      fail("blank nodes are not supported");
    }
    if (c == '"') {
      if (!allow_literal) fail("literal not allowed here");
      std::size_t i = pos_ + 1;
      while (i < line_.size() && line_[i] != '"') {
        if (line_[i] == '\\') ++i;
        ++i;
      }
      if (i >= line_.size()) fail("unterminated literal");
      ++i;
      // Keep a datatype or language suffix as part of the lexical form.
      if (i < line_.size() && line_[i] == '@') {
        while (i < line_.size() && line_[i] != ' ' && line_[i] != '\t') ++i;
      } else if (line_.substr(i, 3) == "^^<") {
        auto close = line_.find('>', i);
        if (close == std::string_view::npos) fail("unterminated datatype IRI");
        i = close + 1;
      }
      std::string lit(line_.substr(pos_, i - pos_));
      pos_ = i;
      return Term::literal(std::move(lit));
    }
    fail("expected IRI or literal");
  }

  void expect_dot() {
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != '.') fail("expected '.'");
    ++pos_;
    if (!at_end() && line_[pos_] != '#') fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw LoadError(std::string(source_) + ":" + std::to_string(line_no_) + ":" +
                    std::to_string(pos_ + 1) + ": " + msg);
  }

 private:
  std::string_view line_;
  std::string_view source_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

Graph read_ntriples(std::istream& in, std::string_view source_name) {
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    LineScanner scan(line, source_name, line_no);
    if (scan.at_end()) continue;
    auto first = line.find_first_not_of(" \t");
    if (line[first] == '#') continue;
    Term s = scan.term(false);
    Term p = scan.term(false);
    Term o = scan.term(true);
    scan.expect_dot();
    triples.push_back(Triple::make(std::move(s), std::move(p), std::move(o)));
  }
  return Graph(std::move(triples));
}

Graph load_ntriples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read data file " + path.string());
  return read_ntriples(in, path.string());
}

}  // namespace ldffed
