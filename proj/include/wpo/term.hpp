#pragma once

/// \file
/// First-order terms, signatures, rewrite rules and the legacy TPDB `.trs`
/// reader/printer.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wpo {

/// Interned identifier of a function symbol or variable name.
using Symbol = std::uint32_t;

namespace detail {

class Interner {
public:
  Symbol intern(std::string_view name) {
    std::lock_guard lock(mutex_);
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<Symbol>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  std::string_view name(Symbol id) const {
    std::lock_guard lock(mutex_);
    return names_.at(id);
  }

private:
  mutable std::mutex mutex_;
  std::deque<std::string> names_;  // deque keeps references stable
  std::unordered_map<std::string, Symbol> ids_;
};

inline Interner& interner() {
  static Interner instance;
  return instance;
}

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace detail

inline Symbol intern(std::string_view name) { return detail::interner().intern(name); }
inline std::string_view name_of(Symbol id) { return detail::interner().name(id); }

class Term;

struct TermNode {
  bool is_var = false;
  Symbol head = 0;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
};

/// Immutable first-order term with structural equality. Copies share the
/// underlying node.
class Term {
public:
  Term() = default;

  static Term var(Symbol name) {
    auto node = std::make_shared<TermNode>();
    node->is_var = true;
    node->head = name;
    node->hash = detail::hash_mix(0x51ed270b, name);
    return Term(std::move(node));
  }
  static Term var(std::string_view name) { return var(intern(name)); }

  static Term app(Symbol f, std::vector<Term> args = {}) {
    auto node = std::make_shared<TermNode>();
    node->head = f;
    std::size_t h = detail::hash_mix(0x2545f491, f);
    for (const auto& a : args) {
      h = detail::hash_mix(h, a.hash());
      node->size += a.size();
    }
    node->hash = h;
    node->args = std::move(args);
    return Term(std::move(node));
  }
  static Term app(std::string_view f, std::vector<Term> args = {}) {
    return app(intern(f), std::move(args));
  }

  bool valid() const { return node_ != nullptr; }
  bool is_var() const { return node_->is_var; }
  Symbol head() const { return node_->head; }
  std::string_view name() const { return name_of(node_->head); }
  const std::vector<Term>& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  const Term& arg(std::size_t i) const { return node_->args[i]; }
  std::size_t hash() const { return node_->hash; }
  /// Number of symbol and variable occurrences.
  std::size_t size() const { return node_->size; }
  const TermNode* node() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.is_var() != b.is_var() || a.head() != b.head() ||
        a.arity() != b.arity() || a.size() != b.size())
      return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.arg(i) == b.arg(i))) return false;
    return true;
  }

private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Total order on terms used for deterministic containers; not a term order.
inline bool structural_less(const Term& a, const Term& b) {
  if (a.is_var() != b.is_var()) return a.is_var();
  if (a.head() != b.head()) return a.name() < b.name();
  if (a.arity() != b.arity()) return a.arity() < b.arity();
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (a.arg(i) == b.arg(i)) continue;
    return structural_less(a.arg(i), b.arg(i));
  }
  return false;
}

inline std::string to_string(const Term& t) {
  std::string out(t.name());
  if (t.is_var() || t.arity() == 0) return out;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    out += to_string(t.arg(i));
  }
  out += ')';
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }

using Substitution = std::unordered_map<Symbol, Term>;

inline Term substitute(const Term& s, const Substitution& theta) {
  if (s.is_var()) {
    auto it = theta.find(s.head());
    return it == theta.end() ? s : it->second;
  }
  if (s.arity() == 0) return s;
  std::vector<Term> args;
  args.reserve(s.arity());
  bool changed = false;
  for (const auto& a : s.args()) {
    args.push_back(substitute(a, theta));
    changed = changed || args.back().node() != a.node();
  }
  return changed ? Term::app(s.head(), std::move(args)) : s;
}

/// |s|_x
inline std::size_t var_count(const Term& s, Symbol x) {
  if (s.is_var()) return s.head() == x ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : s.args()) n += var_count(a, x);
  return n;
}

inline void collect_var_counts(const Term& s, std::map<Symbol, std::size_t>& out) {
  if (s.is_var()) {
    ++out[s.head()];
    return;
  }
  for (const auto& a : s.args()) collect_var_counts(a, out);
}

/// Variables of `s` in order of first occurrence.
inline std::vector<Symbol> vars_of(const Term& s) {
  std::vector<Symbol> out;
  std::set<Symbol> seen;
  std::function<void(const Term&)> go = [&](const Term& u) {
    if (u.is_var()) {
      if (seen.insert(u.head()).second) out.push_back(u.head());
      return;
    }
    for (const auto& a : u.args()) go(a);
  };
  go(s);
  return out;
}

/// All subterm occurrences of `s`, pre-order (outermost first).
inline std::vector<Term> subterms(const Term& s) {
  std::vector<Term> out;
  std::function<void(const Term&)> go = [&](const Term& u) {
    out.push_back(u);
    if (!u.is_var())
      for (const auto& a : u.args()) go(a);
  };
  go(s);
  return out;
}

inline bool contains_symbol(const Term& s, Symbol f) {
  if (s.is_var()) return false;
  if (s.head() == f) return true;
  for (const auto& a : s.args())
    if (contains_symbol(a, f)) return true;
  return false;
}

/// Finite map from symbols to arities, kept in insertion order.
class Signature {
public:
  void add(Symbol f, int arity) {
    auto [it, inserted] = arity_.emplace(f, arity);
    if (!inserted) {
      if (it->second != arity)
        throw std::invalid_argument("arity mismatch for symbol " + std::string(name_of(f)));
      return;
    }
    order_.push_back(f);
  }
  void add(std::string_view f, int arity) { add(intern(f), arity); }

  bool contains(Symbol f) const { return arity_.count(f) != 0; }
  std::optional<int> arity(Symbol f) const {
    auto it = arity_.find(f);
    if (it == arity_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<Symbol>& symbols() const { return order_; }
  std::size_t size() const { return order_.size(); }
  int max_arity() const {
    int m = 0;
    for (auto f : order_) m = std::max(m, arity_.at(f));
    return m;
  }

  /// Adds every symbol of `t`; throws on arity conflicts.
  void add_symbols_of(const Term& t) {
    if (t.is_var()) return;
    add(t.head(), static_cast<int>(t.arity()));
    for (const auto& a : t.args()) add_symbols_of(a);
  }

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.arity_ == b.arity_;
  }

private:
  std::map<Symbol, int> arity_;
  std::vector<Symbol> order_;
};

struct Rule {
  Term lhs;
  Term rhs;

  friend bool operator==(const Rule& a, const Rule& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
};

inline std::string to_string(const Rule& r) { return to_string(r.lhs) + " -> " + to_string(r.rhs); }

class RuleError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Checks `lhs` is not a variable and Var(rhs) ⊆ Var(lhs).
inline Rule make_rule(Term lhs, Term rhs) {
  if (lhs.is_var())
    throw RuleError("variable left-hand side in rule " + to_string(lhs) + " -> " + to_string(rhs));
  auto lv = vars_of(lhs);
  std::set<Symbol> lset(lv.begin(), lv.end());
  for (auto x : vars_of(rhs))
    if (!lset.count(x))
      throw RuleError("variable " + std::string(name_of(x)) +
                      " occurs only in the right-hand side of " + to_string(lhs) + " -> " +
                      to_string(rhs));
  return Rule{std::move(lhs), std::move(rhs)};
}

/// True iff some variable occurs more often on the right than on the left.
inline bool is_duplicating(const Rule& r) {
  std::map<Symbol, std::size_t> l, rc;
  collect_var_counts(r.lhs, l);
  collect_var_counts(r.rhs, rc);
  for (auto [x, n] : rc)
    if (n > l[x]) return true;
  return false;
}

struct Trs {
  Signature signature;
  std::vector<Rule> rules;

  bool is_duplicating() const {
    for (const auto& r : rules)
      if (wpo::is_duplicating(r)) return true;
    return false;
  }

  std::set<Symbol> defined_symbols() const {
    std::set<Symbol> d;
    for (const auto& r : rules) d.insert(r.lhs.head());
    return d;
  }

  friend bool operator==(const Trs& a, const Trs& b) {
    return a.signature == b.signature && a.rules == b.rules;
  }
};

inline Trs make_trs(std::vector<Rule> rules) {
  Trs trs;
  for (const auto& r : rules) {
    trs.signature.add_symbols_of(r.lhs);
    trs.signature.add_symbols_of(r.rhs);
  }
  trs.rules = std::move(rules);
  return trs;
}

// ---------------------------------------------------------------------------
// TPDB legacy format

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

namespace detail {

class TrsParser {
public:
  explicit TrsParser(std::string_view text) : text_(text) {}

  Trs parse() {
    std::vector<std::pair<Term, Term>> raw;
    std::vector<std::pair<int, int>> raw_pos;
    skip_ws();
    while (!eof()) {
      expect('(');
      skip_ws();
      auto [line, col] = position();
      std::string block = ident();
      if (block == "VAR") {
        skip_ws();
        while (!eof() && peek() != ')') {
          variables_.insert(ident());
          skip_ws();
        }
        expect(')');
      } else if (block == "RULES") {
        skip_ws();
        while (!eof() && peek() != ')') {
          auto pos = position();
          Term l = term();
          skip_ws();
          if (!consume_arrow()) fail("expected '->'");
          skip_ws();
          Term r = term();
          raw.emplace_back(std::move(l), std::move(r));
          raw_pos.push_back(pos);
          skip_ws();
        }
        expect(')');
      } else if (block == "COMMENT") {
        skip_balanced();
      } else {
        throw ParseError("unsupported annotation '" + block + "'", line, col);
      }
      skip_ws();
    }
    Trs trs;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      try {
        trs.rules.push_back(make_rule(raw[i].first, raw[i].second));
      } catch (const RuleError& e) {
        throw ParseError(e.what(), raw_pos[i].first, raw_pos[i].second);
      }
    }
    trs.signature = std::move(signature_);
    return trs;
  }

private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::pair<int, int> position() const { return {line_, col_}; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void expect(char c) {
    skip_ws();
    if (eof()) fail(std::string("unexpected end of input, expected '") + c + "'");
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool at_arrow() const {
    return pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>';
  }

  bool consume_arrow() {
    if (!at_arrow()) return false;
    advance();
    advance();
    return true;
  }

  static bool ident_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
           c != '"';
  }

  std::string ident() {
    if (eof()) fail("unexpected end of input, expected identifier");
    if (at_arrow() || !ident_char(peek())) fail("expected identifier");
    std::string out;
    while (!eof() && ident_char(peek()) && !at_arrow()) {
      out += peek();
      advance();
    }
    return out;
  }

  void skip_balanced() {
    int depth = 1;
    while (!eof()) {
      char c = peek();
      advance();
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) return;
    }
    fail("unterminated block");
  }

  Term term() {
    skip_ws();
    auto [line, col] = position();
    std::string name = ident();
    skip_ws();
    std::vector<Term> args;
    bool has_parens = false;
    if (!eof() && peek() == '(') {
      has_parens = true;
      advance();
      skip_ws();
      if (!eof() && peek() == ')') {
        advance();
      } else {
        while (true) {
          args.push_back(term());
          skip_ws();
          if (eof()) fail("unexpected end of input in argument list");
          if (peek() == ',') {
            advance();
            continue;
          }
          if (peek() == ')') {
            advance();
            break;
          }
          fail("expected ',' or ')'");
        }
      }
    }
    if (variables_.count(name)) {
      if (has_parens) throw ParseError("variable " + name + " applied to arguments", line, col);
      return Term::var(name);
    }
    Symbol f = intern(name);
    auto known = signature_.arity(f);
    if (known && *known != static_cast<int>(args.size()))
      throw ParseError("arity mismatch for " + name + ": declared " + std::to_string(*known) +
                           ", used with " + std::to_string(args.size()),
                       line, col);
    signature_.add(f, static_cast<int>(args.size()));
    return Term::app(f, std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::set<std::string> variables_;
  Signature signature_;
};

}  // namespace detail

/// Parses the `(VAR ...) (RULES ...)` subset of the TPDB legacy format.
inline Trs parse_trs(std::string_view text) { return detail::TrsParser(text).parse(); }

inline std::string print_trs(const Trs& trs) {
  std::set<Symbol> vars;
  for (const auto& r : trs.rules)
    for (auto x : vars_of(r.lhs)) vars.insert(x);
  std::vector<std::string> names;
  for (auto x : vars) names.emplace_back(name_of(x));
  std::sort(names.begin(), names.end());
  std::ostringstream os;
  os << "(VAR";
  for (const auto& n : names) os << ' ' << n;
  os << ")\n(RULES\n";
  for (const auto& r : trs.rules) os << "  " << to_string(r) << '\n';
  os << ")\n";
  return os.str();
}

}  // namespace wpo
