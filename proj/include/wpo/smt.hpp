#pragma once

/// \file
/// Sorted formula trees, SMT-LIB2 output, an external solver driver and a
/// model reader.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <iterator>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace wpo::smt {

using Int = std::int64_t;

enum class Op {
  IntConst, IntVar, Add, Mul, Ite,
  BoolConst, BoolVar, Not, And, Or, Implies, Ge, Gt, Eq
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  Int value = 0;  // IntConst, BoolConst (0/1)
  std::string name;  // IntVar, BoolVar
  std::vector<NodePtr> kids;
};

class BoolExpr;

/// Integer-sorted expression.
class IntExpr {
public:
  IntExpr() : IntExpr(Int{0}) {}
  IntExpr(Int c) : n_(std::make_shared<Node>(Node{Op::IntConst, c, {}, {}})) {}
  explicit IntExpr(NodePtr n) : n_(std::move(n)) {}

  const NodePtr& node() const { return n_; }
  bool is_const() const { return n_->op == Op::IntConst; }
  Int value() const { return n_->value; }

private:
  NodePtr n_;
};

/// Boolean-sorted formula.
class BoolExpr {
public:
  BoolExpr() : BoolExpr(true) {}
  BoolExpr(bool b) : n_(std::make_shared<Node>(Node{Op::BoolConst, b ? 1 : 0, {}, {}})) {}
  explicit BoolExpr(NodePtr n) : n_(std::move(n)) {}

  const NodePtr& node() const { return n_; }
  bool is_true() const { return n_->op == Op::BoolConst && n_->value == 1; }
  bool is_false() const { return n_->op == Op::BoolConst && n_->value == 0; }

private:
  NodePtr n_;
};

inline IntExpr int_var(const std::string& name) {
  return IntExpr(std::make_shared<Node>(Node{Op::IntVar, 0, name, {}}));
}
inline BoolExpr bool_var(const std::string& name) {
  return BoolExpr(std::make_shared<Node>(Node{Op::BoolVar, 0, name, {}}));
}

namespace detail {
inline NodePtr make(Op op, std::vector<NodePtr> kids) {
  return std::make_shared<Node>(Node{op, 0, {}, std::move(kids)});
}
}  // namespace detail

// Smart constructors fold constants and trivial cases.

inline IntExpr sum(const std::vector<IntExpr>& xs) {
  Int c = 0;
  std::vector<NodePtr> kids;
  for (const auto& x : xs) {
    if (x.is_const()) {
      c += x.value();
    } else if (x.node()->op == Op::Add) {
      for (const auto& k : x.node()->kids) {
        if (k->op == Op::IntConst)
          c += k->value;
        else
          kids.push_back(k);
      }
    } else {
      kids.push_back(x.node());
    }
  }
  if (kids.empty()) return IntExpr(c);
  if (c != 0) kids.push_back(IntExpr(c).node());
  if (kids.size() == 1) return IntExpr(kids[0]);
  return IntExpr(detail::make(Op::Add, std::move(kids)));
}

inline IntExpr operator+(const IntExpr& a, const IntExpr& b) { return sum({a, b}); }

inline BoolExpr operator!(const BoolExpr& a);

inline IntExpr ite(const BoolExpr& c, const IntExpr& a, const IntExpr& b) {
  if (c.is_true()) return a;
  if (c.is_false()) return b;
  if (a.node() == b.node() || (a.is_const() && b.is_const() && a.value() == b.value())) return a;
  return IntExpr(detail::make(Op::Ite, {c.node(), a.node(), b.node()}));
}

/// Multiplication; an ite with constant branches is distributed over the
/// other factor so that boolean-guarded coefficients stay linear.
inline IntExpr operator*(const IntExpr& a, const IntExpr& b) {
  if (a.is_const() && b.is_const()) return IntExpr(a.value() * b.value());
  if ((a.is_const() && a.value() == 0) || (b.is_const() && b.value() == 0)) return IntExpr(0);
  if (a.is_const() && a.value() == 1) return b;
  if (b.is_const() && b.value() == 1) return a;
  auto const_ite = [](const IntExpr& e) {
    const auto& n = e.node();
    return n->op == Op::Ite && n->kids[1]->op == Op::IntConst && n->kids[2]->op == Op::IntConst;
  };
  if (const_ite(a) && !b.is_const()) {
    const auto& n = a.node();
    return ite(BoolExpr(n->kids[0]), IntExpr(n->kids[1]) * b, IntExpr(n->kids[2]) * b);
  }
  if (const_ite(b) && !a.is_const()) return b * a;
  return IntExpr(detail::make(Op::Mul, {a.node(), b.node()}));
}

inline BoolExpr operator!(const BoolExpr& a) {
  if (a.is_true()) return false;
  if (a.is_false()) return true;
  if (a.node()->op == Op::Not) return BoolExpr(a.node()->kids[0]);
  return BoolExpr(detail::make(Op::Not, {a.node()}));
}

inline BoolExpr conj(const std::vector<BoolExpr>& xs) {
  std::vector<NodePtr> kids;
  for (const auto& x : xs) {
    if (x.is_false()) return false;
    if (x.is_true()) continue;
    if (x.node()->op == Op::And)
      kids.insert(kids.end(), x.node()->kids.begin(), x.node()->kids.end());
    else
      kids.push_back(x.node());
  }
  if (kids.empty()) return true;
  if (kids.size() == 1) return BoolExpr(kids[0]);
  return BoolExpr(detail::make(Op::And, std::move(kids)));
}

inline BoolExpr disj(const std::vector<BoolExpr>& xs) {
  std::vector<NodePtr> kids;
  for (const auto& x : xs) {
    if (x.is_true()) return true;
    if (x.is_false()) continue;
    if (x.node()->op == Op::Or)
      kids.insert(kids.end(), x.node()->kids.begin(), x.node()->kids.end());
    else
      kids.push_back(x.node());
  }
  if (kids.empty()) return false;
  if (kids.size() == 1) return BoolExpr(kids[0]);
  return BoolExpr(detail::make(Op::Or, std::move(kids)));
}

inline BoolExpr operator&&(const BoolExpr& a, const BoolExpr& b) { return conj({a, b}); }
inline BoolExpr operator||(const BoolExpr& a, const BoolExpr& b) { return disj({a, b}); }

inline BoolExpr implies(const BoolExpr& a, const BoolExpr& b) {
  if (a.is_false() || b.is_true()) return true;
  if (a.is_true()) return b;
  if (b.is_false()) return !a;
  return BoolExpr(detail::make(Op::Implies, {a.node(), b.node()}));
}

inline BoolExpr operator>=(const IntExpr& a, const IntExpr& b) {
  if (a.is_const() && b.is_const()) return a.value() >= b.value();
  if (a.node() == b.node()) return true;
  return BoolExpr(detail::make(Op::Ge, {a.node(), b.node()}));
}
inline BoolExpr operator>(const IntExpr& a, const IntExpr& b) {
  if (a.is_const() && b.is_const()) return a.value() > b.value();
  if (a.node() == b.node()) return false;
  return BoolExpr(detail::make(Op::Gt, {a.node(), b.node()}));
}
inline BoolExpr operator<=(const IntExpr& a, const IntExpr& b) { return b >= a; }
inline BoolExpr operator<(const IntExpr& a, const IntExpr& b) { return b > a; }
inline BoolExpr operator==(const IntExpr& a, const IntExpr& b) {
  if (a.is_const() && b.is_const()) return a.value() == b.value();
  if (a.node() == b.node()) return true;
  return BoolExpr(detail::make(Op::Eq, {a.node(), b.node()}));
}

/// Counts true literals: Σ ite(b, 1, 0).
inline IntExpr count(const std::vector<BoolExpr>& bs) {
  std::vector<IntExpr> xs;
  for (const auto& b : bs) xs.push_back(ite(b, 1, 0));
  return sum(xs);
}

// ---------------------------------------------------------------------------
// Models and evaluation

struct Model {
  std::map<std::string, Int> ints;
  std::map<std::string, bool> bools;

  /// Absent variables read as 0 / false.
  Int int_value(const std::string& n) const {
    auto it = ints.find(n);
    return it == ints.end() ? 0 : it->second;
  }
  bool bool_value(const std::string& n) const {
    auto it = bools.find(n);
    return it == bools.end() ? false : it->second;
  }
};

class Evaluator {
public:
  explicit Evaluator(const Model& m) : m_(m) {}

  Int eval(const IntExpr& e) { return value(e.node()); }
  bool eval(const BoolExpr& e) { return value(e.node()) != 0; }

private:
  Int value(const NodePtr& n) {
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    Int v = 0;
    switch (n->op) {
      case Op::IntConst:
      case Op::BoolConst: v = n->value; break;
      case Op::IntVar: v = m_.int_value(n->name); break;
      case Op::BoolVar: v = m_.bool_value(n->name) ? 1 : 0; break;
      case Op::Add:
        for (const auto& k : n->kids) v += value(k);
        break;
      case Op::Mul: v = value(n->kids[0]) * value(n->kids[1]); break;
      case Op::Ite: v = value(n->kids[0]) ? value(n->kids[1]) : value(n->kids[2]); break;
      case Op::Not: v = !value(n->kids[0]); break;
      case Op::And:
        v = 1;
        for (const auto& k : n->kids)
          if (!value(k)) {
            v = 0;
            break;
          }
        break;
      case Op::Or:
        for (const auto& k : n->kids)
          if (value(k)) {
            v = 1;
            break;
          }
        break;
      case Op::Implies: v = !value(n->kids[0]) || value(n->kids[1]); break;
      case Op::Ge: v = value(n->kids[0]) >= value(n->kids[1]); break;
      case Op::Gt: v = value(n->kids[0]) > value(n->kids[1]); break;
      case Op::Eq: v = value(n->kids[0]) == value(n->kids[1]); break;
    }
    memo_.emplace(n, v);
    return v;
  }

  const Model& m_;
  std::unordered_map<NodePtr, Int> memo_;  // owning keys: freed nodes must not alias
};

// ---------------------------------------------------------------------------
// SMT-LIB2 output

enum class Logic { QF_LIA, QF_NIA };

inline const char* to_string(Logic l) { return l == Logic::QF_LIA ? "QF_LIA" : "QF_NIA"; }

class NonlinearError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Value-numbers the DAG so that structurally equal subterms share one id;
/// ids are assigned in post-order, hence in dependency order.
class Numbering {
public:
  struct Entry {
    Op op;
    Int value;
    std::string name;
    std::vector<int> kids;
    int refs = 0;
  };

  int number(const NodePtr& n) {
    auto pit = by_ptr_.find(n.get());
    if (pit != by_ptr_.end()) return pit->second;
    std::vector<int> kids;
    for (const auto& k : n->kids) kids.push_back(number(k));
    auto key = std::make_tuple(n->op, n->value, n->name, kids);
    auto sit = by_key_.find(key);
    int id;
    if (sit != by_key_.end()) {
      id = sit->second;
    } else {
      id = static_cast<int>(entries_.size());
      for (int k : kids) ++entries_[k].refs;
      entries_.push_back(Entry{n->op, n->value, n->name, kids, 0});
      by_key_.emplace(std::move(key), id);
    }
    by_ptr_.emplace(n.get(), id);
    keep_.push_back(n);
    return id;
  }

  std::vector<Entry>& entries() { return entries_; }

private:
  std::unordered_map<const Node*, int> by_ptr_;
  std::map<std::tuple<Op, Int, std::string, std::vector<int>>, int> by_key_;
  std::vector<Entry> entries_;
  std::vector<NodePtr> keep_;
};

inline bool is_int_sort(Op op) {
  return op == Op::IntConst || op == Op::IntVar || op == Op::Add || op == Op::Mul || op == Op::Ite;
}

inline std::string int_literal(Int v) {
  return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v);
}

}  // namespace detail

/// Renders a complete script: logic, declarations, shared definitions, one
/// assertion, check-sat and get-model. `comment` lines are emitted as `;`
/// comments at the top.
inline std::string to_smtlib(const BoolExpr& phi, Logic logic, const std::string& comment = {}) {
  detail::Numbering num;
  int root = num.number(phi.node());
  auto& es = num.entries();

  std::map<std::string, bool> vars;  // name -> is_bool
  for (const auto& e : es) {
    if (e.op != Op::IntVar && e.op != Op::BoolVar) continue;
    bool b = e.op == Op::BoolVar;
    auto [it, inserted] = vars.emplace(e.name, b);
    if (!inserted && it->second != b)
      throw std::invalid_argument("variable " + e.name + " used with two sorts");
  }
  if (logic == Logic::QF_LIA)
    for (const auto& e : es)
      if (e.op == Op::Mul && es[e.kids[0]].op != Op::IntConst && es[e.kids[1]].op != Op::IntConst)
        throw NonlinearError("nonlinear product under QF_LIA");

  std::vector<std::string> text(es.size());
  std::ostringstream defs;
  int temps = 0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto& e = es[i];
    auto k = [&](int j) -> const std::string& { return text[e.kids[j]]; };
    std::string s;
    switch (e.op) {
      case Op::IntConst: s = detail::int_literal(e.value); break;
      case Op::BoolConst: s = e.value ? "true" : "false"; break;
      case Op::IntVar:
      case Op::BoolVar: s = e.name; break;
      case Op::Add:
      case Op::And:
      case Op::Or: {
        s = e.op == Op::Add ? "(+" : e.op == Op::And ? "(and" : "(or";
        for (std::size_t j = 0; j < e.kids.size(); ++j) s += " " + k(static_cast<int>(j));
        s += ")";
        break;
      }
      case Op::Mul: s = "(* " + k(0) + " " + k(1) + ")"; break;
      case Op::Ite: s = "(ite " + k(0) + " " + k(1) + " " + k(2) + ")"; break;
      case Op::Not: s = "(not " + k(0) + ")"; break;
      case Op::Implies: s = "(=> " + k(0) + " " + k(1) + ")"; break;
      case Op::Ge:
      case Op::Gt: {
        // constants go to the right: (> 5 x) prints as (< x 5)
        bool flip = es[e.kids[0]].op == Op::IntConst && es[e.kids[1]].op != Op::IntConst;
        const char* op = e.op == Op::Ge ? (flip ? "<=" : ">=") : (flip ? "<" : ">");
        s = flip ? std::string("(") + op + " " + k(1) + " " + k(0) + ")"
                 : std::string("(") + op + " " + k(0) + " " + k(1) + ")";
        break;
      }
      case Op::Eq: s = "(= " + k(0) + " " + k(1) + ")"; break;
    }
    bool leaf = e.kids.empty();
    if (!leaf && e.refs >= 2 && static_cast<int>(i) != root) {
      std::string name = "tmp!" + std::to_string(++temps);
      defs << "(define-fun " << name << " () " << (detail::is_int_sort(e.op) ? "Int" : "Bool")
           << " " << s << ")\n";
      s = name;
    }
    text[i] = std::move(s);
  }

  std::ostringstream out;
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "; " << line << "\n";
  }
  out << "(set-logic " << to_string(logic) << ")\n";
  for (const auto& [name, is_bool] : vars)
    out << "(declare-fun " << name << " () " << (is_bool ? "Bool" : "Int") << ")\n";
  out << defs.str();
  out << "(assert " << text[root] << ")\n(check-sat)\n(get-model)\n";
  return out.str();
}

/// True iff some product has two non-constant factors.
inline bool is_nonlinear(const BoolExpr& phi) {
  detail::Numbering num;
  num.number(phi.node());
  const auto& es = num.entries();
  for (const auto& e : es)
    if (e.op == Op::Mul && es[e.kids[0]].op != Op::IntConst && es[e.kids[1]].op != Op::IntConst)
      return true;
  return false;
}

// ---------------------------------------------------------------------------
// Model parsing

class ModelParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprReader {
public:
  explicit SExprReader(std::string_view text) : t_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip();
    while (i_ < t_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

private:
  void skip() {
    while (i_ < t_.size()) {
      if (std::isspace(static_cast<unsigned char>(t_[i_]))) {
        ++i_;
      } else if (t_[i_] == ';') {
        while (i_ < t_.size() && t_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (i_ >= t_.size()) throw ModelParseError("unexpected end of s-expression");
    if (t_[i_] == ')') throw ModelParseError("unbalanced ')'");
    if (t_[i_] == '(') {
      ++i_;
      SExpr e;
      e.is_list = true;
      skip();
      while (i_ < t_.size() && t_[i_] != ')') {
        e.list.push_back(read());
        skip();
      }
      if (i_ >= t_.size()) throw ModelParseError("unterminated list");
      ++i_;
      return e;
    }
    SExpr e;
    if (t_[i_] == '|') {
      auto end = t_.find('|', i_ + 1);
      if (end == std::string_view::npos) throw ModelParseError("unterminated quoted symbol");
      e.atom = std::string(t_.substr(i_ + 1, end - i_ - 1));
      i_ = end + 1;
      return e;
    }
    if (t_[i_] == '"') {
      auto end = t_.find('"', i_ + 1);
      if (end == std::string_view::npos) throw ModelParseError("unterminated string");
      e.atom = std::string(t_.substr(i_, end - i_ + 1));
      i_ = end + 1;
      return e;
    }
    while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != '(' &&
           t_[i_] != ')')
      e.atom += t_[i_++];
    return e;
  }

  std::string_view t_;
  std::size_t i_ = 0;
};

inline std::optional<Int> int_of(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom.empty()) return std::nullopt;
    for (char c : e.atom)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return std::stoll(e.atom);
  }
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-")
    if (auto v = int_of(e.list[1])) return -*v;
  return std::nullopt;
}

inline void collect_defs(const SExpr& e, Model& m) {
  if (!e.is_list) return;
  if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun" &&
      e.list[2].is_list && e.list[2].list.empty() && !e.list[3].is_list) {
    const std::string& name = e.list[1].atom;
    const std::string& sort = e.list[3].atom;
    const SExpr& val = e.list[4];
    if (name.rfind("tmp!", 0) == 0) return;  // our own shared subterms, echoed back
    if (sort == "Bool") {
      if (val.is_list || (val.atom != "true" && val.atom != "false"))
        throw ModelParseError("bad Bool value for " + name);
      m.bools[name] = val.atom == "true";
    } else if (sort == "Int") {
      auto v = int_of(val);
      if (!v) throw ModelParseError("bad Int value for " + name);
      m.ints[name] = *v;
    }
    return;
  }
  for (const auto& k : e.list) collect_defs(k, m);
}

}  // namespace detail

/// Reads a get-model response; both the bare list and the `(model ...)`
/// forms are accepted.
inline Model parse_model(std::string_view text) {
  Model m;
  for (const auto& e : detail::SExprReader(text).read_all()) detail::collect_defs(e, m);
  return m;
}

// ---------------------------------------------------------------------------
// Solver process

struct SolverResult {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  Model model;
  std::string reason;

  bool sat() const { return kind == Kind::Sat; }
  bool unsat() const { return kind == Kind::Unsat; }
};

inline const char* to_string(SolverResult::Kind k) {
  switch (k) {
    case SolverResult::Kind::Sat: return "sat";
    case SolverResult::Kind::Unsat: return "unsat";
    default: return "unknown";
  }
}

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SolverNotFound : public SolverError {
public:
  using SolverError::SolverError;
};

struct ProcessOutput {
  bool timed_out = false;
  int exit_status = 0;
  std::string out;
};

namespace detail {

/// Runs `sh -c command`, feeding `input` on stdin. The child gets its own
/// process group, which is killed when `timeout_s` elapses.
inline ProcessOutput run_process(const std::string& command, const std::string& input,
                                 double timeout_s) {
  int in_sock[2];
  int out_pipe[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_sock) != 0)
    throw SolverError(std::string("socketpair: ") + std::strerror(errno));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_sock[0]);
    close(in_sock[1]);
    throw SolverError(std::string("pipe: ") + std::strerror(errno));
  }
  pid_t pid = fork();
  if (pid < 0) throw SolverError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(in_sock[1], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(in_sock[1]);
  close(out_pipe[1]);
  int wfd = in_sock[0], rfd = out_pipe[0];
  fcntl(wfd, F_SETFL, fcntl(wfd, F_GETFL) | O_NONBLOCK);

  using clock = std::chrono::steady_clock;
  auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                     std::chrono::duration<double>(std::max(0.0, timeout_s)));
  ProcessOutput result;
  std::size_t written = 0;
  bool writing = true;
  if (input.empty()) {
    shutdown(wfd, SHUT_WR);
    writing = false;
  }
  char buf[4096];
  while (true) {
    auto now = clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      break;
    }
    int ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    pollfd fds[2] = {{rfd, POLLIN, 0}, {wfd, static_cast<short>(writing ? POLLOUT : 0), 0}};
    int r = poll(fds, writing ? 2 : 1, ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (writing && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t n = send(wfd, input.data() + written, input.size() - written, MSG_NOSIGNAL);
      if (n > 0) written += static_cast<std::size_t>(n);
      if (n < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
      if (written >= input.size()) {
        shutdown(wfd, SHUT_WR);
        writing = false;
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      ssize_t n = read(rfd, buf, sizeof buf);
      if (n > 0) {
        result.out.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0) {
        break;
      } else if (errno != EINTR && errno != EAGAIN) {
        break;
      }
    }
  }
  if (result.timed_out) kill(-pid, SIGKILL);
  close(wfd);
  close(rfd);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return result;
}

}  // namespace detail

/// Runs a prepared script through `command` and interprets the answer.
inline SolverResult run_script(const std::string& script, const std::string& command,
                               double timeout_s) {
  ProcessOutput p = detail::run_process(command, script, timeout_s);
  if (p.timed_out) return {SolverResult::Kind::Unknown, {}, "timeout"};
  if (p.exit_status == 127 && p.out.empty())
    throw SolverNotFound("solver command not found: " + command);
  std::istringstream in(p.out);
  std::string first;
  in >> first;
  if (first == "sat") {
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
      return {SolverResult::Kind::Sat, parse_model(rest), {}};
    } catch (const ModelParseError& e) {
      throw SolverError(std::string("malformed solver output: ") + e.what());
    }
  }
  if (first == "unsat") return {SolverResult::Kind::Unsat, {}, {}};
  if (first == "unknown") return {SolverResult::Kind::Unknown, {}, "solver answered unknown"};
  if (first.empty()) throw SolverError("solver produced no output (exit status " +
                                       std::to_string(p.exit_status) + ")");
  throw SolverError("malformed solver output: " + p.out.substr(0, 200));
}

inline SolverResult solve(const BoolExpr& phi, Logic logic, double timeout_s,
                          const std::string& command = "z3 -in") {
  return run_script(to_smtlib(phi, logic), command, timeout_s);
}

}  // namespace wpo::smt
