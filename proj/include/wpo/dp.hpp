#pragma once

/// \file
/// Dependency pairs, graph estimation, SCCs, usable rules and the
/// reduction-pair processor loop. Also the order-mode driver and proof replay.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "wpo/encoder.hpp"
#include "wpo/proof.hpp"
#include "wpo/smt.hpp"
#include "wpo/term.hpp"

namespace wpo {

struct DpProblem {
  std::vector<Rule> pairs;
  Trs rules;
  std::map<Symbol, Symbol> marks;  // f -> f#
};

namespace detail {

inline Term mark_root(const Term& t, const std::map<Symbol, Symbol>& marks) {
  return Term::app(marks.at(t.head()), t.args());
}

inline std::set<Symbol> variables_of(const Trs& trs) {
  std::set<Symbol> vs;
  for (const auto& r : trs.rules)
    for (auto x : vars_of(r.lhs)) vs.insert(x);
  return vs;
}

}  // namespace detail

/// DP(R): l# -> t# for every rule l -> r and subterm t of r with a defined
/// root. Marked names are f followed by as many '#' as needed to be fresh.
inline DpProblem dependency_pairs(const Trs& trs) {
  DpProblem p;
  p.rules = trs;
  auto defined = trs.defined_symbols();
  auto vars = detail::variables_of(trs);
  std::set<Symbol> taken(vars.begin(), vars.end());
  for (auto f : trs.signature.symbols()) taken.insert(f);
  for (auto f : trs.signature.symbols()) {
    if (!defined.count(f)) continue;
    std::string n(name_of(f));
    do n += '#';
    while (taken.count(intern(n)));
    p.marks[f] = intern(n);
    taken.insert(intern(n));
  }
  for (const auto& r : trs.rules)
    for (const auto& t : subterms(r.rhs)) {
      if (t.is_var() || !defined.count(t.head())) continue;
      Rule dp{detail::mark_root(r.lhs, p.marks), detail::mark_root(t, p.marks)};
      if (std::find(p.pairs.begin(), p.pairs.end(), dp) == p.pairs.end()) p.pairs.push_back(dp);
    }
  return p;
}

// ---------------------------------------------------------------------------
// Unification

namespace detail {

inline Term walk(Term t, const Substitution& s) {
  while (t.is_var()) {
    auto it = s.find(t.head());
    if (it == s.end()) break;
    t = it->second;
  }
  return t;
}

inline bool occurs(Symbol x, const Term& t, const Substitution& s) {
  Term u = walk(t, s);
  if (u.is_var()) return u.head() == x;
  for (const auto& a : u.args())
    if (occurs(x, a, s)) return true;
  return false;
}

inline bool unify_into(const Term& a, const Term& b, Substitution& s) {
  Term x = walk(a, s), y = walk(b, s);
  if (x.is_var() && y.is_var() && x.head() == y.head()) return true;
  if (x.is_var()) {
    if (occurs(x.head(), y, s)) return false;
    s[x.head()] = y;
    return true;
  }
  if (y.is_var()) return unify_into(y, x, s);
  if (x.head() != y.head() || x.arity() != y.arity()) return false;
  for (std::size_t i = 0; i < x.arity(); ++i)
    if (!unify_into(x.arg(i), y.arg(i), s)) return false;
  return true;
}

}  // namespace detail

/// Syntactic unifiability (variables of a and b are not renamed apart).
inline bool unifiable(const Term& a, const Term& b) {
  Substitution s;
  return detail::unify_into(a, b, s);
}

// ---------------------------------------------------------------------------
// Dependency graph

struct DependencyGraph {
  std::size_t nodes = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;

  bool has_edge(std::size_t i, std::size_t j) const { return edges.count({i, j}) != 0; }
};

namespace detail {

inline Term fresh_var(std::size_t& counter) {
  return Term::var("\x01v" + std::to_string(counter++));
}

/// REN(CAP(t)) below the root of t: variables and subterms with defined
/// roots become distinct fresh variables.
inline Term ren_cap(const Term& t, const std::set<Symbol>& defined, std::size_t& counter,
                    bool root) {
  if (t.is_var() || (!root && defined.count(t.head()))) return fresh_var(counter);
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(ren_cap(a, defined, counter, false));
  return Term::app(t.head(), std::move(args));
}

}  // namespace detail

/// Edge (i, j) iff REN(CAP(rhs_i)) unifies with lhs_j.
inline DependencyGraph estimate_graph(const std::vector<Rule>& pairs, const Trs& rules) {
  DependencyGraph g;
  g.nodes = pairs.size();
  auto defined = rules.defined_symbols();
  std::size_t counter = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Term cap = detail::ren_cap(pairs[i].rhs, defined, counter, true);
    for (std::size_t j = 0; j < pairs.size(); ++j)
      if (unifiable(cap, pairs[j].lhs)) g.edges.insert({i, j});
  }
  return g;
}

inline DependencyGraph estimate_graph(const DpProblem& p) { return estimate_graph(p.pairs, p.rules); }

/// Nontrivial SCCs restricted to `nodes` (all nodes if empty), ascending by
/// size, ties by smallest member.
inline std::vector<std::vector<std::size_t>> sccs(const DependencyGraph& g,
                                                  std::vector<std::size_t> nodes = {}) {
  if (nodes.empty())
    for (std::size_t i = 0; i < g.nodes; ++i) nodes.push_back(i);
  std::sort(nodes.begin(), nodes.end());
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  Graph bg(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = 0; b < nodes.size(); ++b)
      if (g.has_edge(nodes[a], nodes[b])) boost::add_edge(a, b, bg);
  std::vector<int> comp(nodes.size());
  int k = nodes.empty() ? 0 : boost::strong_components(bg, comp.data());
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
  for (std::size_t a = 0; a < nodes.size(); ++a) out[comp[a]].push_back(nodes[a]);
  std::erase_if(out, [&](const std::vector<std::size_t>& c) {
    return c.size() == 1 && !g.has_edge(c[0], c[0]);
  });
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
  });
  return out;
}

/// Least set of rules closed under: a defined symbol occurring in a pair's
/// right-hand side or in a usable rule's right-hand side makes its rules usable.
inline std::vector<Rule> usable_rules(const std::vector<Rule>& pairs, const Trs& rules) {
  auto defined = rules.defined_symbols();
  std::set<Symbol> reached;
  std::deque<Term> todo;
  for (const auto& p : pairs) todo.push_back(p.rhs);
  while (!todo.empty()) {
    Term t = todo.front();
    todo.pop_front();
    for (const auto& u : subterms(t)) {
      if (u.is_var() || !defined.count(u.head()) || reached.count(u.head())) continue;
      reached.insert(u.head());
      for (const auto& r : rules.rules)
        if (r.lhs.head() == u.head()) todo.push_back(r.rhs);
    }
  }
  std::vector<Rule> out;
  for (const auto& r : rules.rules)
    if (reached.count(r.lhs.head())) out.push_back(r);
  return out;
}

inline std::vector<Rule> usable_rules(const DpProblem& p) { return usable_rules(p.pairs, p.rules); }

// ---------------------------------------------------------------------------
// Drivers

struct SolveOptions {
  std::string smt_cmd = "z3 -in";
  double timeout_s = 60;  // total budget for all solver calls
  std::string emit_dir;   // when set, every script is written there
};

/// Raised when decoded parameters fail replay; never expected.
class SoundnessError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct Outcome {
  bool proved = false;
  Proof proof;
  std::vector<std::string> trace;
};

inline std::vector<EncodingConfig> default_strategy() {
  std::vector<EncodingConfig> s;
  for (auto k : {OrderKind::wpo_sum, OrderKind::lpo, OrderKind::wpo_max, OrderKind::wpo_ms,
                 OrderKind::polo, OrderKind::wpo_mp, OrderKind::wpo_mat}) {
    EncodingConfig c;
    c.order = k;
    c.mode = Mode::Pair;
    s.push_back(c);
  }
  return s;
}

namespace detail {

class SolverSession {
public:
  explicit SolverSession(SolveOptions opts)
      : opts_(std::move(opts)),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(opts_.timeout_s))) {}

  double remaining() const {
    return std::chrono::duration<double>(deadline_ - std::chrono::steady_clock::now()).count();
  }

  smt::SolverResult run(const Encoding& e, const std::string& label) {
    std::string script = smt::to_smtlib(e.formula, e.logic, e.comment);
    if (!opts_.emit_dir.empty()) {
      std::filesystem::create_directories(opts_.emit_dir);
      char name[32];
      std::snprintf(name, sizeof name, "%03d-", ++count_);
      std::ofstream(std::filesystem::path(opts_.emit_dir) / (name + label + ".smt2")) << script;
    }
    double left = remaining();
    if (left <= 0) return {smt::SolverResult::Kind::Unknown, {}, "timeout"};
    return smt::run_script(script, opts_.smt_cmd, left);
  }

private:
  SolveOptions opts_;
  std::chrono::steady_clock::time_point deadline_;
  int count_ = 0;
};

inline std::string rules_brief(const std::vector<Rule>& rs) {
  std::string s = "{";
  for (std::size_t i = 0; i < rs.size(); ++i) s += (i ? ", " : "") + to_string(rs[i]);
  return s + "}";
}

inline Signature signature_of(const std::vector<Rule>& a, const std::vector<Rule>& b = {}) {
  Signature sig;
  for (const auto* rs : {&a, &b})
    for (const auto& r : *rs) {
      sig.add_symbols_of(r.lhs);
      sig.add_symbols_of(r.rhs);
    }
  return sig;
}

inline std::string outcome_word(const smt::SolverResult& r) {
  if (r.unsat()) return "unsat";
  return r.reason.empty() ? "unknown" : r.reason;
}

}  // namespace detail

/// Orients every rule strictly with one order.
inline Outcome prove_order(const Trs& trs, EncodingConfig cfg, const SolveOptions& opts) {
  cfg.mode = Mode::Order;
  Outcome out;
  out.proof.kind = Proof::Kind::Order;
  if (trs.rules.empty()) {
    out.proved = true;
    return out;
  }
  if (auto why = inapplicable_reason(cfg, trs.rules)) {
    out.trace.push_back(to_string(cfg.order) + ": inapplicable (" + *why + ")");
    return out;
  }
  detail::SolverSession session(opts);
  Encoding e = encode_orientability(trs, cfg);
  auto res = session.run(e, to_string(cfg.order));
  if (!res.sat()) {
    out.trace.push_back(to_string(cfg.order) + ": " + detail::outcome_word(res));
    return out;
  }
  ProofStep step;
  step.config = cfg;
  try {
    step.params = decode_model(res.model, cfg, e.signature, e.weight_status);
  } catch (const DecodeError& err) {
    throw SoundnessError(std::string("decoding failed: ") + err.what());
  }
  for (const auto& r : trs.rules) step.obligations.push_back({r, true});
  if (auto c = check_step(step); !c)
    throw SoundnessError("model of " + to_string(cfg.order) + " does not verify: " + c.failure);
  out.proof.steps.push_back(std::move(step));
  out.proved = true;
  return out;
}

/// The reduction-pair processor loop over the SCCs of the estimated graph.
inline Outcome process_problem(const DpProblem& problem, std::vector<EncodingConfig> strategy,
                               const SolveOptions& opts) {
  for (auto& c : strategy) c.mode = Mode::Pair;
  Outcome out;
  out.proof.kind = Proof::Kind::Dp;
  out.proof.dependency_pairs = problem.pairs;
  DependencyGraph g = estimate_graph(problem);
  auto initial = sccs(g);
  std::deque<std::vector<std::size_t>> work(initial.begin(), initial.end());
  detail::SolverSession session(opts);

  while (!work.empty()) {
    auto scc = work.front();
    work.pop_front();
    std::vector<Rule> P;
    for (auto i : scc) P.push_back(problem.pairs[i]);
    auto U = usable_rules(P, problem.rules);
    Signature sig = detail::signature_of(P, U);
    bool solved = false;
    for (const auto& cfg : strategy) {
      if (session.remaining() <= 0) {
        out.trace.push_back("SCC " + detail::rules_brief(P) + ": out of time");
        break;
      }
      Encoding e = encode_dp_step(P, U, sig, cfg);
      auto res = session.run(e, to_string(cfg.order));
      std::string head = "SCC " + detail::rules_brief(P) + " with " + to_string(cfg.order) + ": ";
      if (!res.sat()) {
        out.trace.push_back(head + detail::outcome_word(res));
        continue;
      }
      ProofStep step;
      step.config = cfg;
      step.pairs = P;
      step.rules = U;
      try {
        step.params = decode_model(res.model, cfg, e.signature, e.weight_status);
      } catch (const DecodeError& err) {
        throw SoundnessError(std::string("decoding failed: ") + err.what());
      }
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < P.size(); ++k) {
        bool strict = res.model.bool_value(e.strict_markers[k]);
        step.obligations.push_back({P[k], strict});
        if (strict)
          step.removed.push_back(P[k]);
        else
          rest.push_back(scc[k]);
      }
      for (const auto& r : U) step.obligations.push_back({r, false});
      if (step.removed.empty()) throw SoundnessError("model removes no pair");
      if (auto c = check_step(step); !c)
        throw SoundnessError("model of " + to_string(cfg.order) + " does not verify: " + c.failure);
      out.trace.push_back(head + "removed " + std::to_string(step.removed.size()) + " pair(s)");
      out.proof.steps.push_back(std::move(step));
      auto sub = sccs(g, rest);
      if (rest.empty()) sub.clear();
      work.insert(work.begin(), sub.begin(), sub.end());
      solved = true;
      break;
    }
    if (!solved) return out;
  }
  out.proved = true;
  return out;
}

inline Outcome prove_dp(const Trs& trs, const std::vector<EncodingConfig>& strategy,
                        const SolveOptions& opts) {
  return process_problem(dependency_pairs(trs), strategy, opts);
}

// ---------------------------------------------------------------------------
// Replay

namespace detail {

inline const Obligation* find_obligation(const ProofStep& st, const Rule& r) {
  for (const auto& o : st.obligations)
    if (o.rule == r) return &o;
  return nullptr;
}

inline bool same_set(std::vector<Rule> a, std::vector<Rule> b) {
  if (a.size() != b.size()) return false;
  for (const auto& r : a)
    if (std::find(b.begin(), b.end(), r) == b.end()) return false;
  return true;
}

}  // namespace detail

/// Re-checks a proof against the TRS it claims to prove, recomputing the
/// dependency pairs, graph, SCC schedule and usable rules independently of
/// the proof's own records.
inline Check verify_proof(const Proof& proof, const Trs& trs) {
  if (proof.kind == Proof::Kind::Order) {
    if (trs.rules.empty() && proof.steps.empty()) return {};
    if (proof.steps.size() != 1) return Check::fail("order proof must have exactly one step");
    const auto& st = proof.steps[0];
    for (const auto& r : trs.rules) {
      auto* o = detail::find_obligation(st, r);
      if (!o || !o->strict) return Check::fail("rule " + to_string(r) + " not claimed strict");
    }
    return check_step(st);
  }

  DpProblem p = dependency_pairs(trs);
  if (p.pairs != proof.dependency_pairs) return Check::fail("dependency pairs differ");
  DependencyGraph g = estimate_graph(p);
  auto initial = sccs(g);
  std::deque<std::vector<std::size_t>> work(initial.begin(), initial.end());
  std::size_t k = 0;
  while (!work.empty()) {
    auto scc = work.front();
    work.pop_front();
    std::vector<Rule> P;
    for (auto i : scc) P.push_back(p.pairs[i]);
    if (k >= proof.steps.size()) return Check::fail("SCC " + detail::rules_brief(P) + " not handled");
    const auto& st = proof.steps[k++];
    if (!detail::same_set(st.pairs, P))
      return Check::fail("step " + std::to_string(k) + " handles " + detail::rules_brief(st.pairs) +
                         ", expected " + detail::rules_brief(P));
    for (const auto& r : P)
      if (!detail::find_obligation(st, r)) return Check::fail("pair " + to_string(r) + " unconstrained");
    for (const auto& r : usable_rules(P, trs))
      if (!detail::find_obligation(st, r))
        return Check::fail("usable rule " + to_string(r) + " unconstrained");
    if (st.removed.empty()) return Check::fail("step " + std::to_string(k) + " removes nothing");
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < P.size(); ++i) {
      bool removed = std::find(st.removed.begin(), st.removed.end(), P[i]) != st.removed.end();
      if (removed && !detail::find_obligation(st, P[i])->strict)
        return Check::fail("removed pair " + to_string(P[i]) + " not claimed strict");
      if (!removed) rest.push_back(scc[i]);
    }
    for (const auto& r : st.removed)
      if (std::find(P.begin(), P.end(), r) == P.end())
        return Check::fail("removed pair " + to_string(r) + " is not in the SCC");
    if (auto c = check_step(st); !c) return c;
    auto sub = rest.empty() ? std::vector<std::vector<std::size_t>>{} : sccs(g, rest);
    work.insert(work.begin(), sub.begin(), sub.end());
  }
  if (k != proof.steps.size()) return Check::fail("proof has unused steps");
  return {};
}

}  // namespace wpo
