#pragma once

/// \file
/// Direct evaluators: lexicographic extension, LPO, KBO/TKBO, argument
/// filtering and WPO with partial status (plus refinements 2c/2d).

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wpo/algebra.hpp"
#include "wpo/term.hpp"

namespace wpo {

/// Quasi-precedence as levels: f ≳ g iff level(f) ≥ level(g). Missing symbols
/// sit at level 0.
using Precedence = std::map<Symbol, int>;

inline int level(const Precedence& p, Symbol f) {
  auto it = p.find(f);
  return it == p.end() ? 0 : it->second;
}

struct OrderParameters {
  Precedence precedence;
  Status status;
  AlgebraParams algebra;
  Signature signature;
  bool admissible = false;
  bool refinements = false;
};

/// σ(f), defaulting to the identity permutation when f has no entry.
inline std::vector<int> status_of(const Status& sigma, Symbol f, std::size_t arity) {
  auto it = sigma.find(f);
  if (it != sigma.end()) return it->second;
  std::vector<int> id(arity);
  for (std::size_t i = 0; i < arity; ++i) id[i] = static_cast<int>(i) + 1;
  return id;
}

inline bool is_permutation_of(const std::vector<int>& l, std::size_t n) {
  if (l.size() != n) return false;
  std::vector<bool> seen(n + 1, false);
  for (int i : l) {
    if (i < 1 || static_cast<std::size_t>(i) > n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

/// Status with an explicit entry for every symbol of `sig`.
inline Status complete_status(const Status& sigma, const Signature& sig) {
  Status out;
  for (auto f : sig.symbols()) out[f] = status_of(sigma, f, *sig.arity(f));
  return out;
}

inline std::vector<Term> permuted_args(const Term& s, const std::vector<int>& positions) {
  std::vector<Term> out;
  out.reserve(positions.size());
  for (int i : positions) out.push_back(s.arg(i - 1));
  return out;
}

/// Lexicographic extension. Greater: a strict pair after a weak prefix, or ys
/// exhausted while xs is not. GreaterEqual: equal length, pairwise weak.
template <class T, class F>
Cmp lex_cmp(const std::vector<T>& xs, const std::vector<T>& ys, F&& cmp) {
  for (std::size_t i = 0;; ++i) {
    if (i == ys.size()) return i < xs.size() ? Cmp::Greater : Cmp::GreaterEqual;
    if (i == xs.size()) return Cmp::Incomparable;
    Cmp c = cmp(xs[i], ys[i]);
    if (c != Cmp::GreaterEqual) return c;
  }
}

// ---------------------------------------------------------------------------
// LPO

namespace detail {

inline void require_total(const Status& sigma, const Term& s) {
  if (s.is_var()) return;
  auto it = sigma.find(s.head());
  if (it != sigma.end() && !is_permutation_of(it->second, s.arity()))
    throw std::invalid_argument("lpo: status of " + std::string(s.name()) + " is not total");
  for (const auto& a : s.args()) require_total(sigma, a);
}

/// Equivalence induced by ∼ on symbols: same shape up to equivalent roots and
/// σ-ordered arguments.
inline bool lpo_equiv(const Precedence& prec, const Status& sigma, const Term& s, const Term& t) {
  if (s.is_var() || t.is_var()) return s == t;
  if (level(prec, s.head()) != level(prec, t.head()) || s.arity() != t.arity()) return false;
  auto xs = permuted_args(s, status_of(sigma, s.head(), s.arity()));
  auto ys = permuted_args(t, status_of(sigma, t.head(), t.arity()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!lpo_equiv(prec, sigma, xs[i], ys[i])) return false;
  return true;
}

inline bool lpo_gt_rec(const Precedence& prec, const Status& sigma, const Term& s, const Term& t) {
  if (s.is_var()) return false;
  for (const auto& si : s.args())
    if (lpo_equiv(prec, sigma, si, t) || lpo_gt_rec(prec, sigma, si, t)) return true;
  if (t.is_var()) return false;
  for (const auto& tj : t.args())
    if (!lpo_gt_rec(prec, sigma, s, tj)) return false;
  int lf = level(prec, s.head()), lg = level(prec, t.head());
  if (lf > lg) return true;
  if (lf < lg) return false;
  auto xs = permuted_args(s, status_of(sigma, s.head(), s.arity()));
  auto ys = permuted_args(t, status_of(sigma, t.head(), t.arity()));
  return lex_cmp(xs, ys, [&](const Term& a, const Term& b) {
           if (lpo_gt_rec(prec, sigma, a, b)) return Cmp::Greater;
           return lpo_equiv(prec, sigma, a, b) ? Cmp::GreaterEqual : Cmp::Incomparable;
         }) == Cmp::Greater;
}

}  // namespace detail

inline bool lpo_gt(const Precedence& prec, const Status& sigma, const Term& s, const Term& t) {
  detail::require_total(sigma, s);
  detail::require_total(sigma, t);
  return detail::lpo_gt_rec(prec, sigma, s, t);
}

/// ≻LPO ∪ ∼ as a three-valued result.
inline Cmp lpo_cmp(const Precedence& prec, const Status& sigma, const Term& s, const Term& t) {
  if (lpo_gt(prec, sigma, s, t)) return Cmp::Greater;
  return detail::lpo_equiv(prec, sigma, s, t) ? Cmp::GreaterEqual : Cmp::Incomparable;
}

// ---------------------------------------------------------------------------
// KBO / TKBO

inline Cmp kbo_tkbo_cmp(const OrderParameters& p, const Term& s, const Term& t) {
  const auto& A = p.algebra;
  if (A.kind != AlgebraKind::Sum && A.kind != AlgebraKind::Linear)
    throw std::invalid_argument("kbo_tkbo_cmp: algebra must be Sum or Linear");
  if (s == t) return Cmp::GreaterEqual;
  if (s.is_var()) return Cmp::Incomparable;
  LinearForm ls = linear_form(A, s), lt = linear_form(A, t);
  if (!covers(ls.vc, lt.vc)) return Cmp::Incomparable;
  if (ls.constant > lt.constant) return Cmp::Greater;
  if (ls.constant < lt.constant) return Cmp::Incomparable;
  if (t.is_var()) {
    // s = f^k(t) with k > 0
    Symbol f = s.head();
    Term u = s;
    while (!u.is_var() && u.head() == f && u.arity() == 1) u = u.arg(0);
    return u == t ? Cmp::Greater : Cmp::Incomparable;
  }
  int lf = level(p.precedence, s.head()), lg = level(p.precedence, t.head());
  if (lf > lg) return Cmp::Greater;
  if (lf < lg) return Cmp::Incomparable;
  auto xs = permuted_args(s, status_of(p.status, s.head(), s.arity()));
  auto ys = permuted_args(t, status_of(p.status, t.head(), t.arity()));
  return lex_cmp(xs, ys, [&](const Term& a, const Term& b) { return kbo_tkbo_cmp(p, a, b); });
}

// ---------------------------------------------------------------------------
// Argument filters

/// Either a collapsing position or a strictly increasing list of positions.
using FilterEntry = std::variant<int, std::vector<int>>;
using ArgumentFilter = std::map<Symbol, FilterEntry>;

inline Term apply_filter(const ArgumentFilter& pi, const Term& s) {
  if (s.is_var()) return s;
  auto it = pi.find(s.head());
  if (it == pi.end()) {
    std::vector<Term> args;
    for (const auto& a : s.args()) args.push_back(apply_filter(pi, a));
    return Term::app(s.head(), std::move(args));
  }
  if (auto* i = std::get_if<int>(&it->second)) return apply_filter(pi, s.arg(*i - 1));
  std::vector<Term> args;
  for (int i : std::get<std::vector<int>>(it->second)) args.push_back(apply_filter(pi, s.arg(i - 1)));
  return Term::app(s.head(), std::move(args));
}

// ---------------------------------------------------------------------------
// WPO

class PreconditionError : public std::invalid_argument {
public:
  PreconditionError(const std::string& msg, Symbol f, int pos)
      : std::invalid_argument(msg), symbol_(f), position_(pos) {}
  Symbol symbol() const { return symbol_; }
  int position() const { return position_; }

private:
  Symbol symbol_;
  int position_;
};

/// Evaluator for WPO(A, σ) with partial status. Construction checks weak
/// simplicity of the algebra at every σ-position; results are memoized per
/// instance, so an instance must not be shared across threads.
class WpoComparator {
public:
  explicit WpoComparator(OrderParameters params) : p_(std::move(params)) {
    sigma_ = complete_status(p_.status, p_.signature);
    if (auto v = check_weak_simplicity(p_.algebra, p_.signature, sigma_, false))
      throw PreconditionError("algebra is not weakly simple in argument " +
                                  std::to_string(v->position) + " of " +
                                  std::string(name_of(v->symbol)),
                              v->symbol, v->position);
    strictly_simple_ = !check_weak_simplicity(p_.algebra, p_.signature, sigma_, true);
  }

  const OrderParameters& params() const { return p_; }
  bool strictly_simple() const { return strictly_simple_; }

  Cmp algebra_cmp(const Term& s, const Term& t) {
    Key k{s, t};
    auto it = alg_cache_.find(k);
    if (it != alg_cache_.end()) return it->second;
    Cmp c = cmp_algebra(p_.algebra, s, t);
    alg_cache_.emplace(std::move(k), c);
    return c;
  }

  Cmp compare(const Term& s, const Term& t) {
    Key k{s, t};
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    Cmp c = compute(s, t);
    cache_.emplace(std::move(k), c);
    return c;
  }

  bool gt(const Term& s, const Term& t) { return compare(s, t) == Cmp::Greater; }
  bool ge(const Term& s, const Term& t) { return compare(s, t) != Cmp::Incomparable; }

  /// g is least: f ≳ g for every f ∈ Σ.
  bool least(Symbol g) const {
    int lg = level(p_.precedence, g);
    for (auto f : p_.signature.symbols())
      if (level(p_.precedence, f) < lg) return false;
    return true;
  }

  /// Condition of refinement (2d): for every g, f ≻ g, or f ≳ g and σ(g) = [].
  bool greatest_for_2d(Symbol f) const {
    int lf = level(p_.precedence, f);
    for (auto g : p_.signature.symbols()) {
      int lg = level(p_.precedence, g);
      if (lf > lg) continue;
      if (lf == lg && sigma_of(g, *p_.signature.arity(g)).empty()) continue;
      return false;
    }
    return true;
  }

  std::vector<int> sigma_of(Symbol f, std::size_t arity) const { return status_of(sigma_, f, arity); }

private:
  struct Key {
    Term s, t;
    bool operator==(const Key& o) const { return s == o.s && t == o.t; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.s.hash() * 31 + k.t.hash(); }
  };

  Cmp compute(const Term& s, const Term& t) {
    Cmp a = algebra_cmp(s, t);
    if (a == Cmp::Greater) return Cmp::Greater;  // (1)
    if (a == Cmp::Incomparable) return Cmp::Incomparable;
    if (s.is_var()) {
      if (s == t) return Cmp::GreaterEqual;
      if (p_.refinements && !t.is_var() && sigma_of(t.head(), t.arity()).empty() &&
          least(t.head()))
        return Cmp::GreaterEqual;  // (2c)
      return Cmp::Incomparable;
    }
    Symbol f = s.head();
    auto sf = sigma_of(f, s.arity());
    for (int i : sf)  // (2a)
      if (ge(s.arg(i - 1), t)) return Cmp::Greater;
    Cmp best = Cmp::Incomparable;
    if (!t.is_var()) {  // (2b)
      auto sg = sigma_of(t.head(), t.arity());
      bool all = true;
      for (int j : sg)
        if (!gt(s, t.arg(j - 1))) {
          all = false;
          break;
        }
      if (all) {
        int lf = level(p_.precedence, f), lg = level(p_.precedence, t.head());
        if (lf > lg) return Cmp::Greater;
        if (lf == lg) {
          Cmp lex = lex_cmp(permuted_args(s, sf), permuted_args(t, sg),
                            [&](const Term& x, const Term& y) { return compare(x, y); });
          if (lex == Cmp::Greater) return Cmp::Greater;
          best = lex;
        }
      }
    } else if (p_.refinements && strictly_simple_ && greatest_for_2d(f)) {
      best = Cmp::GreaterEqual;  // (2d)
    }
    return best;
  }

  OrderParameters p_;
  Status sigma_;
  bool strictly_simple_ = false;
  std::unordered_map<Key, Cmp, KeyHash> cache_;
  std::unordered_map<Key, Cmp, KeyHash> alg_cache_;
};

/// One-shot comparison; symbols of s and t missing from the signature are
/// added so that Σ covers both terms.
inline Cmp wpo_cmp(OrderParameters p, const Term& s, const Term& t) {
  p.signature.add_symbols_of(s);
  p.signature.add_symbols_of(t);
  WpoComparator c(std::move(p));
  return c.compare(s, t);
}

}  // namespace wpo
