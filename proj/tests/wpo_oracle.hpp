#pragma once

// A literal, unmemoized transcription of WPO with partial status and the two
// refinements, plus generators for well-formed random parameters.

#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "wpo/orders.hpp"

namespace oracles {

class NaiveWpo {
public:
  explicit NaiveWpo(const OrderParameters& p) : p_(p) {
    strictly_simple_ = true;
    for (auto f : p_.signature.symbols()) {
      int n = *p_.signature.arity(f);
      for (int i : sigma(f, n))
        if (!simple_by_enumeration(p_.algebra, std::string(name_of(f)), n, i, true))
          strictly_simple_ = false;
    }
  }

  bool ge(const Term& s, const Term& t) const {
    Cmp a = cmp_algebra(p_.algebra, s, t);
    if (s.is_var()) {
      if (s == t) return true;
      // (2c)
      return p_.refinements && a != Cmp::Incomparable && !t.is_var() &&
             sigma(t.head(), t.arity()).empty() && least(t.head());
    }
    if (a == Cmp::Greater) return true;
    if (a == Cmp::Incomparable) return false;
    if (case_2a(s, t)) return true;
    if (!t.is_var()) return case_2b(s, t, false);
    // (2d)
    return p_.refinements && strictly_simple_ && greatest(s.head());
  }

  bool gt(const Term& s, const Term& t) const {
    if (s.is_var()) return false;
    Cmp a = cmp_algebra(p_.algebra, s, t);
    if (a == Cmp::Greater) return true;
    if (a == Cmp::Incomparable) return false;
    if (case_2a(s, t)) return true;
    return !t.is_var() && case_2b(s, t, true);
  }

  Cmp cmp(const Term& s, const Term& t) const {
    return gt(s, t) ? Cmp::Greater : ge(s, t) ? Cmp::GreaterEqual : Cmp::Incomparable;
  }

private:
  std::vector<int> sigma(Symbol f, std::size_t n) const {
    auto it = p_.status.find(f);
    if (it != p_.status.end()) return it->second;
    std::vector<int> all;
    for (std::size_t i = 1; i <= n; ++i) all.push_back(static_cast<int>(i));
    return all;
  }

  int prec(Symbol f) const {
    auto it = p_.precedence.find(f);
    return it == p_.precedence.end() ? 0 : it->second;
  }

  bool least(Symbol g) const {
    for (auto f : p_.signature.symbols())
      if (prec(f) < prec(g)) return false;
    return true;
  }

  bool greatest(Symbol f) const {
    for (auto g : p_.signature.symbols()) {
      if (prec(f) > prec(g)) continue;
      if (prec(f) >= prec(g) && sigma(g, *p_.signature.arity(g)).empty()) continue;
      return false;
    }
    return true;
  }

  bool case_2a(const Term& s, const Term& t) const {
    for (int i : sigma(s.head(), s.arity()))
      if (ge(s.arg(i - 1), t)) return true;
    return false;
  }

  bool case_2b(const Term& s, const Term& t, bool strict) const {
    auto sf = sigma(s.head(), s.arity());
    auto sg = sigma(t.head(), t.arity());
    for (int j : sg)
      if (!gt(s, t.arg(j - 1))) return false;
    if (prec(s.head()) > prec(t.head())) return true;
    if (prec(s.head()) < prec(t.head())) return false;
    for (std::size_t k = 0;; ++k) {
      if (k == sg.size()) return strict ? k < sf.size() : true;
      if (k == sf.size()) return false;
      const Term& a = s.arg(sf[k] - 1);
      const Term& b = t.arg(sg[k] - 1);
      if (gt(a, b)) return true;
      if (!ge(a, b)) return false;
    }
  }

  const OrderParameters& p_;
  bool strictly_simple_ = false;
};

struct RandomOrderOptions {
  AlgebraKind kind = AlgebraKind::Sum;
  bool partial_status = true;
  bool refinements = false;
  int levels = 3;  // precedence levels 0..levels-1
};

/// Random parameters satisfying the comparator's preconditions: the algebra
/// maps into its carrier and is weakly simple at every status position.
inline OrderParameters random_order(std::mt19937& rng, const std::vector<testing_support::FunSym>& funs,
                                    const RandomOrderOptions& o) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  OrderParameters p;
  for (const auto& f : funs) p.signature.add(f.name, f.arity);
  p.algebra = random_algebra(rng, o.kind, funs);
  p.refinements = o.refinements;
  for (const auto& fs : funs) {
    Symbol f = intern(fs.name);
    p.precedence[f] = pick(0, o.levels - 1);
    std::vector<int> pos;
    for (int i = 1; i <= fs.arity; ++i) pos.push_back(i);
    std::shuffle(pos.begin(), pos.end(), rng);
    if (o.partial_status) pos.resize(static_cast<std::size_t>(pick(0, fs.arity)));
    p.status[f] = pos;
    AlgebraParams& A = p.algebra;
    for (int i : pos) {
      if (o.kind == AlgebraKind::Matrix) {
        for (int j = 0; j < A.dim; ++j) A.mat[{f, i}][j][j] = std::max<Int>(1, A.mat[{f, i}][j][j]);
      } else if (o.kind != AlgebraKind::Sum) {
        A.coef[{f, i}] = std::max<Int>(1, A.coefficient(f, i));
      }
    }
    if (o.kind != AlgebraKind::Matrix && A.weight(f) < A.w0) {
      bool any = o.kind == AlgebraKind::Sum && fs.arity > 0;
      for (int i = 1; i <= fs.arity; ++i) any = any || A.coefficient(f, i) >= 1;
      if (!any) A.w[f] = A.w0;
    }
  }
  return p;
}

}  // namespace oracles
