#pragma once

/// \file
/// Parameterized algebras and order encodings into SMT formulas, the weight
/// status heuristic, and decoding of models back to concrete parameters.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wpo/algebra.hpp"
#include "wpo/orders.hpp"
#include "wpo/smt.hpp"
#include "wpo/term.hpp"

namespace wpo {

enum class OrderKind {
  kbo, tkbo, lpo, polo, polo_max,
  wpo_sum, wpo_sum_pos, wpo_max, wpo_pol, wpo_ms, wpo_mp, wpo_mat
};

enum class Mode { Order, Pair };

inline const std::vector<std::pair<OrderKind, std::string_view>>& order_kind_names() {
  static const std::vector<std::pair<OrderKind, std::string_view>> names = {
      {OrderKind::kbo, "kbo"},         {OrderKind::tkbo, "tkbo"},
      {OrderKind::lpo, "lpo"},         {OrderKind::polo, "polo"},
      {OrderKind::polo_max, "polo-max"}, {OrderKind::wpo_sum, "wpo-sum"},
      {OrderKind::wpo_sum_pos, "wpo-sum+"}, {OrderKind::wpo_max, "wpo-max"},
      {OrderKind::wpo_pol, "wpo-pol"}, {OrderKind::wpo_ms, "wpo-ms"},
      {OrderKind::wpo_mp, "wpo-mp"},   {OrderKind::wpo_mat, "wpo-mat"}};
  return names;
}

inline std::string to_string(OrderKind k) {
  for (const auto& [kind, name] : order_kind_names())
    if (kind == k) return std::string(name);
  return "?";
}

/// Accepts the dashed names above, underscores instead of dashes, and
/// `wpo_sum_pos` for `wpo-sum+`.
inline std::optional<OrderKind> parse_order_kind(std::string_view s) {
  std::string n(s);
  for (auto& c : n)
    if (c == '_') c = '-';
  if (n == "wpo-sum-pos") n = "wpo-sum+";
  for (const auto& [kind, name] : order_kind_names())
    if (name == n) return kind;
  return std::nullopt;
}

inline const char* to_string(Mode m) { return m == Mode::Order ? "order" : "pair"; }

struct EncodingConfig {
  OrderKind order = OrderKind::wpo_sum;
  Mode mode = Mode::Order;
  int max_weight = 3;
  int max_coef = 3;
  int dim = 2;
  std::optional<Int> fix_w0;
  bool refinements = true;
  bool reduce_recursion = true;
  bool force_total = false;  // add TOTAL in pair mode as well
  bool ws_all_max = false;   // skip the weight-status heuristic, use all Max
};

/// Orders whose parameters are searched for a bare algebra, without path order.
inline bool is_bare(OrderKind k) { return k == OrderKind::polo || k == OrderKind::polo_max; }

inline AlgebraKind algebra_family(OrderKind k) {
  switch (k) {
    case OrderKind::kbo:
    case OrderKind::wpo_sum:
    case OrderKind::wpo_sum_pos: return AlgebraKind::Sum;
    case OrderKind::tkbo:
    case OrderKind::polo:
    case OrderKind::wpo_pol: return AlgebraKind::Linear;
    case OrderKind::wpo_mat: return AlgebraKind::Matrix;
    default: return AlgebraKind::MaxPol;
  }
}

inline bool uses_weight_status_heuristic(OrderKind k) {
  return k == OrderKind::wpo_ms || k == OrderKind::wpo_mp || k == OrderKind::polo_max;
}

inline smt::Logic logic_of(OrderKind k) {
  switch (k) {
    case OrderKind::kbo:
    case OrderKind::lpo:
    case OrderKind::wpo_sum:
    case OrderKind::wpo_sum_pos:
    case OrderKind::wpo_max:
    case OrderKind::wpo_ms: return smt::Logic::QF_LIA;
    default: return smt::Logic::QF_NIA;
  }
}

/// Why an order cannot apply to the given rules in this mode, if it cannot.
inline std::optional<std::string> inapplicable_reason(const EncodingConfig& cfg,
                                                      const std::vector<Rule>& rules) {
  if (cfg.mode == Mode::Order && cfg.order == OrderKind::polo_max)
    return "polo-max is not strictly monotone and only usable as a reduction pair";
  if (cfg.mode == Mode::Order && algebra_family(cfg.order) == AlgebraKind::Sum)
    for (const auto& r : rules)
      if (is_duplicating(r))
        return "duplicating rule " + to_string(r) + " cannot be oriented by " +
               to_string(cfg.order);
  return std::nullopt;
}

using WeightStatusMap = std::map<Symbol, WeightStatus>;

// ---------------------------------------------------------------------------
// Weight status heuristic

namespace detail {

inline AlgebraParams unit_maxpol(const WeightStatusMap& ws) {
  AlgebraParams A;
  A.kind = AlgebraKind::MaxPol;
  A.wstatus = ws;
  return A;  // weights, penalties and w0 zero, coefficients one
}

inline bool xw_covered(const ExpandedWeight& lhs, const GeneralizedWeight& m) {
  for (const auto& n : lhs)
    if (covers(n.vars, m.vars)) return true;
  return false;
}

inline void post_order(const Term& t, std::vector<Term>& out) {
  if (!t.is_var())
    for (const auto& a : t.args()) post_order(a, out);
  out.push_back(t);
}

}  // namespace detail

/// True iff every multiset of XW(r) is covered by one of XW(l) under unit
/// coefficients and the weight status `ws`.
inline bool weight_status_covers(const Rule& r, const WeightStatusMap& ws) {
  auto A = detail::unit_maxpol(ws);
  auto xl = expanded_weight(A, r.lhs);
  for (const auto& m : expanded_weight(A, r.rhs))
    if (!detail::xw_covered(xl, m)) return false;
  return true;
}

/// Greedy weight status: start all-Pol; while a rule fails coverage, flip the
/// innermost Pol symbol of its right-hand side that has an uncovered
/// multiset below it.
inline WeightStatusMap fix_weight_status(const std::vector<Rule>& rules, const Signature& sig,
                                         const EncodingConfig& cfg) {
  WeightStatusMap ws;
  for (auto f : sig.symbols()) ws[f] = cfg.ws_all_max ? WeightStatus::Max : WeightStatus::Pol;
  if (cfg.ws_all_max) return ws;
  while (true) {
    bool changed = false;
    for (const auto& r : rules) {
      if (weight_status_covers(r, ws)) continue;
      auto A = detail::unit_maxpol(ws);
      auto xl = expanded_weight(A, r.lhs);
      std::vector<Term> order;
      detail::post_order(r.rhs, order);
      for (const auto& u : order) {
        if (u.is_var() || ws[u.head()] == WeightStatus::Max) continue;
        bool uncovered = false;
        for (const auto& m : expanded_weight(A, u))
          if (!detail::xw_covered(xl, m)) {
            uncovered = true;
            break;
          }
        if (uncovered) {
          ws[u.head()] = WeightStatus::Max;
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
    if (!changed) return ws;
  }
}

// ---------------------------------------------------------------------------
// Variable naming

class VarNames {
public:
  explicit VarNames(const Signature& sig) {
    for (std::size_t k = 0; k < sig.symbols().size(); ++k) index_[sig.symbols()[k]] = k;
  }

  std::string idx(Symbol f) const {
    auto it = index_.find(f);
    if (it == index_.end())
      throw std::invalid_argument("symbol " + std::string(name_of(f)) + " not in signature");
    return std::to_string(it->second);
  }
  std::string w(Symbol f) const { return "w_" + idx(f); }
  static std::string w0() { return "w0"; }
  std::string c(Symbol f, int i) const { return "c_" + idx(f) + "_" + std::to_string(i); }
  std::string p(Symbol f, int i) const { return "p_" + idx(f) + "_" + std::to_string(i); }
  std::string prec(Symbol f) const { return "prec_" + idx(f); }
  std::string permed(Symbol f, int i) const { return "permed_" + idx(f) + "_" + std::to_string(i); }
  std::string perm(Symbol f, int i, int j) const {
    return "perm_" + idx(f) + "_" + std::to_string(i) + "_" + std::to_string(j);
  }
  std::string v(Symbol f, int r) const { return "v_" + idx(f) + "_" + std::to_string(r); }
  std::string m(Symbol f, int i, int r, int c) const {
    return "m_" + idx(f) + "_" + std::to_string(i) + "_" + std::to_string(r) + "_" +
           std::to_string(c);
  }
  static std::string strict_marker(std::size_t i) { return "strict_" + std::to_string(i); }

private:
  std::map<Symbol, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Encoder

/// Builds formulas for one configuration over one signature. Encodings are
/// memoized per instance.
class Encoder {
public:
  Encoder(EncodingConfig cfg, Signature sig, WeightStatusMap ws = {})
      : cfg_(std::move(cfg)), sig_(std::move(sig)), names_(sig_), ws_(std::move(ws)) {
    if (cfg_.mode == Mode::Order && cfg_.order == OrderKind::polo_max)
      throw std::invalid_argument("polo-max has no order mode");
  }

  const EncodingConfig& config() const { return cfg_; }
  const Signature& signature() const { return sig_; }
  const WeightStatusMap& weight_status() const { return ws_; }
  smt::Logic logic() const { return logic_of(cfg_.order); }

  WeightStatus ws(Symbol f) const {
    switch (cfg_.order) {
      case OrderKind::lpo:
      case OrderKind::wpo_max: return WeightStatus::Max;
      case OrderKind::wpo_ms:
      case OrderKind::wpo_mp:
      case OrderKind::polo_max: {
        auto it = ws_.find(f);
        return it == ws_.end() ? WeightStatus::Pol : it->second;
      }
      default: return WeightStatus::Pol;
    }
  }

  // -- parameters -----------------------------------------------------------

  smt::IntExpr w0() const {
    if (cfg_.fix_w0) return *cfg_.fix_w0;
    if (cfg_.order == OrderKind::lpo) return 0;
    return smt::int_var(VarNames::w0());
  }
  smt::IntExpr weight(Symbol f) const {
    if (cfg_.order == OrderKind::lpo) return 0;
    return smt::int_var(names_.w(f));
  }
  smt::IntExpr penalty(Symbol f, int i) const {
    if (cfg_.order == OrderKind::lpo) return 0;
    return smt::int_var(names_.p(f, i));
  }
  smt::BoolExpr permed(Symbol f, int i) const {
    if (is_bare(cfg_.order)) return false;
    return smt::bool_var(names_.permed(f, i));
  }
  smt::BoolExpr perm(Symbol f, int i, int j) const {
    if (is_bare(cfg_.order)) return false;
    return smt::bool_var(names_.perm(f, i, j));
  }
  smt::IntExpr prec(Symbol f) const { return smt::int_var(names_.prec(f)); }

  smt::IntExpr coef(Symbol f, int i) const {
    bool pair = cfg_.mode == Mode::Pair;
    switch (cfg_.order) {
      case OrderKind::kbo:
      case OrderKind::lpo: return pair ? smt::ite(permed(f, i), 1, 0) : smt::IntExpr(1);
      case OrderKind::wpo_sum:
      case OrderKind::wpo_sum_pos:
      case OrderKind::wpo_max: return 1;
      case OrderKind::wpo_ms: return smt::ite(smt::bool_var(names_.c(f, i)), 1, 0);
      default: return smt::int_var(names_.c(f, i));
    }
  }
  bool has_int_coef() const {
    switch (cfg_.order) {
      case OrderKind::tkbo:
      case OrderKind::polo:
      case OrderKind::polo_max:
      case OrderKind::wpo_pol:
      case OrderKind::wpo_mp: return true;
      default: return false;
    }
  }
  smt::IntExpr vec(Symbol f, int r) const { return smt::int_var(names_.v(f, r)); }
  smt::IntExpr mat(Symbol f, int i, int r, int c) const {
    return smt::int_var(names_.m(f, i, r, c));
  }

  // -- side conditions ------------------------------------------------------

  smt::BoolExpr side_conditions() const {
    using namespace smt;
    std::vector<BoolExpr> out;
    AlgebraKind fam = algebra_family(cfg_.order);
    bool bare = is_bare(cfg_.order);
    bool total = cfg_.mode == Mode::Order || cfg_.force_total;
    auto bounded = [&](const IntExpr& x, Int hi) {
      out.push_back(x >= 0);
      out.push_back(x <= hi);
    };

    if (!cfg_.fix_w0 && cfg_.order != OrderKind::lpo && fam != AlgebraKind::Matrix)
      bounded(w0(), cfg_.max_weight);
    if (cfg_.order == OrderKind::kbo || cfg_.order == OrderKind::tkbo ||
        cfg_.order == OrderKind::wpo_sum_pos)
      out.push_back(w0() >= 1);

    for (auto f : sig_.symbols()) {
      int n = *sig_.arity(f);
      if (fam == AlgebraKind::Matrix) {
        for (int r = 0; r < cfg_.dim; ++r) bounded(vec(f, r), cfg_.max_weight);
        for (int i = 1; i <= n; ++i)
          for (int r = 0; r < cfg_.dim; ++r)
            for (int c = 0; c < cfg_.dim; ++c) bounded(mat(f, i, r, c), cfg_.max_coef);
      } else if (cfg_.order != OrderKind::lpo) {
        bounded(weight(f), cfg_.max_weight);
        if (has_int_coef())
          for (int i = 1; i <= n; ++i) bounded(coef(f, i), cfg_.max_coef);
        if (fam == AlgebraKind::MaxPol && ws(f) == WeightStatus::Max)
          for (int i = 1; i <= n; ++i) bounded(penalty(f, i), cfg_.max_weight);
      }
      if (bare) {
        // strict monotonicity for reduction orders
        if (cfg_.mode == Mode::Order && has_int_coef())
          for (int i = 1; i <= n; ++i) out.push_back(coef(f, i) >= 1);
        continue;
      }
      bounded(prec(f), static_cast<Int>(sig_.size()));

      // ST, with slots filled from the front and at most one position per slot
      for (int i = 1; i <= n; ++i) {
        std::vector<BoolExpr> slots;
        for (int j = 1; j <= n; ++j) slots.push_back(perm(f, i, j));
        out.push_back(implies(permed(f, i), count(slots) == 1));
        out.push_back(implies(!permed(f, i), count(slots) == 0));
      }
      if (n >= 2)
        for (int j = 1; j <= n; ++j) {
          std::vector<BoolExpr> at;
          for (int i = 1; i <= n; ++i) at.push_back(perm(f, i, j));
          out.push_back(count(at) <= 1);
          if (j >= 2) out.push_back(implies(has_slot(f, n, j), has_slot(f, n, j - 1)));
        }

      // SIMP
      for (int i = 1; i <= n; ++i) out.push_back(implies(permed(f, i), weakly_simple(f, i)));
      // coefficients of filtered arguments vanish for tkbo
      if (cfg_.order == OrderKind::tkbo)
        for (int i = 1; i <= n; ++i) out.push_back(implies(!permed(f, i), coef(f, i) == 0));
      if (total)
        for (int i = 1; i <= n; ++i) out.push_back(permed(f, i));
    }

    // WMIN
    if (fam != AlgebraKind::Matrix && cfg_.order != OrderKind::lpo)
      for (auto f : sig_.symbols()) {
        int n = *sig_.arity(f);
        std::vector<BoolExpr> alt{weight(f) >= w0()};
        for (int i = 1; i <= n; ++i) alt.push_back(coef(f, i) >= 1);
        out.push_back(disj(alt));
      }

    // admissibility
    if (cfg_.order == OrderKind::kbo || cfg_.order == OrderKind::tkbo)
      for (auto f : sig_.symbols()) {
        int n = *sig_.arity(f);
        if (n == 0) out.push_back(weight(f) >= w0());
        if (n == 1) {
          std::vector<BoolExpr> top;
          for (auto g : sig_.symbols()) top.push_back(prec(f) >= prec(g));
          out.push_back(implies(weight(f) == 0, conj(top)));
        }
      }
    return conj(out);
  }

  smt::BoolExpr weakly_simple(Symbol f, int i) const {
    using namespace smt;
    switch (algebra_family(cfg_.order)) {
      case AlgebraKind::Sum: return coef(f, i) >= 1;
      case AlgebraKind::Matrix: {
        std::vector<BoolExpr> diag;
        for (int j = 0; j < cfg_.dim; ++j) diag.push_back(mat(f, i, j, j) >= 1);
        return conj(diag);
      }
      default: return coef(f, i) >= 1;
    }
  }

  /// Sufficient condition for f_A being strictly simple in argument i.
  smt::BoolExpr strictly_simple(Symbol f, int i) const {
    using namespace smt;
    int n = *sig_.arity(f);
    AlgebraKind fam = algebra_family(cfg_.order);
    if (fam == AlgebraKind::Matrix) return weakly_simple(f, i) && vec(f, 0) >= 1;
    if (fam == AlgebraKind::MaxPol && ws(f) == WeightStatus::Max)
      return coef(f, i) >= 1 && penalty(f, i) >= 1;
    std::vector<IntExpr> cs;
    for (int j = 1; j <= n; ++j) cs.push_back(coef(f, j));
    return coef(f, i) >= 1 && (weight(f) >= 1 || (w0() >= 1 && sum(cs) >= 2));
  }

  smt::BoolExpr strictly_simple_all() const {
    if (!strict_simple_all_) {
      std::vector<smt::BoolExpr> out;
      for (auto f : sig_.symbols())
        for (int i = 1; i <= *sig_.arity(f); ++i)
          out.push_back(smt::implies(permed(f, i), strictly_simple(f, i)));
      strict_simple_all_ = smt::conj(out);
    }
    return *strict_simple_all_;
  }

  // -- algebra comparisons --------------------------------------------------

  smt::BoolExpr algebra_cmp(const Term& s, const Term& t, bool strict) {
    switch (algebra_family(cfg_.order)) {
      case AlgebraKind::Sum:
      case AlgebraKind::Linear: return linear_cmp(s, t, strict);
      case AlgebraKind::MaxPol: return maxpol_cmp(s, t, strict);
      default: return matrix_cmp(s, t, strict);
    }
  }

  // -- WPO ------------------------------------------------------------------

  /// ⟦s ⊒ t⟧ or ⟦s ≻ t⟧.
  smt::BoolExpr wpo(const Term& s, const Term& t, bool strict) {
    Key key{s, t, strict};
    auto it = wpo_cache_.find(key);
    if (it != wpo_cache_.end()) return it->second;
    smt::BoolExpr r = algebra_cmp(s, t, true) || (algebra_cmp(s, t, false) && one(s, t, strict));
    wpo_cache_.emplace(key, r);
    return r;
  }

  /// The constraint used for a rule: path order for WPO kinds, the bare
  /// algebra for polo/polo-max.
  smt::BoolExpr orient(const Term& s, const Term& t, bool strict) {
    return is_bare(cfg_.order) ? algebra_cmp(s, t, strict) : wpo(s, t, strict);
  }

  std::string legend() const {
    std::ostringstream os;
    os << "order " << to_string(cfg_.order) << ", mode " << to_string(cfg_.mode) << "\nsymbols:";
    for (std::size_t k = 0; k < sig_.symbols().size(); ++k)
      os << " " << k << "=" << name_of(sig_.symbols()[k]);
    return os.str();
  }

private:
  struct Key {
    Term s, t;
    bool strict;
    bool operator==(const Key& o) const { return strict == o.strict && s == o.s && t == o.t; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return (k.s.hash() * 31 + k.t.hash()) * 2 + (k.strict ? 1 : 0);
    }
  };

  smt::BoolExpr has_slot(Symbol f, int n, int j) const {
    std::vector<smt::BoolExpr> any;
    for (int i = 1; i <= n; ++i) any.push_back(perm(f, i, j));
    return smt::disj(any);
  }

  /// w0 ≥ 1 and every coefficient ≥ 1 are guaranteed by the side conditions.
  bool positive_weights_static() const {
    bool w0_pos = (cfg_.fix_w0 && *cfg_.fix_w0 >= 1) || cfg_.order == OrderKind::kbo ||
                  cfg_.order == OrderKind::tkbo || cfg_.order == OrderKind::wpo_sum_pos;
    if (!w0_pos) return false;
    bool sum_coefs = cfg_.order == OrderKind::wpo_sum || cfg_.order == OrderKind::wpo_sum_pos ||
                     (cfg_.order == OrderKind::kbo && cfg_.mode == Mode::Order);
    bool total = cfg_.mode == Mode::Order || cfg_.force_total;
    return sum_coefs || (total && algebra_family(cfg_.order) != AlgebraKind::Matrix);
  }

  /// f(s1..sn) >_A si holds for every i whenever this is true.
  bool reduces(const Term& s) const {
    return cfg_.reduce_recursion && !s.is_var() && s.arity() >= 2 &&
           ws(s.head()) == WeightStatus::Pol &&
           algebra_family(cfg_.order) != AlgebraKind::Matrix && positive_weights_static();
  }

  smt::BoolExpr one(const Term& s, const Term& t, bool strict) {
    using namespace smt;
    if (s.is_var()) {
      if (strict) return false;
      if (s == t) return true;
      if (use_refinements() && !t.is_var()) return case_2c(t.head(), static_cast<int>(t.arity()));
      return false;
    }
    if (reduces(s)) return two(s, t, strict);
    std::vector<BoolExpr> alts;
    Symbol f = s.head();
    for (std::size_t i = 0; i < s.arity(); ++i)
      alts.push_back(permed(f, static_cast<int>(i) + 1) && wpo(s.arg(i), t, false));
    alts.push_back(two(s, t, strict));
    if (!strict && t.is_var() && use_refinements()) alts.push_back(case_2d(f));
    return disj(alts);
  }

  smt::BoolExpr two(const Term& s, const Term& t, bool strict) {
    using namespace smt;
    if (t.is_var()) return false;
    Symbol f = s.head(), g = t.head();
    std::vector<BoolExpr> parts;
    if (!reduces(t))
      for (std::size_t j = 0; j < t.arity(); ++j)
        parts.push_back(implies(permed(g, static_cast<int>(j) + 1), wpo(s, t.arg(j), true)));
    parts.push_back(prec(f) > prec(g) || (prec(f) == prec(g) && lex(s, t, strict, 1)));
    return conj(parts);
  }

  /// Lexicographic comparison of the σ-selected argument lists from slot j on.
  smt::BoolExpr lex(const Term& s, const Term& t, bool strict, int j) {
    using namespace smt;
    int n = static_cast<int>(s.arity()), m = static_cast<int>(t.arity());
    Symbol f = s.head(), g = t.head();
    if (j > n && j > m) return !strict;
    BoolExpr has_a = j <= n ? has_slot(f, n, j) : BoolExpr(false);
    BoolExpr has_b = j <= m ? has_slot(g, m, j) : BoolExpr(false);
    std::vector<BoolExpr> gt, ge;
    for (int i = 1; i <= n && j <= n; ++i)
      for (int k = 1; k <= m && j <= m; ++k) {
        if (f == g && i != k) continue;
        BoolExpr sel = f == g ? perm(f, i, j) : (perm(f, i, j) && perm(g, k, j));
        gt.push_back(sel && wpo(s.arg(i - 1), t.arg(k - 1), true));
        ge.push_back(sel && wpo(s.arg(i - 1), t.arg(k - 1), false));
      }
    BoolExpr step = disj(gt) || (disj(ge) && lex(s, t, strict, j + 1));
    BoolExpr exhausted = strict ? (!has_b && has_a) : !has_b;
    return exhausted || (has_a && has_b && step);
  }

  bool use_refinements() const { return cfg_.refinements && cfg_.mode == Mode::Pair; }

  /// (2c): σ(g) empty and g least.
  smt::BoolExpr case_2c(Symbol g, int m) const {
    std::vector<smt::BoolExpr> out;
    for (int j = 1; j <= m; ++j) out.push_back(!permed(g, j));
    for (auto f : sig_.symbols()) out.push_back(prec(f) >= prec(g));
    return smt::conj(out);
  }

  /// (2d): for every g, f ≻ g or (f ≳ g and σ(g) empty); A strictly simple.
  smt::BoolExpr case_2d(Symbol f) const {
    std::vector<smt::BoolExpr> out{strictly_simple_all()};
    for (auto g : sig_.symbols()) {
      std::vector<smt::BoolExpr> empty;
      for (int j = 1; j <= *sig_.arity(g); ++j) empty.push_back(!permed(g, j));
      out.push_back(prec(f) > prec(g) || (prec(f) >= prec(g) && smt::conj(empty)));
    }
    return smt::conj(out);
  }

  // -- linear ---------------------------------------------------------------

  struct SymLinear {
    smt::IntExpr constant;
    std::map<Symbol, smt::IntExpr> vc;
  };

  const SymLinear& linear(const Term& s) {
    auto it = lin_cache_.find(s);
    if (it != lin_cache_.end()) return it->second;
    SymLinear out;
    if (s.is_var()) {
      out.constant = w0();
      out.vc[s.head()] = 1;
    } else {
      Symbol f = s.head();
      std::vector<smt::IntExpr> parts{weight(f)};
      std::map<Symbol, std::vector<smt::IntExpr>> vcs;
      for (std::size_t i = 0; i < s.arity(); ++i) {
        smt::IntExpr c = coef(f, static_cast<int>(i) + 1);
        const SymLinear& sub = linear(s.arg(i));
        parts.push_back(c * sub.constant);
        for (const auto& [x, e] : sub.vc) vcs[x].push_back(c * e);
      }
      out.constant = smt::sum(parts);
      for (auto& [x, es] : vcs) out.vc[x] = smt::sum(es);
    }
    return lin_cache_.emplace(s, std::move(out)).first->second;
  }

  smt::BoolExpr linear_cmp(const Term& s, const Term& t, bool strict) {
    using namespace smt;
    if (s == t) return !strict;
    const SymLinear& ls = linear(s);
    const SymLinear& lt = linear(t);
    std::vector<BoolExpr> out{strict ? ls.constant > lt.constant : ls.constant >= lt.constant};
    for (const auto& [x, e] : lt.vc) {
      auto it = ls.vc.find(x);
      out.push_back((it == ls.vc.end() ? IntExpr(0) : it->second) >= e);
    }
    return conj(out);
  }

  // -- max/polynomial -------------------------------------------------------

  struct SymWeight {
    smt::IntExpr constant;
    std::map<Symbol, smt::IntExpr> vars;
  };

  static SymWeight scaled(const smt::IntExpr& base, const smt::IntExpr& c, const SymWeight& p) {
    SymWeight r{base + c * p.constant, {}};
    for (const auto& [x, e] : p.vars) r.vars[x] = c * e;
    return r;
  }

  const std::vector<SymWeight>& xw(const Term& s) {
    auto it = xw_cache_.find(s);
    if (it != xw_cache_.end()) return it->second;
    std::vector<SymWeight> out;
    if (s.is_var()) {
      out.push_back(SymWeight{w0(), {{s.head(), 1}}});
    } else {
      Symbol f = s.head();
      if (ws(f) == WeightStatus::Max) {
        out.push_back(SymWeight{weight(f), {}});
        for (std::size_t i = 0; i < s.arity(); ++i) {
          int p = static_cast<int>(i) + 1;
          for (const auto& q : xw(s.arg(i))) out.push_back(scaled(penalty(f, p), coef(f, p), q));
        }
      } else {
        std::vector<SymWeight> acc{SymWeight{weight(f), {}}};
        for (std::size_t i = 0; i < s.arity(); ++i) {
          smt::IntExpr c = coef(f, static_cast<int>(i) + 1);
          std::vector<SymWeight> next;
          for (const auto& a : acc)
            for (const auto& q : xw(s.arg(i))) {
              SymWeight r = scaled(a.constant, c, q);
              for (const auto& [x, e] : a.vars) r.vars[x] = r.vars.count(x) ? r.vars[x] + e : e;
              next.push_back(std::move(r));
            }
          acc = std::move(next);
        }
        out = std::move(acc);
      }
    }
    return xw_cache_.emplace(s, std::move(out)).first->second;
  }

  smt::BoolExpr maxpol_cmp(const Term& s, const Term& t, bool strict) {
    using namespace smt;
    if (s == t) return !strict;
    const auto& xs = xw(s);
    const auto& xt = xw(t);
    std::vector<BoolExpr> all;
    for (const auto& m : xt) {
      std::vector<BoolExpr> any;
      for (const auto& n : xs) {
        std::vector<BoolExpr> c{strict ? n.constant > m.constant : n.constant >= m.constant};
        for (const auto& [x, e] : m.vars) {
          auto it = n.vars.find(x);
          c.push_back((it == n.vars.end() ? IntExpr(0) : it->second) >= e);
        }
        any.push_back(conj(c));
      }
      all.push_back(disj(any));
    }
    return conj(all);
  }

  // -- matrices -------------------------------------------------------------

  using SymMat = std::vector<std::vector<smt::IntExpr>>;
  struct SymMatrixForm {
    std::vector<smt::IntExpr> constant;
    std::map<Symbol, SymMat> coeff;
  };

  SymMat mul(const SymMat& a, const SymMat& b) const {
    int d = cfg_.dim;
    SymMat out(d, std::vector<smt::IntExpr>(d, 0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        std::vector<smt::IntExpr> terms;
        for (int k = 0; k < d; ++k) terms.push_back(a[i][k] * b[k][j]);
        out[i][j] = smt::sum(terms);
      }
    return out;
  }

  const SymMatrixForm& matrix(const Term& s) {
    auto it = mat_cache_.find(s);
    if (it != mat_cache_.end()) return it->second;
    int d = cfg_.dim;
    SymMatrixForm out;
    if (s.is_var()) {
      out.constant.assign(d, 0);
      SymMat id(d, std::vector<smt::IntExpr>(d, 0));
      for (int i = 0; i < d; ++i) id[i][i] = 1;
      out.coeff[s.head()] = id;
    } else {
      Symbol f = s.head();
      std::vector<std::vector<smt::IntExpr>> cparts(d);
      for (int r = 0; r < d; ++r) cparts[r].push_back(vec(f, r));
      std::map<Symbol, std::vector<SymMat>> parts;
      for (std::size_t i = 0; i < s.arity(); ++i) {
        int p = static_cast<int>(i) + 1;
        SymMat F(d, std::vector<smt::IntExpr>(d, 0));
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) F[r][c] = mat(f, p, r, c);
        const SymMatrixForm& sub = matrix(s.arg(i));
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) cparts[r].push_back(F[r][c] * sub.constant[c]);
        for (const auto& [x, M] : sub.coeff) parts[x].push_back(mul(F, M));
      }
      for (int r = 0; r < d; ++r) out.constant.push_back(smt::sum(cparts[r]));
      for (auto& [x, ms] : parts) {
        SymMat acc(d, std::vector<smt::IntExpr>(d, 0));
        for (const auto& M : ms)
          for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) acc[r][c] = acc[r][c] + M[r][c];
        out.coeff[x] = std::move(acc);
      }
    }
    return mat_cache_.emplace(s, std::move(out)).first->second;
  }

  smt::BoolExpr matrix_cmp(const Term& s, const Term& t, bool strict) {
    using namespace smt;
    if (s == t) return !strict;
    int d = cfg_.dim;
    const auto& fs = matrix(s);
    const auto& ft = matrix(t);
    std::vector<BoolExpr> out;
    for (const auto& [x, Mt] : ft.coeff) {
      auto it = fs.coeff.find(x);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          out.push_back((it == fs.coeff.end() ? IntExpr(0) : it->second[r][c]) >= Mt[r][c]);
    }
    out.push_back(strict ? fs.constant[0] > ft.constant[0] : fs.constant[0] >= ft.constant[0]);
    for (int r = 1; r < d; ++r) out.push_back(fs.constant[r] >= ft.constant[r]);
    return conj(out);
  }

  EncodingConfig cfg_;
  Signature sig_;
  VarNames names_;
  WeightStatusMap ws_;
  mutable std::optional<smt::BoolExpr> strict_simple_all_;
  std::unordered_map<Key, smt::BoolExpr, KeyHash> wpo_cache_;
  std::unordered_map<Term, SymLinear, TermHash> lin_cache_;
  std::unordered_map<Term, std::vector<SymWeight>, TermHash> xw_cache_;
  std::unordered_map<Term, SymMatrixForm, TermHash> mat_cache_;
};

// ---------------------------------------------------------------------------
// Problems

struct Encoding {
  smt::BoolExpr formula;
  smt::Logic logic = smt::Logic::QF_LIA;
  std::string comment;
  Signature signature;
  WeightStatusMap weight_status;
  std::vector<std::string> strict_markers;  // pair i is strict iff marker i holds
};

inline WeightStatusMap weight_status_for(const std::vector<Rule>& rules, const Signature& sig,
                                         const EncodingConfig& cfg) {
  if (!uses_weight_status_heuristic(cfg.order)) return {};
  return fix_weight_status(rules, sig, cfg);
}

/// Side conditions plus a strict constraint for every rule.
inline Encoding encode_orientability(const Trs& trs, const EncodingConfig& cfg) {
  if (cfg.mode != Mode::Order) throw std::invalid_argument("encode_orientability needs order mode");
  Encoding e;
  e.signature = trs.signature;
  e.weight_status = weight_status_for(trs.rules, trs.signature, cfg);
  Encoder enc(cfg, trs.signature, e.weight_status);
  std::vector<smt::BoolExpr> parts{enc.side_conditions()};
  for (const auto& r : trs.rules) parts.push_back(enc.orient(r.lhs, r.rhs, true));
  e.formula = smt::conj(parts);
  e.logic = enc.logic();
  e.comment = enc.legend();
  return e;
}

/// Side conditions, weak constraints on P ∪ R and at least one strict pair.
inline Encoding encode_dp_step(const std::vector<Rule>& P, const std::vector<Rule>& R,
                               const Signature& sig, const EncodingConfig& cfg) {
  if (cfg.mode != Mode::Pair) throw std::invalid_argument("encode_dp_step needs pair mode");
  Encoding e;
  e.signature = sig;
  std::vector<Rule> all = P;
  all.insert(all.end(), R.begin(), R.end());
  e.weight_status = weight_status_for(all, sig, cfg);
  Encoder enc(cfg, sig, e.weight_status);
  std::vector<smt::BoolExpr> parts{enc.side_conditions()};
  for (const auto& r : all) parts.push_back(enc.orient(r.lhs, r.rhs, false));
  std::vector<smt::BoolExpr> some;
  for (std::size_t i = 0; i < P.size(); ++i) {
    e.strict_markers.push_back(VarNames::strict_marker(i));
    auto marker = smt::bool_var(e.strict_markers.back());
    some.push_back(marker);
    parts.push_back(smt::implies(marker, enc.orient(P[i].lhs, P[i].rhs, true)));
  }
  parts.push_back(smt::disj(some));
  e.formula = smt::conj(parts);
  e.logic = enc.logic();
  e.comment = enc.legend();
  return e;
}

// ---------------------------------------------------------------------------
// Decoding

class DecodeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline OrderParameters decode_model(const smt::Model& m, const EncodingConfig& cfg,
                                    const Signature& sig, const WeightStatusMap& ws = {}) {
  VarNames n(sig);
  OrderParameters p;
  p.signature = sig;
  bool bare = is_bare(cfg.order);
  bool pair = cfg.mode == Mode::Pair;
  p.admissible = cfg.order == OrderKind::kbo || cfg.order == OrderKind::tkbo;
  p.refinements = bare || (cfg.refinements && pair);

  for (auto f : sig.symbols()) {
    int ar = *sig.arity(f);
    p.precedence[f] = bare ? 0 : static_cast<int>(m.int_value(n.prec(f)));
    std::vector<int> status;
    if (!bare) {
      std::vector<int> slot_of(ar + 1, 0);
      for (int i = 1; i <= ar; ++i) {
        int hits = 0;
        for (int j = 1; j <= ar; ++j)
          if (m.bool_value(n.perm(f, i, j))) {
            ++hits;
            slot_of[i] = j;
          }
        bool pd = m.bool_value(n.permed(f, i));
        if (pd ? hits != 1 : hits != 0)
          throw DecodeError("status variables of " + std::string(name_of(f)) + " violate ST");
      }
      bool gap = false;
      for (int j = 1; j <= ar; ++j) {
        int found = 0;
        for (int i = 1; i <= ar; ++i)
          if (slot_of[i] == j) {
            ++found;
            status.push_back(i);
          }
        if (found > 1) throw DecodeError("two positions share a status slot");
        if (found == 1 && gap) throw DecodeError("status slots are not contiguous");
        if (found == 0) gap = true;
      }
    }
    p.status[f] = status;
  }

  AlgebraParams& A = p.algebra;
  AlgebraKind fam = algebra_family(cfg.order);
  A.kind = fam;
  if (fam == AlgebraKind::Sum && pair && cfg.order == OrderKind::kbo) A.kind = AlgebraKind::Linear;
  A.dim = cfg.dim;
  if (cfg.fix_w0)
    A.w0 = *cfg.fix_w0;
  else if (cfg.order == OrderKind::lpo || fam == AlgebraKind::Matrix)
    A.w0 = 0;
  else
    A.w0 = m.int_value(VarNames::w0());

  for (auto f : sig.symbols()) {
    int ar = *sig.arity(f);
    if (fam == AlgebraKind::Matrix) {
      Vec v(cfg.dim);
      for (int r = 0; r < cfg.dim; ++r) v[r] = m.int_value(n.v(f, r));
      A.vec[f] = v;
      for (int i = 1; i <= ar; ++i) {
        Mat M(cfg.dim, Vec(cfg.dim));
        for (int r = 0; r < cfg.dim; ++r)
          for (int c = 0; c < cfg.dim; ++c) M[r][c] = m.int_value(n.m(f, i, r, c));
        A.mat[{f, i}] = M;
      }
      continue;
    }
    A.w[f] = cfg.order == OrderKind::lpo ? 0 : m.int_value(n.w(f));
    if (fam == AlgebraKind::MaxPol) {
      WeightStatus s = WeightStatus::Max;
      if (uses_weight_status_heuristic(cfg.order)) {
        auto it = ws.find(f);
        s = it == ws.end() ? WeightStatus::Pol : it->second;
      }
      A.wstatus[f] = s;
      if (s == WeightStatus::Max)
        for (int i = 1; i <= ar; ++i)
          A.pen[{f, i}] = cfg.order == OrderKind::lpo ? 0 : m.int_value(n.p(f, i));
    }
    for (int i = 1; i <= ar; ++i) {
      Int c = 1;
      switch (cfg.order) {
        case OrderKind::kbo:
        case OrderKind::lpo:
          c = pair ? (m.bool_value(n.permed(f, i)) ? 1 : 0) : 1;
          break;
        case OrderKind::wpo_sum:
        case OrderKind::wpo_sum_pos:
        case OrderKind::wpo_max: c = 1; break;
        case OrderKind::wpo_ms: c = m.bool_value(n.c(f, i)) ? 1 : 0; break;
        default: c = m.int_value(n.c(f, i));
      }
      if (A.kind != AlgebraKind::Sum) A.coef[{f, i}] = c;
    }
  }
  return p;
}

}  // namespace wpo
