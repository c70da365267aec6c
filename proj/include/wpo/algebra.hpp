#pragma once

/// \file
/// Concrete well-founded algebras (summation, linear polynomial, max/polynomial,
/// matrix) and the induced comparisons over terms.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wpo/term.hpp"

namespace wpo {

enum class Cmp { Greater, GreaterEqual, Incomparable };

inline bool is_weak(Cmp c) { return c != Cmp::Incomparable; }
inline bool is_strict(Cmp c) { return c == Cmp::Greater; }

inline const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::Greater: return "Greater";
    case Cmp::GreaterEqual: return "GreaterEqual";
    default: return "Incomparable";
  }
}

enum class AlgebraKind { Sum, Linear, MaxPol, Matrix };
enum class WeightStatus { Pol, Max };

inline const char* to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::Sum: return "sum";
    case AlgebraKind::Linear: return "linear";
    case AlgebraKind::MaxPol: return "maxpol";
    default: return "matrix";
  }
}

using Int = std::int64_t;
using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;  // row-major, dim x dim
using Position = std::pair<Symbol, int>;  // argument positions are 1-based

/// Per-symbol list of argument positions (1-based). Symbols without an entry
/// are treated by callers, see `status_of` in orders.hpp.
using Status = std::map<Symbol, std::vector<int>>;

/// A fully instantiated algebra. Unset entries take neutral defaults:
/// weight 0, coefficient 1, penalty 0, weight status Pol, zero vectors and
/// zero matrices.
struct AlgebraParams {
  AlgebraKind kind = AlgebraKind::Sum;
  std::map<Symbol, Int> w;
  Int w0 = 0;
  std::map<Position, Int> coef;
  std::map<Position, Int> pen;
  std::map<Symbol, WeightStatus> wstatus;
  int dim = 2;
  std::map<Symbol, Vec> vec;
  std::map<Position, Mat> mat;

  bool scalar() const { return kind != AlgebraKind::Matrix; }

  Int weight(Symbol f) const {
    auto it = w.find(f);
    return it == w.end() ? 0 : it->second;
  }
  Int coefficient(Symbol f, int i) const {
    if (kind == AlgebraKind::Sum) return 1;
    auto it = coef.find({f, i});
    return it == coef.end() ? 1 : it->second;
  }
  Int penalty(Symbol f, int i) const {
    auto it = pen.find({f, i});
    return it == pen.end() ? 0 : it->second;
  }
  WeightStatus status(Symbol f) const {
    if (kind != AlgebraKind::MaxPol) return WeightStatus::Pol;
    auto it = wstatus.find(f);
    return it == wstatus.end() ? WeightStatus::Pol : it->second;
  }
  Vec vector(Symbol f) const {
    auto it = vec.find(f);
    return it == vec.end() ? Vec(dim, 0) : it->second;
  }
  Mat matrix(Symbol f, int i) const {
    auto it = mat.find({f, i});
    return it == mat.end() ? Mat(dim, Vec(dim, 0)) : it->second;
  }
};

class CarrierError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Carrier value; length 1 for the scalar kinds, `dim` for matrices.
using Value = Vec;
using Assignment = std::map<Symbol, Value>;

namespace detail {

inline Vec mat_vec(const Mat& m, const Vec& v) {
  Vec out(m.size(), 0);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  return out;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  std::size_t n = a.size();
  Mat out(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline void mat_add(Mat& a, const Mat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] += b[i][j];
}

}  // namespace detail

inline Value eval_term(const AlgebraParams& A, const Term& s, const Assignment& alpha) {
  if (s.is_var()) {
    auto it = alpha.find(s.head());
    if (it == alpha.end())
      throw CarrierError("no value for variable " + std::string(s.name()));
    const Value& v = it->second;
    if (A.scalar()) {
      if (v.size() != 1 || v[0] < A.w0)
        throw CarrierError("value of " + std::string(s.name()) + " is outside the carrier");
    } else {
      if (static_cast<int>(v.size()) != A.dim ||
          std::any_of(v.begin(), v.end(), [](Int x) { return x < 0; }))
        throw CarrierError("value of " + std::string(s.name()) + " is outside the carrier");
    }
    return v;
  }
  Symbol f = s.head();
  std::vector<Value> args;
  args.reserve(s.arity());
  for (const auto& a : s.args()) args.push_back(eval_term(A, a, alpha));

  if (A.kind == AlgebraKind::Matrix) {
    Vec out = A.vector(f);
    for (std::size_t i = 0; i < args.size(); ++i) {
      Vec part = detail::mat_vec(A.matrix(f, static_cast<int>(i) + 1), args[i]);
      for (int r = 0; r < A.dim; ++r) out[r] += part[r];
    }
    return out;
  }
  if (A.status(f) == WeightStatus::Max) {
    Int m = A.weight(f);
    for (std::size_t i = 0; i < args.size(); ++i) {
      int p = static_cast<int>(i) + 1;
      m = std::max(m, A.penalty(f, p) + A.coefficient(f, p) * args[i][0]);
    }
    return {m};
  }
  Int sum = A.weight(f);
  for (std::size_t i = 0; i < args.size(); ++i)
    sum += A.coefficient(f, static_cast<int>(i) + 1) * args[i][0];
  return {sum};
}

/// Compares two carrier values: componentwise for vectors, with strictness
/// decided by the first component.
inline Cmp compare_values(const Value& a, const Value& b) {
  for (std::size_t j = 1; j < a.size(); ++j)
    if (a[j] < b[j]) return Cmp::Incomparable;
  if (a[0] > b[0]) return Cmp::Greater;
  if (a[0] == b[0]) return Cmp::GreaterEqual;
  return Cmp::Incomparable;
}

// ---------------------------------------------------------------------------
// Generalized and expanded weights

/// ⟨n, N⟩ read as n + Σ N(x)·(α(x) − w0). A variable is therefore ⟨w0, {x}⟩
/// and every component ranges freely over ℕ once w0 is subtracted.
struct GeneralizedWeight {
  Int constant = 0;
  std::map<Symbol, Int> vars;

  friend bool operator==(const GeneralizedWeight&, const GeneralizedWeight&) = default;
  friend bool operator<(const GeneralizedWeight& a, const GeneralizedWeight& b) {
    return std::tie(a.constant, a.vars) < std::tie(b.constant, b.vars);
  }
};

using ExpandedWeight = std::vector<GeneralizedWeight>;

inline bool covers(const std::map<Symbol, Int>& N, const std::map<Symbol, Int>& M) {
  for (auto [x, m] : M) {
    if (m == 0) continue;
    auto it = N.find(x);
    if ((it == N.end() ? 0 : it->second) < m) return false;
  }
  return true;
}

inline bool dominates(const GeneralizedWeight& p, const GeneralizedWeight& q) {
  return p.constant >= q.constant && covers(p.vars, q.vars);
}

inline Int gw_value(const GeneralizedWeight& p, Int w0, const Assignment& alpha) {
  Int v = p.constant;
  for (auto [x, n] : p.vars) v += n * (alpha.at(x)[0] - w0);
  return v;
}

/// Removes duplicates and pairs weakly dominated by another member.
inline ExpandedWeight prune(ExpandedWeight xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  ExpandedWeight out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < xs.size() && !dominated; ++j)
      dominated = j != i && dominates(xs[j], xs[i]);
    if (!dominated) out.push_back(xs[i]);
  }
  return out;
}

inline ExpandedWeight expanded_weight(const AlgebraParams& A, const Term& s) {
  if (A.kind == AlgebraKind::Matrix)
    throw std::invalid_argument("expanded_weight: matrix algebra has no expanded weight");
  if (s.is_var()) return {GeneralizedWeight{A.w0, {{s.head(), 1}}}};
  Symbol f = s.head();
  if (A.status(f) == WeightStatus::Max) {
    ExpandedWeight out{GeneralizedWeight{A.weight(f), {}}};
    for (std::size_t i = 0; i < s.arity(); ++i) {
      int p = static_cast<int>(i) + 1;
      Int c = A.coefficient(f, p);
      for (const auto& q : expanded_weight(A, s.arg(i))) {
        GeneralizedWeight r{A.penalty(f, p) + c * q.constant, {}};
        if (c != 0)
          for (auto [x, n] : q.vars) r.vars[x] = c * n;
        out.push_back(std::move(r));
      }
    }
    return prune(std::move(out));
  }
  ExpandedWeight acc{GeneralizedWeight{A.weight(f), {}}};
  for (std::size_t i = 0; i < s.arity(); ++i) {
    Int c = A.coefficient(f, static_cast<int>(i) + 1);
    ExpandedWeight sub = expanded_weight(A, s.arg(i));
    ExpandedWeight next;
    for (const auto& a : acc)
      for (const auto& q : sub) {
        GeneralizedWeight r = a;
        r.constant += c * q.constant;
        if (c != 0)
          for (auto [x, n] : q.vars) r.vars[x] += c * n;
        next.push_back(std::move(r));
      }
    acc = prune(std::move(next));
  }
  return acc;
}

/// Coverage check: every pair of XW(t) is dominated by some pair of XW(s).
inline Cmp cmp_maxpol(const AlgebraParams& A, const Term& s, const Term& t) {
  if (s == t) return Cmp::GreaterEqual;
  auto xs = expanded_weight(A, s);
  auto xt = expanded_weight(A, t);
  bool weak = true, strict = true;
  for (const auto& m : xt) {
    bool w = false, st = false;
    for (const auto& n : xs) {
      if (!covers(n.vars, m.vars)) continue;
      if (n.constant >= m.constant) w = true;
      if (n.constant > m.constant) st = true;
    }
    weak = weak && w;
    strict = strict && st;
  }
  if (strict) return Cmp::Greater;
  return weak ? Cmp::GreaterEqual : Cmp::Incomparable;
}

// ---------------------------------------------------------------------------
// Linear polynomials

/// Constant part (all variables at w0) plus variable coefficients vc(x, s).
struct LinearForm {
  Int constant = 0;
  std::map<Symbol, Int> vc;
};

inline LinearForm linear_form(const AlgebraParams& A, const Term& s) {
  if (s.is_var()) return {A.w0, {{s.head(), 1}}};
  Symbol f = s.head();
  LinearForm out{A.weight(f), {}};
  for (std::size_t i = 0; i < s.arity(); ++i) {
    Int c = A.coefficient(f, static_cast<int>(i) + 1);
    if (c == 0) continue;
    LinearForm sub = linear_form(A, s.arg(i));
    out.constant += c * sub.constant;
    for (auto [x, n] : sub.vc) out.vc[x] += c * n;
  }
  return out;
}

inline Cmp cmp_linear(const AlgebraParams& A, const Term& s, const Term& t) {
  if (A.kind != AlgebraKind::Sum && A.kind != AlgebraKind::Linear)
    throw std::invalid_argument("cmp_linear: algebra is not linear");
  if (s == t) return Cmp::GreaterEqual;
  LinearForm ls = linear_form(A, s), lt = linear_form(A, t);
  if (!covers(ls.vc, lt.vc)) return Cmp::Incomparable;
  if (ls.constant > lt.constant) return Cmp::Greater;
  return ls.constant == lt.constant ? Cmp::GreaterEqual : Cmp::Incomparable;
}

// ---------------------------------------------------------------------------
// Matrices

/// Constant vector plus one coefficient matrix per variable.
struct MatrixForm {
  Vec constant;
  std::map<Symbol, Mat> coeff;
};

inline Mat identity(int d) {
  Mat m(d, Vec(d, 0));
  for (int i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

inline MatrixForm matrix_form(const AlgebraParams& A, const Term& s) {
  if (s.is_var()) return {Vec(A.dim, 0), {{s.head(), identity(A.dim)}}};
  Symbol f = s.head();
  MatrixForm out{A.vector(f), {}};
  for (std::size_t i = 0; i < s.arity(); ++i) {
    Mat F = A.matrix(f, static_cast<int>(i) + 1);
    MatrixForm sub = matrix_form(A, s.arg(i));
    Vec c = detail::mat_vec(F, sub.constant);
    for (int r = 0; r < A.dim; ++r) out.constant[r] += c[r];
    for (auto& [x, M] : sub.coeff) {
      Mat prod = detail::mat_mul(F, M);
      auto it = out.coeff.find(x);
      if (it == out.coeff.end())
        out.coeff.emplace(x, std::move(prod));
      else
        detail::mat_add(it->second, prod);
    }
  }
  return out;
}

inline Cmp cmp_matrix(const AlgebraParams& A, const Term& s, const Term& t) {
  if (A.kind != AlgebraKind::Matrix) throw std::invalid_argument("cmp_matrix: not a matrix algebra");
  if (s == t) return Cmp::GreaterEqual;
  MatrixForm fs = matrix_form(A, s), ft = matrix_form(A, t);
  Mat zero(A.dim, Vec(A.dim, 0));
  for (const auto& [x, Mt] : ft.coeff) {
    auto it = fs.coeff.find(x);
    const Mat& Ms = it == fs.coeff.end() ? zero : it->second;
    for (int i = 0; i < A.dim; ++i)
      for (int j = 0; j < A.dim; ++j)
        if (Ms[i][j] < Mt[i][j]) return Cmp::Incomparable;
  }
  return compare_values(fs.constant, ft.constant);
}

/// s ≥_A t / s >_A t for all assignments, dispatched on the algebra kind.
inline Cmp cmp_algebra(const AlgebraParams& A, const Term& s, const Term& t) {
  switch (A.kind) {
    case AlgebraKind::Sum:
    case AlgebraKind::Linear: return cmp_linear(A, s, t);
    case AlgebraKind::MaxPol: return cmp_maxpol(A, s, t);
    default: return cmp_matrix(A, s, t);
  }
}

// ---------------------------------------------------------------------------
// Simplicity

struct Violation {
  Symbol symbol = 0;
  int position = 0;
  Value witness;  // a carrier value for the argument where simplicity fails
};

/// Checks f_A(…, a, …) ≥ a (or > a when `strict`) at every listed position.
/// Scalar kinds are decided exactly; matrices use the diagonal condition.
inline std::optional<Violation> check_weak_simplicity(const AlgebraParams& A,
                                                      const Signature& sig,
                                                      const Status& sigma, bool strict) {
  for (const auto& [f, positions] : sigma) {
    auto ar = sig.arity(f);
    int n = ar ? *ar : 0;
    for (int i : positions) {
      if (A.kind == AlgebraKind::Matrix) {
        Mat M = A.matrix(f, i);
        for (int j = 0; j < A.dim; ++j)
          if (M[j][j] < 1) {
            Value e(A.dim, 0);
            e[j] = 1;
            return Violation{f, i, e};
          }
        if (strict && A.vector(f)[0] < 1) return Violation{f, i, Value(A.dim, 0)};
        continue;
      }
      Int ci = A.coefficient(f, i);
      if (A.status(f) == WeightStatus::Max) {
        // K: the value contributed by the other arguments, all at w0
        Int K = A.weight(f);
        for (int j = 1; j <= n; ++j)
          if (j != i) K = std::max(K, A.penalty(f, j) + A.coefficient(f, j) * A.w0);
        Int pi = A.penalty(f, i);
        if (ci < 1) return Violation{f, i, {std::max(K, pi) + A.w0 + 1}};
        if (strict && !(pi >= 1 || (ci >= 2 && (A.w0 >= 1 || K >= 1))))
          return Violation{f, i, {ci == 1 ? std::max(A.w0, K) : A.w0}};
        continue;
      }
      Int sum_c = 0;
      for (int j = 1; j <= n; ++j) sum_c += A.coefficient(f, j);
      Int rest = A.weight(f) + A.w0 * (sum_c - ci);
      if (ci < 1) return Violation{f, i, {rest + A.w0 + 1}};
      if (strict && A.weight(f) + A.w0 * (sum_c - 1) <= 0) return Violation{f, i, {A.w0}};
    }
  }
  return std::nullopt;
}

}  // namespace wpo
