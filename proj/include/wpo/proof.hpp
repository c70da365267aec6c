#pragma once

/// \file
/// Proof certificates: per-step parameters and claimed relations, replayed
/// through the direct evaluators.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wpo/encoder.hpp"
#include "wpo/orders.hpp"

namespace wpo {

struct Obligation {
  Rule rule;
  bool strict = false;
};

struct ProofStep {
  EncodingConfig config;
  OrderParameters params;
  std::vector<Rule> pairs;    // the SCC handled by this step (DP proofs only)
  std::vector<Rule> rules;    // usable rules of that SCC
  std::vector<Rule> removed;  // strictly oriented pairs
  std::vector<Obligation> obligations;
};

struct Proof {
  enum class Kind { Order, Dp };
  Kind kind = Kind::Order;
  std::vector<Rule> dependency_pairs;
  std::vector<ProofStep> steps;
};

/// Result of replaying an obligation; `failure` names the first one that
/// did not hold.
struct Check {
  bool ok = true;
  std::string failure;

  static Check fail(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return ok; }
};

inline std::string describe(const Obligation& o) {
  return to_string(o.rule.lhs) + (o.strict ? " > " : " >= ") + to_string(o.rule.rhs);
}

/// Replays every claimed relation of one step. Bare algebra steps are checked
/// with the algebra alone; every other step goes through WPO, and order-mode
/// kbo/lpo steps are also confirmed by the classic definitions.
inline Check check_step(const ProofStep& step) {
  std::optional<WpoComparator> cmp;
  try {
    cmp.emplace(step.params);
  } catch (const PreconditionError& e) {
    return Check::fail(std::string("parameters rejected: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return Check::fail(std::string("malformed parameters: ") + e.what());
  }
  bool bare = is_bare(step.config.order);
  bool order_mode = step.config.mode == Mode::Order;
  for (const auto& o : step.obligations) {
    const Term& l = o.rule.lhs;
    const Term& r = o.rule.rhs;
    Cmp c;
    try {
      c = bare ? cmp->algebra_cmp(l, r) : cmp->compare(l, r);
    } catch (const std::exception& e) {
      return Check::fail(describe(o) + ": " + e.what());
    }
    bool holds = o.strict ? is_strict(c) : is_weak(c);
    if (holds && o.strict && order_mode && step.config.order == OrderKind::kbo)
      holds = kbo_tkbo_cmp(step.params, l, r) == Cmp::Greater;
    if (holds && o.strict && order_mode && step.config.order == OrderKind::lpo)
      holds = lpo_gt(step.params.precedence, step.params.status, l, r);
    if (!holds) return Check::fail(describe(o));
  }
  return {};
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline nlohmann::ordered_json rules_json(const std::vector<Rule>& rs) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& r : rs) out.push_back(to_string(r));
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const OrderParameters& p) {
  using nlohmann::ordered_json;
  const AlgebraParams& A = p.algebra;
  ordered_json j;
  j["algebra"] = to_string(A.kind);
  if (A.kind == AlgebraKind::Matrix)
    j["dim"] = A.dim;
  else
    j["w0"] = A.w0;
  j["admissible"] = p.admissible;
  j["refinements"] = p.refinements;
  auto syms = ordered_json::array();
  for (auto f : p.signature.symbols()) {
    int n = *p.signature.arity(f);
    ordered_json s;
    s["name"] = std::string(name_of(f));
    s["arity"] = n;
    s["precedence"] = level(p.precedence, f);
    s["status"] = status_of(p.status, f, static_cast<std::size_t>(n));
    if (A.kind == AlgebraKind::Matrix) {
      s["vector"] = A.vector(f);
      auto ms = ordered_json::array();
      for (int i = 1; i <= n; ++i) ms.push_back(A.matrix(f, i));
      s["matrices"] = ms;
    } else {
      s["weight"] = A.weight(f);
      if (A.kind == AlgebraKind::MaxPol)
        s["weight_status"] = A.status(f) == WeightStatus::Max ? "max" : "pol";
      std::vector<Int> cs, ps;
      for (int i = 1; i <= n; ++i) {
        cs.push_back(A.coefficient(f, i));
        ps.push_back(A.penalty(f, i));
      }
      s["coefficients"] = cs;
      if (A.kind == AlgebraKind::MaxPol && A.status(f) == WeightStatus::Max) s["penalties"] = ps;
    }
    syms.push_back(s);
  }
  j["symbols"] = syms;
  return j;
}

inline nlohmann::ordered_json to_json(const Proof& proof) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["kind"] = proof.kind == Proof::Kind::Order ? "order" : "dp";
  if (proof.kind == Proof::Kind::Dp)
    j["dependency_pairs"] = detail::rules_json(proof.dependency_pairs);
  auto steps = ordered_json::array();
  for (const auto& st : proof.steps) {
    ordered_json s;
    s["order"] = to_string(st.config.order);
    s["mode"] = to_string(st.config.mode);
    if (proof.kind == Proof::Kind::Dp) {
      s["pairs"] = detail::rules_json(st.pairs);
      s["usable_rules"] = detail::rules_json(st.rules);
      s["removed"] = detail::rules_json(st.removed);
    }
    s["parameters"] = to_json(st.params);
    auto obs = ordered_json::array();
    for (const auto& o : st.obligations) {
      ordered_json e;
      e["rule"] = to_string(o.rule);
      e["relation"] = o.strict ? "strict" : "weak";
      obs.push_back(e);
    }
    s["obligations"] = obs;
    steps.push_back(s);
  }
  j["steps"] = steps;
  return j;
}

inline std::string params_text(const OrderParameters& p) {
  std::ostringstream os;
  const AlgebraParams& A = p.algebra;
  os << "  algebra " << to_string(A.kind);
  if (A.kind != AlgebraKind::Matrix) os << ", w0 = " << A.w0;
  os << "\n";
  auto vec = [](const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  for (auto f : p.signature.symbols()) {
    int n = *p.signature.arity(f);
    os << "  " << name_of(f) << "/" << n << ": prec " << level(p.precedence, f) << ", status [";
    auto st = status_of(p.status, f, static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < st.size(); ++i) os << (i ? "," : "") << st[i];
    os << "], ";
    if (A.kind == AlgebraKind::Matrix) {
      os << "vector " << vec(A.vector(f));
      for (int i = 1; i <= n; ++i) {
        os << ", M" << i << " [";
        auto M = A.matrix(f, i);
        for (std::size_t r = 0; r < M.size(); ++r) os << (r ? " " : "") << vec(M[r]);
        os << "]";
      }
    } else {
      bool mx = A.kind == AlgebraKind::MaxPol && A.status(f) == WeightStatus::Max;
      os << "weight " << A.weight(f);
      if (A.kind == AlgebraKind::MaxPol) os << (mx ? ", max" : ", pol");
      if (n > 0) {
        os << ", coef ";
        std::vector<Int> cs;
        for (int i = 1; i <= n; ++i) cs.push_back(A.coefficient(f, i));
        os << vec(cs);
        if (mx) {
          std::vector<Int> ps;
          for (int i = 1; i <= n; ++i) ps.push_back(A.penalty(f, i));
          os << ", pen " << vec(ps);
        }
      }
    }
    os << "\n";
  }
  return os.str();
}

inline std::string to_text(const Proof& proof) {
  std::ostringstream os;
  if (proof.kind == Proof::Kind::Order) {
    os << "Method: reduction order\n";
  } else {
    os << "Method: dependency pairs\n";
    os << "Dependency pairs:\n";
    for (const auto& r : proof.dependency_pairs) os << "  " << to_string(r) << "\n";
  }
  int k = 0;
  for (const auto& st : proof.steps) {
    os << "Step " << ++k << ": " << to_string(st.config.order) << " (" << to_string(st.config.mode)
       << " mode)\n";
    if (proof.kind == Proof::Kind::Dp) {
      os << " removed:\n";
      for (const auto& r : st.removed) os << "  " << to_string(r) << "\n";
    }
    os << " parameters:\n" << params_text(st.params);
    os << " constraints:\n";
    for (const auto& o : st.obligations) os << "  " << describe(o) << "\n";
  }
  return os.str();
}

}  // namespace wpo
