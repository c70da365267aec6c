#pragma once

// Shared helpers for the test suites: a tiny term reader (x, y, z, u, v are
// variables, everything else is a function symbol), random generators, and
// file access.

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wpo/term.hpp"

namespace testing_support {

using wpo::Term;

inline bool is_test_var(const std::string& n) {
  return n == "x" || n == "y" || n == "z" || n == "u" || n == "v";
}

inline Term read_term(const std::string& s, std::size_t& i) {
  std::string name;
  while (i < s.size() && s[i] != '(' && s[i] != ')' && s[i] != ',' && s[i] != ' ') name += s[i++];
  std::vector<Term> args;
  if (i < s.size() && s[i] == '(') {
    ++i;
    while (s[i] != ')') {
      args.push_back(read_term(s, i));
      if (s[i] == ',') ++i;
    }
    ++i;
  }
  if (args.empty() && is_test_var(name)) return Term::var(name);
  return Term::app(name, std::move(args));
}

inline Term T(const std::string& s) {
  std::size_t i = 0;
  return read_term(s, i);
}

inline wpo::Rule R(const std::string& l, const std::string& r) { return {T(l), T(r)}; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

inline std::string data_path(const std::string& name) { return std::string(WPO_TEST_DATA) + "/" + name; }

inline wpo::Trs load(const std::string& name) { return wpo::parse_trs(slurp(data_path(name))); }

struct FunSym {
  std::string name;
  int arity;
};

/// Random term over `funs` and `vars` of depth at most `depth`.
inline Term random_term(std::mt19937& rng, const std::vector<FunSym>& funs,
                        const std::vector<std::string>& vars, int depth) {
  std::vector<const FunSym*> leaves, inner;
  for (const auto& f : funs) (f.arity == 0 ? leaves : inner).push_back(&f);
  std::size_t n_leaf = leaves.size() + vars.size();
  bool leaf = depth <= 0 || inner.empty() || std::uniform_int_distribution<int>(0, 2)(rng) == 0;
  if (leaf && n_leaf > 0) {
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, n_leaf - 1)(rng);
    if (k < vars.size()) return Term::var(vars[k]);
    return Term::app(leaves[k - vars.size()]->name);
  }
  const FunSym* f = inner[std::uniform_int_distribution<std::size_t>(0, inner.size() - 1)(rng)];
  std::vector<Term> args;
  for (int i = 0; i < f->arity; ++i) args.push_back(random_term(rng, funs, vars, depth - 1));
  return Term::app(f->name, std::move(args));
}

/// Every term over `funs` and `vars` with at most `max_size` symbols.
inline std::vector<Term> all_terms(const std::vector<FunSym>& funs,
                                   const std::vector<std::string>& vars, int max_size) {
  // by_size[k] holds the terms of size exactly k
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (int k = 1; k <= max_size; ++k) {
    if (k == 1) {
      for (const auto& x : vars) by_size[1].push_back(Term::var(x));
      for (const auto& f : funs)
        if (f.arity == 0) by_size[1].push_back(Term::app(f.name));
      continue;
    }
    for (const auto& f : funs) {
      if (f.arity == 0) continue;
      // distribute k-1 symbols over the arguments
      std::vector<std::vector<Term>> partial{{}};
      std::vector<int> used{0};
      for (int a = 0; a < f.arity; ++a) {
        std::vector<std::vector<Term>> next;
        std::vector<int> next_used;
        for (std::size_t p = 0; p < partial.size(); ++p) {
          int left = (k - 1) - used[p];
          int rest_args = f.arity - a - 1;
          for (int s = 1; s <= left - rest_args; ++s) {
            if (rest_args == 0 && s != left) continue;
            for (const auto& t : by_size[s]) {
              auto v = partial[p];
              v.push_back(t);
              next.push_back(std::move(v));
              next_used.push_back(used[p] + s);
            }
          }
        }
        partial = std::move(next);
        used = std::move(next_used);
      }
      for (auto& args : partial) by_size[k].push_back(Term::app(f.name, std::move(args)));
    }
  }
  std::vector<Term> out;
  for (const auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace testing_support
