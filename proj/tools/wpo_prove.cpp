// wpo-prove: termination prover front end.
//
//   wpo-prove [--order k1,k2,...] [--mode order|dp] [options] FILE.trs
//
// Prints YES followed by a proof, or MAYBE followed by the attempts made.
// Exit status: 0 YES, 1 MAYBE, 2 usage or internal error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wpo/dp.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Termination prover based on weighted path orders"};
  std::string file, orders, mode = "dp", emit_dir, smt_cmd = "z3 -in";
  double timeout = 60;
  int max_weight = 3, max_coef = 3, dim = 2;
  bool no_refinements = false, no_reduce = false;
  app.add_option("file", file, "TRS in TPDB format")->required();
  app.add_option("--order", orders,
                 "comma-separated orders (kbo, tkbo, lpo, polo, polo-max, wpo-sum, wpo-sum+, "
                 "wpo-max, wpo-pol, wpo-ms, wpo-mp, wpo-mat)");
  app.add_option("--mode", mode, "order: orient all rules; dp: dependency pairs")
      ->check(CLI::IsMember({"order", "dp"}));
  app.add_option("--smt-cmd", smt_cmd, "solver command reading SMT-LIB2 on stdin");
  app.add_option("--timeout", timeout, "total solver time in seconds")->check(CLI::PositiveNumber);
  app.add_option("--max-weight", max_weight, "upper bound for weights and penalties")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-coef", max_coef, "upper bound for coefficients")->check(CLI::NonNegativeNumber);
  app.add_option("--dim", dim, "matrix dimension")->check(CLI::PositiveNumber);
  app.add_flag("--no-refinements", no_refinements, "disable cases (2c) and (2d)");
  app.add_flag("--no-reduce-recursion", no_reduce, "disable recursion reduction");
  app.add_option("--emit-smt", emit_dir, "write every SMT-LIB2 script into this directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::vector<wpo::EncodingConfig> configs;
  for (const auto& name : split(orders, ',')) {
    auto k = wpo::parse_order_kind(name);
    if (!k) {
      std::cerr << "error: unknown order '" << name << "'\n";
      return 2;
    }
    wpo::EncodingConfig c;
    c.order = *k;
    configs.push_back(c);
  }
  if (configs.empty()) {
    if (mode == "order") {
      wpo::EncodingConfig c;
      c.order = wpo::OrderKind::wpo_sum;
      configs.push_back(c);
    } else {
      configs = wpo::default_strategy();
    }
  }
  for (auto& c : configs) {
    c.max_weight = max_weight;
    c.max_coef = max_coef;
    c.dim = dim;
    c.refinements = !no_refinements;
    c.reduce_recursion = !no_reduce;
  }

  std::ifstream in(file);
  if (!in) {
    std::cerr << "error: cannot read " << file << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    wpo::Trs trs = wpo::parse_trs(buf.str());
    wpo::SolveOptions opts{smt_cmd, timeout, emit_dir};
    wpo::Outcome result;
    if (mode == "order") {
      // one budget shared by all orders
      auto start = std::chrono::steady_clock::now();
      for (const auto& c : configs) {
        opts.timeout_s = timeout - std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (opts.timeout_s <= 0) {
          result.trace.push_back(wpo::to_string(c.order) + ": out of time");
          break;
        }
        auto r = wpo::prove_order(trs, c, opts);
        result.trace.insert(result.trace.end(), r.trace.begin(), r.trace.end());
        if (r.proved) {
          result.proved = true;
          result.proof = std::move(r.proof);
          break;
        }
      }
    } else {
      result = wpo::prove_dp(trs, configs, opts);
    }

    if (!result.proved) {
      std::cout << "MAYBE\n";
      for (const auto& line : result.trace) std::cout << "  " << line << "\n";
      return 1;
    }
    if (auto check = wpo::verify_proof(result.proof, trs); !check) {
      std::cerr << "internal error: proof does not verify: " << check.failure << "\n";
      return 2;
    }
    std::cout << "YES\n" << wpo::to_text(result.proof);
    std::cout << "--- certificate ---\n" << wpo::to_json(result.proof).dump(2) << "\n";
    return 0;
  } catch (const wpo::ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
  } catch (const wpo::smt::SolverNotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
