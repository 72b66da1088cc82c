// SPDX-License-Identifier: Apache-2.0

// moa: command-line front end for the array algebra library.
//
//   moa shape  EXPR --array A=a.json ...
//   moa eval   EXPR --array ... [--index 0,1,2]
//   moa dnf    EXPR --array ... [--index 0,1,2]
//   moa onf    EXPR --array ... --procs N [--run [--parallel]] [--summary]
//   moa verify [SUITE ...] [--seed N]
//
// EXPR is a file holding one expression; `-e TEXT` passes it inline instead.
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 shape, index or evaluation error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "moa/moa.hpp"
#include "oracles.hpp"
#include "suites.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct Inputs {
  std::string expr_file;
  std::string expr_text;
  std::vector<std::string> arrays;
  std::string index;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw moa::Error(moa::ErrorKind::kParse, "cannot open expression file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

moa::Environment bind_arrays(const std::vector<std::string>& specs) {
  moa::Environment env;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw moa::Error(moa::ErrorKind::kParse, "--array expects NAME=path, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, eq);
    if (env.contains(name)) throw moa::Error(moa::ErrorKind::kParse, "array '" + name + "' bound twice");
    env.emplace(name, moa::load_array(spec.substr(eq + 1)));
  }
  return env;
}

moa::MultiIndex parse_index(const std::string& text) {
  std::vector<moa::Extent> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size() || item.empty()) {
      throw moa::Error(moa::ErrorKind::kParse, "--index expects comma-separated integers, got '" + text + "'");
    }
    if (v < 0) throw moa::Error(moa::ErrorKind::kIndex, "index component " + item + " is negative");
    out.push_back(v);
  }
  return moa::MultiIndex(std::move(out));
}

struct Loaded {
  moa::Environment env;
  moa::Expr expr;
};

Loaded load(const Inputs& in) {
  Loaded l;
  l.env = bind_arrays(in.arrays);
  const std::string text = in.expr_text.empty() ? read_file(in.expr_file) : in.expr_text;
  l.expr = moa::parse_expression(text, l.env);
  return l;
}

void add_inputs(CLI::App* cmd, Inputs& in, bool with_index) {
  auto* file = cmd->add_option("file", in.expr_file, "File holding the expression");
  auto* text = cmd->add_option("-e,--expr", in.expr_text, "Expression text");
  file->excludes(text);
  cmd->add_option("-a,--array", in.arrays, "Bind NAME=path.json (repeatable)");
  if (with_index) cmd->add_option("-i,--index", in.index, "Comma-separated index, e.g. 0,1,2");
}

int cmd_shape(const Inputs& in) {
  std::cout << moa::to_string(load(in).expr->shape()) << '\n';
  return kExitOk;
}

int cmd_eval(const Inputs& in) {
  const Loaded l = load(in);
  if (in.index.empty()) {
    std::cout << moa::array_to_json(moa::materialize(l.expr, l.env)) << '\n';
  } else {
    std::cout << moa::format_scalar(moa::eval_element(parse_index(in.index), l.expr, l.env)) << '\n';
  }
  return kExitOk;
}

int cmd_dnf(const Inputs& in) {
  const Loaded l = load(in);
  if (in.index.empty()) {
    std::cout << moa::dnf_symbolic(l.expr) << '\n';
    return kExitOk;
  }
  const moa::MultiIndex i = parse_index(in.index);
  moa::check_index(i.components(), l.expr->shape());
  const moa::ScalarReadPlan plan = moa::psi_reduce(i, l.expr);
  std::cout << plan.to_string() << " = " << moa::format_scalar(moa::evaluate(plan, l.env)) << '\n';
  return kExitOk;
}

std::string indent(const std::string& text, const std::string& pad) {
  std::string out;
  for (char c : text) {
    out += c;
    if (c == '\n') out += pad;
  }
  return out;
}

void print_summary(const moa::LoopPlan& plan) {
  std::string pad;
  for (const auto& loop : plan.loops) {
    std::cout << pad << "for " << loop.var << " = " << loop.start << " to " << loop.stop << " step "
              << loop.stride << "  # " << loop.count << " iterations\n";
    pad += "  ";
  }
  std::cout << pad << moa::body_to_string(plan) << '\n';
}

struct OnfFlags {
  moa::Extent procs = 1;
  bool run = false;
  bool parallel = false;
  bool summary = false;
};

int cmd_onf(const Inputs& in, const OnfFlags& f) {
  const Loaded l = load(in);
  const moa::LoopPlan plan = moa::lower(l.expr, f.procs);
  if (f.summary) {
    print_summary(plan);
    return kExitOk;
  }
  if (!f.run) {
    std::cout << moa::plan_to_json(plan) << '\n';
    return kExitOk;
  }
  const auto mode = f.parallel ? moa::Execution::kParallel : moa::Execution::kSequential;
  const moa::DenseArray result = moa::execute_plan(plan, moa::flatten_operands(l.env), mode);
  std::cout << "{\n  \"plan\": " << indent(moa::plan_to_json(plan), "  ") << ",\n  \"result\": "
            << moa::array_to_json(result) << "\n}\n";
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& requested, std::uint64_t seed) {
  const auto& names = requested.empty() ? moa::verify::suite_names() : requested;
  bool ok = true;
  for (const auto& name : names) {
    const auto r = moa::verify::run_suite(name, seed);
    std::cout << (r.ok() ? "PASS " : "FAIL ") << r.name << ": " << r.checks - r.failures << "/" << r.checks
              << " checks passed";
    if (r.skipped) std::cout << ", " << r.skipped << " skipped";
    std::cout << '\n';
    for (const auto& m : r.messages) std::cout << "  " << m << '\n';
    ok = ok && r.ok();
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Array algebra expression compiler"};
  app.require_subcommand(1);

  Inputs in;
  OnfFlags onf_flags;
  std::vector<std::string> suites;
  std::uint64_t seed = moa::oracle::seed_from_env();

  auto* shape = app.add_subcommand("shape", "Print the shape of an expression");
  add_inputs(shape, in, false);
  auto* eval = app.add_subcommand("eval", "Materialize an expression or read one element");
  add_inputs(eval, in, true);
  auto* dnf = app.add_subcommand("dnf", "Print the per-element read form");
  add_inputs(dnf, in, true);
  auto* onf = app.add_subcommand("onf", "Lower to a loop plan");
  add_inputs(onf, in, false);
  onf->add_option("-p,--procs", onf_flags.procs, "Processor count")->check(CLI::PositiveNumber);
  onf->add_flag("--run", onf_flags.run, "Execute the plan and print the result");
  onf->add_flag("--parallel", onf_flags.parallel, "Run partitions on separate threads (with --run)");
  onf->add_flag("--summary", onf_flags.summary, "Print the loop nest as pseudocode");
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("suites", suites, "Suites to run (default: all)")
      ->check(CLI::IsMember(moa::verify::suite_names()));
  verify->add_option("--seed", seed, "RNG seed (default: MOA_SEED or built-in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto* cmd : {shape, eval, dnf, onf}) {
      if (cmd->parsed() && in.expr_file.empty() && in.expr_text.empty()) {
        std::cerr << "error: an expression file or -e TEXT is required\n";
        return kExitUsage;
      }
    }
    if (shape->parsed()) return cmd_shape(in);
    if (eval->parsed()) return cmd_eval(in);
    if (dnf->parsed()) return cmd_dnf(in);
    if (onf->parsed()) return cmd_onf(in, onf_flags);
    return cmd_verify(suites, seed);
  } catch (const moa::Error& e) {
    std::cerr << "error (" << moa::to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == moa::ErrorKind::kParse ? kExitUsage : kExitDomain;
  }
}
