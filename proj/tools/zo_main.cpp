// zo: zeroth-order experiment runner.
//
//   zo run <spec.cfg> --out <report.csv>
//   zo verify [--seed N]
//
// Exit codes: 0 success, 1 verification failure, 2 config error, 3 runtime error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zo/config.hpp"
#include "zo/errors.hpp"
#include "zo/experiments.hpp"
#include "zo/verify.hpp"

namespace {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kRuntimeError = 3 };

int run_command(const std::string& spec_path, const std::string& out_path) {
  zo::ExperimentSpec spec;
  try {
    spec = zo::load_experiment(spec_path);
  } catch (const zo::ConfigError& e) {
    std::cerr << "zo: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    const zo::ExperimentReport report = zo::run_experiment(spec);
    report.write_csv(out_path);
  } catch (const zo::ConfigError& e) {
    std::cerr << "zo: " << e.what() << '\n';
    return kConfigError;
  } catch (const zo::DivergenceError& e) {
    std::cerr << "zo: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "zo: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

int verify_command(std::uint64_t seed, bool inject_fault) {
  zo::VerifyOptions options;
  options.seed = seed;
  options.mislabel_gaussian = inject_fault;
  const auto results = zo::run_verification(options);
  std::cout << zo::format_verification(results);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  if (!ok) {
    std::cerr << "zo: verification failed:";
    for (const auto& r : results)
      if (!r.passed) std::cerr << "\n  " << r.name;
    std::cerr << '\n';
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order optimization experiments"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  auto* run = app.add_subcommand("run", "Run an experiment config and write a CSV report");
  run->add_option("spec", spec_path, "Experiment config (key = value lines)")->required();
  run->add_option("--out", out_path, "Output CSV path")->required();

  std::uint64_t seed = zo::VerifyOptions{}.seed;
  bool inject_fault = false;
  auto* verify = app.add_subcommand("verify", "Run the Monte-Carlo moment and variance checks");
  verify->add_option("--seed", seed, "Base seed for the check streams");
  verify->add_flag("--inject-gaussian-fault", inject_fault,
                   "Negative control: treat the Gaussian sampler as minimum-variance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return run_command(spec_path, out_path);
    if (*verify) return verify_command(seed, inject_fault);
  } catch (const std::exception& e) {
    std::cerr << "zo: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
