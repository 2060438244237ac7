// sepctl: bound tables, certification campaigns, lemma Monte Carlo suites and
// state checking for the separable-ball geometry library.
//
// Exit codes: 0 = pass, 1 = violation found, 2 = usage or input error.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sepball/campaigns.hpp"
#include "sepball/version.hpp"

namespace {

using sepball::campaigns::bounds_render;
using sepball::campaigns::bounds_table;
using sepball::report::CertReport;
using sepball::report::RunConfig;

int emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << "\n";
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "sepctl: cannot write " << out_path << "\n";
    return 2;
  }
  out << body;
  if (!body.empty() && body.back() != '\n') out << "\n";
  return 0;
}

int emit_report(const CertReport& rep, const std::string& format, const std::string& out_path) {
  const int rc = emit(rep.render(format), out_path);
  if (rc != 0) return rc;
  return rep.passed() ? 0 : 1;
}

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& format, std::string& out_path) {
  cmd->add_option("--seed", cfg.seed, "random seed (default 42)");
  cmd->add_option("--restarts", cfg.restarts, "restart budget for the sphere optimizers");
  cmd->add_option("--tol", cfg.tol, "override the per-check tolerances (0 = pinned defaults)");
  cmd->add_option("--threads", cfg.threads,
                  "worker count (0 = hardware; env SEPCTL_THREADS caps it)");
  cmd->add_option("--format", format, "output format: json (canonical), csv, text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--out", out_path, "write the report to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sepctl: separable-ball radius tables and numerical certification campaigns.\n"
      "CSV reports use the columns section,name,value,trials,violations,tolerance,note\n"
      "(meta rows carry command/seed/verdict; check rows carry the worst margin as value).\n"
      "Env: SEPCTL_THREADS caps the worker count."};
  app.require_subcommand(1);

  // bounds
  int k_max = 10;
  std::string bounds_format = "text";
  std::string bounds_out;
  auto* bounds = app.add_subcommand(
      "bounds", "separable-ball radii rho_k per qubit count, exact and floating point");
  bounds->add_option("--k-max", k_max, "largest qubit count (>= 3)")->check(CLI::Range(3, 30));
  bounds->add_option("--format", bounds_format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  bounds->add_option("--out", bounds_out, "write to file instead of stdout");

  // certify
  RunConfig certify_cfg;
  std::string certify_format = "json";
  std::string certify_out;
  double inject_scale = 0.0;
  auto* certify = app.add_subcommand(
      "certify", "extremal radius search, dual-cone inequality campaign, pencil spot checks");
  certify->add_option("--trials", certify_cfg.trials, "campaign size (default 1000)")
      ->check(CLI::PositiveNumber);
  add_common(certify, certify_cfg, certify_format, certify_out);
  certify
      ->add_option("--inject-scale", inject_scale,
                   "test hook: run a scaled extremal element through the polar-membership check")
      ->group("");  // hidden from the main help

  // check-state
  RunConfig state_cfg;
  state_cfg.trials = 256;
  std::string state_format = "json";
  std::string state_out;
  std::string state_path;
  auto* check_state = app.add_subcommand(
      "check-state", "PSD/PPT margins, ball radius and witness pairings for a 3-qubit state");
  check_state->add_option("path", state_path, "state file: {\"m\":3,\"re\":[...],\"im\":[...]}")
      ->required();
  check_state
      ->add_option("--trials", state_cfg.trials, "number of witness pairings (default 256)")
      ->check(CLI::NonNegativeNumber);
  add_common(check_state, state_cfg, state_format, state_out);

  // lemmas
  RunConfig lemmas_cfg;
  std::string lemmas_format = "json";
  std::string lemmas_out;
  auto* lemmas = app.add_subcommand(
      "lemmas", "Monte Carlo suites for the matrix-analytic bounds behind the radii");
  lemmas->add_option("--trials", lemmas_cfg.trials,
                     "trials per suite; the trace-pairing suite runs 10x this")
      ->check(CLI::PositiveNumber);
  add_common(lemmas, lemmas_cfg, lemmas_format, lemmas_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (bounds->parsed()) {
      return emit(bounds_render(bounds_table(k_max), bounds_format), bounds_out);
    }
    if (certify->parsed()) {
      return emit_report(sepball::campaigns::run_certify(certify_cfg, inject_scale),
                         certify_format, certify_out);
    }
    if (check_state->parsed()) {
      const auto state = sepball::qsep::load_state(state_path);
      return emit_report(sepball::campaigns::run_check_state(state, state_cfg), state_format,
                         state_out);
    }
    if (lemmas->parsed()) {
      return emit_report(sepball::campaigns::run_lemmas(lemmas_cfg), lemmas_format, lemmas_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "sepctl: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
