// hjlab: run verification scenarios over the atlas.
//
//   hjlab verify [--scenario FILE] [--case NAME]... [--check NAME]...
//                [--resolution NxM] [--rmax K] [--seed S]
//                [--out PATH] [--format json|csv] [--timing] [--per-node]
//   hjlab list
//
// Exit codes: 0 all pass, 2 a check failed, 3 setup error, 4 bad invocation.
// HJLAB_WORKERS sets the worker count.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hjlab/checks.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 2;
constexpr int kExitSetup = 3;
constexpr int kExitUsage = 4;

void parse_resolution(const std::string& text, hjlab::Scenario& s) {
  int a = 0, b = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &a, &x, &b, &extra) != 3 || (x != 'x' && x != 'X')) {
    throw hjlab::Error(hjlab::ErrorKind::kRejectedInput, "resolution must look like 32x64");
  }
  s.n_theta = a;
  s.n_phi = b;
}

void print_list() {
  std::cout << "cases:\n";
  for (const std::string& name : hjlab::case_names()) {
    const hjlab::AtlasCase c = hjlab::make_case(name);
    std::cout << "  " << name << "\n      " << c.description << "\n";
  }
  std::cout << "checks:\n";
  for (const std::string& name : hjlab::check_names()) {
    std::cout << "  " << name << "\n      " << hjlab::check_description(name) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Jacobi fields along harmonic two-spheres"};
  app.require_subcommand(1);
  bool list_flag = false;
  app.add_flag("--list", list_flag, "List cases and checks");

  auto* verify = app.add_subcommand("verify", "Run a verification scenario");
  std::string scenario_path, resolution, out = "-", format = "json";
  std::vector<std::string> cases, checks;
  int rmax = 0;
  std::uint64_t seed = 0;
  bool timing = false, per_node = false;
  verify->add_option("--scenario", scenario_path, "YAML scenario file")->check(CLI::ExistingFile);
  verify->add_option("--case", cases, "Case name (repeatable; overrides the scenario)");
  verify->add_option("--check", checks, "Check name (repeatable; overrides the scenario)");
  verify->add_option("--resolution", resolution, "Grid resolution NxM");
  auto* rmax_opt = verify->add_option("--rmax", rmax, "Largest r+s for isotropy differentials");
  auto* seed_opt = verify->add_option("--seed", seed, "Seed for randomized probes");
  verify->add_option("--out", out, "Report path, - for stdout");
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  verify->add_flag("--timing", timing, "Record wall time per check");
  verify->add_flag("--per-node", per_node, "Keep per-node residuals in the report");

  app.add_subcommand("list", "List cases and checks");

  // `hjlab --list` works without a subcommand.
  if (argc == 2 && std::string(argv[1]) == "--list") {
    print_list();
    return kExitPass;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }
  if (list_flag || app.got_subcommand("list")) {
    print_list();
    return kExitPass;
  }

  hjlab::Scenario s;
  try {
    if (!scenario_path.empty()) {
      s = hjlab::load_scenario(scenario_path);
    } else {
      s.cases = hjlab::case_names();
      s.checks = hjlab::check_names();
    }
    if (!cases.empty()) s.cases = cases;
    if (!checks.empty()) s.checks = checks;
    if (!resolution.empty()) parse_resolution(resolution, s);
    if (*rmax_opt) s.rmax = rmax;
    if (*seed_opt) s.seed = seed;
    s.timing = timing;
    s.per_node = s.per_node || per_node;
    s.validate();
  } catch (const hjlab::Error& e) {
    std::cerr << "hjlab: " << e.what() << "\n";
    return kExitUsage;
  }

  hjlab::Report report;
  try {
    report = hjlab::run_scenario(s);
  } catch (const hjlab::Error& e) {
    std::cerr << "hjlab: setup error (" << hjlab::to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitSetup;
  }
  try {
    hjlab::emit(report, format, out);
  } catch (const hjlab::Error& e) {
    std::cerr << "hjlab: " << e.what() << "\n";
    return kExitSetup;
  }
  for (const hjlab::CheckResult& r : report.results) {
    if (r.status == hjlab::Status::kFail) std::cerr << "FAIL " << r.check << " / " << r.case_name << "\n";
  }
  return report.pass() ? kExitPass : kExitFail;
}
