#pragma once

// Verification checks over the atlas and the scenario runner.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hjlab/atlas.hpp"
#include "hjlab/parallel.hpp"

namespace hjlab {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& check_names();
// One-line description of what a check asserts.
const char* check_description(const std::string& check);

using Tolerances = std::map<std::string, double>;
Tolerances default_tolerances();

struct Scenario {
  std::vector<std::string> cases;
  std::vector<std::string> checks;
  int n_theta = 32;
  int n_phi = 64;
  int rmax = 6;
  std::uint64_t seed = 20240607;
  Tolerances tolerances = default_tolerances();
  bool per_node = false;  // keep per-node residuals in the report
  bool timing = false;    // record wall time (makes reports non-reproducible)

  // Throws kRejectedInput / kUnknownName.
  void validate() const;
};

// Loads a YAML scenario; keys: cases, checks, resolution [n_theta, n_phi],
// rmax, seed, tolerances {name: value}.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& yaml_text);

enum class Status { kPass, kFail, kSkip };
const char* to_string(Status s);

enum class ComponentKind { kVanishing, kExpectedNonzero };
const char* to_string(ComponentKind k);

struct NodeRef {
  int node = -1;  // grid node index; -1 for integrated quantities
  Chart chart = Chart::kNorth;
  cplx u;
};

struct Component {
  std::string name;
  ComponentKind kind = ComponentKind::kVanishing;
  double threshold = 0.0;  // tolerance, or lower bound for expected-nonzero
  double grid_max = 0.0;
  double mean = 0.0;
  NodeRef worst;
  Status status = Status::kPass;
  std::vector<double> per_node;
};

struct CheckResult {
  std::string check;
  std::string case_name;
  Status status = Status::kSkip;
  std::string reason;  // why a check was skipped
  // Statistics of the binding component (largest residual / tolerance).
  double grid_max = 0.0;
  double mean = 0.0;
  NodeRef worst;
  double tolerance = 0.0;
  std::vector<Component> components;
  std::optional<double> wall_time;
};

struct Report {
  Scenario scenario;
  std::vector<CheckResult> results;
  bool pass() const;
};

// Setup failures (unknown names, chart-domain violations, self-check
// failures) are thrown as Error.
Report run_scenario(const Scenario& s, const Executor& ex = Executor::from_env());

// One check on one prepared case.
struct CaseContext;
CheckResult run_check(const std::string& check, const CaseContext& cx, bool controls_only = false);

struct CaseContext {
  AtlasCase c;
  QuadratureGrid grid;
  int rmax = 6;
  std::uint64_t seed = 0;
  Tolerances tol;
  const Executor* ex = nullptr;
  double harmonic_gate = 0.0;  // grid-max |tau| at setup
  bool harmonic_ok = false;
  bool per_node = false;

  double t(const std::string& name) const;
};

CaseContext prepare_case(const std::string& name, const Scenario& s, const Executor& ex);

std::string report_json(const Report& r);
std::string report_csv(const Report& r);
// Writes to `path`; "-" means stdout.  Throws kIo.
void emit(const Report& r, const std::string& format, const std::string& path);

}  // namespace hjlab
