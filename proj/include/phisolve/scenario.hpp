#pragma once

#include <optional>
#include <string>

#include "phisolve/config.hpp"
#include "phisolve/monotone.hpp"
#include "phisolve/subsuper.hpp"

namespace phisolve {

enum class ScenarioClass {
  SublinearScalar,
  ConcaveConvexScalar,
  SublinearSystem,
  ConcaveConvexSystem,
  GeneralizedSystem,
  TorsionStudy,
  NormStudy,
};

ScenarioClass scenario_class_from_string(const std::string& name);
const char* scenario_class_name(ScenarioClass c);

/// A fully parsed experiment: problem, mesh, solver knobs, sweep ranges.
struct Scenario {
  std::string name;
  ScenarioClass cls = ScenarioClass::SublinearScalar;
  ProblemSpec spec;
  MeshPtr mesh;
  SolverOptions solver;
  IterationOptions iteration;
  ThresholdMode mode = ThresholdMode::FixLambda;
  std::vector<double> sweep_lambda;  // explicit values (torsion/norm studies)
  std::vector<double> sweep_theta_range;   // [lo, hi, n]
  std::vector<double> sweep_lambda_range;  // [lo, hi, n]
  std::vector<int> sweep_mesh;             // node counts
  bool sweep_log = false;
  std::string out_dir = "out";

  static Scenario from_config(const Config& cfg);
};

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<double> tol;
  std::optional<int> max_steps;
  bool verbose = false;
};

/// Exit-code contract: 0 success, 1 config error, 2 certification failure,
/// 3 iteration failure.
struct RunOutcome {
  int exit_code = 0;
  std::string message;
};

RunOutcome run_scenario(const std::string& config_path,
                        const RunOverrides& overrides = {});

/// Certification only; exit 0 when every pair certifies.
RunOutcome run_verify(const std::string& config_path,
                      const RunOverrides& overrides = {});

/// Parameter sweep along lambda | theta | mesh; writes sweep.csv. Rows keep
/// going past per-row failures (the row is marked, the sweep continues).
RunOutcome run_sweep(const std::string& config_path, const std::string& axis,
                     const RunOverrides& overrides = {});

}  // namespace phisolve
