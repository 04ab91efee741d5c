#pragma once

#include <array>
#include <utility>
#include <vector>

#include "phisolve/subsuper.hpp"

namespace phisolve {

struct IterationOptions {
  double tol = 1e-8;  // sup-norm of successive differences
  int max_steps = 200;
  bool descending = false;  // start from the supersolution instead
  SolverOptions solver;
  bool keep_all_iterates = false;  // disable trace thinning
};

/// Trace of the monotone scheme. Iterates are stored densely up to 64 steps,
/// then every 8th (the last iterate is always kept).
struct IterationTrace {
  std::vector<int> stored_steps;
  std::vector<GridFunction> iterates;
  std::vector<double> sup_diffs;
  std::vector<std::array<double, 2>> nonlocal_history;  // (|u|_Psi, |u|_Lambda)
  double final_residual = 0.0;
  bool converged = false;
  int steps = 0;
};

/// Monotone iteration for the scalar problem: u_0 = sub, then solve the
/// frozen-coefficient Dirichlet problem per step. Sandwich and monotonicity
/// are asserted (never clamped); violations throw with node and magnitude.
IterationTrace iterate_scalar(const ProblemSpec& spec, const SubSuperPair& pair,
                              const IterationOptions& opts = {});

/// Cross-coupled scheme for systems: each component's step is driven by the
/// other component's previous iterate.
std::pair<IterationTrace, IterationTrace> iterate_system(
    const ProblemSpec& spec, const std::vector<SubSuperPair>& pairs,
    const IterationOptions& opts = {});

/// Self-consistent residual: sup-norm over interior nodes of
/// -Delta_Phi u_i - RHS_i(u) with the nonlocal coefficients recomputed from
/// the iterates themselves.
double weak_residual(const ProblemSpec& spec, int eq_index,
                     const std::vector<GridFunction>& components,
                     double eps = 1e-10);

}  // namespace phisolve
