#pragma once

#include <vector>

#include "phisolve/grid.hpp"
#include "phisolve/nfunction.hpp"

namespace phisolve {

struct SolverOptions {
  double newton_tol = 1e-10;  // residual sup-norm target
  int max_newton = 200;
  double backtrack = 0.5;
  int max_backtrack = 30;
  double epsilon_reg = 1e-10;  // gradient regularization inside phi(|grad u|)
  bool picard_fallback = true;
  bool verbose = false;
};

struct SolveReport {
  GridFunction solution;
  double residual_sup = 0.0;
  int iterations = 0;  // linear solves performed, including the initial guess
  bool used_fallback = false;
  std::vector<double> residual_history;
};

/// Flux-form discretization of -div(a(|grad u|) grad u) with a = op_density.
/// Interior nodes carry the divergence; boundary rows are identity (u itself).
GridFunction apply_philap(const NFunction& nf, const GridFunction& u,
                          double eps = 1e-10);

/// Damped Newton (with Picard fallback) for apply_philap(u) = rhs, u = 0 on
/// the boundary. Epsilon continuation keeps degenerate/singular densities in
/// Newton's basin; the final stage uses opts.epsilon_reg.
SolveReport solve_dirichlet(const NFunction& nf, const GridFunction& rhs,
                            const SolverOptions& opts = {},
                            const GridFunction* initial_guess = nullptr);

/// Torsion function z_lambda: solve with constant right-hand side lambda > 0.
SolveReport torsion(const NFunction& nf, const MeshPtr& mesh, double lambda,
                    const SolverOptions& opts = {});

struct ComparisonResult {
  bool ordered = false;
  double worst_violation = 0.0;  // max(u - v) over nodes
  int worst_node = -1;
};

/// Discrete comparison check: requires the operator ordering
/// apply_philap(u) <= apply_philap(v) + tol nodewise and u <= v on the
/// boundary (PreconditionUnmet otherwise), then reports whether u <= v + tol.
ComparisonResult check_comparison(const NFunction& nf, const GridFunction& u,
                                  const GridFunction& v, double tol);

}  // namespace phisolve
