#pragma once

#include <vector>

#include "phisolve/philap.hpp"
#include "phisolve/problem.hpp"

namespace phisolve {

/// Boundary-layer parameters: sigma = ln2/k and mu = e^{-k}, so that
/// e^{k sigma} = 2 exactly; delta is the collar width from the distance field.
struct BoundaryLayerParams {
  double k = 0.0;
  double sigma = 0.0;
  double mu = 0.0;
  double delta = 0.0;

  static BoundaryLayerParams from_k(double k, double delta);
};

/// The three-branch boundary-layer profile:
///   e^{k d} - 1                                    for d < sigma
///   1 + closed-form collar integral                for sigma <= d < 2 delta
///   constant plateau                               for d >= 2 delta
/// The collar integrand is k e^{k sigma} ((2d-t)/(2d-sigma))^{m/(l-1)};
/// its power-function antiderivative is evaluated exactly.
GridFunction build_eta(const MeshPtr& mesh, const NFunction& nf,
                       const BoundaryLayerParams& params);

/// Plateau value of eta for the given parameters (the d >= 2 delta branch).
double eta_plateau(const NFunction& nf, const BoundaryLayerParams& params);

/// Certified sub-supersolution pair for one equation, with per-node residual
/// margins of both defining inequalities.
struct SubSuperPair {
  GridFunction sub;
  GridFunction super;
  GridFunction sub_margin;    // RHS(sub) - (-Delta_Phi sub), interior nodes
  GridFunction super_margin;  // (-Delta_Phi super) - RHS(super), interior
  BoundaryLayerParams params;
  double level = 0.0;  // the lambda (or M) of the torsion supersolution
  double min_sub_margin = 0.0;
  double min_super_margin = 0.0;
  double min_gap = 0.0;  // min(super - sub) over interior nodes
};

struct KSelection {
  BoundaryLayerParams params;
  std::vector<GridFunction> subs;  // mu eta_i per equation
  double min_margin = 0.0;
};

/// Doubling search over k in {4, 8, 16, ...} for the subsolution inequality
/// -Delta_Phi(mu eta) <= RHS(mu eta) - 1e-10 nodewise. Honors the mesh
/// resolution guard h < sigma/4. concave_only restricts the RHS to the
/// lambda-term (the concave-convex subsolution check).
KSelection select_k_sublinear(const ProblemSpec& spec, const MeshPtr& mesh,
                              const SolverOptions& opts = {},
                              bool concave_only = false);

struct LambdaSelection {
  double lambda = 0.0;
  std::vector<GridFunction> supers;  // torsion solutions per equation
  double min_margin = 0.0;
};

/// Doubling search on lambda: solve the torsion problems and accept once the
/// measured supersolution inequality RHS(z) <= lambda holds nodewise.
LambdaSelection select_lambda_supersolution(const ProblemSpec& spec,
                                            const MeshPtr& mesh,
                                            const SolverOptions& opts = {});

/// End-to-end sublinear construction (two pairs for
/// systems). Enlarges lambda until -Delta_Phi(mu eta) <= lambda so the
/// discrete comparison gives mu eta <= z_lambda, then certifies nodewise.
std::vector<SubSuperPair> build_pair_sublinear(const ProblemSpec& spec,
                                               const MeshPtr& mesh,
                                               const SolverOptions& opts = {});

enum class ThresholdMode { FixTheta, FixLambda };

struct ThresholdReport {
  ThresholdMode mode = ThresholdMode::FixLambda;
  double rho = 0.0;
  double tau = 0.0;
  double L = 0.0;      // ((1-rho)/(tau-1))^{1/(tau-rho)} when tau > 1
  double M = 0.0;      // M_{lambda,theta} at the spec's lambda/theta
  double kbar = 0.0;   // measured replacement of the symbolic K-bar
  double K = 0.0;      // measured torsion prefactor
  double lambda0 = -1.0;  // fix_theta: largest admissible lambda
  double theta0 = -1.0;   // fix_lambda: largest admissible theta
  double psi_at_M = 0.0;  // Psi(M) (or the active constraint in fix_theta)
  bool theta_unconstrained = false;  // tau <= 1 regime: any theta admissible
};

/// Threshold computation for the concave-convex problems. K is fitted from
/// torsion solves (large-lambda prefactor in fix_lambda mode, small-lambda in
/// fix_theta mode); the bisections run on the resulting K-bar inequalities.
ThresholdReport thresholds_concave_convex(const ProblemSpec& spec,
                                          const MeshPtr& mesh,
                                          ThresholdMode mode,
                                          const SolverOptions& opts = {});

/// Concave-convex pair construction. fix_theta uses the torsion z_lambda as
/// supersolution; fix_lambda uses z_M at M = max(M_{lambda,theta}, 1). The
/// subsolution is mu eta selected against the concave term, with mu shrunk
/// until -Delta_Phi(mu eta) <= min(1, level).
std::vector<SubSuperPair> build_pair_concave_convex(
    const ProblemSpec& spec, const MeshPtr& mesh, ThresholdMode mode,
    const SolverOptions& opts = {});

/// Margin tolerance used by every certification: margins >= -kCertTol accept.
inline constexpr double kCertTol = 1e-8;
/// Strict selection margin used inside the k/lambda searches.
inline constexpr double kSearchMargin = 1e-10;

}  // namespace phisolve
