#include "phisolve.h"

#include <cstring>
#include <string>

#include "phisolve/errors.hpp"
#include "phisolve/grid.hpp"
#include "phisolve/nfunction.hpp"
#include "phisolve/orlicz.hpp"
#include "phisolve/philap.hpp"
#include "phisolve/scenario.hpp"

namespace {

thread_local std::string g_last_error;

phisolve_status status_for(phisolve::ErrorCode code) {
  using phisolve::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return PHISOLVE_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonFiniteValue: return PHISOLVE_ERR_NONFINITE;
    case ErrorCode::QuadratureFailure: return PHISOLVE_ERR_QUADRATURE;
    case ErrorCode::ExponentDeclarationInvalid:
      return PHISOLVE_ERR_EXPONENT_DECLARATION;
    case ErrorCode::InvalidMeshSpec: return PHISOLVE_ERR_MESH_SPEC;
    case ErrorCode::BracketFailure: return PHISOLVE_ERR_BRACKET;
    case ErrorCode::NewtonDivergence: return PHISOLVE_ERR_NEWTON_DIVERGENCE;
    case ErrorCode::PreconditionUnmet: return PHISOLVE_ERR_PRECONDITION;
    case ErrorCode::InvalidParams: return PHISOLVE_ERR_INVALID_PARAMS;
    case ErrorCode::KSelectionFailure: return PHISOLVE_ERR_K_SELECTION;
    case ErrorCode::LambdaSearchFailure: return PHISOLVE_ERR_LAMBDA_SEARCH;
    case ErrorCode::HypothesisViolation: return PHISOLVE_ERR_HYPOTHESIS;
    case ErrorCode::DegenerateThreshold:
      return PHISOLVE_ERR_DEGENERATE_THRESHOLD;
    case ErrorCode::CertificationFailure: return PHISOLVE_ERR_CERTIFICATION;
    case ErrorCode::OrderingViolation: return PHISOLVE_ERR_ORDERING;
    case ErrorCode::SandwichViolation: return PHISOLVE_ERR_SANDWICH;
    case ErrorCode::MonotonicityViolation: return PHISOLVE_ERR_MONOTONICITY;
    case ErrorCode::MaxStepsExceeded: return PHISOLVE_ERR_MAX_STEPS;
    case ErrorCode::ConfigError: return PHISOLVE_ERR_CONFIG;
    case ErrorCode::IoError: return PHISOLVE_ERR_IO;
  }
  return PHISOLVE_ERR_INTERNAL;
}

template <typename Fn>
phisolve_status guarded(Fn&& fn) {
  try {
    fn();
    return PHISOLVE_OK;
  } catch (const phisolve::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PHISOLVE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PHISOLVE_ERR_INTERNAL;
  }
}

phisolve_status bad_arg(const char* what) {
  g_last_error = what;
  return PHISOLVE_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct phisolve_nfunction {
  phisolve::NFunction nf;
};
struct phisolve_mesh {
  phisolve::MeshPtr mesh;
};
struct phisolve_gridfn {
  phisolve::GridFunction gf;
};

extern "C" {

const char* phisolve_last_error(void) { return g_last_error.c_str(); }

phisolve_status phisolve_nfunction_create(const char* kind,
                                          const double* params,
                                          size_t n_params,
                                          phisolve_nfunction** out) {
  if (!kind || !out) return bad_arg("null argument");
  if (n_params > 0 && !params) return bad_arg("null params");
  return guarded([&] {
    using phisolve::NFunction;
    const std::string k = kind;
    const auto need = [&](size_t n) {
      if (n_params != n)
        phisolve::fail(phisolve::ErrorCode::InvalidArgument,
                       k + " wants " + std::to_string(n) + " parameter(s)");
    };
    NFunction nf = NFunction::power_law(2.0);
    if (k == "power_law") {
      need(1);
      nf = NFunction::power_law(params[0]);
    } else if (k == "power_sum") {
      need(2);
      nf = NFunction::power_sum(params[0], params[1]);
    } else if (k == "elasticity") {
      need(1);
      nf = NFunction::elasticity(params[0]);
    } else if (k == "minimal_surface") {
      need(1);
      nf = NFunction::minimal_surface(params[0]);
    } else if (k == "plasticity") {
      need(1);
      nf = NFunction::plasticity(params[0]);
    } else {
      phisolve::fail(phisolve::ErrorCode::InvalidArgument,
                     "unknown family '" + k + "'");
    }
    *out = new phisolve_nfunction{std::move(nf)};
  });
}

void phisolve_nfunction_free(phisolve_nfunction* nf) { delete nf; }

phisolve_status phisolve_nfunction_phi(const phisolve_nfunction* nf, double t,
                                       double* out) {
  if (!nf || !out) return bad_arg("null argument");
  return guarded([&] { *out = nf->nf.phi(t); });
}

phisolve_status phisolve_nfunction_Phi(const phisolve_nfunction* nf, double t,
                                       double* out) {
  if (!nf || !out) return bad_arg("null argument");
  return guarded([&] { *out = nf->nf.Phi(t); });
}

phisolve_status phisolve_nfunction_growth(const phisolve_nfunction* nf,
                                          double* l, double* m) {
  if (!nf || !l || !m) return bad_arg("null argument");
  *l = nf->nf.l();
  *m = nf->nf.m();
  return PHISOLVE_OK;
}

phisolve_status phisolve_nfunction_zeta_bounds(const phisolve_nfunction* nf,
                                               double t, double* zeta0,
                                               double* zeta1) {
  if (!nf || !zeta0 || !zeta1) return bad_arg("null argument");
  return guarded([&] {
    const auto [z0, z1] = nf->nf.zeta_bounds(t);
    *zeta0 = z0;
    *zeta1 = z1;
  });
}

phisolve_status phisolve_nfunction_exponent_ratio(const phisolve_nfunction* nf,
                                                  double t, double* out) {
  if (!nf || !out) return bad_arg("null argument");
  return guarded([&] { *out = nf->nf.exponent_ratio(t); });
}

phisolve_status phisolve_nfunction_delta2_bound(const phisolve_nfunction* nf,
                                                double* out) {
  if (!nf || !out) return bad_arg("null argument");
  *out = nf->nf.delta2_bound();
  return PHISOLVE_OK;
}

phisolve_status phisolve_mesh_create_1d(double a, double b, int n,
                                        phisolve_mesh** out) {
  if (!out) return bad_arg("null argument");
  return guarded([&] { *out = new phisolve_mesh{phisolve::Mesh::make_1d(a, b, n)}; });
}

phisolve_status phisolve_mesh_create_2d(double ax, double bx, int nx,
                                        double ay, double by, int ny,
                                        phisolve_mesh** out) {
  if (!out) return bad_arg("null argument");
  return guarded([&] {
    *out = new phisolve_mesh{phisolve::Mesh::make_2d(ax, bx, nx, ay, by, ny)};
  });
}

void phisolve_mesh_free(phisolve_mesh* mesh) { delete mesh; }

phisolve_status phisolve_mesh_node_count(const phisolve_mesh* mesh, int* out) {
  if (!mesh || !out) return bad_arg("null argument");
  *out = mesh->mesh->node_count();
  return PHISOLVE_OK;
}

phisolve_status phisolve_gridfn_create(const phisolve_mesh* mesh,
                                       const double* values, size_t n_values,
                                       phisolve_gridfn** out) {
  if (!mesh || !out) return bad_arg("null argument");
  return guarded([&] {
    phisolve::GridFunction gf(mesh->mesh);
    if (values) {
      if (n_values != static_cast<size_t>(gf.size()))
        phisolve::fail(phisolve::ErrorCode::InvalidArgument,
                       "value count does not match node count");
      std::memcpy(gf.v.data(), values, n_values * sizeof(double));
    }
    *out = new phisolve_gridfn{std::move(gf)};
  });
}

void phisolve_gridfn_free(phisolve_gridfn* gf) { delete gf; }

phisolve_status phisolve_gridfn_size(const phisolve_gridfn* gf, size_t* out) {
  if (!gf || !out) return bad_arg("null argument");
  *out = gf->gf.v.size();
  return PHISOLVE_OK;
}

phisolve_status phisolve_gridfn_values(const phisolve_gridfn* gf,
                                       double* buffer, size_t buffer_len) {
  if (!gf || !buffer) return bad_arg("null argument");
  if (buffer_len < gf->gf.v.size()) return bad_arg("buffer too small");
  std::memcpy(buffer, gf->gf.v.data(), gf->gf.v.size() * sizeof(double));
  return PHISOLVE_OK;
}

phisolve_status phisolve_gridfn_max(const phisolve_gridfn* gf, double* out) {
  if (!gf || !out) return bad_arg("null argument");
  *out = gf->gf.max_abs();
  return PHISOLVE_OK;
}

phisolve_status phisolve_integrate(const phisolve_gridfn* gf, double* out) {
  if (!gf || !out) return bad_arg("null argument");
  return guarded([&] { *out = phisolve::integrate(gf->gf); });
}

phisolve_status phisolve_modular(const phisolve_gridfn* gf,
                                 const phisolve_nfunction* nf, double* out) {
  if (!gf || !nf || !out) return bad_arg("null argument");
  return guarded([&] { *out = phisolve::modular(gf->gf, nf->nf); });
}

phisolve_status phisolve_luxemburg_norm(const phisolve_gridfn* gf,
                                        const phisolve_nfunction* nf,
                                        double* norm, double* modular_at_norm,
                                        int* bisection_iterations) {
  if (!gf || !nf || !norm) return bad_arg("null argument");
  return guarded([&] {
    const phisolve::LuxemburgResult r = phisolve::luxemburg_norm(gf->gf, nf->nf);
    *norm = r.norm;
    if (modular_at_norm) *modular_at_norm = r.modular_at_norm;
    if (bisection_iterations) *bisection_iterations = r.bisection_iterations;
  });
}

phisolve_status phisolve_apply_philap(const phisolve_nfunction* nf,
                                      const phisolve_gridfn* u, double eps,
                                      phisolve_gridfn** out) {
  if (!nf || !u || !out) return bad_arg("null argument");
  return guarded([&] {
    *out = new phisolve_gridfn{phisolve::apply_philap(nf->nf, u->gf, eps)};
  });
}

phisolve_status phisolve_torsion(const phisolve_nfunction* nf,
                                 const phisolve_mesh* mesh, double lambda,
                                 double newton_tol,
                                 phisolve_gridfn** solution,
                                 double* residual_sup, int* iterations) {
  if (!nf || !mesh || !solution) return bad_arg("null argument");
  return guarded([&] {
    phisolve::SolverOptions opts;
    if (newton_tol > 0.0) opts.newton_tol = newton_tol;
    phisolve::SolveReport rep =
        phisolve::torsion(nf->nf, mesh->mesh, lambda, opts);
    if (residual_sup) *residual_sup = rep.residual_sup;
    if (iterations) *iterations = rep.iterations;
    *solution = new phisolve_gridfn{std::move(rep.solution)};
  });
}

phisolve_status phisolve_run_scenario(const char* config_path,
                                      const char* out_dir, double tol,
                                      int max_steps, int verbose,
                                      int* run_code) {
  if (!config_path || !run_code) return bad_arg("null argument");
  return guarded([&] {
    phisolve::RunOverrides ov;
    if (out_dir) ov.out_dir = out_dir;
    if (tol > 0.0) ov.tol = tol;
    if (max_steps > 0) ov.max_steps = max_steps;
    ov.verbose = verbose != 0;
    const phisolve::RunOutcome rc = phisolve::run_scenario(config_path, ov);
    *run_code = rc.exit_code;
    g_last_error = rc.message;
  });
}

phisolve_status phisolve_verify(const char* config_path, const char* out_dir,
                                int* run_code) {
  if (!config_path || !run_code) return bad_arg("null argument");
  return guarded([&] {
    phisolve::RunOverrides ov;
    if (out_dir) ov.out_dir = out_dir;
    const phisolve::RunOutcome rc = phisolve::run_verify(config_path, ov);
    *run_code = rc.exit_code;
    g_last_error = rc.message;
  });
}

phisolve_status phisolve_sweep(const char* config_path, const char* axis,
                               const char* out_dir, int* run_code) {
  if (!config_path || !axis || !run_code) return bad_arg("null argument");
  return guarded([&] {
    phisolve::RunOverrides ov;
    if (out_dir) ov.out_dir = out_dir;
    const phisolve::RunOutcome rc = phisolve::run_sweep(config_path, axis, ov);
    *run_code = rc.exit_code;
    g_last_error = rc.message;
  });
}

}  // extern "C"
