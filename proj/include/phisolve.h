/* phisolve -- C API for the nonlocal Phi-Laplacian sub-supersolution solver.
 *
 * All functions return a phisolve_status; PHISOLVE_OK means the out
 * parameters are valid. On failure phisolve_last_error() returns a
 * human-readable message for the calling thread. Handles are opaque and
 * freed with the matching *_free function (NULL is accepted).
 */
#ifndef PHISOLVE_H
#define PHISOLVE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PHISOLVE_API __declspec(dllexport)
#else
#define PHISOLVE_API __attribute__((visibility("default")))
#endif

typedef enum phisolve_status {
  PHISOLVE_OK = 0,
  PHISOLVE_ERR_INVALID_ARGUMENT = 1,
  PHISOLVE_ERR_NONFINITE = 2,
  PHISOLVE_ERR_QUADRATURE = 3,
  PHISOLVE_ERR_EXPONENT_DECLARATION = 4,
  PHISOLVE_ERR_MESH_SPEC = 5,
  PHISOLVE_ERR_BRACKET = 6,
  PHISOLVE_ERR_NEWTON_DIVERGENCE = 7,
  PHISOLVE_ERR_PRECONDITION = 8,
  PHISOLVE_ERR_INVALID_PARAMS = 9,
  PHISOLVE_ERR_K_SELECTION = 10,
  PHISOLVE_ERR_LAMBDA_SEARCH = 11,
  PHISOLVE_ERR_HYPOTHESIS = 12,
  PHISOLVE_ERR_DEGENERATE_THRESHOLD = 13,
  PHISOLVE_ERR_CERTIFICATION = 14,
  PHISOLVE_ERR_ORDERING = 15,
  PHISOLVE_ERR_SANDWICH = 16,
  PHISOLVE_ERR_MONOTONICITY = 17,
  PHISOLVE_ERR_MAX_STEPS = 18,
  PHISOLVE_ERR_CONFIG = 19,
  PHISOLVE_ERR_IO = 20,
  PHISOLVE_ERR_INTERNAL = 21
} phisolve_status;

typedef struct phisolve_nfunction phisolve_nfunction;
typedef struct phisolve_mesh phisolve_mesh;
typedef struct phisolve_gridfn phisolve_gridfn;

/* Thread-local message for the most recent failure. */
PHISOLVE_API const char* phisolve_last_error(void);

/* ---- N-functions ----------------------------------------------------- */

/* kind: "power_law" (params: p), "power_sum" (p, q), "elasticity" (gamma),
 * "minimal_surface" (gamma), "plasticity" (p). */
PHISOLVE_API phisolve_status phisolve_nfunction_create(
    const char* kind, const double* params, size_t n_params,
    phisolve_nfunction** out);
PHISOLVE_API void phisolve_nfunction_free(phisolve_nfunction* nf);

PHISOLVE_API phisolve_status phisolve_nfunction_phi(
    const phisolve_nfunction* nf, double t, double* out);
PHISOLVE_API phisolve_status phisolve_nfunction_Phi(
    const phisolve_nfunction* nf, double t, double* out);
PHISOLVE_API phisolve_status phisolve_nfunction_growth(
    const phisolve_nfunction* nf, double* l, double* m);
PHISOLVE_API phisolve_status phisolve_nfunction_zeta_bounds(
    const phisolve_nfunction* nf, double t, double* zeta0, double* zeta1);
PHISOLVE_API phisolve_status phisolve_nfunction_exponent_ratio(
    const phisolve_nfunction* nf, double t, double* out);
PHISOLVE_API phisolve_status phisolve_nfunction_delta2_bound(
    const phisolve_nfunction* nf, double* out);

/* ---- Meshes and grid functions --------------------------------------- */

PHISOLVE_API phisolve_status phisolve_mesh_create_1d(double a, double b, int n,
                                                     phisolve_mesh** out);
PHISOLVE_API phisolve_status phisolve_mesh_create_2d(double ax, double bx,
                                                     int nx, double ay,
                                                     double by, int ny,
                                                     phisolve_mesh** out);
PHISOLVE_API void phisolve_mesh_free(phisolve_mesh* mesh);
PHISOLVE_API phisolve_status phisolve_mesh_node_count(
    const phisolve_mesh* mesh, int* out);

/* values may be NULL (zero fill); length must equal the node count. */
PHISOLVE_API phisolve_status phisolve_gridfn_create(const phisolve_mesh* mesh,
                                                    const double* values,
                                                    size_t n_values,
                                                    phisolve_gridfn** out);
PHISOLVE_API void phisolve_gridfn_free(phisolve_gridfn* gf);
PHISOLVE_API phisolve_status phisolve_gridfn_size(const phisolve_gridfn* gf,
                                                  size_t* out);
PHISOLVE_API phisolve_status phisolve_gridfn_values(const phisolve_gridfn* gf,
                                                    double* buffer,
                                                    size_t buffer_len);
PHISOLVE_API phisolve_status phisolve_gridfn_max(const phisolve_gridfn* gf,
                                                 double* out);

PHISOLVE_API phisolve_status phisolve_integrate(const phisolve_gridfn* gf,
                                                double* out);

/* ---- Orlicz machinery ------------------------------------------------ */

PHISOLVE_API phisolve_status phisolve_modular(const phisolve_gridfn* gf,
                                              const phisolve_nfunction* nf,
                                              double* out);
PHISOLVE_API phisolve_status phisolve_luxemburg_norm(
    const phisolve_gridfn* gf, const phisolve_nfunction* nf, double* norm,
    double* modular_at_norm, int* bisection_iterations);

/* ---- Phi-Laplacian solver --------------------------------------------- */

PHISOLVE_API phisolve_status phisolve_apply_philap(
    const phisolve_nfunction* nf, const phisolve_gridfn* u, double eps,
    phisolve_gridfn** out);

/* newton_tol <= 0 selects the default (1e-10). */
PHISOLVE_API phisolve_status phisolve_torsion(const phisolve_nfunction* nf,
                                              const phisolve_mesh* mesh,
                                              double lambda, double newton_tol,
                                              phisolve_gridfn** solution,
                                              double* residual_sup,
                                              int* iterations);

/* ---- Scenario runner --------------------------------------------------
 * run_code carries the CLI exit-code contract: 0 success, 1 config error,
 * 2 certification failure, 3 iteration failure. The returned status is
 * PHISOLVE_OK whenever the runner itself completed (even with run_code 2/3).
 */
PHISOLVE_API phisolve_status phisolve_run_scenario(const char* config_path,
                                                   const char* out_dir,
                                                   double tol, int max_steps,
                                                   int verbose, int* run_code);
PHISOLVE_API phisolve_status phisolve_verify(const char* config_path,
                                             const char* out_dir,
                                             int* run_code);
PHISOLVE_API phisolve_status phisolve_sweep(const char* config_path,
                                            const char* axis,
                                            const char* out_dir,
                                            int* run_code);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PHISOLVE_H */
