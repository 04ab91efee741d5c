// Command-line front end. Links only the C API of libphisolve.
#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "phisolve.h"

namespace {

int report(phisolve_status st, int run_code) {
  const char* msg = phisolve_last_error();
  if (st != PHISOLVE_OK) {
    std::fprintf(stderr, "error: %s\n", msg && *msg ? msg : "internal failure");
    return 1;
  }
  if (run_code != 0 && msg && *msg) std::fprintf(stderr, "%s\n", msg);
  if (run_code == 0 && msg && *msg) std::printf("%s\n", msg);
  return run_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal Phi-Laplacian sub-supersolution solver"};
  app.require_subcommand(1);

  std::string config, out_dir, axis;
  double tol = 0.0;
  int max_steps = 0;
  bool verbose = false;

  CLI::App* solve = app.add_subcommand(
      "solve", "certify a pair and run the monotone iteration");
  solve->add_option("config", config, "scenario config file")->required();
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--tol", tol, "iteration stopping tolerance");
  solve->add_option("--max-steps", max_steps, "iteration step cap");
  solve->add_flag("--verbose", verbose, "verbose solver reporting");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to sweep.csv");
  sweep->add_option("config", config, "scenario config file")->required();
  sweep->add_option("--axis", axis, "lambda | theta | mesh")->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI::App* verify =
      app.add_subcommand("verify", "certification only, no iteration");
  verify->add_option("config", config, "scenario config file")->required();
  verify->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  const char* out = out_dir.empty() ? nullptr : out_dir.c_str();
  int run_code = 0;
  phisolve_status st = PHISOLVE_OK;
  if (solve->parsed()) {
    st = phisolve_run_scenario(config.c_str(), out, tol, max_steps,
                               verbose ? 1 : 0, &run_code);
  } else if (sweep->parsed()) {
    st = phisolve_sweep(config.c_str(), axis.c_str(), out, &run_code);
  } else {
    st = phisolve_verify(config.c_str(), out, &run_code);
  }
  return report(st, run_code);
}
