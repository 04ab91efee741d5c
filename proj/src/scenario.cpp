#include "phisolve/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace phisolve {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

ScenarioClass parse_class(const std::string& name) {
  return scenario_class_from_string(name);
}

bool is_system(ScenarioClass c) {
  return c == ScenarioClass::SublinearSystem ||
         c == ScenarioClass::ConcaveConvexSystem ||
         c == ScenarioClass::GeneralizedSystem;
}

NFunction nfunction_from(const Config& cfg, const std::string& prefix,
                         const NFunction& fallback) {
  if (!cfg.has(prefix + ".kind")) return fallback;
  const std::string kind = cfg.get_string(prefix + ".kind");
  if (kind == "power_law")
    return NFunction::power_law(cfg.get_number(prefix + ".p"));
  if (kind == "power_sum")
    return NFunction::power_sum(cfg.get_number(prefix + ".p"),
                                cfg.get_number(prefix + ".q"));
  if (kind == "elasticity")
    return NFunction::elasticity(cfg.get_number(prefix + ".gamma"));
  if (kind == "minimal_surface")
    return NFunction::minimal_surface(cfg.get_number(prefix + ".gamma"));
  if (kind == "plasticity")
    return NFunction::plasticity(cfg.get_number(prefix + ".p"));
  fail(ErrorCode::ConfigError,
       cfg.origin() + ": unknown family '" + kind + "'");
}

EquationSpec equation_from(const Config& cfg, int i, bool system,
                           bool generalized) {
  // per-equation sections operator1/operator2 etc.; the unsuffixed section is
  // the shared default
  const std::string suffix = system ? std::to_string(i + 1) : "";
  const auto pick = [&](const std::string& base) {
    return cfg.has("" + base + suffix + ".kind") ? base + suffix : base;
  };
  const auto pick_num = [&](const std::string& base, const std::string& leaf,
                            double df) {
    const std::string specific = base + suffix + "." + leaf;
    if (cfg.has(specific)) return cfg.get_number(specific);
    return cfg.get_number(base + "." + leaf, df);
  };

  EquationSpec e;
  const NFunction p2 = NFunction::power_law(2.0);
  e.op = nfunction_from(cfg, pick("operator"), p2);
  e.norm_psi = nfunction_from(cfg, pick("psi"), p2);
  e.norm_lam = nfunction_from(cfg, pick("lam"), e.norm_psi);
  e.alpha = pick_num("exponents", "alpha", 0.0);
  e.beta = pick_num("exponents", "beta", 0.0);
  e.gamma = pick_num("exponents", "gamma", 0.0);
  e.xi = pick_num("exponents", "xi", 0.0);
  e.f.exponent = e.beta;
  if (e.xi > 0.0 || e.gamma > 0.0) {
    e.g.zero = false;
    e.g.exponent = e.xi;
  }
  if (generalized) {
    // power-product coupling f_i(u, v) = v^{exp_other} (1 + u)^{exp_self}
    const std::string fp = "f" + std::to_string(i + 1);
    const double eo = cfg.get_number(fp + ".exp_other", e.beta);
    const double es = cfg.get_number(fp + ".exp_self", 0.0);
    e.f.custom = [eo, es](double own, double other) {
      return std::pow(std::max(other, 0.0), eo) *
             std::pow(1.0 + std::max(own, 0.0), es);
    };
  }
  return e;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_solution_csv(const fs::path& path, const GridFunction& u) {
  std::ostringstream os;
  const bool two_d = u.mesh->dim() == 2;
  os << (two_d ? "node_index,x,y,value\n" : "node_index,x,value\n");
  for (int i = 0; i < u.size(); ++i) {
    os << i << ',' << fmt(u.mesh->x(i));
    if (two_d) os << ',' << fmt(u.mesh->y(i));
    os << ',' << fmt(u[i]) << '\n';
  }
  write_text(path, os.str());
}

void write_trace_csv(const fs::path& path, const IterationTrace& tr) {
  std::ostringstream os;
  os << "step,sup_diff,norm_psi,norm_lambda\n";
  for (size_t n = 0; n < tr.sup_diffs.size(); ++n)
    os << (n + 1) << ',' << fmt(tr.sup_diffs[n]) << ','
       << fmt(tr.nonlocal_history[n][0]) << ','
       << fmt(tr.nonlocal_history[n][1]) << '\n';
  write_text(path, os.str());
}

json pair_json(const SubSuperPair& p) {
  return json{{"k", p.params.k},
              {"sigma", p.params.sigma},
              {"mu", p.params.mu},
              {"delta", p.params.delta},
              {"level", p.level},
              {"min_sub_margin", p.min_sub_margin},
              {"min_super_margin", p.min_super_margin},
              {"min_gap", p.min_gap}};
}

json threshold_json(const ThresholdReport& t) {
  return json{{"mode", t.mode == ThresholdMode::FixTheta ? "fix_theta"
                                                         : "fix_lambda"},
              {"rho", t.rho},
              {"tau", t.tau},
              {"L", t.L},
              {"M", t.M},
              {"K", t.K},
              {"kbar", t.kbar},
              {"lambda0", t.lambda0},
              {"theta0", t.theta0},
              {"psi_at_M", t.psi_at_M},
              {"theta_unconstrained", t.theta_unconstrained}};
}

// log-log least squares slope of y against x
double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NewtonDivergence:
    case ErrorCode::SandwichViolation:
    case ErrorCode::MonotonicityViolation:
    case ErrorCode::MaxStepsExceeded:
      return 3;
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidMeshSpec:
    case ErrorCode::InvalidParams:
      return 1;
    default:
      return 2;  // certification-stage failures
  }
}

struct RunContext {
  Scenario sc;
  fs::path out;
};

RunContext prepare(const std::string& config_path,
                   const RunOverrides& overrides) {
  RunContext ctx;
  ctx.sc = Scenario::from_config(Config::parse_file(config_path));
  if (overrides.out_dir) ctx.sc.out_dir = *overrides.out_dir;
  if (overrides.tol) ctx.sc.iteration.tol = *overrides.tol;
  if (overrides.max_steps) ctx.sc.iteration.max_steps = *overrides.max_steps;
  if (overrides.verbose) {
    ctx.sc.solver.verbose = true;
    ctx.sc.iteration.solver.verbose = true;
  }
  ctx.out = ctx.sc.out_dir;
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + ctx.out.string());
  return ctx;
}

std::vector<double> expand_range(const std::vector<double>& range, bool log) {
  if (range.size() != 3 || range[2] < 1.0)
    fail(ErrorCode::ConfigError, "range must be [lo, hi, n]");
  const int n = static_cast<int>(range[2]);
  std::vector<double> vals;
  if (n == 1) return {range[0]};
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    vals.push_back(log ? range[0] * std::pow(range[1] / range[0], t)
                       : range[0] + (range[1] - range[0]) * t);
  }
  return vals;
}

// the certify-and-iterate path shared by solve and the lambda/theta sweeps
struct ProblemResult {
  std::vector<SubSuperPair> pairs;
  std::vector<IterationTrace> traces;
  json thresholds;  // null for sublinear classes
};

ProblemResult run_problem(const Scenario& sc, bool iterate) {
  ProblemResult r;
  if (sc.cls == ScenarioClass::ConcaveConvexScalar ||
      sc.cls == ScenarioClass::ConcaveConvexSystem) {
    r.thresholds = threshold_json(
        thresholds_concave_convex(sc.spec, sc.mesh, sc.mode, sc.solver));
    r.pairs = build_pair_concave_convex(sc.spec, sc.mesh, sc.mode, sc.solver);
  } else {
    r.pairs = build_pair_sublinear(sc.spec, sc.mesh, sc.solver);
  }
  if (!iterate) return r;
  if (sc.spec.n_equations == 1) {
    r.traces.push_back(iterate_scalar(sc.spec, r.pairs[0], sc.iteration));
  } else {
    auto [t1, t2] = iterate_system(sc.spec, r.pairs, sc.iteration);
    r.traces.push_back(std::move(t1));
    r.traces.push_back(std::move(t2));
  }
  return r;
}

json report_header(const Scenario& sc) {
  return json{{"name", sc.name},
              {"class", scenario_class_name(sc.cls)},
              {"lambda", sc.spec.lambda},
              {"theta", sc.spec.theta},
              {"mesh_nodes", sc.mesh->node_count()},
              {"mesh_dim", sc.mesh->dim()}};
}

RunOutcome run_torsion_study(const RunContext& ctx) {
  const Scenario& sc = ctx.sc;
  std::vector<double> lambdas =
      sc.sweep_lambda.empty() ? std::vector<double>{1.0, 10.0, 100.0, 1000.0}
                              : sc.sweep_lambda;
  std::vector<double> maxima;
  for (double lam : lambdas)
    maxima.push_back(
        torsion(sc.spec.eq(0).op, sc.mesh, lam, sc.solver).solution.max_abs());
  const double slope = loglog_slope(lambdas, maxima);

  std::ostringstream csv;
  csv << "lambda,max_z,fitted_slope\n";
  for (size_t i = 0; i < lambdas.size(); ++i)
    csv << fmt(lambdas[i]) << ',' << fmt(maxima[i]) << ',' << fmt(slope)
        << '\n';
  write_text(ctx.out / "sweep.csv", csv.str());

  const double l = sc.spec.eq(0).op.l(), m = sc.spec.eq(0).op.m();
  json rep = report_header(sc);
  rep["fitted_slope"] = slope;
  rep["slope_lower"] = 1.0 / (m - 1.0);
  rep["slope_upper"] = 1.0 / (l - 1.0);
  write_text(ctx.out / "report.json", rep.dump(2) + "\n");
  return {0, "torsion study: slope " + fmt(slope)};
}

RunOutcome run_norm_study(const RunContext& ctx) {
  const Scenario& sc = ctx.sc;
  std::vector<double> lambdas =
      sc.sweep_lambda.empty() ? std::vector<double>{1.0, 10.0, 100.0}
                              : sc.sweep_lambda;
  std::ostringstream csv;
  csv << "lambda,max_z,norm_psi,modular_at_norm\n";
  for (double lam : lambdas) {
    const GridFunction z =
        torsion(sc.spec.eq(0).op, sc.mesh, lam, sc.solver).solution;
    const LuxemburgResult lr = luxemburg_norm(z, sc.spec.eq(0).norm_psi);
    csv << fmt(lam) << ',' << fmt(z.max_abs()) << ',' << fmt(lr.norm) << ','
        << fmt(lr.modular_at_norm) << '\n';
  }
  write_text(ctx.out / "sweep.csv", csv.str());
  json rep = report_header(sc);
  write_text(ctx.out / "report.json", rep.dump(2) + "\n");
  return {0, "norm study complete"};
}

}  // namespace

ScenarioClass scenario_class_from_string(const std::string& name) {
  if (name == "sublinear_scalar") return ScenarioClass::SublinearScalar;
  if (name == "concave_convex_scalar")
    return ScenarioClass::ConcaveConvexScalar;
  if (name == "sublinear_system") return ScenarioClass::SublinearSystem;
  if (name == "concave_convex_system")
    return ScenarioClass::ConcaveConvexSystem;
  if (name == "generalized_system") return ScenarioClass::GeneralizedSystem;
  if (name == "torsion_study") return ScenarioClass::TorsionStudy;
  if (name == "norm_study") return ScenarioClass::NormStudy;
  fail(ErrorCode::ConfigError, "unknown scenario class '" + name + "'");
}

const char* scenario_class_name(ScenarioClass c) {
  switch (c) {
    case ScenarioClass::SublinearScalar: return "sublinear_scalar";
    case ScenarioClass::ConcaveConvexScalar: return "concave_convex_scalar";
    case ScenarioClass::SublinearSystem: return "sublinear_system";
    case ScenarioClass::ConcaveConvexSystem: return "concave_convex_system";
    case ScenarioClass::GeneralizedSystem: return "generalized_system";
    case ScenarioClass::TorsionStudy: return "torsion_study";
    case ScenarioClass::NormStudy: return "norm_study";
  }
  return "?";
}

Scenario Scenario::from_config(const Config& cfg) {
  Scenario sc;
  sc.cls = parse_class(cfg.get_string("class"));
  sc.name = cfg.get_string("name", scenario_class_name(sc.cls));
  sc.out_dir = cfg.get_string("out", "out");

  const int dim = cfg.get_int("mesh.dim", 1);
  if (dim == 1) {
    sc.mesh = Mesh::make_1d(cfg.get_number("mesh.a", 0.0),
                            cfg.get_number("mesh.b", 1.0),
                            cfg.get_int("mesh.n", 801));
  } else if (dim == 2) {
    sc.mesh = Mesh::make_2d(
        cfg.get_number("mesh.ax", 0.0), cfg.get_number("mesh.bx", 1.0),
        cfg.get_int("mesh.nx", 65), cfg.get_number("mesh.ay", 0.0),
        cfg.get_number("mesh.by", 1.0), cfg.get_int("mesh.ny", 65));
  } else {
    fail(ErrorCode::ConfigError, "mesh.dim must be 1 or 2");
  }

  const bool system = is_system(sc.cls);
  sc.spec.n_equations = system ? 2 : 1;
  sc.spec.generalized = sc.cls == ScenarioClass::GeneralizedSystem;
  for (int i = 0; i < sc.spec.n_equations; ++i)
    sc.spec.eqs.push_back(equation_from(cfg, i, system, sc.spec.generalized));
  sc.spec.lambda = cfg.get_number("params.lambda", 1.0);
  sc.spec.theta = cfg.get_number("params.theta", 0.0);

  const std::string mode = cfg.get_string("mode", "fix_lambda");
  if (mode == "fix_theta")
    sc.mode = ThresholdMode::FixTheta;
  else if (mode == "fix_lambda")
    sc.mode = ThresholdMode::FixLambda;
  else
    fail(ErrorCode::ConfigError, "mode must be fix_theta or fix_lambda");

  sc.solver.newton_tol = cfg.get_number("solver.newton_tol", 1e-10);
  sc.solver.max_newton = cfg.get_int("solver.max_newton", 200);
  sc.solver.epsilon_reg = cfg.get_number("solver.epsilon_reg", 1e-10);
  sc.solver.picard_fallback = cfg.get_bool("solver.picard_fallback", true);
  sc.iteration.solver = sc.solver;
  sc.iteration.tol = cfg.get_number("iteration.tol", 1e-8);
  sc.iteration.max_steps = cfg.get_int("iteration.max_steps", 200);
  sc.iteration.descending = cfg.get_bool("iteration.descending", false);

  if (cfg.has("sweep.lambda")) sc.sweep_lambda = cfg.get_array("sweep.lambda");
  if (cfg.has("sweep.lambda_range"))
    sc.sweep_lambda_range = cfg.get_array("sweep.lambda_range");
  if (cfg.has("sweep.theta")) sc.sweep_theta_range = cfg.get_array("sweep.theta");
  if (cfg.has("sweep.mesh"))
    for (double n : cfg.get_array("sweep.mesh"))
      sc.sweep_mesh.push_back(static_cast<int>(n));
  sc.sweep_log = cfg.get_bool("sweep.log", false);
  return sc;
}

RunOutcome run_scenario(const std::string& config_path,
                        const RunOverrides& overrides) {
  try {
    const RunContext ctx = prepare(config_path, overrides);
    const Scenario& sc = ctx.sc;
    if (sc.cls == ScenarioClass::TorsionStudy) return run_torsion_study(ctx);
    if (sc.cls == ScenarioClass::NormStudy) return run_norm_study(ctx);

    const ProblemResult pr = run_problem(sc, true);

    json rep = report_header(sc);
    if (!pr.thresholds.is_null()) rep["thresholds"] = pr.thresholds;
    rep["pairs"] = json::array();
    for (const auto& p : pr.pairs) rep["pairs"].push_back(pair_json(p));
    rep["traces"] = json::array();
    for (size_t i = 0; i < pr.traces.size(); ++i) {
      const IterationTrace& tr = pr.traces[i];
      rep["traces"].push_back(json{{"converged", tr.converged},
                                   {"steps", tr.steps},
                                   {"final_residual", tr.final_residual},
                                   {"sup_norm", tr.iterates.back().max_abs()}});
      const std::string suffix = pr.traces.size() > 1
                                     ? std::to_string(i + 1)
                                     : std::string();
      write_trace_csv(ctx.out / ("trace" + suffix + ".csv"), tr);
      write_solution_csv(ctx.out / ("solution" + suffix + ".csv"),
                         tr.iterates.back());
    }
    write_text(ctx.out / "report.json", rep.dump(2) + "\n");
    return {0, "converged"};
  } catch (const Error& e) {
    return {exit_code_for(e.code()), e.what()};
  }
}

RunOutcome run_verify(const std::string& config_path,
                      const RunOverrides& overrides) {
  try {
    const RunContext ctx = prepare(config_path, overrides);
    const Scenario& sc = ctx.sc;
    if (sc.cls == ScenarioClass::TorsionStudy ||
        sc.cls == ScenarioClass::NormStudy)
      fail(ErrorCode::ConfigError, "nothing to certify for study classes");
    const ProblemResult pr = run_problem(sc, false);
    json rep = report_header(sc);
    if (!pr.thresholds.is_null()) rep["thresholds"] = pr.thresholds;
    rep["pairs"] = json::array();
    for (const auto& p : pr.pairs) rep["pairs"].push_back(pair_json(p));
    rep["certified"] = true;
    write_text(ctx.out / "report.json", rep.dump(2) + "\n");
    return {0, "certified"};
  } catch (const Error& e) {
    return {exit_code_for(e.code()), e.what()};
  }
}

RunOutcome run_sweep(const std::string& config_path, const std::string& axis,
                     const RunOverrides& overrides) {
  try {
    const RunContext ctx = prepare(config_path, overrides);
    const Scenario& sc = ctx.sc;
    std::ostringstream csv;

    if (axis == "lambda" || axis == "theta") {
      std::vector<double> vals;
      if (axis == "lambda") {
        if (!sc.sweep_lambda.empty())
          vals = sc.sweep_lambda;
        else if (!sc.sweep_lambda_range.empty())
          vals = expand_range(sc.sweep_lambda_range, sc.sweep_log);
      } else if (!sc.sweep_theta_range.empty()) {
        vals = expand_range(sc.sweep_theta_range, sc.sweep_log);
      }
      if (vals.empty())
        fail(ErrorCode::ConfigError, "empty sweep range for axis " + axis);

      const bool cc = sc.cls == ScenarioClass::ConcaveConvexScalar ||
                      sc.cls == ScenarioClass::ConcaveConvexSystem;
      csv << axis << ",certified,min_margin,steps,converged,residual";
      if (cc) csv << ",M,psi_at_M";
      csv << ",error\n";
      for (double v : vals) {
        Scenario row = sc;
        (axis == "lambda" ? row.spec.lambda : row.spec.theta) = v;
        csv << fmt(v) << ',';
        try {
          json thresholds;
          if (cc)
            thresholds = threshold_json(thresholds_concave_convex(
                row.spec, row.mesh, row.mode, row.solver));
          const ProblemResult pr = run_problem(row, true);
          double margin = pr.pairs[0].min_sub_margin;
          for (const auto& p : pr.pairs) {
            margin = std::min(margin, p.min_sub_margin);
            margin = std::min(margin, p.min_super_margin);
          }
          csv << "1," << fmt(margin) << ',' << pr.traces[0].steps << ",1,"
              << fmt(pr.traces[0].final_residual);
          if (cc)
            csv << ',' << fmt(thresholds["M"].get<double>()) << ','
                << fmt(thresholds["psi_at_M"].get<double>());
          csv << ",\n";
        } catch (const Error& e) {
          csv << "0,0,0,0,0";
          if (cc) csv << ",0,0";
          csv << ",\"" << error_code_name(e.code()) << "\"\n";
        }
      }
    } else if (axis == "mesh") {
      if (sc.sweep_mesh.empty())
        fail(ErrorCode::ConfigError, "empty sweep.mesh");
      csv << "n,h,sup_norm,order\n";
      std::vector<double> sups, hs;
      for (int n : sc.sweep_mesh) {
        Scenario row = sc;
        row.mesh = Mesh::make_1d(sc.mesh->ax(), sc.mesh->bx(), n);
        const ProblemResult pr = run_problem(row, true);
        sups.push_back(pr.traces[0].iterates.back().max_abs());
        hs.push_back(row.mesh->hx());
        double order = 0.0;
        const size_t k = sups.size();
        if (k >= 3) {
          const double e1 = std::fabs(sups[k - 3] - sups[k - 2]);
          const double e2 = std::fabs(sups[k - 2] - sups[k - 1]);
          if (e2 > 0.0)
            order = std::log(e1 / e2) / std::log(hs[k - 3] / hs[k - 2]);
        }
        csv << n << ',' << fmt(hs.back()) << ',' << fmt(sups.back()) << ','
            << fmt(order) << '\n';
      }
    } else {
      fail(ErrorCode::ConfigError, "axis must be lambda, theta or mesh");
    }

    write_text(ctx.out / "sweep.csv", csv.str());
    return {0, "sweep complete"};
  } catch (const Error& e) {
    return {exit_code_for(e.code()), e.what()};
  }
}

}  // namespace phisolve
