#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "phisolve/scenario.hpp"

using namespace phisolve;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("phisolve_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name, const std::string& text) const {
    auto p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSublinearConfig = R"(
class = "sublinear_scalar"
name = "ps_test"
mesh.n = 401
operator.kind = "power_law"
operator.p = 2.0
exponents.alpha = 0.3
exponents.beta = 0.3
iteration.tol = 1e-8
)";

}  // namespace

TEST_CASE("config parser round trip") {
  auto cfg = Config::parse_string(
      "a.b = 1.5\n"
      "flag = true\n"
      "s = \"hello world\"  # trailing comment\n"
      "bare = fix_theta\n"
      "arr = [1, 2.5, 1e-3]\n");
  CHECK(cfg.get_number("a.b") == doctest::Approx(1.5));
  CHECK(cfg.get_bool("flag", false));
  CHECK(cfg.get_string("s") == "hello world");
  CHECK(cfg.get_string("bare") == "fix_theta");
  auto arr = cfg.get_array("arr");
  REQUIRE(arr.size() == 3);
  CHECK(arr[2] == doctest::Approx(1e-3));
  CHECK(cfg.get_number("missing", 7.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(cfg.get_number("missing"), Error);
  CHECK(cfg.keys_with_prefix("a").size() == 1);
}

TEST_CASE("config parser diagnostics carry the line") {
  CHECK_THROWS_WITH_AS(Config::parse_string("x = [1, oops]\n", "bad.cfg"),
                       doctest::Contains("bad.cfg"), Error);
}

TEST_CASE("scenario end-to-end writes a full report") {
  TempDir tmp;
  auto cfg_path = tmp.file("ps.cfg", kSublinearConfig);
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  auto outcome = run_scenario(cfg_path, ov);
  CHECK(outcome.exit_code == 0);

  auto report = json::parse(slurp(tmp.path / "out" / "report.json"));
  CHECK(report["name"] == "ps_test");
  CHECK(report["pairs"][0]["min_sub_margin"].get<double>() >= -1e-8);
  CHECK(report["pairs"][0]["min_super_margin"].get<double>() >= -1e-8);
  CHECK(report["traces"][0]["converged"] == true);
  CHECK(report["traces"][0]["final_residual"].get<double>() <= 1e-7);
  CHECK(fs::exists(tmp.path / "out" / "solution.csv"));
  CHECK(fs::exists(tmp.path / "out" / "trace.csv"));

  // solution csv has a header plus one row per node
  std::istringstream sol(slurp(tmp.path / "out" / "solution.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(sol, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 401 + 1);
}

TEST_CASE("repeated runs are byte-identical") {
  TempDir tmp;
  auto cfg_path = tmp.file("ps.cfg", kSublinearConfig);
  RunOverrides a, b;
  a.out_dir = (tmp.path / "a").string();
  b.out_dir = (tmp.path / "b").string();
  CHECK(run_scenario(cfg_path, a).exit_code == 0);
  CHECK(run_scenario(cfg_path, b).exit_code == 0);
  CHECK(slurp(tmp.path / "a" / "report.json") ==
        slurp(tmp.path / "b" / "report.json"));
  CHECK(slurp(tmp.path / "a" / "solution.csv") ==
        slurp(tmp.path / "b" / "solution.csv"));
}

TEST_CASE("verify mode certifies without iterating") {
  TempDir tmp;
  auto cfg_path = tmp.file("ps.cfg", kSublinearConfig);
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  CHECK(run_verify(cfg_path, ov).exit_code == 0);
}

TEST_CASE("exit code 1 on config errors") {
  TempDir tmp;
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  CHECK(run_scenario(tmp.file("bad.cfg", "class = \"no_such_class\"\n"), ov)
            .exit_code == 1);
  CHECK(run_scenario((tmp.path / "missing.cfg").string(), ov).exit_code == 1);
  CHECK(run_scenario(tmp.file("neg.cfg",
                              "class = \"sublinear_scalar\"\nmesh.n = 2\n"),
                     ov)
            .exit_code == 1);
}

TEST_CASE("exit code 2 on certification failure") {
  TempDir tmp;
  // theta far above the admissible threshold
  auto cfg_path = tmp.file("cc.cfg", R"(
class = "concave_convex_scalar"
mode = "fix_lambda"
mesh.n = 401
exponents.alpha = 0.25
exponents.beta = 0.25
exponents.xi = 1.0
exponents.gamma = 1.0
params.lambda = 1.0
params.theta = 1e6
)");
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  CHECK(run_scenario(cfg_path, ov).exit_code == 2);
}

TEST_CASE("exit code 3 on iteration failure") {
  TempDir tmp;
  auto cfg_path = tmp.file("ps.cfg", kSublinearConfig);
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  ov.tol = 1e-15;  // unreachable
  ov.max_steps = 2;
  CHECK(run_scenario(cfg_path, ov).exit_code == 3);
}

TEST_CASE("concave-convex report carries the thresholds") {
  TempDir tmp;
  auto cfg_path = tmp.file("cc.cfg", R"(
class = "concave_convex_scalar"
mode = "fix_lambda"
mesh.n = 401
exponents.alpha = 0.25
exponents.beta = 0.25
exponents.xi = 1.0
exponents.gamma = 1.0
params.lambda = 1.0
params.theta = 0.5
)");
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  CHECK(run_scenario(cfg_path, ov).exit_code == 0);
  auto report = json::parse(slurp(tmp.path / "out" / "report.json"));
  CHECK(report["thresholds"]["rho"].get<double>() == doctest::Approx(0.5));
  CHECK(report["thresholds"]["tau"].get<double>() == doctest::Approx(2.0));
  CHECK(report["thresholds"]["theta0"].get<double>() > 0.5);
}

TEST_CASE("system scenario writes per-component artifacts") {
  TempDir tmp;
  auto cfg_path = tmp.file("sys.cfg", R"(
class = "sublinear_system"
mesh.n = 201
operator1.kind = "power_law"
operator1.p = 2.0
operator2.kind = "power_law"
operator2.p = 2.5
exponents.alpha = 0.2
exponents.beta = 0.2
)");
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  CHECK(run_scenario(cfg_path, ov).exit_code == 0);
  CHECK(fs::exists(tmp.path / "out" / "solution1.csv"));
  CHECK(fs::exists(tmp.path / "out" / "solution2.csv"));
  CHECK(fs::exists(tmp.path / "out" / "trace1.csv"));
  CHECK(fs::exists(tmp.path / "out" / "trace2.csv"));
}

TEST_CASE("torsion study reports the scaling slope") {
  TempDir tmp;
  auto cfg_path = tmp.file("ts.cfg", R"(
class = "torsion_study"
mesh.n = 401
operator.kind = "power_law"
operator.p = 3.0
sweep.lambda = [1, 10, 100]
)");
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  CHECK(run_scenario(cfg_path, ov).exit_code == 0);
  auto report = json::parse(slurp(tmp.path / "out" / "report.json"));
  // max z_lambda ~ lambda^{1/(p-1)}: slope 0.5 for p = 3
  CHECK(report["fitted_slope"].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(fs::exists(tmp.path / "out" / "sweep.csv"));
}

TEST_CASE("lambda sweep marks failing rows and keeps going") {
  TempDir tmp;
  auto cfg_path = tmp.file("sw.cfg", R"(
class = "concave_convex_scalar"
mode = "fix_theta"
mesh.n = 201
exponents.alpha = 0.25
exponents.beta = 0.25
exponents.xi = 1.0
exponents.gamma = 1.0
params.theta = 1.0
sweep.lambda_range = [0.1, 100.0, 8]
sweep.log = true
)");
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  auto outcome = run_sweep(cfg_path, "lambda", ov);
  CHECK(outcome.exit_code == 0);
  auto csv = slurp(tmp.path / "out" / "sweep.csv");
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  bool some_failed = false, some_ok = false;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    // failed rows carry the quoted error-code name in the last column
    if (line.find('"') != std::string::npos)
      some_failed = true;
    else
      some_ok = true;
  }
  CHECK(rows == 8);
  CHECK(some_ok);
  CHECK(some_failed);  // lambda = 100 sits far above the threshold
}

TEST_CASE("mesh sweep reports a refinement order") {
  TempDir tmp;
  auto cfg_path = tmp.file("ms.cfg", R"(
class = "sublinear_scalar"
mesh.n = 101
exponents.alpha = 0.3
exponents.beta = 0.3
sweep.mesh = [101, 201, 401]
)");
  RunOverrides ov;
  ov.out_dir = (tmp.path / "out").string();
  CHECK(run_sweep(cfg_path, "mesh", ov).exit_code == 0);
  auto csv = slurp(tmp.path / "out" / "sweep.csv");
  CHECK(csv.find("order") != std::string::npos);
  // the last row carries the Richardson estimate; the plain-Laplacian branch
  // of this problem is smooth, so it should sit near second order
  std::istringstream in(csv);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  double order = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(order >= 1.8);
}
