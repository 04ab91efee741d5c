#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phisolve/orlicz.hpp"

using namespace phisolve;

TEST_CASE("modular of a constant") {
  auto mesh = Mesh::make_1d(0, 2, 201);
  auto u = make_grid_function(mesh, [](double, double) { return 3.0; });
  auto p2 = NFunction::power_law(2.0);
  // int_0^2 Phi(3) dx = 2 * 9
  CHECK(modular(u, p2) == doctest::Approx(18.0).epsilon(1e-13));
}

TEST_CASE("power-law Luxemburg norm equals the Lp norm") {
  // For Phi(t) = |t|^p the Luxemburg norm is the usual L^p norm; check
  // against direct quadrature of |u|^p.
  auto mesh = Mesh::make_1d(0, 1, 401);
  auto u = make_grid_function(mesh,
                              [](double x, double) { return x * (1.0 - x); });
  for (double p : {2.0, 3.0, 4.5}) {
    auto nf = NFunction::power_law(p);
    GridFunction up = u;
    for (auto& v : up.v) v = std::pow(std::abs(v), p);
    double lp = std::pow(integrate(up), 1.0 / p);
    auto r = luxemburg_norm(u, nf);
    CHECK(r.norm == doctest::Approx(lp).epsilon(1e-10));
    CHECK(r.modular_at_norm == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("norm of zero is zero") {
  auto mesh = Mesh::make_1d(0, 1, 11);
  GridFunction z(mesh);
  auto r = luxemburg_norm(z, NFunction::power_law(2.0));
  CHECK(r.norm == 0.0);
}

TEST_CASE("unit modular at the norm for general families") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto mesh = Mesh::make_1d(-1, 1, 101);
  for (const auto& nf : {NFunction::power_sum(2.0, 3.0),
                         NFunction::elasticity(1.5),
                         NFunction::minimal_surface(2.0),
                         NFunction::plasticity(2.0)}) {
    for (int trial = 0; trial < 20; ++trial) {
      GridFunction u(mesh);
      for (auto& v : u.v) v = gauss(rng);
      auto r = luxemburg_norm(u, nf);
      CHECK(r.norm > 0.0);
      CHECK(r.modular_at_norm == doctest::Approx(1.0).epsilon(1e-9));
      // definition check: scaling by the norm brings the modular to 1
      GridFunction scaled = u;
      for (auto& v : scaled.v) v /= r.norm;
      CHECK(modular(scaled, nf) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("homogeneity: norm(c u) = |c| norm(u)") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 2.0);
  std::uniform_real_distribution<double> logc(-3.0, 3.0);
  auto mesh = Mesh::make_1d(0, 1, 64);
  auto ps = NFunction::power_sum(2.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    GridFunction u(mesh);
    for (auto& v : u.v) v = gauss(rng);
    double c = std::pow(10.0, logc(rng));
    GridFunction cu = u;
    for (auto& v : cu.v) v *= c;
    double n1 = luxemburg_norm(u, ps).norm;
    double n2 = luxemburg_norm(cu, ps).norm;
    CHECK(n2 == doctest::Approx(c * n1).epsilon(1e-10));
  }
}

TEST_CASE("monotonicity: |u| <= |v| nodewise implies norm(u) <= norm(v)") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto mesh = Mesh::make_1d(0, 1, 64);
  auto ms = NFunction::minimal_surface(2.0);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u(mesh), v(mesh);
    for (int i = 0; i < u.size(); ++i) {
      v[i] = unif(rng) + 0.1;
      u[i] = v[i] * unif(rng);
    }
    CHECK(luxemburg_norm(u, ms).norm <= luxemburg_norm(v, ms).norm * (1 + 1e-12));
  }
}
