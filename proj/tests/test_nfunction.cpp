#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phisolve/nfunction.hpp"

using namespace phisolve;

namespace {

// Independent closed forms, written from scratch rather than calling the
// library's own evaluators.
double oracle_Phi_power_law(double p, double t) { return std::pow(std::abs(t), p); }
double oracle_Phi_power_sum(double p, double q, double t) {
  return std::pow(std::abs(t), p) + std::pow(std::abs(t), q);
}
double oracle_Phi_elasticity(double g, double t) {
  return std::pow(1.0 + t * t, g) - 1.0;
}
double oracle_Phi_minimal_surface(double g, double t) {
  return std::pow(std::sqrt(1.0 + t * t) - 1.0, g);
}
double oracle_Phi_plasticity(double p, double t) {
  double a = std::abs(t);
  return std::pow(a, p) * std::log1p(a);
}

}  // namespace

TEST_CASE("power law closed forms") {
  auto nf = NFunction::power_law(3.0);
  CHECK(nf.l() == doctest::Approx(3.0));
  CHECK(nf.m() == doctest::Approx(3.0));
  for (double t : {0.01, 0.5, 1.0, 2.0, 17.0, 1e3}) {
    CHECK(nf.Phi(t) == doctest::Approx(oracle_Phi_power_law(3.0, t)).epsilon(1e-13));
    CHECK(nf.phi(t) == doctest::Approx(3.0 * t).epsilon(1e-13));  // p t^{p-2}
  }
  CHECK(nf.Phi(-2.0) == doctest::Approx(8.0));
}

TEST_CASE("power sum closed forms and growth") {
  auto nf = NFunction::power_sum(2.0, 3.0);
  CHECK(nf.l() == doctest::Approx(2.0));
  CHECK(nf.m() == doctest::Approx(3.0));
  for (double t : {0.1, 1.0, 4.0}) {
    CHECK(nf.Phi(t) == doctest::Approx(oracle_Phi_power_sum(2.0, 3.0, t)).epsilon(1e-13));
    CHECK(nf.phi(t) == doctest::Approx(2.0 + 3.0 * t).epsilon(1e-13));
  }
}

TEST_CASE("elasticity closed forms") {
  auto nf = NFunction::elasticity(1.5);
  CHECK(nf.l() == doctest::Approx(2.0));
  CHECK(nf.m() == doctest::Approx(3.0));
  for (double t : {0.0, 0.3, 1.0, 5.0}) {
    CHECK(nf.Phi(t) == doctest::Approx(oracle_Phi_elasticity(1.5, t)).epsilon(1e-13));
  }
  // phi(t) = 2 gamma (1+t^2)^{gamma-1}, finite at 0
  CHECK(nf.phi(0.0) == doctest::Approx(3.0));
}

TEST_CASE("minimal surface closed forms") {
  auto nf = NFunction::minimal_surface(2.0);
  CHECK(nf.l() == doctest::Approx(2.0));
  CHECK(nf.m() == doctest::Approx(4.0));
  for (double t : {0.2, 1.0, 3.0}) {
    CHECK(nf.Phi(t) == doctest::Approx(oracle_Phi_minimal_surface(2.0, t)).epsilon(1e-12));
  }
}

TEST_CASE("plasticity closed forms") {
  auto nf = NFunction::plasticity(2.0);
  CHECK(nf.l() == doctest::Approx(2.0));
  CHECK(nf.m() == doctest::Approx(3.0));
  for (double t : {0.1, 1.0, 10.0}) {
    CHECK(nf.Phi(t) == doctest::Approx(oracle_Phi_plasticity(2.0, t)).epsilon(1e-12));
  }
}

TEST_CASE("Phi recovered from phi by independent quadrature") {
  // Phi(t) = int_0^t phi(s) s ds; cross-check the catalog closed forms
  // against adaptive Simpson applied to the density.
  for (auto nf : {NFunction::power_law(2.5), NFunction::elasticity(1.7),
                  NFunction::minimal_surface(1.4), NFunction::plasticity(2.3)}) {
    for (double t : {0.4, 1.0, 3.0}) {
      double numeric = adaptive_simpson(
          [&](double s) { return nf.phi(s) * s; }, 1e-12, t, 1e-12);
      CHECK(nf.Phi(t) == doctest::Approx(numeric).epsilon(1e-9));
    }
  }
}

TEST_CASE("exponent ratio stays within declared growth window") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> logt(-6.0, 6.0);
  auto families = {NFunction::power_law(2.0),      NFunction::power_law(3.5),
                   NFunction::power_sum(2.0, 3.0), NFunction::elasticity(2.0),
                   NFunction::minimal_surface(2.0), NFunction::plasticity(2.0)};
  for (const auto& nf : families) {
    for (int i = 0; i < 500; ++i) {
      double t = std::pow(10.0, logt(rng));
      double r = nf.exponent_ratio(t);
      CHECK(r >= nf.l() - 1e-9);
      CHECK(r <= nf.m() + 1e-9);
    }
  }
}

TEST_CASE("sandwich factors bound scaled values") {
  // zeta0(t) Phi(rho) <= Phi(rho t) <= zeta1(t) Phi(rho)
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logv(-3.0, 3.0);
  for (const auto& nf : {NFunction::power_sum(2.0, 3.0),
                         NFunction::minimal_surface(1.5),
                         NFunction::plasticity(2.0)}) {
    for (int i = 0; i < 1000; ++i) {
      double t = std::pow(10.0, logv(rng));
      double rho = std::pow(10.0, logv(rng));
      auto [z0, z1] = nf.zeta_bounds(t);
      double base = nf.Phi(rho);
      double scaled = nf.Phi(rho * t);
      CHECK(scaled >= z0 * base - 1e-9 * (1.0 + scaled));
      CHECK(scaled <= z1 * base + 1e-9 * (1.0 + scaled));
    }
  }
  // zeta0 / zeta1 themselves: min/max of t^l, t^m
  auto ps = NFunction::power_sum(2.0, 3.0);
  auto [z0, z1] = ps.zeta_bounds(0.5);
  CHECK(z0 == doctest::Approx(0.125));
  CHECK(z1 == doctest::Approx(0.25));
}

TEST_CASE("doubling bound") {
  for (const auto& nf : {NFunction::power_law(3.0), NFunction::power_sum(2.0, 4.0),
                         NFunction::plasticity(2.0)}) {
    double K = nf.delta2_bound();
    CHECK(K == doctest::Approx(std::pow(2.0, nf.m())));
    for (double t : {0.25, 1.0, 8.0, 100.0}) {
      CHECK(nf.Phi(2.0 * t) <= K * nf.Phi(t) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("operator density normalization") {
  // Power law pins the conventional p-Laplacian density t^{p-2}; the other
  // families use their density as written.
  auto p3 = NFunction::power_law(3.0);
  CHECK(p3.op_density(2.0) == doctest::Approx(2.0));
  CHECK(p3.phi(2.0) == doctest::Approx(6.0));
  auto el = NFunction::elasticity(1.5);
  CHECK(el.op_density(1.0) == doctest::Approx(el.phi(1.0)));
}

TEST_CASE("flux derivative matches finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> gd(-4.0, 4.0);
  for (const auto& nf : {NFunction::power_law(3.0), NFunction::power_sum(2.0, 3.0),
                         NFunction::minimal_surface(2.0), NFunction::plasticity(2.0)}) {
    for (int i = 0; i < 200; ++i) {
      double g = gd(rng);
      double eps = 1e-3;
      double h = 1e-6 * std::max(1.0, std::abs(g));
      double fd = (nf.flux(g + h, eps) - nf.flux(g - h, eps)) / (2.0 * h);
      double an = nf.flux_deriv(g, eps);
      CHECK(an == doctest::Approx(fd).epsilon(1e-5));
      CHECK(an > 0.0);
    }
  }
}

TEST_CASE("custom density validates declared exponents") {
  // A correct declaration passes...
  auto ok = NFunction::custom([](double t) { return 4.0 * t * t; }, 4.0, 4.0,
                              [](double t) { return std::pow(std::abs(t), 4.0); });
  CHECK(ok.Phi(2.0) == doctest::Approx(16.0));
  // ...a wrong one is rejected by the sampling validator.
  CHECK_THROWS_WITH_AS(
      NFunction::custom([](double t) { return 4.0 * t * t; }, 2.0, 2.5,
                        [](double t) { return std::pow(std::abs(t), 4.0); }),
      doctest::Contains("ExponentDeclarationInvalid"), Error);
}

TEST_CASE("custom without closed form integrates the density") {
  auto nf = NFunction::custom([](double t) { return 3.0 * t; }, 3.0, 3.0);
  CHECK(nf.Phi(2.0) == doctest::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(NFunction::power_law(1.0), Error);
  CHECK_THROWS_AS(NFunction::power_law(0.5), Error);
  CHECK_THROWS_AS(NFunction::power_sum(3.0, 2.0), Error);
  CHECK_THROWS_AS(NFunction::elasticity(0.5), Error);
  CHECK_THROWS_AS(NFunction::minimal_surface(0.9), Error);
  CHECK_THROWS_AS(NFunction::plasticity(1.0), Error);
}

TEST_CASE("singular densities report non-finite evaluation at zero") {
  auto p15 = NFunction::power_law(1.5);  // phi(t) = 1.5 t^{-0.5}
  CHECK_THROWS_AS(p15.phi(0.0), Error);
  CHECK(p15.Phi(0.0) == doctest::Approx(0.0));
}

TEST_CASE("adaptive simpson on known integrals") {
  double v = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                              std::acos(-1.0));
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  double w = adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 30.0);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-10));
}
