#include "phisolve/subsuper.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace phisolve {

namespace {

// hypothesis 0 < alpha_j + beta_j < min_i l_i - 1 (the cross condition for
// systems collapses to the scalar one when n_equations == 1)
void require_sublinear(const ProblemSpec& spec) {
  double lmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.n_equations; ++i)
    lmin = std::min(lmin, spec.eq(i).op.l());
  for (int i = 0; i < spec.n_equations; ++i) {
    const double s = spec.eq(i).alpha + spec.eq(i).beta;
    if (!(s < lmin - 1.0))
      fail(ErrorCode::HypothesisViolation,
           "needs alpha + beta < l - 1, got " + std::to_string(s) +
               " vs l - 1 = " + std::to_string(lmin - 1.0));
  }
}

// RHS of the subsolution inequality for equation i, frozen at the candidate
// subsolutions. concave_only drops the theta-term.
GridFunction sub_rhs(const ProblemSpec& spec, int i,
                     const std::vector<GridFunction>& subs, bool concave_only) {
  ProblemSpec s = spec;
  if (concave_only) s.theta = 0.0;
  const int j = spec.n_equations == 1 ? 0 : 1 - i;
  return frozen_rhs(s, i, subs[static_cast<size_t>(i)],
                    subs[static_cast<size_t>(j)]);
}

double min_interior(const GridFunction& a, const GridFunction& b) {
  double m = std::numeric_limits<double>::infinity();
  for (int n = 0; n < a.size(); ++n)
    if (!a.mesh->is_boundary(n)) m = std::min(m, a[n] - b[n]);
  return m;
}

}  // namespace

BoundaryLayerParams BoundaryLayerParams::from_k(double k, double delta) {
  if (!(k > 0.0) || !(delta > 0.0))
    fail(ErrorCode::InvalidParams, "k and delta must be positive");
  BoundaryLayerParams p;
  p.k = k;
  p.sigma = std::log(2.0) / k;
  p.mu = std::exp(-k);
  p.delta = delta;
  return p;
}

double eta_plateau(const NFunction& nf, const BoundaryLayerParams& p) {
  const double r = nf.m() / (nf.l() - 1.0);
  return 1.0 + 2.0 * p.k * (2.0 * p.delta - p.sigma) / (r + 1.0);
}

GridFunction build_eta(const MeshPtr& mesh, const NFunction& nf,
                       const BoundaryLayerParams& p) {
  if (!(p.sigma < p.delta))
    fail(ErrorCode::InvalidParams, "needs sigma < delta");
  if (!(nf.l() > 1.0))
    fail(ErrorCode::InvalidParams, "boundary layer needs l > 1");
  const double r = nf.m() / (nf.l() - 1.0);
  const double span = 2.0 * p.delta - p.sigma;
  GridFunction eta(mesh);
  for (int i = 0; i < eta.size(); ++i) {
    const double d = mesh->boundary_distance(i);
    if (d < p.sigma) {
      eta[i] = std::expm1(p.k * d);
    } else if (d < 2.0 * p.delta) {
      // closed-form collar integral, e^{k sigma} = 2
      const double w = (2.0 * p.delta - d) / span;
      eta[i] = 1.0 + 2.0 * p.k * span / (r + 1.0) *
                         (1.0 - std::pow(w, r + 1.0));
    } else {
      eta[i] = 1.0 + 2.0 * p.k * span / (r + 1.0);
    }
  }
  return eta;
}

KSelection select_k_sublinear(const ProblemSpec& spec, const MeshPtr& mesh,
                              const SolverOptions& opts, bool concave_only) {
  spec.validate();
  require_sublinear(spec);
  const DistanceField df = distance_field(mesh);

  std::string last_note = "no admissible k";
  for (double k = 4.0; k <= static_cast<double>(1 << 20); k *= 2.0) {
    const BoundaryLayerParams p = BoundaryLayerParams::from_k(k, df.delta);
    if (!(p.sigma < p.delta)) continue;  // k still too small for the collar
    if (!(mesh->max_h() < p.sigma / 4.0)) {
      last_note = "mesh too coarse to resolve the boundary layer (needs h < "
                  "sigma/4 = " +
                  std::to_string(p.sigma / 4.0) + ")";
      break;  // larger k only shrinks sigma further
    }
    KSelection sel;
    sel.params = p;
    sel.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n_equations; ++i) {
      GridFunction sub = build_eta(mesh, spec.eq(i).op, p);
      for (double& v : sub.v) v *= p.mu;
      sel.subs.push_back(std::move(sub));
    }
    for (int i = 0; i < spec.n_equations; ++i) {
      const GridFunction lhs =
          apply_philap(spec.eq(i).op, sel.subs[static_cast<size_t>(i)],
                       opts.epsilon_reg);
      const GridFunction rhs = sub_rhs(spec, i, sel.subs, concave_only);
      sel.min_margin = std::min(sel.min_margin, min_interior(rhs, lhs));
    }
    if (sel.min_margin >= kSearchMargin) return sel;
    last_note = "k=" + std::to_string(k) + " margin " +
                std::to_string(sel.min_margin);
  }
  fail(ErrorCode::KSelectionFailure, last_note);
}

LambdaSelection select_lambda_supersolution(const ProblemSpec& spec,
                                            const MeshPtr& mesh,
                                            const SolverOptions& opts) {
  spec.validate();
  require_sublinear(spec);

  double lambda = 1.0;
  double last_margin = 0.0;
  for (int step = 0; step < 60; ++step, lambda *= 2.0) {
    LambdaSelection sel;
    sel.lambda = lambda;
    for (int i = 0; i < spec.n_equations; ++i)
      sel.supers.push_back(
          torsion(spec.eq(i).op, mesh, lambda, opts).solution);
    sel.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n_equations; ++i) {
      const int j = spec.n_equations == 1 ? 0 : 1 - i;
      const GridFunction rhs =
          frozen_rhs(spec, i, sel.supers[static_cast<size_t>(i)],
                     sel.supers[static_cast<size_t>(j)]);
      GridFunction lam_fn(mesh, lambda);
      sel.min_margin = std::min(sel.min_margin, min_interior(lam_fn, rhs));
    }
    // accept at margin, or at exact equality (degenerate exponent cases)
    if (sel.min_margin >= kSearchMargin ||
        std::fabs(sel.min_margin) <= 1e-12 * std::max(1.0, lambda))
      return sel;
    last_margin = sel.min_margin;
  }
  fail(ErrorCode::LambdaSearchFailure,
       "60 doublings exhausted, last margin " + std::to_string(last_margin));
}

namespace {

std::vector<SubSuperPair> certify_pairs(const ProblemSpec& spec,
                                        const MeshPtr& mesh,
                                        const SolverOptions& opts,
                                        const KSelection& ksel,
                                        const std::vector<GridFunction>& supers,
                                        double level, bool concave_only_sub) {
  std::vector<SubSuperPair> pairs;
  for (int i = 0; i < spec.n_equations; ++i) {
    SubSuperPair pr;
    pr.sub = ksel.subs[static_cast<size_t>(i)];
    pr.super = supers[static_cast<size_t>(i)];
    pr.params = ksel.params;
    pr.level = level;

    const GridFunction lhs_sub =
        apply_philap(spec.eq(i).op, pr.sub, opts.epsilon_reg);
    const GridFunction rhs_sub = sub_rhs(
        spec, i,
        ksel.subs, /*concave_only=*/false);  // full RHS only widens the margin
    const int j = spec.n_equations == 1 ? 0 : 1 - i;
    const GridFunction rhs_super =
        frozen_rhs(spec, i, supers[static_cast<size_t>(i)],
                   supers[static_cast<size_t>(j)]);

    pr.sub_margin = GridFunction(mesh);
    pr.super_margin = GridFunction(mesh);
    pr.min_sub_margin = std::numeric_limits<double>::infinity();
    pr.min_super_margin = std::numeric_limits<double>::infinity();
    pr.min_gap = std::numeric_limits<double>::infinity();
    for (int n = 0; n < pr.sub.size(); ++n) {
      if (mesh->is_boundary(n)) continue;
      pr.sub_margin[n] = rhs_sub[n] - lhs_sub[n];
      pr.super_margin[n] = level - rhs_super[n];
      pr.min_sub_margin = std::min(pr.min_sub_margin, pr.sub_margin[n]);
      pr.min_super_margin = std::min(pr.min_super_margin, pr.super_margin[n]);
      pr.min_gap = std::min(pr.min_gap, pr.super[n] - pr.sub[n]);
    }
    if (pr.min_sub_margin < -kCertTol || pr.min_super_margin < -kCertTol)
      fail(ErrorCode::CertificationFailure,
           "defining inequality fails for equation " + std::to_string(i) +
               " (sub margin " + std::to_string(pr.min_sub_margin) +
               ", super margin " + std::to_string(pr.min_super_margin) + ")");
    if (pr.min_gap < -kCertTol)
      fail(ErrorCode::OrderingViolation,
           "sub exceeds super by " + std::to_string(-pr.min_gap));
    (void)concave_only_sub;
    pairs.push_back(std::move(pr));
  }
  return pairs;
}

}  // namespace

std::vector<SubSuperPair> build_pair_sublinear(const ProblemSpec& spec,
                                               const MeshPtr& mesh,
                                               const SolverOptions& opts) {
  const KSelection ksel = select_k_sublinear(spec, mesh, opts);
  LambdaSelection lsel = select_lambda_supersolution(spec, mesh, opts);

  // enlarge lambda until -Delta_Phi(mu eta) <= lambda nodewise, so discrete
  // comparison orders mu eta below z_lambda; sublinearity keeps the
  // supersolution inequality intact as lambda grows
  double lhs_max = 0.0;
  for (int i = 0; i < spec.n_equations; ++i)
    lhs_max = std::max(
        lhs_max, apply_philap(spec.eq(i).op, ksel.subs[static_cast<size_t>(i)],
                              opts.epsilon_reg)
                     .max_interior());
  int guard = 0;
  while (lsel.lambda < lhs_max) {
    if (++guard > 60)
      fail(ErrorCode::LambdaSearchFailure, "ordering enlargement diverged");
    const double next = lsel.lambda * 2.0;
    ProblemSpec s = spec;
    LambdaSelection enlarged;
    enlarged.lambda = next;
    for (int i = 0; i < spec.n_equations; ++i)
      enlarged.supers.push_back(torsion(spec.eq(i).op, mesh, next, opts).solution);
    enlarged.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n_equations; ++i) {
      const int j = spec.n_equations == 1 ? 0 : 1 - i;
      const GridFunction rhs =
          frozen_rhs(s, i, enlarged.supers[static_cast<size_t>(i)],
                     enlarged.supers[static_cast<size_t>(j)]);
      GridFunction lam_fn(mesh, next);
      enlarged.min_margin = std::min(enlarged.min_margin, min_interior(lam_fn, rhs));
    }
    if (enlarged.min_margin < -kCertTol)
      fail(ErrorCode::LambdaSearchFailure,
           "supersolution inequality lost while enlarging lambda");
    lsel = std::move(enlarged);
  }

  return certify_pairs(spec, mesh, opts, ksel, lsel.supers, lsel.lambda,
                       false);
}

ThresholdReport thresholds_concave_convex(const ProblemSpec& spec,
                                          const MeshPtr& mesh,
                                          ThresholdMode mode,
                                          const SolverOptions& opts) {
  spec.validate();
  require_sublinear(spec);

  ThresholdReport rep;
  rep.mode = mode;

  // growth exponent of the driver equation: for systems the RHS of equation i
  // is driven by component j = 1 - i, so the cross l/m enter
  const auto drv = [&](int i) { return spec.n_equations == 1 ? 0 : 1 - i; };

  rep.rho = 0.0;
  rep.tau = 0.0;
  for (int i = 0; i < spec.n_equations; ++i) {
    const EquationSpec& e = spec.eq(i);
    const double ld = spec.eq(drv(i)).op.l() - 1.0;
    const double md = spec.eq(drv(i)).op.m() - 1.0;
    rep.rho = std::max(rep.rho, (e.alpha + e.beta) / ld);
    rep.tau = std::max(rep.tau, (e.xi + e.gamma) / ld);
    if (mode == ThresholdMode::FixTheta && !(md < e.xi + e.gamma))
      fail(ErrorCode::HypothesisViolation,
           "fix_theta needs m - 1 < xi + gamma");
    // fix_lambda needs no growth floor on xi + gamma: tau <= 1 lands in the
    // unconstrained branch below
  }
  if (rep.tau <= rep.rho)
    fail(ErrorCode::DegenerateThreshold,
         "tau = " + std::to_string(rep.tau) +
             " <= rho = " + std::to_string(rep.rho));

  // measured torsion prefactors replacing the symbolic K: sup-norm and
  // Luxemburg-norm growth against the regime's homogeneity exponent
  const bool small_regime = mode == ThresholdMode::FixTheta;
  const std::vector<double> samples =
      small_regime ? std::vector<double>{1e-3, 1e-2, 1e-1, 1.0}
                   : std::vector<double>{1.0, 4.0, 16.0, 64.0};
  std::vector<double> Kpt(static_cast<size_t>(spec.n_equations), 0.0);
  std::vector<double> Kpsi(static_cast<size_t>(spec.n_equations), 0.0);
  std::vector<double> Klam(static_cast<size_t>(spec.n_equations), 0.0);
  for (int i = 0; i < spec.n_equations; ++i) {
    const EquationSpec& e = spec.eq(i);
    const double ex =
        1.0 / ((small_regime ? e.op.m() : e.op.l()) - 1.0);
    for (double lam : samples) {
      const GridFunction z = torsion(e.op, mesh, lam, opts).solution;
      const double scale = std::pow(lam, ex);
      Kpt[static_cast<size_t>(i)] = std::max(Kpt[static_cast<size_t>(i)],
                                             z.max_abs() / scale);
      Kpsi[static_cast<size_t>(i)] =
          std::max(Kpsi[static_cast<size_t>(i)],
                   luxemburg_norm(z, e.norm_psi).norm / scale);
      Klam[static_cast<size_t>(i)] =
          std::max(Klam[static_cast<size_t>(i)],
                   luxemburg_norm(z, e.norm_lam).norm / scale);
    }
  }
  rep.K = 0.0;
  rep.kbar = 0.0;
  for (int i = 0; i < spec.n_equations; ++i) {
    const EquationSpec& e = spec.eq(i);
    const size_t d = static_cast<size_t>(drv(i));
    rep.K = std::max(rep.K, Kpt[d]);
    rep.kbar = std::max(rep.kbar, std::pow(Kpt[d], e.beta) *
                                      std::pow(Kpsi[d], e.alpha));
    rep.kbar = std::max(rep.kbar, std::pow(Kpt[d], e.xi) *
                                      std::pow(Klam[d], e.gamma));
  }

  const double rho = rep.rho, tau = rep.tau, kbar = rep.kbar;

  if (mode == ThresholdMode::FixLambda) {
    if (tau <= 1.0) {
      // decreasing-Psi regime: Psi(M) = lambda kbar M^{rho-1} + theta kbar
      // M^{tau-1} falls below 1 for M large enough, whatever theta is
      rep.theta_unconstrained = true;
      rep.theta0 = std::numeric_limits<double>::infinity();
      double M = 1.0;
      const auto psi = [&](double t) {
        return spec.lambda * kbar * std::pow(t, rho - 1.0) +
               spec.theta * kbar * std::pow(t, tau - 1.0);
      };
      while (psi(M) > 1.0 && M < 1e30) M *= 2.0;
      rep.M = M;
      rep.psi_at_M = psi(M);
      rep.L = 0.0;
      return rep;
    }
    if (!(spec.theta > 0.0))
      fail(ErrorCode::InvalidParams, "fix_lambda mode needs theta > 0");
    rep.L = std::pow((1.0 - rho) / (tau - 1.0), 1.0 / (tau - rho));
    rep.M = rep.L * std::pow(spec.lambda / spec.theta, 1.0 / (tau - rho));
    const auto psi_min = [&](double theta) {
      const double M =
          rep.L * std::pow(spec.lambda / theta, 1.0 / (tau - rho));
      return spec.lambda * kbar * std::pow(M, rho - 1.0) +
             theta * kbar * std::pow(M, tau - 1.0);
    };
    // Psi at its minimizer is increasing in theta; bracket and bisect
    double lo = spec.theta, hi = spec.theta;
    int moves = 0;
    while (psi_min(hi) < 1.0) {
      hi *= 2.0;
      if (++moves > 200)
        fail(ErrorCode::BracketFailure, "theta0 bracket diverged");
    }
    while (psi_min(lo) > 1.0) {
      lo *= 0.5;
      if (++moves > 400)
        fail(ErrorCode::BracketFailure, "theta0 bracket vanished");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (psi_min(mid) > 1.0 ? hi : lo) = mid;
    }
    rep.theta0 = lo;
    rep.psi_at_M = spec.lambda * kbar * std::pow(rep.M, rho - 1.0) +
                   spec.theta * kbar * std::pow(rep.M, tau - 1.0);
    return rep;
  }

  // fix_theta: the supersolution candidate is z_lambda itself; the measured
  // small-regime bound gives the admissibility function
  //   h(lambda) = kbar lambda^{(a+b)/(m-1)} + theta kbar lambda^{(x+g)/(m-1)-1}
  // which is increasing with h(0+) = 0; lambda0 is its unit level set
  const auto h = [&](double lam) {
    double v = 0.0;
    for (int i = 0; i < spec.n_equations; ++i) {
      const EquationSpec& e = spec.eq(i);
      const double md = spec.eq(drv(i)).op.m() - 1.0;
      v = std::max(v, kbar * std::pow(lam, (e.alpha + e.beta) / md) +
                          spec.theta * kbar *
                              std::pow(lam, (e.xi + e.gamma) / md - 1.0));
    }
    return v;
  };
  if (tau > 1.0)
    rep.L = std::pow((1.0 - rho) / (tau - 1.0), 1.0 / (tau - rho));
  rep.M = spec.lambda;
  double lo = spec.lambda, hi = spec.lambda;
  int moves = 0;
  while (h(hi) < 1.0) {
    hi *= 2.0;
    if (++moves > 200) fail(ErrorCode::BracketFailure, "lambda0 bracket diverged");
  }
  while (h(lo) > 1.0) {
    lo *= 0.5;
    if (++moves > 400) fail(ErrorCode::BracketFailure, "lambda0 bracket vanished");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 1.0 ? hi : lo) = mid;
  }
  rep.lambda0 = lo;
  rep.psi_at_M = h(spec.lambda);
  return rep;
}

std::vector<SubSuperPair> build_pair_concave_convex(const ProblemSpec& spec,
                                                    const MeshPtr& mesh,
                                                    ThresholdMode mode,
                                                    const SolverOptions& opts) {
  const ThresholdReport rep = thresholds_concave_convex(spec, mesh, mode, opts);

  // threshold admissibility: this is what makes lambda > lambda0 (or
  // theta > theta0) fail even when the measured margins would squeak by
  if (mode == ThresholdMode::FixTheta &&
      spec.lambda > rep.lambda0 * (1.0 + 1e-12))
    fail(ErrorCode::CertificationFailure,
         "lambda " + std::to_string(spec.lambda) + " above lambda0 " +
             std::to_string(rep.lambda0));
  if (mode == ThresholdMode::FixLambda && !rep.theta_unconstrained &&
      spec.theta > rep.theta0 * (1.0 + 1e-12))
    fail(ErrorCode::CertificationFailure,
         "theta " + std::to_string(spec.theta) + " above theta0 " +
             std::to_string(rep.theta0));

  const double level = mode == ThresholdMode::FixTheta
                           ? spec.lambda
                           : std::max(rep.M, 1.0);

  std::vector<GridFunction> supers;
  for (int i = 0; i < spec.n_equations; ++i)
    supers.push_back(torsion(spec.eq(i).op, mesh, level, opts).solution);

  // subsolution against the concave term only, with mu shrunk until the
  // operator output sits below min(1, level) so comparison gives ordering
  KSelection ksel = select_k_sublinear(spec, mesh, opts, /*concave_only=*/true);
  const double cap = std::min(1.0, level);
  for (int halvings = 0; halvings < 2000; ++halvings) {
    double lhs_max = 0.0;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n_equations; ++i) {
      const GridFunction lhs =
          apply_philap(spec.eq(i).op, ksel.subs[static_cast<size_t>(i)],
                       opts.epsilon_reg);
      lhs_max = std::max(lhs_max, lhs.max_interior());
      const GridFunction rhs = sub_rhs(spec, i, ksel.subs, true);
      margin = std::min(margin, min_interior(rhs, lhs));
    }
    if (lhs_max <= cap) {
      if (margin < -kCertTol)
        fail(ErrorCode::CertificationFailure,
             "subsolution inequality lost while shrinking mu (margin " +
                 std::to_string(margin) + ")");
      break;
    }
    ksel.params.mu *= 0.5;
    for (auto& sub : ksel.subs)
      for (double& v : sub.v) v *= 0.5;
  }

  return certify_pairs(spec, mesh, opts, ksel, supers, level, true);
}

}  // namespace phisolve
