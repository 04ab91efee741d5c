#include "phisolve/philap.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <vector>

namespace phisolve {

namespace {

// Flux divergence at interior nodes, identity on the boundary.
GridFunction apply_with_eps(const NFunction& nf, const GridFunction& u,
                            double eps) {
  const Mesh& m = *u.mesh;
  const FaceGradients fg = staggered_gradient(u);
  GridFunction r(u.mesh);
  if (m.dim() == 1) {
    std::vector<double> F(fg.gx.size());
    for (size_t f = 0; f < F.size(); ++f) F[f] = nf.flux(fg.gx[f], eps);
    for (int i = 1; i + 1 < m.nx(); ++i)
      r[i] = -(F[static_cast<size_t>(i)] - F[static_cast<size_t>(i - 1)]) /
             m.hx();
    r[0] = u[0];
    r[m.nx() - 1] = u[m.nx() - 1];
    return r;
  }
  std::vector<double> Fx(fg.gx.size()), Fy(fg.gy.size());
  for (size_t f = 0; f < Fx.size(); ++f) Fx[f] = nf.flux(fg.gx[f], eps);
  for (size_t f = 0; f < Fy.size(); ++f) Fy[f] = nf.flux(fg.gy[f], eps);
  for (int idx = 0; idx < r.size(); ++idx) {
    if (m.is_boundary(idx)) {
      r[idx] = u[idx];
      continue;
    }
    const int i = idx % m.nx(), j = idx / m.nx();
    const double dx = (Fx[static_cast<size_t>(i + (m.nx() - 1) * j)] -
                       Fx[static_cast<size_t>(i - 1 + (m.nx() - 1) * j)]) /
                      m.hx();
    const double dy = (Fy[static_cast<size_t>(i + m.nx() * j)] -
                       Fy[static_cast<size_t>(i + m.nx() * (j - 1))]) /
                      m.hy();
    r[idx] = -(dx + dy);
  }
  return r;
}

struct InteriorMap {
  std::vector<int> to_global;   // unknown -> node index
  std::vector<int> to_unknown;  // node index -> unknown or -1

  explicit InteriorMap(const Mesh& m) : to_unknown(m.node_count(), -1) {
    for (int i = 0; i < m.node_count(); ++i)
      if (!m.is_boundary(i)) {
        to_unknown[static_cast<size_t>(i)] = static_cast<int>(to_global.size());
        to_global.push_back(i);
      }
  }
  int n() const { return static_cast<int>(to_global.size()); }
};

// Assemble the interior system with the given per-face weights. Weights come
// from flux_deriv (Newton Jacobian) or op_density (Picard / plain Laplacian).
Eigen::SparseMatrix<double> assemble(const Mesh& m, const InteriorMap& im,
                                     const std::vector<double>& wx,
                                     const std::vector<double>& wy) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(im.n()) * 5);
  const auto add = [&](int node, int neighbor, double w) {
    const int row = im.to_unknown[static_cast<size_t>(node)];
    trip.emplace_back(row, row, w);
    const int col = im.to_unknown[static_cast<size_t>(neighbor)];
    if (col >= 0) trip.emplace_back(row, col, -w);
  };
  if (m.dim() == 1) {
    const double ih2 = 1.0 / (m.hx() * m.hx());
    for (int i = 1; i + 1 < m.nx(); ++i) {
      add(i, i + 1, wx[static_cast<size_t>(i)] * ih2);
      add(i, i - 1, wx[static_cast<size_t>(i - 1)] * ih2);
    }
  } else {
    const double ihx2 = 1.0 / (m.hx() * m.hx());
    const double ihy2 = 1.0 / (m.hy() * m.hy());
    for (int j = 1; j + 1 < m.ny(); ++j)
      for (int i = 1; i + 1 < m.nx(); ++i) {
        const int idx = m.index(i, j);
        add(idx, m.index(i + 1, j),
            wx[static_cast<size_t>(i + (m.nx() - 1) * j)] * ihx2);
        add(idx, m.index(i - 1, j),
            wx[static_cast<size_t>(i - 1 + (m.nx() - 1) * j)] * ihx2);
        add(idx, m.index(i, j + 1),
            wy[static_cast<size_t>(i + m.nx() * j)] * ihy2);
        add(idx, m.index(i, j - 1),
            wy[static_cast<size_t>(i + m.nx() * (j - 1))] * ihy2);
      }
  }
  Eigen::SparseMatrix<double> A(im.n(), im.n());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

void face_weights(const NFunction& nf, const FaceGradients& fg, double eps,
                  bool jacobian, std::vector<double>& wx,
                  std::vector<double>& wy) {
  wx.resize(fg.gx.size());
  wy.resize(fg.gy.size());
  for (size_t f = 0; f < fg.gx.size(); ++f)
    wx[f] = jacobian ? nf.flux_deriv(fg.gx[f], eps)
                     : nf.op_density(std::sqrt(fg.gx[f] * fg.gx[f] + eps * eps));
  for (size_t f = 0; f < fg.gy.size(); ++f)
    wy[f] = jacobian ? nf.flux_deriv(fg.gy[f], eps)
                     : nf.op_density(std::sqrt(fg.gy[f] * fg.gy[f] + eps * eps));
}

// Roundoff floor of the flux-form residual: the exact discrete solution is
// generally not representable, so |residual| ~ eps_mach * ||A|| * ||u||.
// A stage may stop here when Newton can make no further progress.
double residual_floor(const Mesh& m, const std::vector<double>& wx,
                      const std::vector<double>& wy, double umax,
                      double rhsmax) {
  double rowmax = 0.0;
  if (m.dim() == 1) {
    const double ih2 = 1.0 / (m.hx() * m.hx());
    for (size_t f = 0; f + 1 < wx.size(); ++f)
      rowmax = std::max(rowmax, (wx[f] + wx[f + 1]) * ih2);
  } else {
    const double ihx2 = 1.0 / (m.hx() * m.hx());
    const double ihy2 = 1.0 / (m.hy() * m.hy());
    for (int j = 1; j + 1 < m.ny(); ++j)
      for (int i = 1; i + 1 < m.nx(); ++i) {
        const double row =
            (wx[static_cast<size_t>(i - 1 + (m.nx() - 1) * j)] +
             wx[static_cast<size_t>(i + (m.nx() - 1) * j)]) *
                ihx2 +
            (wy[static_cast<size_t>(i + m.nx() * (j - 1))] +
             wy[static_cast<size_t>(i + m.nx() * j)]) *
                ihy2;
        rowmax = std::max(rowmax, row);
      }
  }
  return 16.0 * 2.220446049250313e-16 * (rowmax * umax + rhsmax);
}

double residual_sup(const NFunction& nf, const GridFunction& u,
                    const GridFunction& rhs, double eps, GridFunction* out) {
  GridFunction r = apply_with_eps(nf, u, eps);
  double sup = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    if (u.mesh->is_boundary(i)) {
      r[i] = 0.0;
      continue;
    }
    r[i] -= rhs[i];
    sup = std::max(sup, std::fabs(r[i]));
  }
  if (out) *out = std::move(r);
  return sup;
}

}  // namespace

GridFunction apply_philap(const NFunction& nf, const GridFunction& u,
                          double eps) {
  return apply_with_eps(nf, u, eps);
}

SolveReport solve_dirichlet(const NFunction& nf, const GridFunction& rhs,
                            const SolverOptions& opts,
                            const GridFunction* initial_guess) {
  const MeshPtr mesh = rhs.mesh;
  const Mesh& m = *mesh;
  const InteriorMap im(m);

  SolveReport rep;
  rep.solution = GridFunction(mesh);
  std::vector<double> wx, wy;

  const auto solve_linear = [&](const Eigen::SparseMatrix<double>& A,
                                const Eigen::VectorXd& b) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success)
      fail(ErrorCode::NewtonDivergence, "linear factorization failed");
    Eigen::VectorXd x = ldlt.solve(b);
    ++rep.iterations;
    return x;
  };

  // initial guess: the plain Laplacian solve (unit face weights); exact for
  // the p = 2 density, a sane starting scale otherwise
  if (initial_guess) {
    rep.solution = *initial_guess;
    for (int i = 0; i < rep.solution.size(); ++i)
      if (m.is_boundary(i)) rep.solution[i] = 0.0;
  } else {
    const FaceGradients fg = staggered_gradient(rep.solution);
    wx.assign(fg.gx.size(), 1.0);
    wy.assign(fg.gy.size(), 1.0);
    Eigen::VectorXd b(im.n());
    for (int k = 0; k < im.n(); ++k)
      b[k] = rhs[im.to_global[static_cast<size_t>(k)]];
    const Eigen::VectorXd x = solve_linear(assemble(m, im, wx, wy), b);
    for (int k = 0; k < im.n(); ++k)
      rep.solution[im.to_global[static_cast<size_t>(k)]] = x[k];
  }

  // epsilon continuation: walk the regularization down to epsilon_reg so
  // degenerate densities (p > 2) stay inside Newton's basin
  std::vector<double> stages;
  for (double e = 1e-3; e > opts.epsilon_reg * 1.0001 && e > 1e-300; e *= 0.1)
    stages.push_back(e);
  stages.push_back(opts.epsilon_reg);

  for (size_t s = 0; s < stages.size(); ++s) {
    const double eps = stages[s];
    const bool last = s + 1 == stages.size();
    const double target =
        last ? opts.newton_tol : std::max(opts.newton_tol, 1e-8);

    GridFunction res;
    double sup = residual_sup(nf, rep.solution, rhs, eps, &res);
    rep.residual_history.push_back(sup);
    double rhsmax = 0.0;
    for (int k = 0; k < im.n(); ++k)
      rhsmax =
          std::max(rhsmax, std::fabs(rhs[im.to_global[static_cast<size_t>(k)]]));
    const auto at_floor = [&]() {
      const FaceGradients fg = staggered_gradient(rep.solution);
      face_weights(nf, fg, eps, true, wx, wy);
      return sup <=
             residual_floor(m, wx, wy, rep.solution.max_abs(), rhsmax);
    };
    int newton = 0;
    bool stalled = false;
    while (sup > target) {
      if (++newton > opts.max_newton) {
        stalled = true;
        break;
      }
      const FaceGradients fg = staggered_gradient(rep.solution);
      face_weights(nf, fg, eps, true, wx, wy);
      Eigen::VectorXd b(im.n());
      for (int k = 0; k < im.n(); ++k)
        b[k] = -res[im.to_global[static_cast<size_t>(k)]];
      const Eigen::VectorXd delta = solve_linear(assemble(m, im, wx, wy), b);

      double step = 1.0;
      bool accepted = false;
      for (int bt = 0; bt <= opts.max_backtrack; ++bt) {
        GridFunction trial = rep.solution;
        for (int k = 0; k < im.n(); ++k)
          trial[im.to_global[static_cast<size_t>(k)]] += step * delta[k];
        GridFunction tres;
        const double tsup = residual_sup(nf, trial, rhs, eps, &tres);
        if (tsup < sup) {
          rep.solution = std::move(trial);
          res = std::move(tres);
          sup = tsup;
          accepted = true;
          break;
        }
        step *= opts.backtrack;
      }
      rep.residual_history.push_back(sup);
      if (!accepted) {
        stalled = true;
        break;
      }
    }

    if (stalled && at_floor()) stalled = false;

    if (stalled && opts.picard_fallback) {
      // frozen-coefficient iteration: globally convergent for monotone
      // densities, if slowly
      for (int p = 0; p < 4 * opts.max_newton && sup > target; ++p) {
        const FaceGradients fg = staggered_gradient(rep.solution);
        face_weights(nf, fg, eps, false, wx, wy);
        Eigen::VectorXd b(im.n());
        for (int k = 0; k < im.n(); ++k)
          b[k] = rhs[im.to_global[static_cast<size_t>(k)]];
        const Eigen::VectorXd x = solve_linear(assemble(m, im, wx, wy), b);
        for (int k = 0; k < im.n(); ++k) {
          const int g = im.to_global[static_cast<size_t>(k)];
          rep.solution[g] = 0.5 * (rep.solution[g] + x[k]);  // damped
        }
        sup = residual_sup(nf, rep.solution, rhs, eps, &res);
        rep.residual_history.push_back(sup);
      }
      rep.used_fallback = true;
      stalled = sup > target && !at_floor();
    }
    if (stalled)
      fail(ErrorCode::NewtonDivergence,
           "residual " + std::to_string(sup) + " stuck above " +
               std::to_string(target) + " at eps=" + std::to_string(eps));
  }

  rep.residual_sup =
      residual_sup(nf, rep.solution, rhs, opts.epsilon_reg, nullptr);
  return rep;
}

SolveReport torsion(const NFunction& nf, const MeshPtr& mesh, double lambda,
                    const SolverOptions& opts) {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "torsion wants lambda > 0");
  GridFunction rhs(mesh, lambda);
  for (int i = 0; i < rhs.size(); ++i)
    if (mesh->is_boundary(i)) rhs[i] = 0.0;
  return solve_dirichlet(nf, rhs, opts);
}

ComparisonResult check_comparison(const NFunction& nf, const GridFunction& u,
                                  const GridFunction& v, double tol) {
  const GridFunction Lu = apply_philap(nf, u);
  const GridFunction Lv = apply_philap(nf, v);
  for (int i = 0; i < u.size(); ++i) {
    if (u.mesh->is_boundary(i)) {
      if (u[i] > v[i] + tol)
        fail(ErrorCode::PreconditionUnmet,
             "boundary ordering fails at node " + std::to_string(i));
    } else if (Lu[i] > Lv[i] + tol) {
      fail(ErrorCode::PreconditionUnmet,
           "operator ordering fails at node " + std::to_string(i));
    }
  }
  ComparisonResult cr;
  cr.ordered = true;
  for (int i = 0; i < u.size(); ++i) {
    const double viol = u[i] - v[i];
    if (viol > cr.worst_violation) {
      cr.worst_violation = viol;
      cr.worst_node = i;
    }
  }
  if (cr.worst_violation > tol) cr.ordered = false;
  return cr;
}

}  // namespace phisolve
