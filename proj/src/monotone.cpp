#include "phisolve/monotone.hpp"

#include <cmath>
#include <string>

namespace phisolve {

namespace {

struct Violation {
  int node = -1;
  double magnitude = 0.0;
};

// worst violation of a <= b + tol; node -1 when none
Violation worst_below(const GridFunction& a, const GridFunction& b,
                      double tol) {
  Violation v;
  for (int i = 0; i < a.size(); ++i) {
    const double excess = a[i] - b[i];
    if (excess > tol && excess > v.magnitude) {
      v.node = i;
      v.magnitude = excess;
    }
  }
  return v;
}

void check_step(const GridFunction& next, const GridFunction& prev,
                const SubSuperPair& pair, bool descending, int step) {
  constexpr double tol = 1e-8;
  if (Violation v = worst_below(pair.sub, next, tol); v.node >= 0)
    fail(ErrorCode::SandwichViolation,
         "iterate " + std::to_string(step) + " falls " +
             std::to_string(v.magnitude) + " below sub at node " +
             std::to_string(v.node));
  if (Violation v = worst_below(next, pair.super, tol); v.node >= 0)
    fail(ErrorCode::SandwichViolation,
         "iterate " + std::to_string(step) + " exceeds super by " +
             std::to_string(v.magnitude) + " at node " +
             std::to_string(v.node));
  const Violation v = descending ? worst_below(next, prev, tol)
                                 : worst_below(prev, next, tol);
  if (v.node >= 0)
    fail(ErrorCode::MonotonicityViolation,
         "step " + std::to_string(step) + " breaks monotonicity by " +
             std::to_string(v.magnitude) + " at node " +
             std::to_string(v.node));
}

bool should_store(int step, const IterationOptions& opts) {
  return opts.keep_all_iterates || step <= 64 || step % 8 == 0;
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
  return s;
}

}  // namespace

IterationTrace iterate_scalar(const ProblemSpec& spec, const SubSuperPair& pair,
                              const IterationOptions& opts) {
  spec.validate();
  IterationTrace tr;
  GridFunction prev = opts.descending ? pair.super : pair.sub;
  tr.stored_steps.push_back(0);
  tr.iterates.push_back(prev);

  for (int n = 1; n <= opts.max_steps; ++n) {
    double npsi = 0.0, nlam = 0.0;
    const GridFunction rhs = frozen_rhs(spec, 0, prev, prev, &npsi, &nlam);
    const GridFunction u =
        solve_dirichlet(spec.eq(0).op, rhs, opts.solver, &prev).solution;
    check_step(u, prev, pair, opts.descending, n);

    const double d = sup_diff(u, prev);
    tr.sup_diffs.push_back(d);
    tr.nonlocal_history.push_back({npsi, nlam});
    tr.steps = n;
    if (should_store(n, opts) || d < opts.tol) {
      if (!tr.stored_steps.empty() && tr.stored_steps.back() == n) {
      } else {
        tr.stored_steps.push_back(n);
        tr.iterates.push_back(u);
      }
    }
    prev = u;
    if (d < opts.tol) {
      tr.converged = true;
      break;
    }
  }
  if (!tr.converged)
    fail(ErrorCode::MaxStepsExceeded,
         "no convergence in " + std::to_string(opts.max_steps) + " steps");
  tr.final_residual = weak_residual(spec, 0, {prev}, opts.solver.epsilon_reg);
  return tr;
}

std::pair<IterationTrace, IterationTrace> iterate_system(
    const ProblemSpec& spec, const std::vector<SubSuperPair>& pairs,
    const IterationOptions& opts) {
  spec.validate();
  if (spec.n_equations != 2 || pairs.size() != 2)
    fail(ErrorCode::InvalidParams, "iterate_system wants two equations");

  std::array<IterationTrace, 2> tr;
  std::array<GridFunction, 2> prev;
  for (int i = 0; i < 2; ++i) {
    prev[static_cast<size_t>(i)] = opts.descending
                                       ? pairs[static_cast<size_t>(i)].super
                                       : pairs[static_cast<size_t>(i)].sub;
    tr[static_cast<size_t>(i)].stored_steps.push_back(0);
    tr[static_cast<size_t>(i)].iterates.push_back(prev[static_cast<size_t>(i)]);
  }

  bool converged = false;
  for (int n = 1; n <= opts.max_steps && !converged; ++n) {
    std::array<GridFunction, 2> next;
    std::array<double, 2> diffs{};
    for (int i = 0; i < 2; ++i) {
      double npsi = 0.0, nlam = 0.0;
      const GridFunction rhs = frozen_rhs(spec, i, prev[static_cast<size_t>(i)],
                                          prev[static_cast<size_t>(1 - i)],
                                          &npsi, &nlam);
      next[static_cast<size_t>(i)] =
          solve_dirichlet(spec.eq(i).op, rhs, opts.solver,
                          &prev[static_cast<size_t>(i)])
              .solution;
      check_step(next[static_cast<size_t>(i)], prev[static_cast<size_t>(i)],
                 pairs[static_cast<size_t>(i)], opts.descending, n);
      diffs[static_cast<size_t>(i)] =
          sup_diff(next[static_cast<size_t>(i)], prev[static_cast<size_t>(i)]);
      tr[static_cast<size_t>(i)].sup_diffs.push_back(
          diffs[static_cast<size_t>(i)]);
      tr[static_cast<size_t>(i)].nonlocal_history.push_back({npsi, nlam});
      tr[static_cast<size_t>(i)].steps = n;
    }
    converged = diffs[0] < opts.tol && diffs[1] < opts.tol;
    for (int i = 0; i < 2; ++i) {
      if (should_store(n, opts) || converged) {
        tr[static_cast<size_t>(i)].stored_steps.push_back(n);
        tr[static_cast<size_t>(i)].iterates.push_back(
            next[static_cast<size_t>(i)]);
      }
      prev[static_cast<size_t>(i)] = std::move(next[static_cast<size_t>(i)]);
    }
  }
  if (!converged)
    fail(ErrorCode::MaxStepsExceeded,
         "no convergence in " + std::to_string(opts.max_steps) + " steps");
  const std::vector<GridFunction> comps{prev[0], prev[1]};
  for (int i = 0; i < 2; ++i) {
    tr[static_cast<size_t>(i)].converged = true;
    tr[static_cast<size_t>(i)].final_residual =
        weak_residual(spec, i, comps, opts.solver.epsilon_reg);
  }
  return {tr[0], tr[1]};
}

double weak_residual(const ProblemSpec& spec, int eq_index,
                     const std::vector<GridFunction>& components,
                     double eps) {
  const GridFunction& u = components[static_cast<size_t>(eq_index)];
  const GridFunction& other =
      spec.n_equations == 1
          ? u
          : components[static_cast<size_t>(1 - eq_index)];
  const GridFunction lhs = apply_philap(spec.eq(eq_index).op, u, eps);
  const GridFunction rhs = frozen_rhs(spec, eq_index, u, other);
  double sup = 0.0;
  for (int i = 0; i < u.size(); ++i)
    if (!u.mesh->is_boundary(i))
      sup = std::max(sup, std::fabs(lhs[i] - rhs[i]));
  return sup;
}

}  // namespace phisolve
