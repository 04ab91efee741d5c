#include "phisolve/nfunction.hpp"

#include <cmath>
#include <sstream>

namespace phisolve {

namespace {

bool finite(double x) { return std::isfinite(x); }

// Raw family densities (the phi of Phi(t) = int phi(s) s ds).
double raw_phi(Family fam, double a, double b,
               const std::function<double(double)>& custom, double t) {
  switch (fam) {
    case Family::PowerLaw:
      return a * std::pow(t, a - 2.0);
    case Family::PowerSum:
      return a * std::pow(t, a - 2.0) + b * std::pow(t, b - 2.0);
    case Family::Elasticity:
      return 2.0 * a * std::pow(1.0 + t * t, a - 1.0);
    case Family::MinimalSurface: {
      const double s = std::sqrt(1.0 + t * t);
      const double w = t * t / (s + 1.0);  // sqrt(1+t^2) - 1 without cancellation
      return a * std::pow(w, a - 1.0) / s;
    }
    case Family::Plasticity:
      return a * std::pow(t, a - 2.0) * std::log1p(t) +
             std::pow(t, a - 1.0) / (1.0 + t);
    case Family::Custom:
      return custom(t);
  }
  return 0.0;
}

double raw_Phi(Family fam, double a, double b, double t) {
  t = std::fabs(t);
  switch (fam) {
    case Family::PowerLaw:
      return std::pow(t, a);
    case Family::PowerSum:
      return std::pow(t, a) + std::pow(t, b);
    case Family::Elasticity:
      // expm1/log1p form avoids the cancellation of pow(1+t^2, a) - 1 at
      // small t, where the naive difference loses most of its digits
      return std::expm1(a * std::log1p(t * t));
    case Family::MinimalSurface:
      // sqrt(1+t^2) - 1 = t^2 / (sqrt(1+t^2) + 1), stable for small t
      return std::pow(t * t / (std::sqrt(1.0 + t * t) + 1.0), a);
    case Family::Plasticity:
      return std::pow(t, a) * std::log1p(t);
    default:
      return 0.0;
  }
}

// d/dt of the raw density; used for op_density_deriv of non-PowerLaw families.
double raw_phi_deriv(Family fam, double a, double b, double t) {
  switch (fam) {
    case Family::PowerSum:
      return a * (a - 2.0) * std::pow(t, a - 3.0) +
             b * (b - 2.0) * std::pow(t, b - 3.0);
    case Family::Elasticity:
      return 4.0 * a * (a - 1.0) * t * std::pow(1.0 + t * t, a - 2.0);
    case Family::MinimalSurface: {
      const double s = std::sqrt(1.0 + t * t);
      const double w = t * t / (s + 1.0);
      return a * t *
             ((a - 1.0) * std::pow(w, a - 2.0) / (s * s) -
              std::pow(w, a - 1.0) / (s * s * s));
    }
    case Family::Plasticity: {
      const double one = 1.0 + t;
      return a * (a - 2.0) * std::pow(t, a - 3.0) * std::log1p(t) +
             a * std::pow(t, a - 2.0) / one +
             ((a - 1.0) * std::pow(t, a - 2.0) * one - std::pow(t, a - 1.0)) /
                 (one * one);
    }
    default:
      return 0.0;
  }
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::PowerLaw: return "power_law";
    case Family::PowerSum: return "power_sum";
    case Family::Elasticity: return "elasticity";
    case Family::MinimalSurface: return "minimal_surface";
    case Family::Plasticity: return "plasticity";
    case Family::Custom: return "custom";
  }
  return "?";
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, double abs_tol) {
  struct Ctx {
    const std::function<double(double)>& f;
    double tol_floor;
    long budget = 1 << 22;

    double simpson(double x0, double x2, double f0, double f1, double f2) {
      return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2);
    }
    double recurse(double x0, double x2, double f0, double f1, double f2,
                   double whole, double tol, int depth) {
      if (--budget < 0)
        fail(ErrorCode::QuadratureFailure, "refinement budget exhausted");
      const double xm = 0.5 * (x0 + x2);
      const double xl = 0.5 * (x0 + xm), xr = 0.5 * (xm + x2);
      const double fl = f(xl), fr = f(xr);
      const double left = simpson(x0, xm, f0, fl, f1);
      const double right = simpson(xm, x2, f1, fr, f2);
      const double err = left + right - whole;
      if (depth > 60)
        fail(ErrorCode::QuadratureFailure, "maximum recursion depth");
      if (std::fabs(err) <= 15.0 * std::max(tol, tol_floor))
        return left + right + err / 15.0;
      return recurse(x0, xm, f0, fl, f1, left, 0.5 * tol, depth + 1) +
             recurse(xm, x2, f1, fr, f2, right, 0.5 * tol, depth + 1);
    }
  };
  if (a == b) return 0.0;
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  Ctx ctx{f, abs_tol};
  const double whole = ctx.simpson(a, b, fa, fm, fb);
  const double tol = std::max(std::fabs(whole) * rel_tol, abs_tol);
  return ctx.recurse(a, b, fa, fm, fb, whole, tol, 0);
}

NFunction NFunction::power_law(double p) {
  if (!(p > 1.0))
    fail(ErrorCode::InvalidArgument, "power_law requires p > 1");
  NFunction nf;
  nf.family_ = Family::PowerLaw;
  nf.a_ = p;
  nf.l_ = nf.m_ = p;
  nf.validate(false);
  return nf;
}

NFunction NFunction::power_sum(double p, double q) {
  if (!(p > 1.0) || !(q >= p))
    fail(ErrorCode::InvalidArgument, "power_sum requires 1 < p <= q");
  NFunction nf;
  nf.family_ = Family::PowerSum;
  nf.a_ = p;
  nf.b_ = q;
  nf.l_ = p;
  nf.m_ = q;
  nf.validate(false);
  return nf;
}

NFunction NFunction::elasticity(double gamma_e) {
  if (!(gamma_e >= 1.0))
    fail(ErrorCode::InvalidArgument, "elasticity requires gamma >= 1");
  NFunction nf;
  nf.family_ = Family::Elasticity;
  nf.a_ = gamma_e;
  nf.l_ = 2.0;
  nf.m_ = 2.0 * gamma_e;
  nf.validate(false);
  return nf;
}

NFunction NFunction::minimal_surface(double gamma_e) {
  if (!(gamma_e >= 1.0))
    fail(ErrorCode::InvalidArgument, "minimal_surface requires gamma >= 1");
  NFunction nf;
  nf.family_ = Family::MinimalSurface;
  nf.a_ = gamma_e;
  nf.l_ = gamma_e;  // conservative; gamma_e = 1 degenerates to l = 1
  nf.m_ = 2.0 * gamma_e;
  nf.validate(false);
  return nf;
}

NFunction NFunction::plasticity(double p) {
  if (!(p > 1.0))
    fail(ErrorCode::InvalidArgument, "plasticity requires p > 1");
  NFunction nf;
  nf.family_ = Family::Plasticity;
  nf.a_ = p;
  nf.l_ = p;
  nf.m_ = p + 1.0;
  nf.validate(false);
  return nf;
}

NFunction NFunction::custom(std::function<double(double)> phi, double l,
                            double m, std::function<double(double)> Phi) {
  if (!phi) fail(ErrorCode::InvalidArgument, "custom density is empty");
  if (!(l > 1.0) || !(m >= l))
    fail(ErrorCode::InvalidArgument, "custom requires 1 < l <= m");
  NFunction nf;
  nf.family_ = Family::Custom;
  nf.l_ = l;
  nf.m_ = m;
  nf.custom_phi_ = std::move(phi);
  nf.custom_Phi_ = std::move(Phi);
  nf.validate(true);
  return nf;
}

double NFunction::phi(double t) const {
  if (t < 0.0) fail(ErrorCode::InvalidArgument, "phi wants t >= 0");
  const double v = raw_phi(family_, a_, b_, custom_phi_, t);
  if (!finite(v))
    fail(ErrorCode::NonFiniteValue,
         "density not finite at t=" + std::to_string(t));
  return v;
}

double NFunction::Phi(double t) const {
  t = std::fabs(t);
  if (t == 0.0) return 0.0;
  if (family_ != Family::Custom) return raw_Phi(family_, a_, b_, t);
  if (custom_Phi_) return custom_Phi_(t);
  const auto& phi_fn = custom_phi_;
  return adaptive_simpson([&phi_fn](double s) { return phi_fn(s) * s; }, 0.0,
                          t);
}

std::pair<double, double> NFunction::zeta_bounds(double t) const {
  if (t < 0.0) fail(ErrorCode::InvalidArgument, "zeta_bounds wants t >= 0");
  const double tl = std::pow(t, l_), tm = std::pow(t, m_);
  return {std::min(tl, tm), std::max(tl, tm)};
}

double NFunction::exponent_ratio(double t) const {
  if (!(t > 0.0)) fail(ErrorCode::InvalidArgument, "exponent_ratio wants t > 0");
  const double p = phi(t);
  const double P = Phi(t);
  const double r = p * t * t / P;
  if (!finite(r))
    fail(ErrorCode::NonFiniteValue,
         "ratio not finite at t=" + std::to_string(t));
  return r;
}

double NFunction::op_density(double t) const {
  // PowerLaw carries the conventional p-Laplacian density; the constant
  // factor p of the N-function density would rescale the torsion benchmarks.
  if (family_ == Family::PowerLaw) return std::pow(t, a_ - 2.0);
  return raw_phi(family_, a_, b_, custom_phi_, t);
}

double NFunction::op_density_deriv(double t) const {
  if (family_ == Family::PowerLaw)
    return (a_ - 2.0) * std::pow(t, a_ - 3.0);
  if (family_ == Family::Custom) {
    // central difference with a relative step; custom densities have no
    // closed-form derivative
    const double h = std::max(t, 1.0) * 1e-7;
    const double lo = std::max(t - h, 0.0);
    return (custom_phi_(t + h) - custom_phi_(lo)) / (t + h - lo);
  }
  return raw_phi_deriv(family_, a_, b_, t);
}

double NFunction::flux(double g, double eps) const {
  const double r = std::sqrt(g * g + eps * eps);
  return op_density(r) * g;
}

double NFunction::flux_deriv(double g, double eps) const {
  const double r = std::sqrt(g * g + eps * eps);
  const double d = op_density(r) + op_density_deriv(r) * g * g / r;
  if (!finite(d) || d <= 0.0)
    fail(ErrorCode::NonFiniteValue, "flux derivative not positive");
  return d;
}

std::string NFunction::describe() const {
  std::ostringstream os;
  os << family_name(family_) << "(";
  switch (family_) {
    case Family::PowerLaw:
    case Family::Plasticity:
      os << "p=" << a_;
      break;
    case Family::PowerSum:
      os << "p=" << a_ << ", q=" << b_;
      break;
    case Family::Elasticity:
    case Family::MinimalSurface:
      os << "gamma=" << a_;
      break;
    case Family::Custom:
      os << "l=" << l_ << ", m=" << m_;
      break;
  }
  os << ")";
  return os.str();
}

void NFunction::validate(bool is_custom) const {
  // l <= phi(t) t^2 / Phi(t) <= m over twelve decades, the growth condition
  // behind every sandwich estimate downstream.
  const double slack = 1e-9;
  constexpr int kProbes = 49;
  double prev_tphi = 0.0;
  for (int i = 0; i < kProbes; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * i / (kProbes - 1.0));
    double r;
    try {
      r = exponent_ratio(t);
    } catch (const Error&) {
      if (is_custom) throw;
      continue;  // catalog families may under/overflow at extreme probes
    }
    if (r < l_ * (1.0 - slack) - slack || r > m_ * (1.0 + slack) + slack)
      fail(ErrorCode::ExponentDeclarationInvalid,
           describe() + ": ratio " + std::to_string(r) + " at t=" +
               std::to_string(t) + " escapes [" + std::to_string(l_) + ", " +
               std::to_string(m_) + "]");
    const double tphi = t * raw_phi(family_, a_, b_, custom_phi_, t);
    if (std::isfinite(tphi)) {
      if (tphi <= prev_tphi)
        fail(ErrorCode::ExponentDeclarationInvalid,
             describe() + ": t phi(t) not strictly increasing at t=" +
                 std::to_string(t));
      prev_tphi = tphi;
    }
  }
}

}  // namespace phisolve
