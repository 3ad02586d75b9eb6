#include "hsalpha/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hsalpha::reference {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kCosEnd = 4.0 + 2.0 * kPi2;
constexpr double kBreakStart = 2.0 / kPi;

template <class Fn>
double bisect(Fn f, double target, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (target < flo || target > fhi) {
    throw std::domain_error("bisection: target " + std::to_string(target) + " outside bracket");
  }
  if (target == flo) return lo;
  if (target == fhi) return hi;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == target) return mid;
    if (fm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double cusp_lhs_s(double s) { return s * s * s + (4.0 / 3.0) * (1.0 + s); }

double cosine_lhs(double y) {
  return 0.5 * (2.0 + kPi2) * y - 0.25 * kPi * std::sin(2.0 * kPi * y);
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

// asin(2 / (pi t)), clamped at t = 2/pi.
double break_angle(double t) { return std::asin(clamp_unit(kBreakStart / t)); }

// Branch index: number of breakpoints left of x; at x on a breakpoint the
// left-continuous choice counts it only for right limits.
int branch(const std::vector<double>& bp, double x, bool right) {
  int k = 0;
  for (double b : bp) {
    if (right ? b <= x : b < x) ++k;
  }
  return k;
}

double cosine_V0(double Y) { return 0.25 * kPi * (2.0 * kPi * Y - std::sin(2.0 * kPi * Y)); }

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::multipeakon:
      return "multipeakon";
    case Kind::cusp:
      return "cusp";
    case Kind::cosine:
      return "cosine";
  }
  return "?";
}

ExactSolutionSpec ExactSolutionSpec::multipeakon(double alpha, double beta) {
  if (!(beta > 0.0)) throw std::domain_error("multipeakon: beta must be positive");
  return {Kind::multipeakon, alpha, beta, {0.0, kInf}};
}

ExactSolutionSpec ExactSolutionSpec::cusp(double alpha) {
  return {Kind::cusp, alpha, 0.0, {0.0, 3.0}};
}

ExactSolutionSpec ExactSolutionSpec::cosine(double alpha) {
  return {Kind::cosine, alpha, 0.0, {0.0, kInf}};
}

void ExactSolutionSpec::check_time(double t) const {
  if (!(t >= valid_time.lo && t <= valid_time.hi)) {
    throw std::domain_error(std::string(kind_name(kind)) + ": time " + std::to_string(t) +
                            " outside the range of the closed form");
  }
}

double ExactSolutionSpec::total_energy(double t) const {
  check_time(t);
  switch (kind) {
    case Kind::multipeakon:
      return t < 2.0 ? 2.0 + beta : 2.0 + beta - alpha;
    case Kind::cusp:
      return cusp_total_energy(alpha, t);
    case Kind::cosine:
      return cosine_total_energy(alpha, t);
  }
  return 0.0;
}

std::vector<double> ExactSolutionSpec::breaking_instants() const {
  switch (kind) {
    case Kind::multipeakon:
      return {2.0};
    case Kind::cusp:
      return {};
    case Kind::cosine:
      return {kBreakStart};
  }
  return {};
}

Window ExactSolutionSpec::support() const {
  switch (kind) {
    case Kind::multipeakon:
      return {0.0, 2.0};
    case Kind::cusp:
      return {-1.0, 1.0};
    case Kind::cosine:
      return {0.0, 4.0};
  }
  return {};
}

double ImplicitYSolver::solve(double xi) const {
  if (equation == Equation::cusp) {
    const double s = bisect(cusp_lhs_s, xi, -1.0, 1.0, tol);
    return s * s * s;
  }
  return bisect(cosine_lhs, xi, 0.0, 4.0, tol);
}

double ImplicitYSolver::residual(double ybar, double xi) const {
  if (equation == Equation::cusp) return ybar + (4.0 / 3.0) * (1.0 + std::cbrt(ybar)) - xi;
  return cosine_lhs(ybar) - xi;
}

// ---------------------------------------------------------------- multipeakon

EulerianTriple multipeakon_initial(double alpha, double beta) {
  PiecewiseLinearFn u({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  return EulerianTriple::from_profile(std::move(u), {{0.0, beta}}, alpha);
}

EulerianTriple multipeakon_initial_split(double alpha) {
  PiecewiseLinearFn u({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  PiecewiseLinearFn ac({0.0, 2.0}, {0.0, 2.0});
  EulerianTriple s;
  s.u = std::move(u);
  s.F = MonotoneCDF(ac, {{0.0, 1.0 - alpha}});
  s.G = MonotoneCDF(ac, {{0.0, 1.0}});
  s.support = {0.0, 2.0};
  s.alpha = alpha;
  return s;
}

std::vector<double> multipeakon_breakpoints(double alpha, double beta, double t) {
  const double a = alpha, b = beta, t2 = t * t;
  if (t < 2.0) {
    return {-(2.0 + b) * t2 / 8.0, -(2.0 - b) * t2 / 8.0, 1.0 + t + b * t2 / 8.0,
            2.0 + (2.0 + b) * t2 / 8.0};
  }
  return {0.5 * a - 0.5 * a * t - (2.0 + b - a) * t2 / 8.0,
          0.5 * a - 0.5 * a * t - (2.0 - b - a) * t2 / 8.0,
          0.5 * (2.0 + a) + 0.5 * (2.0 - a) * t + (b + a) * t2 / 8.0,
          0.5 * (4.0 - a) + 0.5 * a * t + (2.0 + b - a) * t2 / 8.0};
}

namespace {

double multipeakon_u(double a, double b, double t, int k, double x) {
  if (t < 2.0) {
    switch (k) {
      case 0:
        return -0.25 * (2.0 + b) * t;
      case 1:
        return 2.0 * x / t;
      case 2:
        return (4.0 * x - (2.0 - b) * t) / (2.0 * (t + 2.0));
      case 3:
        return (4.0 * x - 8.0 - (2.0 + b) * t) / (2.0 * (t - 2.0));
      default:
        return 0.25 * (2.0 + b) * t;
    }
  }
  switch (k) {
    case 0:
      return -0.5 * a - 0.25 * (2.0 + b - a) * t;
    case 1:
      return (4.0 * x - 2.0 * a + a * t) / (2.0 * t);
    case 2:
      return (4.0 * x - 4.0 * a - (2.0 - b - 2.0 * a) * t) / (2.0 * (t + 2.0));
    case 3:
      return (4.0 * x - 8.0 - (2.0 + b) * t) / (2.0 * (t - 2.0));
    default:
      return 0.5 * a + 0.25 * (2.0 + b - a) * t;
  }
}

double multipeakon_F(double a, double b, double t, int k, double x) {
  const double t2 = t * t;
  if (t < 2.0) {
    switch (k) {
      case 0:
        return 0.0;
      case 1:
        return (8.0 * x + (2.0 + b) * t2) / (2.0 * t2);
      case 2:
        return (8.0 * x + 8.0 * b + 8.0 * b * t + (2.0 + b) * t2) / (2.0 * (t + 2.0) * (t + 2.0));
      case 3:
        return (8.0 * x + 8.0 * b - 8.0 * (2.0 + b) * t + (2.0 + b) * t2) /
               (2.0 * (t - 2.0) * (t - 2.0));
      default:
        return 2.0 + b;
    }
  }
  const double c = 2.0 + b - a;
  switch (k) {
    case 0:
      return 0.0;
    case 1:
      return (8.0 * x - 4.0 * a + 4.0 * a * t + c * t2) / (2.0 * t2);
    case 2:
      return (8.0 * x + 4.0 * (2.0 * b - a) + 4.0 * (2.0 * b + a) * t + c * t2) /
             (2.0 * (t + 2.0) * (t + 2.0));
    case 3:
      return (8.0 * x + 4.0 * (2.0 * b - a) - 4.0 * (4.0 + 2.0 * b - a) * t + c * t2) /
             (2.0 * (t - 2.0) * (t - 2.0));
    default:
      return c;
  }
}

}  // namespace

EulerianValue multipeakon_eulerian(double alpha, double beta, double t, double x) {
  if (!(t >= 0.0)) throw std::domain_error("multipeakon: t must be >= 0");
  const auto bp = multipeakon_breakpoints(alpha, beta, t);
  EulerianValue v;
  v.u = multipeakon_u(alpha, beta, t, branch(bp, x, false), x);
  v.F_left = multipeakon_F(alpha, beta, t, branch(bp, x, false), x);
  v.F_right = multipeakon_F(alpha, beta, t, branch(bp, x, true), x);
  return v;
}

LagrangianValue multipeakon_lagrangian(double alpha, double beta, double t, double xi) {
  if (!(t >= 0.0)) throw std::domain_error("multipeakon: t must be >= 0");
  const double a = alpha, b = beta, t2 = t * t;
  LagrangianValue v;
  if (xi <= 0.0) {
    v.H = 0.0;
  } else if (xi <= b) {
    v.H = xi;
  } else if (xi <= 4.0 + b) {
    v.H = 0.5 * xi + 0.5 * b;
  } else {
    v.H = 2.0 + b;
  }
  if (t < 2.0) {
    v.V = v.H;
    if (xi <= 0.0) {
      v.y = xi - (2.0 + b) * t2 / 8.0;
      v.U = -0.25 * (2.0 + b) * t;
    } else if (xi <= b) {
      v.y = 0.25 * xi * t2 - (2.0 + b) * t2 / 8.0;
      v.U = 0.5 * xi * t - 0.25 * (2.0 + b) * t;
    } else if (xi <= 2.0 + b) {
      v.y = (t + 2.0) * (t + 2.0) * xi / 8.0 - 0.5 * b - 0.5 * b * t - 0.25 * t2;
      v.U = 0.25 * (t + 2.0) * xi - 0.5 * b - 0.5 * t;
    } else if (xi <= 4.0 + b) {
      v.y = (t - 2.0) * (t - 2.0) * xi / 8.0 - 0.5 * b + 0.5 * (4.0 + b) * t - 0.25 * t2;
      v.U = 0.25 * (t - 2.0) * xi + 0.5 * (4.0 + b) - 0.5 * t;
    } else {
      v.y = xi - (2.0 + b) + (2.0 + b) * t2 / 8.0;
      v.U = 0.25 * (2.0 + b) * t;
    }
    return v;
  }
  const double c = 2.0 + b - a;
  const double ab = a * b;
  if (xi <= 0.0) {
    v.y = xi + 0.5 * a - 0.5 * a * t - c * t2 / 8.0;
    v.U = -0.5 * a - 0.25 * c * t;
    v.V = 0.0;
  } else if (xi <= b) {
    v.y = 0.25 * t2 * xi + 0.5 * a - 0.5 * a * t - c * t2 / 8.0;
    v.U = 0.5 * xi * t - 0.5 * a - 0.25 * c * t;
    v.V = xi;
  } else if (xi <= 2.0 + b) {
    v.y = (t + 2.0) * (t + 2.0) * xi / 8.0 - 0.5 * (b - a) - 0.5 * (b + a) * t -
          (2.0 - a) * t2 / 8.0;
    v.U = 0.25 * (t + 2.0) * xi - 0.5 * (b + a) - 0.25 * (2.0 - a) * t;
    v.V = 0.5 * xi + 0.5 * b;
  } else if (xi <= 4.0 + b) {
    v.y = (1.0 - a) * (t - 2.0) * (t - 2.0) * xi / 8.0 - 0.5 * (b - 3.0 * a - ab) +
          0.5 * (4.0 + b - 3.0 * a - ab) * t - (2.0 - 3.0 * a - ab) * t2 / 8.0;
    v.U = 0.25 * (1.0 - a) * (t - 2.0) * xi + 0.5 * (4.0 + b - 3.0 * a - ab) -
          0.25 * (2.0 - 3.0 * a - ab) * t;
    v.V = 0.5 * (1.0 - a) * xi + 0.5 * (b + 2.0 * a + ab);
  } else {
    v.y = xi - 0.5 * (4.0 + 2.0 * b + a) + 0.5 * a * t + c * t2 / 8.0;
    v.U = 0.5 * a + 0.25 * c * t;
    v.V = c;
  }
  return v;
}

// ----------------------------------------------------------------------- cusp

ProfileSampler cusp_initial(double alpha) {
  ProfileSampler p;
  p.u = [](double x) { return std::abs(x) <= 1.0 ? std::pow(std::cbrt(x), 2) : 1.0; };
  p.F_ac = [](double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 8.0 / 3.0;
    return (4.0 / 3.0) * (std::cbrt(x) + 1.0);
  };
  p.F_sing = [](double) { return 0.0; };
  p.alpha = alpha;
  p.support = {-1.0, 1.0};
  return p;
}

double cusp_ybar_cbrt(double xi) {
  if (xi <= -1.0) return -1.0;
  if (xi >= 11.0 / 3.0) return 1.0;
  return bisect(cusp_lhs_s, xi, -1.0, 1.0, 1e-13);
}

double cusp_ybar(double xi) {
  const double s = cusp_ybar_cbrt(xi);
  return s * s * s;
}

double cusp_tau(double xi) {
  if (xi <= -1.0 || xi > 4.0 / 3.0) return kInf;
  return 3.0 * std::abs(cusp_ybar_cbrt(xi));
}

double cusp_breaking_curve(double t) {
  const double r = t / 3.0;
  return -r * r * r + (4.0 / 3.0) * (1.0 - r);
}

double cusp_total_energy(double alpha, double t) { return 8.0 / 3.0 - (4.0 / 9.0) * alpha * t; }

std::vector<double> cusp_breakpoints(double alpha, double t) {
  const double a = alpha, t2 = t * t, t3 = t2 * t;
  return {-1.0 + t - t2 / 3.0 + a * t3 / 54.0, -(2.0 - a) * t3 / 54.0, -a * t3 / 54.0,
          1.0 + t + t2 / 3.0 - a * t3 / 54.0};
}

EulerianValue cusp_eulerian(double alpha, double t, double x) {
  if (!(t >= 0.0 && t <= 3.0)) throw std::domain_error("cusp: closed form valid for t in [0, 3]");
  const double a = alpha, t2 = t * t, t3 = t2 * t;
  const auto bp = cusp_breakpoints(alpha, t);
  const int k = branch(bp, x, false);
  EulerianValue v;
  const double wm = std::cbrt(x + (2.0 - a) * t3 / 54.0);
  const double wp = std::cbrt(x + (2.0 + a) * t3 / 54.0);
  switch (k) {
    case 0:
      v.u = 1.0 - 2.0 * t / 3.0 + a * t2 / 18.0;
      v.F_left = 0.0;
      break;
    case 1:
      v.u = wm * wm - (2.0 - a) * t2 / 18.0;
      v.F_left = (4.0 / 3.0) * (wm + 1.0 - t / 3.0);
      break;
    case 2:
      v.u = std::cbrt(1.0 - a) * wm * wm - (2.0 - a) * t2 / 18.0;
      v.F_left = (4.0 / 3.0) * (std::pow(1.0 - a, 2.0 / 3.0) * wm + 1.0 - t / 3.0);
      break;
    case 3:
      v.u = wp * wp - (2.0 + a) * t2 / 18.0;
      v.F_left = (4.0 / 3.0) * (wp + 1.0 - (1.0 + a) * t / 3.0);
      break;
    default:
      v.u = 1.0 + 2.0 * t / 3.0 - a * t2 / 18.0;
      v.F_left = cusp_total_energy(a, t);
      break;
  }
  v.F_right = v.F_left;
  return v;
}

LagrangianValue cusp_lagrangian(double alpha, double t, double xi) {
  if (!(t >= 0.0 && t <= 3.0)) throw std::domain_error("cusp: closed form valid for t in [0, 3]");
  const double a = alpha, t2 = t * t, t3 = t2 * t;
  LagrangianValue v;
  if (xi <= -1.0) {
    v.y = xi + t - t2 / 3.0 + a * t3 / 54.0;
    v.U = 1.0 - 2.0 * t / 3.0 + a * t2 / 18.0;
    v.V = v.H = 0.0;
    return v;
  }
  if (xi > 11.0 / 3.0) {
    v.y = xi - 8.0 / 3.0 + t + t2 / 3.0 - a * t3 / 54.0;
    v.U = 1.0 + 2.0 * t / 3.0 - a * t2 / 18.0;
    v.V = cusp_total_energy(a, t);
    v.H = 8.0 / 3.0;
    return v;
  }
  const double s = cusp_ybar_cbrt(xi);
  v.H = (4.0 / 3.0) * (s + 1.0);
  if (s < -t / 3.0) {
    const double w = s + t / 3.0;
    v.y = w * w * w - (2.0 - a) * t3 / 54.0;
    v.U = w * w - (2.0 - a) * t2 / 18.0;
    v.V = v.H;
  } else if (s <= 0.0) {
    const double w = -3.0 * s - t;
    v.y = -(1.0 - a) * w * w * w / 27.0 - (2.0 - a) * t3 / 54.0;
    v.U = (1.0 - a) * w * w / 9.0 - (2.0 - a) * t2 / 18.0;
    v.V = (4.0 / 3.0) * ((1.0 - a) * s + 1.0 - a * t / 3.0);
  } else {
    const double w = s + t / 3.0;
    v.y = w * w * w - (2.0 + a) * t3 / 54.0;
    v.U = w * w - (2.0 + a) * t2 / 18.0;
    v.V = (4.0 / 3.0) * (s + 1.0 - a * t / 3.0);
  }
  return v;
}

// --------------------------------------------------------------------- cosine

ProfileSampler cosine_initial(double alpha) {
  ProfileSampler p;
  p.u = [](double x) { return x >= 0.0 && x <= 4.0 ? std::cos(kPi * x) : 1.0; };
  p.F_ac = [](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 4.0) return 2.0 * kPi2;
    return cosine_V0(x);
  };
  p.F_sing = [](double) { return 0.0; };
  p.alpha = alpha;
  p.support = {0.0, 4.0};
  return p;
}

double cosine_ybar(double xi) {
  if (xi <= 0.0) return 0.0;
  if (xi >= kCosEnd) return 4.0;
  return bisect(cosine_lhs, xi, 0.0, 4.0, 1e-13);
}

double cosine_tau(double xi) {
  const double Y = cosine_ybar(xi);
  const bool breaking = (Y > 0.0 && Y < 1.0) || (Y > 2.0 && Y < 3.0);
  if (!breaking || xi <= 0.0 || xi >= kCosEnd) return kInf;
  return 2.0 / (kPi * std::sin(kPi * Y));
}

double cosine_total_energy(double alpha, double t) {
  if (t < kBreakStart) return 2.0 * kPi2;
  const double a = break_angle(t);
  return kPi2 * (2.0 - alpha) - kPi * alpha * (std::sin(2.0 * a) - 2.0 * a);
}

double cosine_b(double alpha, double t) {
  if (t <= kBreakStart) return 0.0;
  const double c = kBreakStart;
  const double root = std::sqrt(std::max(t * t - c * c, 0.0));
  return kPi2 * (2.0 - alpha) * (t - c) +
         2.0 * kPi * alpha * (t * break_angle(t) - 1.0 + c * std::acosh(std::max(t / c, 1.0))) +
         4.0 * alpha * (std::sqrt(std::max(1.0 - (c / t) * (c / t), 0.0)) + std::log(c) -
                        std::log(root + t));
}

double cosine_B(double alpha, double t) {
  if (t <= kBreakStart) return 0.0;
  const double c = kBreakStart;
  const double root = std::sqrt(std::max(t * t - c * c, 0.0));
  const double d = t - c;
  return 0.5 * kPi2 * (2.0 - alpha) * d * d + kPi * alpha * t * t * break_angle(t) +
         6.0 * alpha * root + 2.0 * alpha - 2.0 * kPi * alpha * t -
         (8.0 * alpha / kPi) * std::acos(clamp_unit(c / t));
}

LagrangianValue cosine_lagrangian(double alpha, double t, double xi) {
  return cosine_lagrangian_at(alpha, t, xi, cosine_ybar(xi));
}

LagrangianValue cosine_lagrangian_at(double alpha, double t, double xi, double Y) {
  if (!(t >= 0.0)) throw std::domain_error("cosine: t must be >= 0");
  const double al = alpha, t2 = t * t;
  LagrangianValue v;
  const double V0 = xi <= 0.0 ? 0.0 : (xi > kCosEnd ? 2.0 * kPi2 : cosine_V0(Y));
  const double cY = std::cos(kPi * Y);
  v.H = V0;

  if (t < kBreakStart) {
    v.V = V0;
    if (xi <= 0.0) {
      v.y = xi + t - 0.25 * kPi2 * t2;
      v.U = 1.0 - 0.5 * kPi2 * t;
    } else if (xi > kCosEnd) {
      v.y = xi - 2.0 * kPi2 + t + 0.25 * kPi2 * t2;
      v.U = 1.0 + 0.5 * kPi2 * t;
    } else {
      v.y = Y + cY * t + 0.25 * (V0 - kPi2) * t2;
      v.U = cY + 0.5 * (V0 - kPi2) * t;
    }
    return v;
  }

  const double ang = break_angle(t);
  const double K = std::sin(2.0 * ang) - 2.0 * ang;
  const double r = ang / kPi;
  const double bt = cosine_b(al, t);
  const double Bt = cosine_B(al, t);

  if (xi <= 0.0) {
    v.y = xi + 1.0 + (1.0 - kPi) * t - 0.25 * Bt;
    v.U = 1.0 - kPi - 0.25 * bt;
    v.V = 0.0;
    return v;
  }
  if (xi > kCosEnd) {
    v.y = xi - 2.0 * kPi2 - 1.0 + (1.0 + kPi) * t + 0.25 * Bt;
    v.U = 1.0 + kPi + 0.25 * bt;
    v.V = kPi2 * (2.0 - al) - kPi * al * K;
    return v;
  }

  auto broken = [&](double tau) {
    const double s = t - tau;
    struct {
      double s, btau, Btau, Vterm_U, Vterm_y;
    } r{s, cosine_b(al, tau), cosine_B(al, tau), 0.5 * V0 * (t - al * s),
        0.25 * V0 * (t2 - al * s * s)};
    return r;
  };

  if (Y < r) {
    v.y = Y + 1.0 + cY * t - kPi * t - 0.25 * Bt + 0.25 * V0 * t2;
    v.U = cY - kPi - 0.25 * bt + 0.5 * V0 * t;
    v.V = V0;
  } else if (Y <= 1.0 - r) {
    const double tau = 2.0 / (kPi * std::sin(kPi * Y));
    const auto q = broken(tau);
    if (Y <= 0.5) {
      v.y = Y + 1.0 + cY * t - kPi * t - (Bt + q.Btau + q.btau * q.s) / 8.0 + q.Vterm_y -
            kPi2 / 16.0 * (2.0 - al) * q.s * q.s;
      v.U = cY - kPi - (bt + q.btau) / 8.0 + q.Vterm_U - kPi2 / 8.0 * (2.0 - al) * q.s;
    } else {
      v.y = Y + cY * t - (Bt - q.Btau - q.btau * q.s) / 8.0 + q.Vterm_y -
            kPi2 / 16.0 *
                ((2.0 - al) * t2 + 2.0 * (2.0 + al) * t * tau - (2.0 + al) * tau * tau);
      v.U = cY - (bt - q.btau) / 8.0 + q.Vterm_U -
            kPi2 / 8.0 * ((2.0 - al) * t + (2.0 + al) * tau);
    }
    v.V = (1.0 - al) * V0 - 0.25 * kPi * al * K;
  } else if (Y < 2.0 + r) {
    v.y = Y + cY * t - 0.25 * kPi2 * t2 + 0.25 * V0 * t2;
    v.U = cY - 0.5 * kPi2 * t + 0.5 * V0 * t;
    v.V = V0 - 0.5 * kPi2 * al - 0.5 * kPi * al * K;
  } else if (Y <= 3.0 - r) {
    const double tau = 2.0 / (kPi * std::sin(kPi * Y));
    const auto q = broken(tau);
    if (Y <= 2.5) {
      v.y = Y + cY * t + (Bt - q.Btau - q.btau * q.s) / 8.0 + q.Vterm_y -
            kPi2 / 16.0 *
                ((6.0 - 5.0 * al) * t2 + (-4.0 + 10.0 * al) * t * tau + (2.0 - 5.0 * al) * tau * tau);
      v.U = cY + (bt - q.btau) / 8.0 + q.Vterm_U -
            kPi2 / 8.0 * ((6.0 - 5.0 * al) * t + (-2.0 + 5.0 * al) * tau);
    } else {
      v.y = Y - 1.0 + cY * t + kPi * t + (Bt + q.Btau + q.btau * q.s) / 8.0 + q.Vterm_y -
            kPi2 / 16.0 *
                ((6.0 - 5.0 * al) * t2 + (4.0 + 10.0 * al) * t * tau + (-2.0 - 5.0 * al) * tau * tau);
      v.U = cY + kPi + (bt + q.btau) / 8.0 + q.Vterm_U -
            kPi2 / 8.0 * ((6.0 - 5.0 * al) * t + (2.0 + 5.0 * al) * tau);
    }
    v.V = (1.0 - al) * V0 + 0.5 * kPi2 * al - 0.75 * kPi * al * K;
  } else {
    v.y = Y - 1.0 + cY * t + kPi * t + 0.25 * Bt - 0.5 * kPi2 * t2 + 0.25 * V0 * t2;
    v.U = cY + kPi + 0.25 * bt + 0.5 * V0 * t - kPi2 * t;
    v.V = V0 - kPi2 * al - kPi * al * K;
  }
  return v;
}

// ------------------------------------------------------------------- dispatch

ProfileSampler initial_sampler(const ExactSolutionSpec& spec) {
  switch (spec.kind) {
    case Kind::multipeakon:
      return ProfileSampler::from_state(multipeakon_initial(spec.alpha, spec.beta));
    case Kind::cusp:
      return cusp_initial(spec.alpha);
    case Kind::cosine:
      return cosine_initial(spec.alpha);
  }
  return {};
}

EulerianValue eulerian(const ExactSolutionSpec& spec, double t, double x) {
  spec.check_time(t);
  switch (spec.kind) {
    case Kind::multipeakon:
      return multipeakon_eulerian(spec.alpha, spec.beta, t, x);
    case Kind::cusp:
      return cusp_eulerian(spec.alpha, t, x);
    case Kind::cosine:
      break;
  }
  throw std::domain_error("cosine: no Eulerian closed form");
}

LagrangianValue lagrangian(const ExactSolutionSpec& spec, double t, double xi) {
  spec.check_time(t);
  switch (spec.kind) {
    case Kind::multipeakon:
      return multipeakon_lagrangian(spec.alpha, spec.beta, t, xi);
    case Kind::cusp:
      return cusp_lagrangian(spec.alpha, t, xi);
    case Kind::cosine:
      return cosine_lagrangian(spec.alpha, t, xi);
  }
  return {};
}

std::vector<double> eulerian_breakpoints(const ExactSolutionSpec& spec, double t) {
  switch (spec.kind) {
    case Kind::multipeakon:
      return multipeakon_breakpoints(spec.alpha, spec.beta, t);
    case Kind::cusp:
      return cusp_breakpoints(spec.alpha, t);
    case Kind::cosine:
      break;
  }
  return {};
}

Window lagrangian_support(const ExactSolutionSpec& spec) {
  switch (spec.kind) {
    case Kind::multipeakon:
      return {0.0, 4.0 + spec.beta};
    case Kind::cusp:
      return {-1.0, 11.0 / 3.0};
    case Kind::cosine:
      return {0.0, kCosEnd};
  }
  return {};
}

// ---------------------------------------------------------------------- probe

namespace {

std::vector<double> uniform_mesh(double lo, double hi, double h) {
  std::vector<double> m;
  const auto k0 = static_cast<long>(std::ceil(lo / h));
  const auto k1 = static_cast<long>(std::floor(hi / h));
  m.reserve(static_cast<std::size_t>(std::max(0L, k1 - k0 + 1)) + 2);
  for (long k = k0; k <= k1; ++k) m.push_back(static_cast<double>(k) * h);
  return m;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

double eulerian_u_error(const ExactSolutionSpec& spec, const EulerianTriple& Z, double t, double h) {
  std::vector<double> bp = eulerian_breakpoints(spec, t);
  const double lo = std::min(Z.support.lo, bp.front());
  const double hi = std::max(Z.support.hi, bp.back());
  std::vector<double> pts = uniform_mesh(lo, hi, h);
  pts.insert(pts.end(), Z.u.nodes().begin(), Z.u.nodes().end());
  pts.insert(pts.end(), bp.begin(), bp.end());
  pts.push_back(lo);
  pts.push_back(hi);
  sort_unique(pts);
  const std::vector<double> num = Z.u.eval_sorted(pts);
  double err = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    err = std::max(err, std::abs(eulerian(spec, t, pts[i]).u - num[i]));
  }
  return err;
}

}  // namespace

ErrorRecord exact_error_probe(const ExactSolutionSpec& spec, const LagrangianState& X0,
                              const SamplingPlan& plan) {
  if (plan.times.empty()) throw std::invalid_argument("probe: no sample times");
  if (!(plan.mesh_dx > 0.0)) throw std::invalid_argument("probe: mesh spacing must be positive");
  for (double t : plan.times) spec.check_time(t);
  ErrorRecord rec;
  const double T = plan.times.back();

  if (spec.kind != Kind::cosine) {
    for (double t : plan.times) {
      const LagrangianState Xt = evolve(X0, t);
      rec.err_u_sup = std::max(rec.err_u_sup, eulerian_u_error(spec, to_eulerian(Xt), t, plan.mesh_dx));
    }
    rec.err_Finf = std::abs(spec.total_energy(T) - evolve(X0, T).V_inf);
    return rec;
  }

  // Labels shared by all times; ybar is solved once per label.
  const Window ls = lagrangian_support(spec);
  const double lo = std::min(X0.xi.empty() ? ls.lo : X0.xi.front(), ls.lo);
  const double hi = std::max(X0.xi.empty() ? ls.hi : X0.xi.back(), ls.hi);
  std::vector<double> labels = uniform_mesh(lo, hi, plan.mesh_dx);
  labels.insert(labels.end(), X0.xi.begin(), X0.xi.end());
  labels.push_back(lo);
  labels.push_back(hi);
  sort_unique(labels);
  std::vector<double> ybar(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) ybar[i] = cosine_ybar(labels[i]);

  rec.err_A = 0.0;
  std::vector<double> ys(labels.size());
  std::vector<double> Us(labels.size());
  for (double t : plan.times) {
    const LagrangianState Xt = evolve(X0, t);
    const std::vector<double> zeta = Xt.zeta_fn().eval_sorted(labels);
    const std::vector<double> U = Xt.U_fn().eval_sorted(labels);
    double eU = 0.0, ey = 0.0;
    double ymax = -kInf;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const LagrangianValue ex = cosine_lagrangian_at(spec.alpha, t, labels[i], ybar[i]);
      eU = std::max(eU, std::abs(ex.U - U[i]));
      ey = std::max(ey, std::abs((ex.y - labels[i]) - zeta[i]));
      ymax = std::max(ymax, ex.y);
      ys[i] = ymax;
      Us[i] = ex.U;
    }
    rec.err_A = std::max(rec.err_A, eU + std::sqrt(spec.total_energy(t)) * std::sqrt(ey));
    const std::vector<double> un = to_eulerian(Xt).u.eval_sorted(ys);
    double eu = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) eu = std::max(eu, std::abs(un[i] - Us[i]));
    rec.err_u_sup = std::max(rec.err_u_sup, eu);
  }
  rec.err_Finf = std::abs(spec.total_energy(T) - evolve(X0, T).V_inf);
  return rec;
}

}  // namespace hsalpha::reference
