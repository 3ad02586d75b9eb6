#pragma once

#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/lagrangian.hpp"
#include "hsalpha/projection.hpp"

namespace hsalpha::reference {

enum class Kind { multipeakon, cusp, cosine };

const char* kind_name(Kind k);

struct ExactSolutionSpec {
  Kind kind = Kind::multipeakon;
  double alpha = 0.5;
  double beta = 0.5;  // multipeakon only
  Window valid_time{0.0, kInf};

  static ExactSolutionSpec multipeakon(double alpha, double beta);
  static ExactSolutionSpec cusp(double alpha);
  static ExactSolutionSpec cosine(double alpha);

  /// Throws std::domain_error outside valid_time.
  void check_time(double t) const;

  [[nodiscard]] bool has_eulerian() const { return kind != Kind::cosine; }
  [[nodiscard]] double total_energy(double t) const;
  /// Instants where a positive amount of energy is lost at once, or where
  /// breaking starts.
  [[nodiscard]] std::vector<double> breaking_instants() const;
  /// Initial support in x.
  [[nodiscard]] Window support() const;
};

struct EulerianValue {
  double u = 0.0;
  double F_left = 0.0;
  double F_right = 0.0;
};

struct LagrangianValue {
  double y = 0.0;
  double U = 0.0;
  double V = 0.0;
  double H = 0.0;
};

/// Monotone implicit equation for ybar, solved by bisection.
struct ImplicitYSolver {
  enum class Equation { cusp, cosine };
  Equation equation = Equation::cusp;
  double tol = 1e-13;

  /// Root of the equation at label xi. Labels outside the image of the
  /// bracket throw std::domain_error.
  [[nodiscard]] double solve(double xi) const;
  /// Left-hand side minus xi.
  [[nodiscard]] double residual(double ybar, double xi) const;
};

// multipeakon, D0 variant: mu = nu = beta delta_0 + u_x^2 dx
EulerianTriple multipeakon_initial(double alpha, double beta);
/// Variant with F-atom 1 - alpha and G-atom 1 at 0 (mu != nu).
EulerianTriple multipeakon_initial_split(double alpha);
EulerianValue multipeakon_eulerian(double alpha, double beta, double t, double x);
LagrangianValue multipeakon_lagrangian(double alpha, double beta, double t, double xi);
std::vector<double> multipeakon_breakpoints(double alpha, double beta, double t);

// cusp: u0 = |x|^{2/3} on [-1, 1], valid for t in [0, 3]
ProfileSampler cusp_initial(double alpha);
double cusp_ybar(double xi);
/// Cube root of ybar, the variable the cusp formulas are smooth in.
double cusp_ybar_cbrt(double xi);
double cusp_tau(double xi);
double cusp_breaking_curve(double t);
double cusp_total_energy(double alpha, double t);
EulerianValue cusp_eulerian(double alpha, double t, double x);
LagrangianValue cusp_lagrangian(double alpha, double t, double xi);
std::vector<double> cusp_breakpoints(double alpha, double t);

// cosine: u0 = cos(pi x) on [0, 4)
ProfileSampler cosine_initial(double alpha);
double cosine_ybar(double xi);
double cosine_tau(double xi);
double cosine_total_energy(double alpha, double t);
/// Integral of V_inf over [2/pi, t] and its primitive; zero for t <= 2/pi.
double cosine_b(double alpha, double t);
double cosine_B(double alpha, double t);
LagrangianValue cosine_lagrangian(double alpha, double t, double xi);
/// Same with ybar already known (ybar = cosine_ybar(xi)).
LagrangianValue cosine_lagrangian_at(double alpha, double t, double xi, double ybar);

// dispatch
ProfileSampler initial_sampler(const ExactSolutionSpec& spec);
EulerianValue eulerian(const ExactSolutionSpec& spec, double t, double x);
LagrangianValue lagrangian(const ExactSolutionSpec& spec, double t, double xi);
std::vector<double> eulerian_breakpoints(const ExactSolutionSpec& spec, double t);
/// Label range outside which the exact Lagrangian solution is affine.
Window lagrangian_support(const ExactSolutionSpec& spec);

struct SamplingPlan {
  std::vector<double> times;  // ascending; the last one is T
  double mesh_dx = 0.0;       // spacing of the uniform comparison mesh
};

struct ErrorRecord {
  double err_u_sup = 0.0;  // sup over times of the sampled max |u - u_dx|
  double err_Finf = 0.0;   // |F_inf(T) - F_dx,inf(T)|
  double err_A = -1.0;     // cosine only: sup over times of |U - U_dx| + sqrt(F_inf) |y - y_dx|^{1/2}
};

/// Evolves the numeric initial state X0 to every sampled time and compares it
/// with the exact solution. Eulerian families are sampled on the union of
/// numeric nodes, exact breakpoints and the uniform mesh; the cosine family is
/// compared along labels, u_dx being evaluated at the exact characteristics.
ErrorRecord exact_error_probe(const ExactSolutionSpec& spec, const LagrangianState& X0,
                              const SamplingPlan& plan);

}  // namespace hsalpha::reference
