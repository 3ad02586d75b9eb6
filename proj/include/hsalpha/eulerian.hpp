#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsalpha/pwl.hpp"

namespace hsalpha {

/// Eulerian state (u, F, G) with F = mu((-inf, x)), G = nu((-inf, x)).
///
/// `support` is a window outside of which u is constant and neither measure
/// carries mass. The class only stores; use validate_D0/validate_D to check
/// membership in the admissible set.
struct EulerianTriple {
  PiecewiseLinearFn u;
  MonotoneCDF F;
  MonotoneCDF G;
  Window support{0.0, 0.0};
  double alpha = 0.0;

  /// State with nu = mu; drops atoms lighter than 1e-14 * F_inf.
  static EulerianTriple with_equal_measures(PiecewiseLinearFn u, MonotoneCDF F, double alpha);
  /// u and F_ac = running integral of u_x^2, plus the given atoms; G = F.
  static EulerianTriple from_profile(PiecewiseLinearFn u, std::vector<Atom> atoms, double alpha);
  static EulerianTriple zero(double alpha);
};

struct Violation {
  std::string clause;  // e.g. "ii: mu <= nu"
  double location = 0.0;
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Clauses that are reported but do not fail validation.
  std::vector<Violation> notes;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

inline constexpr double kDefaultValidationTol = 1e-10;

/// Checks the admissibility clauses for piecewise-linear data plus mu = nu.
/// Tolerances are relative to F_inf (absolute when F_inf < 1).
ValidationReport validate_D0(const EulerianTriple& s, double tol = kDefaultValidationTol);

/// Same clauses without mu = nu. The density-ratio clause is only reported as
/// a note, since block averaging of nu_ac can put the ratio strictly inside
/// [1 - alpha, 1].
ValidationReport validate_D(const EulerianTriple& s, double tol = kDefaultValidationTol);

/// F_inf: continuous mass plus atom mass.
double total_energy(const EulerianTriple& s);

/// Per-cell f(Z) on the cells of u: (1 - alpha) u_x^2 where u_x < 0, u_x^2 otherwise.
struct StabilityDensityEulerian {
  PiecewiseConstantFn density;
};

StabilityDensityEulerian f_stability(const EulerianTriple& s);

/// Piecewise-constant u_x over the cells of u.
PiecewiseConstantFn derivative(const PiecewiseLinearFn& u);

/// Parses the initial-data JSON document. Throws ConfigError on schema
/// problems and ValidationError when the state is not admissible.
EulerianTriple parse_initial_data(const std::string& json_text);
EulerianTriple load_initial_data(const std::filesystem::path& file);

}  // namespace hsalpha
