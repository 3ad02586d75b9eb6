#pragma once

#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/projection.hpp"

namespace hsalpha {

/// Piecewise-linear Lagrangian state X = (y, U, V, H) at time t.
///
/// Cell i spans [xi[i], xi[i+1]] and carries constant derivatives. Cells of
/// zero width are kept so that block indexing stays regular; their
/// derivatives are zero. Left of xi.front() the state is
/// (xi + zeta_minus_inf, U_minus_inf, 0, 0); right of xi.back() y - xi and U
/// are constant and V = V_inf, H = H_inf.
struct LagrangianState {
  double t = 0.0;
  double alpha = 0.0;

  std::vector<double> xi;
  std::vector<double> y, U, V, H;

  std::vector<double> y_xi, U_xi, V_xi, H_xi;
  std::vector<double> tau;  // first breaking time per cell, inf if none

  double U_minus_inf = 0.0;
  double zeta_minus_inf = 0.0;
  double V_inf = 0.0;
  double H_inf = 0.0;

  [[nodiscard]] std::size_t num_cells() const { return y_xi.size(); }
  [[nodiscard]] double width(std::size_t cell) const { return xi[cell + 1] - xi[cell]; }

  /// zeta = y - id, U, V, H as functions of the label.
  [[nodiscard]] PiecewiseLinearFn zeta_fn() const;
  [[nodiscard]] PiecewiseLinearFn U_fn() const;
  [[nodiscard]] PiecewiseLinearFn V_fn() const;
  [[nodiscard]] PiecewiseLinearFn H_fn() const;

  /// Piecewise-constant derivative fields; `zeta_xi` is y_xi - 1.
  [[nodiscard]] PiecewiseConstantFn zeta_xi_fn() const;
  [[nodiscard]] PiecewiseConstantFn U_xi_fn() const;
  [[nodiscard]] PiecewiseConstantFn V_xi_fn() const;
  [[nodiscard]] PiecewiseConstantFn H_xi_fn() const;

  [[nodiscard]] double y_at(double label) const;
};

/// Maps a projected state to Lagrangian coordinates. Every block contributes a
/// jump cell at x_{2j} (zero width when G has no atom there) and the two
/// half-cells. Throws ValidationError if the state does not fit the grid.
LagrangianState to_lagrangian(const ProjectionResult& projected);

/// General piecewise-linear L: cells follow the merged nodes of (u, F_ac,
/// G_ac); jump cells appear only where G has atoms.
LagrangianState to_lagrangian(const EulerianTriple& s);

/// Per-cell breaking time: 0 on jump cells, -2 y_xi / U_xi where U_xi < 0,
/// inf otherwise.
std::vector<double> wave_break_times(const LagrangianState& X0);

/// Exact alpha-dissipative evolution from time 0 to t (no time stepping).
/// Throws std::invalid_argument for t < 0 or if X0 is not at time 0.
LagrangianState evolve(const LagrangianState& X0, double t);

/// Maps back to Eulerian variables. Cells with y_xi * width below
/// 1e-13 * max(1, |y range|) are collapsed into atoms.
EulerianTriple to_eulerian(const LagrangianState& X);

/// g = (1 - alpha) V_xi on cells with U_xi < 0, V_xi otherwise.
struct StabilityDensityLagrangian {
  std::vector<double> per_cell;
  PiecewiseConstantFn density;
};

StabilityDensityLagrangian g_stability(const LagrangianState& X);

struct MetricTerms {
  double y_inf = 0.0;
  double U_inf = 0.0;
  double H_xi_l1 = 0.0;
  double y_xi_l2 = 0.0;
  double U_xi_l2 = 0.0;
  double g_plus_y_xi_l2 = 0.0;
  double H_xi_l2 = 0.0;

  [[nodiscard]] double total() const {
    return y_inf + U_inf + H_xi_l1 + y_xi_l2 + U_xi_l2 + g_plus_y_xi_l2 + H_xi_l2;
  }
};

/// Seven-term Lagrangian distance, computed exactly on merged nodes. Throws
/// std::invalid_argument on mismatched alpha or time stamp.
MetricTerms metric_terms(const LagrangianState& X, const LagrangianState& Y);
double metric_d(const LagrangianState& X, const LagrangianState& Y);

/// Structural checks on an evolved state against its initial data.
struct InvariantReport {
  double max_identity_residual = 0.0;  // |U_xi^2 - y_xi V_xi| / magnitude
  double max_H_drift = 0.0;            // |H_xi(t) - H_xi(0)| and nodal H
  double max_V_excess = 0.0;           // relative breach of 0 <= V_xi <= H_xi, y_xi >= 0
  double max_g_drift = 0.0;            // |g(t) - g(0)| per cell
  double max_growth_violation = 0.0;   // relative breach of e^{-+t/2} bounds
};

InvariantReport check_invariants(const LagrangianState& X0, const LagrangianState& Xt);

}  // namespace hsalpha
