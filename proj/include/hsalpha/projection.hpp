#pragma once

#include <functional>
#include <vector>

#include "hsalpha/eulerian.hpp"

namespace hsalpha {

/// Uniform grid x_i = origin + i * dx, grouped into two-cell blocks
/// [x_{2j}, x_{2j+2}] for j in [j_min, j_max].
struct GridSpec {
  double dx = 0.0;
  double origin = 0.0;
  long j_min = 0;
  long j_max = -1;

  [[nodiscard]] double x(long i) const { return origin + static_cast<double>(i) * dx; }
  [[nodiscard]] long num_blocks() const { return j_max - j_min + 1; }
  [[nodiscard]] Window window() const { return {x(2 * j_min), x(2 * j_max + 2)}; }

  /// Smallest block range whose window strictly contains `support`.
  static GridSpec covering(double dx, double origin, Window support);
};

/// Per-block data of the two-cell fit.
struct BlockCoefficients {
  double Du = 0.0;     // (u(x_{2j+2}) - u(x_{2j})) / (2 dx)
  double DF_ac = 0.0;  // (F_ac(x_{2j+2}) - F_ac(x_{2j})) / (2 dx)
  double q = 0.0;      // sqrt(DF_ac - Du^2), clamped at rounding level
  int k = 0;           // chosen sign index

  /// Slopes of u_dx on the left and right half-cell.
  [[nodiscard]] double left_slope() const { return Du + (k == 0 ? q : -q); }
  [[nodiscard]] double right_slope() const { return Du + (k == 0 ? -q : q); }
};

/// Pointwise access to the data being projected. F_sing and G_sing are
/// left-continuous singular cumulatives. For states with nu = mu the G
/// members may be left empty.
struct ProfileSampler {
  std::function<double(double)> u;
  std::function<double(double)> F_ac;
  std::function<double(double)> F_sing;
  std::function<double(double)> G_ac;
  std::function<double(double)> G_sing;
  double alpha = 0.0;
  Window support{0.0, 0.0};

  static ProfileSampler from_state(const EulerianTriple& s);
};

struct ProjectionResult {
  EulerianTriple state;
  GridSpec grid;
  std::vector<BlockCoefficients> blocks;
};

/// q from block averages. Deficits of Du^2 over DF_ac up to 1e-12 relative
/// plus `slack` are clamped to zero; larger ones throw ValidationError.
double block_q(double Du, double DF_ac, double slack = 0.0);

/// Sign index minimizing |u_dx(x_{2j+1}) - u(x_{2j+1})|; ties go to k = 0.
int select_sign(double Du, double q, double u_left, double u_mid, double dx);

/// Energy-preserving two-cell projection for states with mu = nu.
ProjectionResult project(const EulerianTriple& s, const GridSpec& grid);
ProjectionResult project(const ProfileSampler& data, const GridSpec& grid);

/// Projection for general mu <= nu: G_dx gets block-lumped singular part and a
/// block-averaged excess density on top of F_dx,ac.
ProjectionResult project_general(const EulerianTriple& s, const GridSpec& grid);
ProjectionResult project_general(const ProfileSampler& data, const GridSpec& grid);

}  // namespace hsalpha
