#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hsalpha {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative gap below which two nodes are considered the same point.
inline constexpr double kNodeMergeTol = 1e-14;

enum class Norm { L1, L2, Linf };

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// Continuous piecewise-linear function on the real line with constant tails.
///
/// Between nodes the function is the linear interpolant of `values`; left of the
/// first node it equals `values.front()`, right of the last node `values.back()`.
/// A function without nodes is the constant `tail`.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn() = default;

  /// Builds from parallel node/value arrays. Nodes must be nondecreasing; nodes
  /// closer than kNodeMergeTol * scale are merged (the first value is kept).
  PiecewiseLinearFn(std::vector<double> nodes, std::vector<double> values);

  static PiecewiseLinearFn constant(double c);

  [[nodiscard]] double operator()(double x) const { return eval(x); }
  [[nodiscard]] double eval(double x) const;

  /// Evaluates at ascending sample points with a single forward sweep.
  [[nodiscard]] std::vector<double> eval_sorted(std::span<const double> xs) const;

  [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] bool empty() const { return nodes_.empty(); }

  [[nodiscard]] double left_tail() const { return nodes_.empty() ? tail_ : values_.front(); }
  [[nodiscard]] double right_tail() const { return nodes_.empty() ? tail_ : values_.back(); }

  /// Slope on cell [nodes[i], nodes[i+1]].
  [[nodiscard]] double slope(std::size_t cell) const;
  [[nodiscard]] std::size_t num_cells() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  double tail_ = 0.0;
};

struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

/// Nondecreasing, left-continuous cumulative function: continuous
/// piecewise-linear part plus point masses.
class MonotoneCDF {
 public:
  MonotoneCDF() = default;

  /// Atoms at coinciding locations are combined, zero masses dropped. Throws
  /// std::invalid_argument if the continuous part decreases anywhere, has a
  /// nonzero left tail, or an atom mass is negative.
  MonotoneCDF(PiecewiseLinearFn continuous, std::vector<Atom> atoms, double slope_tol = 1e-12);

  /// Left limit F(x) = mu((-inf, x)).
  [[nodiscard]] double eval_left(double x) const;
  /// Right limit F(x+) = mu((-inf, x]).
  [[nodiscard]] double eval_right(double x) const;

  [[nodiscard]] const PiecewiseLinearFn& continuous_part() const { return cont_; }
  [[nodiscard]] std::span<const Atom> atoms() const { return atoms_; }

  [[nodiscard]] double atom_mass_at(double x) const;
  [[nodiscard]] double singular_mass() const;
  [[nodiscard]] double continuous_mass() const { return cont_.right_tail(); }
  [[nodiscard]] double total() const { return continuous_mass() + singular_mass(); }

  /// Singular mass strictly below x (left-continuous singular cumulative).
  [[nodiscard]] double singular_left(double x) const;

 private:
  PiecewiseLinearFn cont_;
  std::vector<Atom> atoms_;  // sorted by location, distinct
};

/// Sorted union of two node sets, duplicates (within kNodeMergeTol) removed.
struct NodeRefinement {
  std::vector<double> merged_nodes;
};

NodeRefinement refine(std::span<const double> a, std::span<const double> b);

/// Exact norm of f - g on the finite window [a, b]. Throws on a >= b.
double norm_diff(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, Norm p, Window window);

/// Norm of f - g over the whole line. L1/L2 are +inf when the tails differ.
double norm_diff(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, Norm p);

/// Exact L1/L2 norm of F - G over [a, b]; the atoms make the difference
/// piecewise linear with jumps. Linf returns the supremum over one-sided limits.
double cdf_norm_diff(const MonotoneCDF& F, const MonotoneCDF& G, Norm p, Window window);

/// Function that is constant on each cell [breaks[i], breaks[i+1]) and zero
/// outside [breaks.front(), breaks.back()].
struct PiecewiseConstantFn {
  std::vector<double> breaks;
  std::vector<double> values;  // one per cell

  [[nodiscard]] double eval(double x) const;
  [[nodiscard]] std::size_t num_cells() const { return values.size(); }
};

/// Exact L1/L2 norm of f - g over the line.
double piecewise_constant_norm_diff(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g,
                                    Norm p);

/// Exact L1/L2 norm of f over the line.
double piecewise_constant_norm(const PiecewiseConstantFn& f, Norm p);

}  // namespace hsalpha
