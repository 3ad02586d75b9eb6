#include "hsalpha/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hsalpha {

namespace {

double node_scale(std::span<const double> xs) {
  double s = 1.0;
  for (double x : xs) s = std::max(s, std::abs(x));
  return s;
}

// Integral of |a + (b - a) s|^p over a cell of width h, s in [0, 1].
double cell_integral(double a, double b, double h, Norm p) {
  if (h <= 0.0) return 0.0;
  if (p == Norm::L2) return h * (a * a + a * b + b * b) / 3.0;
  const double fa = std::abs(a);
  const double fb = std::abs(b);
  if (a * b >= 0.0) return 0.5 * h * (fa + fb);
  return 0.5 * h * (a * a + b * b) / (fa + fb);
}

double finish(double acc, Norm p) { return p == Norm::L2 ? std::sqrt(acc) : acc; }

std::vector<double> clipped_points(std::vector<double> pts, Window w) {
  pts.push_back(w.lo);
  pts.push_back(w.hi);
  std::erase_if(pts, [&](double x) { return x < w.lo || x > w.hi; });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void check_window(Window w) {
  if (!(w.lo < w.hi) || !std::isfinite(w.lo) || !std::isfinite(w.hi)) {
    throw std::invalid_argument("norm window must satisfy a < b and be finite");
  }
}

}  // namespace

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.size() != values.size()) {
    throw std::invalid_argument("PiecewiseLinearFn: nodes and values differ in length");
  }
  const double tol = kNodeMergeTol * node_scale(nodes);
  nodes_.reserve(nodes.size());
  values_.reserve(values.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("PiecewiseLinearFn: non-finite node or value");
    }
    if (!nodes_.empty()) {
      const double gap = nodes[i] - nodes_.back();
      if (gap < -tol) throw std::invalid_argument("PiecewiseLinearFn: nodes must be nondecreasing");
      if (gap < tol) continue;
    }
    nodes_.push_back(nodes[i]);
    values_.push_back(values[i]);
  }
}

PiecewiseLinearFn PiecewiseLinearFn::constant(double c) {
  PiecewiseLinearFn f;
  f.tail_ = c;
  return f;
}

double PiecewiseLinearFn::eval(double x) const {
  if (nodes_.empty()) return tail_;
  if (x <= nodes_.front()) return values_.front();
  if (x >= nodes_.back()) return values_.back();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const auto i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const double h = nodes_[i + 1] - nodes_[i];
  const double s = (x - nodes_[i]) / h;
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

std::vector<double> PiecewiseLinearFn::eval_sorted(std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  if (nodes_.empty()) {
    std::fill(out.begin(), out.end(), tail_);
    return out;
  }
  std::size_t i = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    if (x <= nodes_.front()) {
      out[k] = values_.front();
      continue;
    }
    if (x >= nodes_.back()) {
      out[k] = values_.back();
      continue;
    }
    while (i + 1 < nodes_.size() && nodes_[i + 1] <= x) ++i;
    const double s = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    out[k] = values_[i] + s * (values_[i + 1] - values_[i]);
  }
  return out;
}

double PiecewiseLinearFn::slope(std::size_t cell) const {
  return (values_[cell + 1] - values_[cell]) / (nodes_[cell + 1] - nodes_[cell]);
}

MonotoneCDF::MonotoneCDF(PiecewiseLinearFn continuous, std::vector<Atom> atoms, double slope_tol)
    : cont_(std::move(continuous)) {
  if (std::abs(cont_.left_tail()) > slope_tol * std::max(1.0, std::abs(cont_.right_tail()))) {
    throw std::invalid_argument("MonotoneCDF: continuous part must vanish at -inf");
  }
  const auto v = cont_.values();
  const double scale = std::max(1.0, std::abs(cont_.right_tail()));
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] - v[i] < -slope_tol * scale) {
      throw std::invalid_argument("MonotoneCDF: continuous part decreases on cell " +
                                  std::to_string(i));
    }
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (const Atom& a : atoms) {
    if (!(a.mass >= 0.0) || !std::isfinite(a.x)) {
      throw std::invalid_argument("MonotoneCDF: atom masses must be nonnegative and finite");
    }
    if (a.mass == 0.0) continue;
    if (!atoms_.empty() && atoms_.back().x == a.x) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
  }
}

double MonotoneCDF::singular_left(double x) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.x >= x) break;
    s += a.mass;
  }
  return s;
}

double MonotoneCDF::eval_left(double x) const { return cont_.eval(x) + singular_left(x); }

double MonotoneCDF::eval_right(double x) const { return eval_left(x) + atom_mass_at(x); }

double MonotoneCDF::atom_mass_at(double x) const {
  for (const Atom& a : atoms_) {
    if (a.x == x) return a.mass;
  }
  return 0.0;
}

double MonotoneCDF::singular_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  return s;
}

NodeRefinement refine(std::span<const double> a, std::span<const double> b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
  NodeRefinement r;
  if (all.empty()) return r;
  const double tol = kNodeMergeTol * node_scale(all);
  r.merged_nodes.push_back(all.front());
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i] - r.merged_nodes.back() >= tol) r.merged_nodes.push_back(all[i]);
  }
  return r;
}

double norm_diff(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, Norm p, Window window) {
  check_window(window);
  const auto merged = refine(f.nodes(), g.nodes()).merged_nodes;
  const auto pts = clipped_points(merged, window);
  std::vector<double> d(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d[i] = f.eval(pts[i]) - g.eval(pts[i]);
  if (p == Norm::Linf) {
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    acc += cell_integral(d[i], d[i + 1], pts[i + 1] - pts[i], p);
  }
  return finish(acc, p);
}

double norm_diff(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, Norm p) {
  const double left = f.left_tail() - g.left_tail();
  const double right = f.right_tail() - g.right_tail();
  const auto merged = refine(f.nodes(), g.nodes()).merged_nodes;
  if (p == Norm::Linf) {
    double m = std::max(std::abs(left), std::abs(right));
    for (double x : merged) m = std::max(m, std::abs(f.eval(x) - g.eval(x)));
    return m;
  }
  if (left != 0.0 || right != 0.0) return kInf;
  if (merged.size() < 2) return 0.0;
  return norm_diff(f, g, p, Window{merged.front(), merged.back()});
}

double cdf_norm_diff(const MonotoneCDF& F, const MonotoneCDF& G, Norm p, Window window) {
  check_window(window);
  std::vector<double> pts = refine(F.continuous_part().nodes(), G.continuous_part().nodes()).merged_nodes;
  for (const Atom& a : F.atoms()) pts.push_back(a.x);
  for (const Atom& a : G.atoms()) pts.push_back(a.x);
  pts = clipped_points(std::move(pts), window);

  if (p == Norm::Linf) {
    double m = 0.0;
    for (double x : pts) {
      m = std::max(m, std::abs(F.eval_left(x) - G.eval_left(x)));
      m = std::max(m, std::abs(F.eval_right(x) - G.eval_right(x)));
    }
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = F.eval_right(pts[i]) - G.eval_right(pts[i]);
    const double b = F.eval_left(pts[i + 1]) - G.eval_left(pts[i + 1]);
    acc += cell_integral(a, b, pts[i + 1] - pts[i], p);
  }
  return finish(acc, p);
}

double PiecewiseConstantFn::eval(double x) const {
  if (breaks.size() < 2 || x < breaks.front() || x >= breaks.back()) return 0.0;
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return values[static_cast<std::size_t>(it - breaks.begin()) - 1];
}

double piecewise_constant_norm_diff(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g,
                                    Norm p) {
  if (p == Norm::Linf) throw std::invalid_argument("piecewise_constant_norm_diff: p must be 1 or 2");
  std::vector<double> pts;
  pts.reserve(f.breaks.size() + g.breaks.size());
  std::merge(f.breaks.begin(), f.breaks.end(), g.breaks.begin(), g.breaks.end(),
             std::back_inserter(pts));
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double h = pts[i + 1] - pts[i];
    if (h <= 0.0) continue;
    const double mid = pts[i] + 0.5 * h;
    const double d = f.eval(mid) - g.eval(mid);
    acc += (p == Norm::L1 ? std::abs(d) : d * d) * h;
  }
  return finish(acc, p);
}

double piecewise_constant_norm(const PiecewiseConstantFn& f, Norm p) {
  return piecewise_constant_norm_diff(f, PiecewiseConstantFn{}, p);
}

}  // namespace hsalpha
