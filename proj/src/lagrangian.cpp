#include "hsalpha/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hsalpha/errors.hpp"

namespace hsalpha {

namespace {

// Nodes with positive gap only; zero-width cells carry no information.
PiecewiseLinearFn nodal_fn(const std::vector<double>& xi, const std::vector<double>& vals) {
  std::vector<double> xs, vs;
  xs.reserve(xi.size());
  vs.reserve(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!xs.empty() && xi[i] <= xs.back()) {
      vs.back() = vals[i];
      continue;
    }
    xs.push_back(xi[i]);
    vs.push_back(vals[i]);
  }
  return {std::move(xs), std::move(vs)};
}

PiecewiseConstantFn cell_fn(const std::vector<double>& xi, const std::vector<double>& vals) {
  PiecewiseConstantFn f;
  if (xi.empty()) return f;
  f.breaks.push_back(xi.front());
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
    if (xi[i + 1] <= f.breaks.back()) continue;
    f.breaks.push_back(xi[i + 1]);
    f.values.push_back(vals[i]);
  }
  if (f.values.empty()) f.breaks.clear();
  return f;
}

double breaking_time(double y_xi, double U_xi) {
  if (y_xi == 0.0 && U_xi == 0.0) return 0.0;
  if (U_xi < 0.0) return -2.0 * y_xi / U_xi;
  return kInf;
}

struct CellBuilder {
  LagrangianState X;

  void push_cell(double xi_r, double y_xi, double U_xi, double V_xi, double H_xi) {
    const double w = xi_r - X.xi.back();
    if (w <= 0.0) {
      X.xi.push_back(X.xi.back());
      y_xi = U_xi = V_xi = H_xi = 0.0;
    } else {
      X.xi.push_back(xi_r);
    }
    X.y_xi.push_back(y_xi);
    X.U_xi.push_back(U_xi);
    X.V_xi.push_back(V_xi);
    X.H_xi.push_back(H_xi);
  }

  void push_regular(double xi_r, double su, double sF, double sG) {
    const double yx = 1.0 / (1.0 + sG);
    push_cell(xi_r, yx, su * yx, sF * yx, sG * yx);
  }

  void push_jump(double xi_r, double F_mass, double G_mass) {
    push_cell(xi_r, 0.0, 0.0, G_mass > 0.0 ? F_mass / G_mass : 0.0, 1.0);
  }
};

void assemble_nodes(LagrangianState& X) {
  const std::size_t n = X.num_cells();
  X.y.assign(n + 1, 0.0);
  X.U.assign(n + 1, 0.0);
  X.V.assign(n + 1, 0.0);
  X.H.assign(n + 1, 0.0);
  if (X.xi.empty()) {
    X.V_inf = X.H_inf = 0.0;
    return;
  }
  double zeta = X.zeta_minus_inf;
  X.y[0] = X.xi[0] + zeta;
  X.U[0] = X.U_minus_inf;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = X.width(i);
    zeta += (X.y_xi[i] - 1.0) * w;
    X.y[i + 1] = X.xi[i + 1] + zeta;
    X.U[i + 1] = X.U[i] + X.U_xi[i] * w;
    X.V[i + 1] = X.V[i] + X.V_xi[i] * w;
    X.H[i + 1] = X.H[i] + X.H_xi[i] * w;
  }
  X.V_inf = X.V[n];
  X.H_inf = X.H[n];
}

LagrangianState finish(CellBuilder&& b, double u_left) {
  LagrangianState X = std::move(b.X);
  X.U_minus_inf = u_left;
  X.zeta_minus_inf = 0.0;
  X.tau = wave_break_times(X);
  assemble_nodes(X);
  return X;
}

}  // namespace

PiecewiseLinearFn LagrangianState::zeta_fn() const {
  if (xi.empty()) return PiecewiseLinearFn::constant(zeta_minus_inf);
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] - xi[i];
  return nodal_fn(xi, z);
}

PiecewiseLinearFn LagrangianState::U_fn() const {
  if (xi.empty()) return PiecewiseLinearFn::constant(U_minus_inf);
  return nodal_fn(xi, U);
}

PiecewiseLinearFn LagrangianState::V_fn() const { return nodal_fn(xi, V); }
PiecewiseLinearFn LagrangianState::H_fn() const { return nodal_fn(xi, H); }

PiecewiseConstantFn LagrangianState::zeta_xi_fn() const {
  std::vector<double> v(y_xi.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = y_xi[i] - 1.0;
  return cell_fn(xi, v);
}

PiecewiseConstantFn LagrangianState::U_xi_fn() const { return cell_fn(xi, U_xi); }
PiecewiseConstantFn LagrangianState::V_xi_fn() const { return cell_fn(xi, V_xi); }
PiecewiseConstantFn LagrangianState::H_xi_fn() const { return cell_fn(xi, H_xi); }

double LagrangianState::y_at(double label) const { return label + zeta_fn()(label); }

LagrangianState to_lagrangian(const ProjectionResult& projected) {
  const EulerianTriple& s = projected.state;
  const GridSpec& grid = projected.grid;
  if (grid.num_blocks() <= 0) throw ValidationError("to_lagrangian: empty grid");
  for (const Atom& a : s.G.atoms()) {
    const double r = (a.x - grid.origin) / (2.0 * grid.dx);
    if (std::abs(r - std::round(r)) > 1e-9) {
      throw ValidationError("to_lagrangian: atom off the block lattice");
    }
  }
  const auto& cu = s.u;
  const auto& cF = s.F.continuous_part();
  const auto& cG = s.G.continuous_part();

  CellBuilder b;
  b.X.t = 0.0;
  b.X.alpha = s.alpha;
  const double x0 = grid.x(2 * grid.j_min);
  b.X.xi.push_back(x0 + s.G.eval_left(x0));
  const bool use_blocks = projected.blocks.size() == static_cast<std::size_t>(grid.num_blocks());
  for (long j = grid.j_min; j <= grid.j_max; ++j) {
    const double xl = grid.x(2 * j);
    const double xm = grid.x(2 * j + 1);
    const double xr = grid.x(2 * j + 2);
    const double dx = grid.dx;
    b.push_jump(xl + s.G.eval_right(xl), s.F.atom_mass_at(xl), s.G.atom_mass_at(xl));
    const double Gm = s.G.eval_left(xm);
    const double Gr = s.G.eval_left(xr);
    double su1 = (cu(xm) - cu(xl)) / dx, su2 = (cu(xr) - cu(xm)) / dx;
    double sF1 = (cF(xm) - cF(xl)) / dx, sF2 = (cF(xr) - cF(xm)) / dx;
    double sG1 = (cG(xm) - cG(xl)) / dx, sG2 = (cG(xr) - cG(xm)) / dx;
    if (use_blocks) {
      // Differencing cumulative F loses digits when F is large; the fit slopes are exact.
      const BlockCoefficients& c = projected.blocks[static_cast<std::size_t>(j - grid.j_min)];
      su1 = c.left_slope();
      su2 = c.right_slope();
      const double e1 = sG1 - sF1, e2 = sG2 - sF2;
      sF1 = su1 * su1;
      sF2 = su2 * su2;
      const bool same = cG(xl) == cF(xl) && cG(xm) == cF(xm) && cG(xr) == cF(xr);
      sG1 = same ? sF1 : sF1 + std::max(e1, 0.0);
      sG2 = same ? sF2 : sF2 + std::max(e2, 0.0);
    }
    b.push_regular(xm + Gm, su1, sF1, sG1);
    b.push_regular(xr + Gr, su2, sF2, sG2);
  }
  return finish(std::move(b), cu(x0));
}

LagrangianState to_lagrangian(const EulerianTriple& s) {
  std::vector<double> pts(s.u.nodes().begin(), s.u.nodes().end());
  auto add = [&pts](std::span<const double> more) { pts = refine(pts, more).merged_nodes; };
  add(s.F.continuous_part().nodes());
  add(s.G.continuous_part().nodes());
  std::vector<double> ax;
  for (const Atom& a : s.F.atoms()) ax.push_back(a.x);
  for (const Atom& a : s.G.atoms()) ax.push_back(a.x);
  std::sort(ax.begin(), ax.end());
  add(ax);

  CellBuilder b;
  b.X.t = 0.0;
  b.X.alpha = s.alpha;
  if (pts.empty()) {
    LagrangianState X = std::move(b.X);
    X.U_minus_inf = s.u.left_tail();
    return X;
  }
  const auto& cu = s.u;
  const auto& cF = s.F.continuous_part();
  const auto& cG = s.G.continuous_part();
  b.X.xi.push_back(pts[0] + s.G.eval_left(pts[0]));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i];
    const double Gm = s.G.atom_mass_at(x);
    if (Gm > 0.0) b.push_jump(x + s.G.eval_right(x), s.F.atom_mass_at(x), Gm);
    if (i + 1 == pts.size()) break;
    const double xr = pts[i + 1];
    const double h = xr - x;
    b.push_regular(xr + s.G.eval_left(xr), (cu(xr) - cu(x)) / h, (cF(xr) - cF(x)) / h,
                   (cG(xr) - cG(x)) / h);
  }
  return finish(std::move(b), cu(pts[0]));
}

std::vector<double> wave_break_times(const LagrangianState& X0) {
  std::vector<double> tau(X0.num_cells());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    tau[i] = X0.width(i) > 0.0 ? breaking_time(X0.y_xi[i], X0.U_xi[i]) : kInf;
  }
  return tau;
}

LagrangianState evolve(const LagrangianState& X0, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolve: t must be >= 0");
  if (X0.t != 0.0) throw std::invalid_argument("evolve: initial state must be at t = 0");
  LagrangianState X = X0;
  X.t = t;
  const double a = X0.alpha;

  double V_inf0 = 0.0;
  double dU = 0.0;     // sum over broken cells of V_xi0 w (t - tau)
  double dzeta = 0.0;  // same with (t - tau)^2
  for (std::size_t i = 0; i < X0.num_cells(); ++i) {
    const double w = X0.width(i);
    const double y0 = X0.y_xi[i];
    const double U0 = X0.U_xi[i];
    const double V0 = X0.V_xi[i];
    const double tau = X0.tau[i];
    V_inf0 += V0 * w;
    if (tau > 0.0 && t >= tau) {
      const double s = t - tau;
      const double V = (1.0 - a) * V0;
      X.V_xi[i] = V;
      X.U_xi[i] = 0.5 * s * V;
      X.y_xi[i] = 0.25 * s * s * V;
      dU += V0 * w * s;
      dzeta += V0 * w * s * s;
    } else {
      X.V_xi[i] = V0;
      X.U_xi[i] = U0 + 0.5 * t * V0;
      X.y_xi[i] = y0 + t * U0 + 0.25 * t * t * V0;
    }
  }
  X.U_minus_inf = X0.U_minus_inf - 0.25 * V_inf0 * t + 0.25 * a * dU;
  X.zeta_minus_inf =
      X0.zeta_minus_inf + X0.U_minus_inf * t - 0.125 * V_inf0 * t * t + 0.125 * a * dzeta;
  assemble_nodes(X);
  return X;
}

EulerianTriple to_eulerian(const LagrangianState& X) {
  if (X.xi.empty()) {
    EulerianTriple z = EulerianTriple::zero(X.alpha);
    z.u = PiecewiseLinearFn::constant(X.U_minus_inf);
    return z;
  }
  const std::size_t n = X.num_cells();
  const double span = X.y.back() - X.y.front();
  const double collapse_tol = 1e-13 * std::max(1.0, std::abs(span));

  std::vector<double> xs{X.y[0]}, us{X.U[0]}, Fs{0.0}, Gs{0.0};
  std::vector<Atom> F_atoms, G_atoms;
  double Fc = 0.0, Gc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = X.width(i);
    if (w <= 0.0) continue;
    if (X.y_xi[i] * w < collapse_tol) {
      F_atoms.push_back({xs.back(), X.V_xi[i] * w});
      G_atoms.push_back({xs.back(), X.H_xi[i] * w});
      continue;
    }
    Fc += X.V_xi[i] * w;
    Gc += X.H_xi[i] * w;
    xs.push_back(std::max(X.y[i + 1], xs.back()));
    us.push_back(X.U[i + 1]);
    Fs.push_back(Fc);
    Gs.push_back(Gc);
  }
  EulerianTriple s;
  s.u = PiecewiseLinearFn(xs, us);
  s.F = MonotoneCDF(PiecewiseLinearFn(xs, Fs), F_atoms);
  s.G = MonotoneCDF(PiecewiseLinearFn(xs, Gs), G_atoms);
  s.support = {xs.front(), xs.back()};
  s.alpha = X.alpha;
  return s;
}

StabilityDensityLagrangian g_stability(const LagrangianState& X) {
  StabilityDensityLagrangian g;
  g.per_cell.resize(X.num_cells());
  for (std::size_t i = 0; i < g.per_cell.size(); ++i) {
    g.per_cell[i] = X.U_xi[i] < 0.0 ? (1.0 - X.alpha) * X.V_xi[i] : X.V_xi[i];
  }
  g.density = cell_fn(X.xi, g.per_cell);
  return g;
}

MetricTerms metric_terms(const LagrangianState& X, const LagrangianState& Y) {
  if (X.alpha != Y.alpha) throw std::invalid_argument("metric_d: alpha mismatch");
  if (std::abs(X.t - Y.t) > 1e-14 * std::max(1.0, std::abs(X.t))) {
    throw std::invalid_argument("metric_d: time stamps differ");
  }
  auto g_plus = [](const LagrangianState& Z) {
    const auto g = g_stability(Z);
    std::vector<double> v(Z.num_cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.per_cell[i] + Z.y_xi[i] - 1.0;
    return cell_fn(Z.xi, v);
  };
  MetricTerms m;
  m.y_inf = norm_diff(X.zeta_fn(), Y.zeta_fn(), Norm::Linf);
  m.U_inf = norm_diff(X.U_fn(), Y.U_fn(), Norm::Linf);
  m.H_xi_l1 = piecewise_constant_norm_diff(X.H_xi_fn(), Y.H_xi_fn(), Norm::L1);
  m.y_xi_l2 = piecewise_constant_norm_diff(X.zeta_xi_fn(), Y.zeta_xi_fn(), Norm::L2);
  m.U_xi_l2 = piecewise_constant_norm_diff(X.U_xi_fn(), Y.U_xi_fn(), Norm::L2);
  m.g_plus_y_xi_l2 = piecewise_constant_norm_diff(g_plus(X), g_plus(Y), Norm::L2);
  m.H_xi_l2 = piecewise_constant_norm_diff(X.H_xi_fn(), Y.H_xi_fn(), Norm::L2);
  return m;
}

double metric_d(const LagrangianState& X, const LagrangianState& Y) {
  return metric_terms(X, Y).total();
}

InvariantReport check_invariants(const LagrangianState& X0, const LagrangianState& Xt) {
  if (X0.num_cells() != Xt.num_cells()) throw std::invalid_argument("check_invariants: cell mismatch");
  InvariantReport r;
  const double t = Xt.t;
  const double a = X0.alpha;
  const double grow = std::exp(0.5 * t);
  for (std::size_t i = 0; i < X0.num_cells(); ++i) {
    const double y0 = X0.y_xi[i], U0 = X0.U_xi[i], V0 = X0.V_xi[i], H0 = X0.H_xi[i];
    const double y = Xt.y_xi[i], U = Xt.U_xi[i], V = Xt.V_xi[i], H = Xt.H_xi[i];

    // Size of the summands entering U^2 and y V, so rounding is measured relative to them.
    const double Um = std::abs(U0) + 0.5 * t * V0;
    const double ym = y0 + t * std::abs(U0) + 0.25 * t * t * V0;
    const double mag = std::max(Um * Um + ym * V0, 1e-300);
    r.max_identity_residual = std::max(r.max_identity_residual, std::abs(U * U - y * V) / mag);

    r.max_H_drift = std::max(r.max_H_drift, std::abs(H - H0));
    const double hs = std::max(H0, 1e-300);
    r.max_V_excess = std::max({r.max_V_excess, (V - H) / hs, -V / hs, -H / hs, -y / std::max(ym, 1e-300)});

    const double g0 = U0 < 0.0 ? (1.0 - a) * V0 : V0;
    const double g = U < 0.0 ? (1.0 - a) * V : V;
    r.max_g_drift = std::max(r.max_g_drift, std::abs(g - g0));

    const double s0 = y0 + H0;
    const double s = y + H;
    if (s0 > 0.0) {
      const double lo = s0 / grow;
      const double hi = s0 * grow;
      const double breach = std::max(lo - s, s - hi) / s0;
      r.max_growth_violation = std::max(r.max_growth_violation, breach);
    }
  }
  for (std::size_t i = 0; i < X0.H.size(); ++i) {
    r.max_H_drift = std::max(r.max_H_drift, std::abs(Xt.H[i] - X0.H[i]));
  }
  return r;
}

}  // namespace hsalpha
