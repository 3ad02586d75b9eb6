#include "hsalpha/projection.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hsalpha/errors.hpp"

namespace hsalpha {

GridSpec GridSpec::covering(double dx, double origin, Window support) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("grid spacing must be positive");
  GridSpec g{dx, origin, 0, -1};
  g.j_min = static_cast<long>(std::floor((support.lo - origin) / (2.0 * dx)));
  while (g.x(2 * g.j_min) >= support.lo) --g.j_min;
  while (g.x(2 * g.j_min + 2) < support.lo) ++g.j_min;
  g.j_max = static_cast<long>(std::ceil((support.hi - origin) / (2.0 * dx))) - 1;
  while (g.x(2 * g.j_max + 2) <= support.hi) ++g.j_max;
  while (g.j_max > g.j_min && g.x(2 * g.j_max) > support.hi) --g.j_max;
  return g;
}

ProfileSampler ProfileSampler::from_state(const EulerianTriple& s) {
  ProfileSampler p;
  p.u = [u = s.u](double x) { return u(x); };
  p.F_ac = [F = s.F](double x) { return F.continuous_part()(x); };
  p.F_sing = [F = s.F](double x) { return F.singular_left(x); };
  p.G_ac = [G = s.G](double x) { return G.continuous_part()(x); };
  p.G_sing = [G = s.G](double x) { return G.singular_left(x); };
  p.alpha = s.alpha;
  p.support = s.support;
  return p;
}

double block_q(double Du, double DF_ac, double slack) {
  const double rad = DF_ac - Du * Du;
  if (rad >= 0.0) return std::sqrt(rad);
  if (-rad <= 1e-12 * std::max(DF_ac, Du * Du) + slack) return 0.0;
  throw ValidationError("projection: block energy below Cauchy-Schwarz bound (deficit " +
                        std::to_string(-rad) + ")");
}

int select_sign(double Du, double q, double u_left, double u_mid, double dx) {
  const double Dplus = (u_mid - u_left) / dx;
  const double d0 = std::abs((Dplus - Du) * dx - q * dx);
  const double d1 = std::abs((Dplus - Du) * dx + q * dx);
  return d1 < d0 ? 1 : 0;
}

namespace {

void check_window(const ProfileSampler& data, const GridSpec& grid) {
  if (grid.num_blocks() <= 0) throw ValidationError("projection: empty grid");
  const Window w = grid.window();
  if (!(w.lo < data.support.lo) || !(w.hi > data.support.hi)) {
    throw ValidationError("projection: support exceeds grid window");
  }
}

ProjectionResult project_impl(const ProfileSampler& data, const GridSpec& grid, bool general) {
  check_window(data, grid);
  const double dx = grid.dx;
  const long i0 = 2 * grid.j_min;
  const long i1 = 2 * grid.j_max + 2;
  const auto n = static_cast<std::size_t>(i1 - i0 + 1);

  std::vector<double> xs(n), us(n), Fs(n), Gs(n);
  std::vector<Atom> F_atoms, G_atoms;
  std::vector<BlockCoefficients> blocks;
  blocks.reserve(static_cast<std::size_t>(grid.num_blocks()));

  const double F_total = data.F_ac(grid.x(i1)) + data.F_sing(grid.x(i1));

  for (long j = grid.j_min; j <= grid.j_max; ++j) {
    const double xl = grid.x(2 * j);
    const double xm = grid.x(2 * j + 1);
    const double xr = grid.x(2 * j + 2);
    const double ul = data.u(xl);
    const double um = data.u(xm);
    const double ur = data.u(xr);
    const double Fl = data.F_ac(xl);
    const double Fr = data.F_ac(xr);

    BlockCoefficients b;
    b.Du = (ur - ul) / (2.0 * dx);
    b.DF_ac = (Fr - Fl) / (2.0 * dx);
    // Rounding carried by the differences of cumulative values.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double slack = 4.0 * eps * ((std::abs(Fl) + std::abs(Fr)) + 2.0 * std::abs(b.Du) * (std::abs(ul) + std::abs(ur))) / (2.0 * dx);
    b.q = block_q(b.Du, b.DF_ac, slack);
    b.k = select_sign(b.Du, b.q, ul, um, dx);
    const double s1 = b.left_slope();

    const auto m = static_cast<std::size_t>(2 * j - i0);
    xs[m] = xl;
    xs[m + 1] = xm;
    us[m] = ul;
    us[m + 1] = ul + s1 * dx;
    Fs[m] = Fl;
    Fs[m + 1] = Fl + s1 * s1 * dx;
    xs[m + 2] = xr;
    us[m + 2] = ur;
    Fs[m + 2] = Fr;

    const double F_jump = data.F_sing(xr) - data.F_sing(xl);
    if (F_jump > 1e-14 * F_total) F_atoms.push_back({xl, F_jump});

    if (general) {
      const double Gl = data.G_ac(xl);
      const double Gr = data.G_ac(xr);
      const double excess = (Gr - Gl) / (2.0 * dx) - b.DF_ac;
      Gs[m] = Gl;
      Gs[m + 1] = Gl + s1 * s1 * dx + excess * dx;
      Gs[m + 2] = Gr;
      const double G_jump = data.G_sing(xr) - data.G_sing(xl);
      if (G_jump > 1e-14 * F_total) G_atoms.push_back({xl, G_jump});
    }
    blocks.push_back(b);
  }

  // Tight support: blocks where u_dx is flat and carries no mass lie outside it.
  std::size_t first = n - 1, last = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (us[i + 1] != us[i] || Fs[i + 1] != Fs[i] || Gs[i + 1] != Gs[i]) {
      first = std::min(first, i);
      last = std::max(last, i + 1);
    }
  }
  for (const auto* atoms : {&F_atoms, &G_atoms}) {
    for (const Atom& a : *atoms) {
      const auto i = static_cast<std::size_t>(std::lround((a.x - grid.x(i0)) / dx));
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  const Window support = first <= last ? Window{xs[first], xs[last]} : Window{xs[0], xs[0]};

  ProjectionResult out;
  out.grid = grid;
  out.blocks = std::move(blocks);
  PiecewiseLinearFn u(xs, us);
  MonotoneCDF F(PiecewiseLinearFn(xs, Fs), F_atoms);
  if (general) {
    MonotoneCDF G(PiecewiseLinearFn(xs, Gs), G_atoms);
    out.state = EulerianTriple{std::move(u), std::move(F), std::move(G), support, data.alpha};
  } else {
    out.state = EulerianTriple{std::move(u), F, F, support, data.alpha};
  }
  return out;
}

}  // namespace

ProjectionResult project(const ProfileSampler& data, const GridSpec& grid) {
  return project_impl(data, grid, false);
}

ProjectionResult project(const EulerianTriple& s, const GridSpec& grid) {
  const ValidationReport r = validate_D0(s);
  if (!r.ok()) throw ValidationError("projection: input is not in D0: " + r.summary());
  return project(ProfileSampler::from_state(s), grid);
}

ProjectionResult project_general(const ProfileSampler& data, const GridSpec& grid) {
  if (!data.G_ac || !data.G_sing) return project_impl(data, grid, false);
  return project_impl(data, grid, true);
}

ProjectionResult project_general(const EulerianTriple& s, const GridSpec& grid) {
  const ValidationReport r = validate_D(s);
  if (!r.ok()) throw ValidationError("projection: input is not admissible: " + r.summary());
  return project_general(ProfileSampler::from_state(s), grid);
}

}  // namespace hsalpha
