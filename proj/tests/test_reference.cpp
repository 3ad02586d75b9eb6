#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsalpha/lagrangian.hpp"
#include "hsalpha/projection.hpp"
#include "hsalpha/reference.hpp"

using namespace hsalpha;
using namespace hsalpha::reference;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kC = 2.0 / kPi;

template <class Fn>
double integrate(Fn f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

// Labels across the nontrivial range, including its ends.
std::vector<double> label_sweep(const ExactSolutionSpec& spec, int n) {
  const Window w = lagrangian_support(spec);
  std::vector<double> xs;
  for (int i = -5; i <= n + 5; ++i) xs.push_back(w.lo + (w.hi - w.lo) * i / n);
  return xs;
}

}  // namespace

TEST_SUITE("reference") {
  TEST_CASE("implicit solvers: fixed points, residuals, monotonicity") {
    CHECK(cusp_ybar(-1.0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(cusp_ybar(4.0 / 3.0)) <= 1e-12);
    CHECK(cusp_ybar(11.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k <= 4; ++k) {
      CHECK(std::abs(cosine_ybar(k + k * kPi2 / 2) - k) <= 1e-12);
    }

    for (auto eq : {ImplicitYSolver::Equation::cusp, ImplicitYSolver::Equation::cosine}) {
      const ImplicitYSolver solver{eq};
      const double lo = eq == ImplicitYSolver::Equation::cusp ? -1.0 : 0.0;
      const double hi = eq == ImplicitYSolver::Equation::cusp ? 11.0 / 3.0 : 4.0 + 2.0 * kPi2;
      double prev = -kInf;
      for (int i = 0; i <= 2000; ++i) {
        const double xi = lo + (hi - lo) * i / 2000.0;
        const double y = solver.solve(xi);
        CHECK(std::abs(solver.residual(y, xi)) < 1e-12);
        CHECK(y >= prev);
        prev = y;
      }
      CHECK_THROWS_AS((void)solver.solve(hi + 1.0), std::domain_error);
    }
  }

  TEST_CASE("breaking times") {
    for (double xi = -0.99; xi <= 4.0 / 3.0; xi += 0.01) {
      CHECK(cusp_tau(xi) == doctest::Approx(3.0 * std::cbrt(std::abs(cusp_ybar(xi)))));
    }
    CHECK(cusp_tau(-1.5) == kInf);
    CHECK(cusp_tau(2.0) == kInf);
    double prev = cusp_breaking_curve(0.0);
    for (int i = 1; i <= 300; ++i) {
      const double c = cusp_breaking_curve(i / 100.0);
      CHECK(c < prev);
      prev = c;
    }
    CHECK(cosine_tau((2.0 + kPi2) / 4.0) == doctest::Approx(kC).epsilon(1e-12));
    CHECK(cosine_tau(5.0 * (2.0 + kPi2) / 4.0) == doctest::Approx(kC).epsilon(1e-12));
    for (double xi = 0.05; xi < 4.0 + 2.0 * kPi2; xi += 0.05) CHECK(cosine_tau(xi) >= kC * (1 - 1e-12));
  }

  TEST_CASE("energy formulas") {
    CHECK(cusp_total_energy(0.4, 0.0) == doctest::Approx(8.0 / 3.0));
    CHECK(cusp_total_energy(0.4, 3.0) == doctest::Approx(32.0 / 15.0));
    CHECK(cosine_total_energy(0.6, 0.0) == doctest::Approx(2.0 * kPi2));
    CHECK(cosine_total_energy(0.6, kC) == doctest::Approx(2.0 * kPi2).epsilon(1e-15));
    // The loss starts like sqrt(t - 2/pi).
    CHECK(std::abs(cosine_total_energy(0.6, std::nextafter(kC, 1.0)) - 2.0 * kPi2) <= 1e-6);
    CHECK(cosine_total_energy(0.6, 1e8) == doctest::Approx(1.4 * kPi2).epsilon(1e-10));
    for (double t = 0.0; t <= 10.0; t += 0.1) CHECK(cosine_total_energy(0.0, t) == doctest::Approx(2.0 * kPi2));
    double prev = kInf;
    for (double t = 0.0; t <= 10.0; t += 0.01) {
      const double e = cosine_total_energy(0.6, t);
      CHECK(e <= prev);
      prev = e;
    }
  }

  TEST_CASE("b and B against quadrature") {
    for (double a : {0.0, 0.3, 0.6, 1.0}) {
      CHECK(cosine_b(a, kC) == 0.0);
      CHECK(cosine_B(a, kC) == 0.0);
      for (double t = kC; t <= 6.0; t += 0.25) {
        const double b = integrate([a](double s) { return cosine_total_energy(a, s); }, kC, t);
        const double B = integrate([a](double s) { return cosine_b(a, s); }, kC, t);
        CHECK(std::abs(cosine_b(a, t) - b) <= 1e-8);
        CHECK(std::abs(cosine_B(a, t) - B) <= 1e-8);
      }
    }
  }

  TEST_CASE("Lagrangian far-field V equals Eulerian energy") {
    for (double a : {0.0, 0.4, 1.0}) {
      for (double t = 0.0; t <= 5.0; t += 0.05) {
        CHECK(multipeakon_lagrangian(a, 0.5, t, 100.0).V ==
              doctest::Approx(ExactSolutionSpec::multipeakon(a, 0.5).total_energy(t)).epsilon(1e-10));
        CHECK(cosine_lagrangian(a, t, 100.0).V == doctest::Approx(cosine_total_energy(a, t)).epsilon(1e-10));
        if (t <= 3.0) CHECK(cusp_lagrangian(a, t, 100.0).V == doctest::Approx(cusp_total_energy(a, t)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("multipeakon reference values") {
    const double b = 0.5;
    CHECK(multipeakon_lagrangian(0.5, b, 1.0, -1.0).U == doctest::Approx(-(2.0 + b) / 4.0));
    CHECK(multipeakon_lagrangian(0.5, b, 2.0, 3.0 + b).y == doctest::Approx((6.0 + b) / 2.0));
    for (double t : {0.0, 1.0, 2.0, 3.5}) {
      for (double xi = -1.0; xi <= 6.0; xi += 0.1) {
        CHECK(multipeakon_lagrangian(0.5, b, t, xi).H == doctest::Approx(multipeakon_lagrangian(0.5, b, 0.0, xi).V));
      }
    }
  }

  TEST_CASE("cusp reference values") {
    for (double x = -1.0; x <= 1.0; x += 0.01) {
      CHECK(cusp_eulerian(0.4, 0.0, x).u == doctest::Approx(std::pow(std::abs(x), 2.0 / 3.0)).epsilon(1e-12));
    }
    CHECK(cusp_eulerian(0.4, 0.0, 2.0).F_left == doctest::Approx(8.0 / 3.0));
    CHECK_THROWS_AS(cusp_eulerian(0.4, 3.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(ExactSolutionSpec::cusp(0.4).check_time(3.5), std::domain_error);
  }

  TEST_CASE("Eulerian u is continuous across branch boundaries") {
    for (double a : {0.0, 0.4, 0.5, 1.0}) {
      for (int i = 1; i <= 100; ++i) {
        const double t = i / 20.0;
        for (double x : multipeakon_breakpoints(a, 0.5, t)) {
          const double l = multipeakon_eulerian(a, 0.5, t, x).u;
          const double r = multipeakon_eulerian(a, 0.5, t, std::nextafter(x, kInf)).u;
          CHECK(std::abs(l - r) <= 1e-10);
        }
        if (t > 3.0) continue;
        for (double x : cusp_breakpoints(a, t)) {
          const double l = cusp_eulerian(a, t, x).u;
          const double r = cusp_eulerian(a, t, std::nextafter(x, kInf)).u;
          CHECK(std::abs(l - r) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("Eulerian and Lagrangian forms agree along characteristics") {
    for (const auto& spec : {ExactSolutionSpec::multipeakon(0.5, 0.5), ExactSolutionSpec::multipeakon(0.2, 1.5),
                             ExactSolutionSpec::cusp(0.4), ExactSolutionSpec::cusp(1.0)}) {
      const double T = spec.kind == Kind::cusp ? 3.0 : 4.0;
      for (int i = 0; i <= 24; ++i) {
        const double t = T * i / 24;
        for (double xi : label_sweep(spec, 400)) {
          // F is bracketed just outside y, which may sit on an atom up to rounding.
          const LagrangianValue L = lagrangian(spec, t, xi);
          const double h = 1e-9;
          CHECK(eulerian(spec, t, L.y).u == doctest::Approx(L.U).epsilon(1e-9).scale(1.0));
          CHECK(eulerian(spec, t, L.y - h).F_left <= L.V + 1e-9);
          CHECK(L.V <= eulerian(spec, t, L.y + h).F_right + 1e-9);
        }
      }
    }
  }

  TEST_CASE("cosine Lagrangian: continuity in the label and the identity U_xi^2 = y_xi V_xi") {
    const auto spec = ExactSolutionSpec::cosine(0.6);
    for (double t : {0.0, 0.3, kC, 0.8, 1.3, 2.5}) {
      const auto xs = label_sweep(spec, 4000);
      for (std::size_t i = 1; i < xs.size(); ++i) {
        const auto p = cosine_lagrangian(0.6, t, xs[i - 1]);
        const auto q = cosine_lagrangian(0.6, t, xs[i]);
        CHECK(q.y >= p.y - 1e-12);
        CHECK(q.H >= p.H - 1e-12);
        CHECK(std::abs(q.U - p.U) <= 0.2);
        CHECK(std::abs(q.V - p.V) <= 0.1);
      }
      // Finite differences on smooth stretches.
      for (double xi = 0.5; xi < 4.0 + 2.0 * kPi2 - 0.5; xi += 0.37) {
        const double h = 1e-6;
        const auto m = cosine_lagrangian(0.6, t, xi - h);
        const auto p = cosine_lagrangian(0.6, t, xi + h);
        const double yx = (p.y - m.y) / (2 * h), Ux = (p.U - m.U) / (2 * h), Vx = (p.V - m.V) / (2 * h);
        if (std::abs(Vx) < 1e-8 && std::abs(Ux) < 1e-8) continue;
        CHECK(Ux * Ux == doctest::Approx(yx * Vx).epsilon(1e-4).scale(1e-2));
      }
    }
  }

  TEST_CASE("probe: aligned multipeakon is exact") {
    const auto spec = ExactSolutionSpec::multipeakon(0.5, 0.5);
    const auto s = multipeakon_initial(0.5, 0.5);
    const auto X0 = to_lagrangian(project(s, GridSpec::covering(0.5, 0.0, s.support)));
    SamplingPlan plan;
    for (int i = 0; i <= 64; ++i) plan.times.push_back(4.0 * i / 64);
    plan.mesh_dx = 0.5 / 16;
    const auto rec = exact_error_probe(spec, X0, plan);
    CHECK(rec.err_u_sup < 1e-10);
    CHECK(rec.err_Finf < 1e-12);
    CHECK(rec.err_A < 0.0);
  }

  TEST_CASE("probe at T = 0 is within the projection bound") {
    for (const auto& spec : {ExactSolutionSpec::cusp(0.4), ExactSolutionSpec::cosine(0.6)}) {
      const auto sampler = initial_sampler(spec);
      for (double dx : {0.1, 0.05}) {
        const auto P = project(sampler, GridSpec::covering(dx, 0.0, sampler.support));
        SamplingPlan plan{{0.0}, dx / 16};
        const auto rec = exact_error_probe(spec, to_lagrangian(P), plan);
        const double Fac = spec.total_energy(0.0);
        CHECK(rec.err_u_sup <= (1.0 + std::sqrt(2.0)) * std::sqrt(Fac * dx));
        CHECK(rec.err_Finf < 1e-10);
        if (spec.kind == Kind::cosine) CHECK(rec.err_A >= 0.0);
      }
    }
  }

  TEST_CASE("probe preconditions") {
    const auto s = multipeakon_initial(0.5, 0.5);
    const auto X0 = to_lagrangian(project(s, GridSpec::covering(0.5, 0.0, s.support)));
    CHECK_THROWS_AS(exact_error_probe(ExactSolutionSpec::multipeakon(0.5, 0.5), X0, SamplingPlan{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_error_probe(ExactSolutionSpec::cusp(0.5), X0, SamplingPlan{{4.0}, 0.1}),
                    std::domain_error);
  }
}
