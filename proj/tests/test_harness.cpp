#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hsalpha/errors.hpp"
#include "hsalpha/harness.hpp"
#include "hsalpha/reference.hpp"

using namespace hsalpha;
using namespace hsalpha::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hsalpha_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

ExperimentConfig small_multipeakon() {
  ExperimentConfig c;
  c.example = Example::multipeakon;
  c.dx_list = {0.25, 0.125, 0.0625};
  c.T = 4.0;
  c.n_time_samples = 33;
  return c;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("fit_order") {
    const std::vector<double> dx{0.2, 0.1, 0.05, 0.025};
    std::vector<double> lin, half, flat(4, 0.3), zero(4, 0.0);
    for (double h : dx) {
      lin.push_back(3.0 * h);
      half.push_back(3.0 * std::sqrt(h));
    }
    CHECK(fit_order(dx, lin).status == OrderFit::Status::fitted);
    CHECK(fit_order(dx, lin).order == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_order(dx, half).order == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(fit_order(dx, flat).order) < 1e-12);
    CHECK(fit_order(dx, zero).status == OrderFit::Status::exact);
    CHECK_FALSE(fit_order(dx, zero).defined());
    CHECK(fit_order({0.2, 0.1}, {0.2, 0.1}).status == OrderFit::Status::insufficient);
    // rows with zero error do not count
    CHECK(fit_order(dx, {0.2, 0.1, 0.0, 0.0}).status == OrderFit::Status::insufficient);
    CHECK(fit_order(dx, {0.2, 0.1, 0.05, 0.0}).order == doctest::Approx(1.0));
  }

  TEST_CASE("default dx list and time sampling") {
    const auto dx = default_dx_list();
    REQUIRE(dx.size() == 8);
    CHECK(dx.front() == doctest::Approx(0.24));
    CHECK(dx.back() == 6e-3);
    for (std::size_t i = 1; i < dx.size(); ++i) CHECK(dx[i] < dx[i - 1]);

    const auto ts = sample_times(4.0, 5, {2.0, 2.0 / 3.0, 7.0});
    CHECK(ts == std::vector<double>{0.0, 2.0 / 3.0, 1.0, 2.0, 3.0, 4.0});
    const auto ts2 = sample_times(1.3, 257, {2.0 / M_PI});
    CHECK(ts2.size() == 258);
    CHECK(ts2.front() == 0.0);
    CHECK(ts2.back() == 1.3);
    CHECK(std::find(ts2.begin(), ts2.end(), 2.0 / M_PI) != ts2.end());
  }

  TEST_CASE("config validation") {
    auto bad = [](auto mutate) {
      ExperimentConfig c = small_multipeakon();
      mutate(c);
      return c;
    };
    CHECK_NOTHROW(small_multipeakon().validate());
    CHECK_THROWS_AS(bad([](auto& c) { c.alpha = 1.5; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.beta = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.T = -1.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.n_time_samples = 1; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.threads = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.dx_list = {0.1, -0.05}; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.dx_list = {0.1, 0.2}; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.domain = Window{1.0, 0.0}; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.snapshot_times = {5.0}; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.example = Example::custom; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) { c.initial_data = "x.json"; }).validate(), ConfigError);
    CHECK_THROWS_AS(bad([](auto& c) {
                      c.example = Example::cusp;
                      c.T = 5.0;
                    }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_example("sine"), ConfigError);
    CHECK(parse_example("cosine") == Example::cosine);
  }

  TEST_CASE("aligned multipeakon run is exact") {
    ExperimentConfig c = small_multipeakon();
    c.dx_list = {0.5, 0.25};
    c.grid_origin = 0.0;
    c.n_time_samples = 257;
    const auto table = run_experiment(c);
    REQUIRE(table.rows.size() == 2);
    for (const auto& r : table.rows) {
      CHECK(r.err_u_sup < 1e-10);
      CHECK(r.err_Finf < 1e-12);
      CHECK_FALSE(r.err_A.has_value());
    }
    CHECK(table.order_Finf.status == OrderFit::Status::exact);
  }

  TEST_CASE("origin -1/2 recovers u at t = 0 only") {
    // The atom at 0 sits on an odd node and is lumped to the block start.
    ExperimentConfig c = small_multipeakon();
    c.dx_list = {0.5};
    c.T = 0.0;
    CHECK(run_experiment(c).rows[0].err_u_sup < 1e-12);
    c.T = 4.0;
    const auto r = run_experiment(c).rows[0];
    CHECK(r.err_u_sup == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.err_Finf < 1e-12);
  }

  TEST_CASE("error table rows, orders and CSV layout") {
    ExperimentConfig c;
    c.example = Example::cusp;
    c.alpha = 0.4;
    c.T = 3.0;
    c.dx_list = {0.2, 0.1, 0.05};
    c.n_time_samples = 17;
    c.threads = 3;
    const auto table = run_experiment(c);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].dx == 0.2);
    CHECK(table.rows[2].dx == 0.05);
    CHECK(table.order_u.defined());
    const auto csv = error_table_csv(table);
    std::istringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    CHECK(header == "dx,err_u_sup,err_Finf,err_A,order_u,order_Finf,order_A");
    int n = 0;
    while (std::getline(lines, row)) {
      ++n;
      CHECK(std::count(row.begin(), row.end(), ',') == 6);
      CHECK(row.find(format_double(table.order_u.order)) != std::string::npos);
    }
    CHECK(n == 3);
    CHECK(error_table_json(table).find("\"rows\"") != std::string::npos);
  }

  TEST_CASE("alpha = 0 keeps the energy") {
    for (Example e : {Example::multipeakon, Example::cusp, Example::cosine}) {
      ExperimentConfig c;
      c.example = e;
      c.alpha = 0.0;
      c.T = e == Example::cusp ? 3.0 : 1.3;
      c.dx_list = {0.2, 0.1};
      c.n_time_samples = 9;
      for (const auto& r : run_experiment(c).rows) CHECK(r.err_Finf <= 1e-12 * 2 * M_PI * M_PI);
    }
  }

  TEST_CASE("doubling the time samples barely moves the u-error") {
    for (Example e : {Example::multipeakon, Example::cusp, Example::cosine}) {
      ExperimentConfig c;
      c.example = e;
      c.alpha = e == Example::cosine ? 0.6 : 0.4;
      c.T = e == Example::multipeakon ? 4.0 : e == Example::cusp ? 3.0 : 1.3;
      c.dx_list = {0.1, 0.05};
      c.grid_origin = 0.0;
      const auto a = run_experiment(c);
      c.n_time_samples = 2 * c.n_time_samples - 1;
      const auto b = run_experiment(c);
      for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(b.rows[i].err_u_sup == doctest::Approx(a.rows[i].err_u_sup).epsilon(0.05));
      }
    }
  }

  TEST_CASE("snapshots") {
    const auto zero = snapshot_rows(EulerianTriple::zero(0.5), Window{-1.0, 1.0});
    REQUIRE(zero.size() == 2);
    for (const auto& r : zero) {
      CHECK(r.u == 0.0);
      CHECK(r.F_left == 0.0);
      CHECK(r.F_right == 0.0);
      CHECK(r.G_left == 0.0);
      CHECK(r.G_right == 0.0);
    }
    CHECK(zero[0].x == -1.0);
    CHECK(zero[1].x == 1.0);

    const auto s = reference::multipeakon_initial(0.5, 0.5);
    const auto rows = snapshot_rows(s);
    const auto at0 = std::find_if(rows.begin(), rows.end(), [](const SnapshotRow& r) { return r.x == 0.0; });
    REQUIRE(at0 != rows.end());
    CHECK(at0->F_right - at0->F_left == doctest::Approx(0.5));
    CHECK(at0->G_right - at0->G_left == doctest::Approx(0.5));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].x > rows[i - 1].x);

    const auto dir = scratch_dir("snap");
    std::filesystem::create_directories(dir);
    emit_snapshot(s, 0.0, dir / "s.csv");
    const auto back = read_snapshot(dir / "s.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].x == rows[i].x);
      CHECK(back[i].u == s.u(rows[i].x));
      CHECK(back[i].F_left == s.F.eval_left(rows[i].x));
      CHECK(back[i].F_right == s.F.eval_right(rows[i].x));
      CHECK(back[i].G_right == s.G.eval_right(rows[i].x));
    }
    const auto text = slurp(dir / "s.csv");
    CHECK(text.rfind("# t = 0\nx,u,F_left,F_right,G_left,G_right\n", 0) == 0);
    CHECK_THROWS(emit_snapshot(s, 0.0, dir / "missing" / "s.csv"));
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("exact snapshot follows the closed form") {
    const auto spec = reference::ExactSolutionSpec::multipeakon(0.5, 0.5);
    const auto rows = exact_snapshot_rows(spec, 1.0, 201);
    REQUIRE(rows.size() == 201);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].x >= rows[i - 1].x);
    for (const auto& r : rows) {
      CHECK(r.u == doctest::Approx(reference::multipeakon_eulerian(0.5, 0.5, 1.0, r.x).u).scale(1.0));
    }
  }

  TEST_CASE("outputs are written and reproducible") {
    ExperimentConfig c = small_multipeakon();
    c.threads = 3;
    c.snapshot_times = {0.0, 2.0, 4.0};
    const auto a = scratch_dir("run_a"), b = scratch_dir("run_b");
    c.output_dir = a;
    run_experiment(c);
    c.output_dir = b;
    c.threads = 1;
    run_experiment(c);

    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(a)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    CHECK(std::find(names.begin(), names.end(), "error_table.csv") != names.end());
    CHECK(std::find(names.begin(), names.end(), "plot.gp") != names.end());
    CHECK(std::find(names.begin(), names.end(), "snapshot_dx2_t2.csv") != names.end());
    CHECK(std::find(names.begin(), names.end(), "exact_t1.csv") != names.end());
    CHECK(names.size() == 3 * 3 + 3 + 2);
    for (const auto& n : names) CHECK(slurp(a / n) == slurp(b / n));

    const auto rows = read_snapshot(a / "snapshot_dx0_t1.csv");
    const double xc = (6.0 + 0.5) / 2;
    const auto atom = std::find_if(rows.begin(), rows.end(), [&](const SnapshotRow& r) { return std::abs(r.x - xc) < 1e-12; });
    REQUIRE(atom != rows.end());
    CHECK(atom->F_right - atom->F_left == doctest::Approx(0.5));
    CHECK(atom->G_right - atom->G_left == doctest::Approx(1.0));

    c.format = Format::json;
    c.output_dir = a;
    run_experiment(c);
    CHECK(std::filesystem::exists(a / "error_table.json"));
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
  }

  TEST_CASE("custom initial data") {
    const auto dir = scratch_dir("custom");
    std::filesystem::create_directories(dir);
    {
      std::ofstream(dir / "ok.json") << R"({"alpha": 0.5, "u": {"nodes": [0, 1, 2], "values": [0, 1, 0]},
                                            "F_atoms": [{"x": 0.5, "mass": 0.25}]})";
      std::ofstream(dir / "bad.json") << R"({"alpha": 0.5, "u": {"nodes": [0, 1], "values": [0, 1]},
                                             "F_continuous": {"nodes": [0, 1], "values": [0, 3]}})";
    }
    ExperimentConfig c;
    c.example = Example::custom;
    c.alpha = 0.5;
    c.T = 3.0;
    c.dx_list = {0.2, 0.1, 0.05};
    c.n_time_samples = 9;
    c.initial_data = dir / "ok.json";
    const auto table = run_experiment(c);
    CHECK_FALSE(table.has_reference);
    CHECK(table.rows.size() == 3);
    CHECK_FALSE(table.order_u.defined());
    c.initial_data = dir / "bad.json";
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
    c.initial_data = dir / "missing.json";
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
    std::filesystem::remove_all(dir);
  }
}
