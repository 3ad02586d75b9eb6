#include "hsalpha/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hsalpha/errors.hpp"
#include "hsalpha/lagrangian.hpp"
#include "hsalpha/projection.hpp"

namespace hsalpha::harness {

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kSignTol = 1e-12;
constexpr double kGrowthTol = 1e-12;
constexpr double kEnergyTol = 1e-12;

reference::ExactSolutionSpec spec_of(const ExperimentConfig& cfg) {
  switch (cfg.example) {
    case Example::multipeakon:
      return reference::ExactSolutionSpec::multipeakon(cfg.alpha, cfg.beta);
    case Example::cusp:
      return reference::ExactSolutionSpec::cusp(cfg.alpha);
    case Example::cosine:
      return reference::ExactSolutionSpec::cosine(cfg.alpha);
    case Example::custom:
      break;
  }
  throw std::logic_error("custom example has no reference");
}

Window hull(Window a, Window b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

struct Input {
  ProfileSampler sampler;
  double F_total = 0.0;
  bool general = false;
};

Input load_input(const ExperimentConfig& cfg) {
  Input in;
  if (cfg.example == Example::custom) {
    EulerianTriple s;
    try {
      s = load_initial_data(cfg.initial_data);
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("custom initial data rejected: ") + e.what());
    }
    in.F_total = total_energy(s);
    in.general = !validate_D0(s).ok();
    in.sampler = ProfileSampler::from_state(s);
    return in;
  }
  const auto spec = spec_of(cfg);
  in.sampler = reference::initial_sampler(spec);
  in.F_total = spec.total_energy(0.0);
  return in;
}

struct RunOutput {
  ErrorRow row;
  std::vector<std::pair<std::filesystem::path, std::string>> files;
};

std::string snapshot_csv(const std::vector<SnapshotRow>& rows, double t) {
  std::string out = "# t = " + format_double(t) + "\n";
  out += "x,u,F_left,F_right,G_left,G_right\n";
  for (const SnapshotRow& r : rows) {
    out += format_double(r.x) + ',' + format_double(r.u) + ',' + format_double(r.F_left) + ',' +
           format_double(r.F_right) + ',' + format_double(r.G_left) + ',' + format_double(r.G_right) +
           '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void validate_invariants(const LagrangianState& X0, const LagrangianState& Xt, double dx) {
  const InvariantReport r = check_invariants(X0, Xt);
  auto fail = [&](const char* what, double v) {
    throw ValidationError(std::string("invariant breached at dx = ") + format_double(dx) +
                          ", t = " + format_double(Xt.t) + ": " + what + " = " + format_double(v));
  };
  if (r.max_identity_residual > kIdentityTol) fail("U_xi^2 - y_xi V_xi", r.max_identity_residual);
  if (r.max_H_drift != 0.0) fail("H drift", r.max_H_drift);
  if (r.max_V_excess > kSignTol) fail("sign condition", r.max_V_excess);
  if (r.max_growth_violation > kGrowthTol) fail("growth bound", r.max_growth_violation);
}

RunOutput run_one(const ExperimentConfig& cfg, const Input& in, std::size_t index,
                  const std::vector<double>& times, double mesh_dx) {
  const double dx = cfg.dx_list[index];
  Window cover = in.sampler.support;
  if (cfg.domain) cover = hull(cover, *cfg.domain);
  const GridSpec grid = GridSpec::covering(dx, cfg.grid_origin, cover);
  const ProjectionResult P = in.general ? project_general(in.sampler, grid) : project(in.sampler, grid);

  const double E = total_energy(P.state);
  if (std::abs(E - in.F_total) > kEnergyTol * std::max(1.0, in.F_total)) {
    throw ValidationError("projection changed the energy at dx = " + format_double(dx) + ": " +
                          format_double(in.F_total) + " -> " + format_double(E));
  }
  const LagrangianState X0 = to_lagrangian(P);
  for (double t : times) validate_invariants(X0, evolve(X0, t), dx);

  RunOutput out;
  out.row.dx = dx;
  if (cfg.example != Example::custom) {
    const auto spec = spec_of(cfg);
    const reference::ErrorRecord rec = reference::exact_error_probe(spec, X0, {times, mesh_dx});
    out.row.err_u_sup = rec.err_u_sup;
    out.row.err_Finf = rec.err_Finf;
    if (rec.err_A >= 0.0) out.row.err_A = rec.err_A;
  }

  if (!cfg.output_dir.empty()) {
    for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k) {
      const double t = cfg.snapshot_times[k];
      const EulerianTriple Z = to_eulerian(evolve(X0, t));
      std::optional<Window> w;
      if (cfg.domain) w = hull(*cfg.domain, Z.support);
      const auto name = "snapshot_dx" + std::to_string(index) + "_t" + std::to_string(k) + ".csv";
      out.files.emplace_back(cfg.output_dir / name, snapshot_csv(snapshot_rows(Z, w), t));
    }
  }
  return out;
}

std::string order_cell(const OrderFit& f) {
  switch (f.status) {
    case OrderFit::Status::fitted:
      return format_double(f.order);
    case OrderFit::Status::exact:
      return "exact";
    case OrderFit::Status::insufficient:
      break;
  }
  return "";
}

nlohmann::json order_json(const OrderFit& f) {
  switch (f.status) {
    case OrderFit::Status::fitted:
      return f.order;
    case OrderFit::Status::exact:
      return "exact";
    case OrderFit::Status::insufficient:
      break;
  }
  return nullptr;
}

std::string plot_script(const ExperimentConfig& cfg, const ErrorTable& table) {
  std::ostringstream s;
  s << "# gnuplot script; run from this directory\n";
  s << "set datafile separator ','\n";
  s << "set datafile commentschars '#'\n";
  s << "set terminal pngcairo size 1200,800\n";
  s << "set key outside right\n";
  const bool exact = cfg.example != Example::custom;
  struct Panel {
    const char* name;
    const char* col;
    const char* label;
  };
  const Panel panels[] = {{"u", "2", "u"}, {"F", "4", "F (right limit)"}};
  for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k) {
    for (const Panel& p : panels) {
      s << "\nset output 'snapshot_t" << k << "_" << p.name << ".png'\n";
      s << "set title '" << p.label << " at t = " << format_double(cfg.snapshot_times[k]) << "'\n";
      s << "plot ";
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        s << "'snapshot_dx" << i << "_t" << k << ".csv' skip 2 using 1:" << p.col
          << " with lines title 'dx = " << format_double(table.rows[i].dx) << "', \\\n     ";
      }
      if (exact) {
        s << "'exact_t" << k << ".csv' skip 2 using 1:" << p.col
          << " with lines dt 2 lw 2 lc rgb 'black' title 'exact'\n";
      } else {
        s << "1/0 notitle\n";
      }
    }
  }
  if (exact && cfg.format == Format::csv) {
    s << "\nset output 'errors.png'\n";
    s << "set title 'errors against dx'\n";
    s << "set logscale xy\n";
    s << "set xlabel 'dx'\n";
    s << "plot 'error_table.csv' skip 1 using 1:2 with linespoints title 'sup_t |u - u_dx|', \\\n";
    s << "     'error_table.csv' skip 1 using 1:3 with linespoints title '|F_inf - F_dx,inf|'";
    if (cfg.example == Example::cosine) {
      s << ", \\\n     'error_table.csv' skip 1 using 1:4 with linespoints title 'A_dx'";
    }
    s << "\nunset logscale\n";
  }
  return s.str();
}

}  // namespace

Example parse_example(const std::string& name) {
  if (name == "multipeakon") return Example::multipeakon;
  if (name == "cusp") return Example::cusp;
  if (name == "cosine") return Example::cosine;
  if (name == "custom") return Example::custom;
  throw ConfigError("unknown example '" + name + "'");
}

const char* example_name(Example e) {
  switch (e) {
    case Example::multipeakon:
      return "multipeakon";
    case Example::cusp:
      return "cusp";
    case Example::cosine:
      return "cosine";
    case Example::custom:
      return "custom";
  }
  return "";
}

void ExperimentConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (example == Example::multipeakon && !(beta > 0.0 && std::isfinite(beta))) {
    throw ConfigError("beta must be a positive number");
  }
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("T must be a nonnegative number");
  if (example == Example::cusp && T > 3.0) throw ConfigError("cusp solution is only valid for T <= 3");
  if (n_time_samples < 2) throw ConfigError("need at least 2 time samples");
  if (threads < 1) throw ConfigError("threads must be positive");
  for (double dx : dx_list) {
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("dx values must be positive");
  }
  for (std::size_t i = 1; i < dx_list.size(); ++i) {
    if (!(dx_list[i] < dx_list[i - 1])) throw ConfigError("dx list must be strictly decreasing");
  }
  if (!std::isfinite(grid_origin)) throw ConfigError("grid origin must be finite");
  if (domain && !(domain->lo < domain->hi && std::isfinite(domain->lo) && std::isfinite(domain->hi))) {
    throw ConfigError("domain must be a finite interval a < b");
  }
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= T)) throw ConfigError("snapshot times must lie in [0, T]");
  }
  if (example == Example::custom && initial_data.empty()) {
    throw ConfigError("custom example needs --initial-data");
  }
  if (example != Example::custom && !initial_data.empty()) {
    throw ConfigError("--initial-data is only used with the custom example");
  }
}

std::vector<double> default_dx_list() {
  constexpr int n = 8;
  const double hi = 2.4e-1, lo = 6e-3;
  std::vector<double> dx(n);
  for (int i = 0; i < n; ++i) dx[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1));
  dx.back() = lo;
  return dx;
}

std::vector<double> sample_times(double T, int n, const std::vector<double>& injected) {
  std::vector<double> ts;
  for (int k = 0; k < n; ++k) ts.push_back(k + 1 == n ? T : T * k / (n - 1));
  for (double t : injected) {
    if (t >= 0.0 && t <= T) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

OrderFit fit_order(const std::vector<double>& dx, const std::vector<double>& err) {
  if (dx.size() != err.size()) throw std::invalid_argument("fit_order: size mismatch");
  OrderFit fit;
  if (!err.empty() && std::all_of(err.begin(), err.end(), [](double e) { return e == 0.0; })) {
    fit.status = OrderFit::Status::exact;
    return fit;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (err[i] > 0.0 && std::isfinite(err[i]) && dx[i] > 0.0) {
      lx.push_back(std::log(dx[i]));
      ly.push_back(std::log(err[i]));
    }
  }
  if (lx.size() < 3) return fit;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.status = OrderFit::Status::fitted;
  fit.order = sxy / sxx;
  return fit;
}

ErrorTable run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.dx_list.empty()) cfg.dx_list = default_dx_list();
  if (cfg.snapshot_times.empty() && !cfg.output_dir.empty()) {
    cfg.snapshot_times = {0.0, 0.5 * cfg.T, cfg.T};
  }
  cfg.validate();

  const Input in = load_input(cfg);
  std::vector<double> injected;
  if (cfg.example != Example::custom) injected = spec_of(cfg).breaking_instants();
  const std::vector<double> times = sample_times(cfg.T, cfg.n_time_samples, injected);
  const double mesh_dx = cfg.dx_list.back() / 16.0;

  if (!cfg.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.output_dir.string());
  }

  const std::size_t n = cfg.dx_list.size();
  std::vector<RunOutput> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_one(cfg, in, i, times, mesh_dx);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::min<long>(cfg.threads, static_cast<long>(n)));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ErrorTable table;
  table.has_reference = cfg.example != Example::custom;
  std::vector<double> dxs, eu, eF, eA;
  for (const RunOutput& r : results) {
    table.rows.push_back(r.row);
    dxs.push_back(r.row.dx);
    eu.push_back(r.row.err_u_sup);
    eF.push_back(r.row.err_Finf);
    if (r.row.err_A) eA.push_back(*r.row.err_A);
  }
  if (table.has_reference) {
    table.order_u = fit_order(dxs, eu);
    table.order_Finf = fit_order(dxs, eF);
    if (eA.size() == dxs.size()) table.order_A = fit_order(dxs, eA);
  }

  if (!cfg.output_dir.empty()) {
    for (const RunOutput& r : results) {
      for (const auto& [path, text] : r.files) write_file(path, text);
    }
    if (table.has_reference) {
      const auto spec = spec_of(cfg);
      for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k) {
        const double t = cfg.snapshot_times[k];
        write_file(cfg.output_dir / ("exact_t" + std::to_string(k) + ".csv"),
                   snapshot_csv(exact_snapshot_rows(spec, t), t));
      }
    }
    if (cfg.format == Format::csv) {
      write_file(cfg.output_dir / "error_table.csv", error_table_csv(table));
    } else {
      write_file(cfg.output_dir / "error_table.json", error_table_json(table));
    }
    write_file(cfg.output_dir / "plot.gp", plot_script(cfg, table));
  }
  return table;
}

std::string error_table_csv(const ErrorTable& table) {
  std::string out = "dx,err_u_sup,err_Finf,err_A,order_u,order_Finf,order_A\n";
  const std::string ou = order_cell(table.order_u);
  const std::string oF = order_cell(table.order_Finf);
  const std::string oA = order_cell(table.order_A);
  for (const ErrorRow& r : table.rows) {
    out += format_double(r.dx) + ',';
    if (table.has_reference) out += format_double(r.err_u_sup) + ',' + format_double(r.err_Finf);
    else out += ',';
    out += ',';
    if (r.err_A) out += format_double(*r.err_A);
    out += ',' + ou + ',' + oF + ',' + oA + '\n';
  }
  return out;
}

std::string error_table_json(const ErrorTable& table) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const ErrorRow& r : table.rows) {
    nlohmann::json row;
    row["dx"] = r.dx;
    row["err_u_sup"] = table.has_reference ? nlohmann::json(r.err_u_sup) : nlohmann::json(nullptr);
    row["err_Finf"] = table.has_reference ? nlohmann::json(r.err_Finf) : nlohmann::json(nullptr);
    row["err_A"] = r.err_A ? nlohmann::json(*r.err_A) : nlohmann::json(nullptr);
    j["rows"].push_back(row);
  }
  j["order_u"] = order_json(table.order_u);
  j["order_Finf"] = order_json(table.order_Finf);
  j["order_A"] = order_json(table.order_A);
  return j.dump(2) + "\n";
}

std::string error_table_text(const ErrorTable& table) {
  auto sci = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12.4e", v);
    return std::string(buf);
  };
  auto cell = [](const std::string& s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12s", s.c_str());
    return std::string(buf);
  };
  std::string out = cell("dx") + cell("err_u_sup") + cell("err_Finf") + cell("err_A") + "\n";
  for (const ErrorRow& r : table.rows) {
    out += sci(r.dx);
    if (table.has_reference) out += sci(r.err_u_sup) + sci(r.err_Finf);
    else out += cell("-") + cell("-");
    out += r.err_A ? sci(*r.err_A) : cell("-");
    out += '\n';
  }
  auto show = [](const OrderFit& f) {
    const std::string c = order_cell(f);
    return c.empty() ? std::string("undefined") : c;
  };
  out += "order_u = " + show(table.order_u) + "\norder_Finf = " + show(table.order_Finf) +
         "\norder_A = " + show(table.order_A) + "\n";
  return out;
}

std::vector<SnapshotRow> snapshot_rows(const EulerianTriple& s, std::optional<Window> window) {
  Window w = s.support;
  if (window) {
    w = *window;
  } else {
    const double pad = std::max(1.0, 0.1 * (s.support.hi - s.support.lo));
    w = {s.support.lo - pad, s.support.hi + pad};
  }
  std::vector<double> xs{w.lo, w.hi};
  auto add = [&](std::span<const double> v) {
    for (double x : v) {
      if (x >= w.lo && x <= w.hi) xs.push_back(x);
    }
  };
  add(s.u.nodes());
  add(s.F.continuous_part().nodes());
  add(s.G.continuous_part().nodes());
  for (const Atom& a : s.F.atoms()) {
    if (a.x >= w.lo && a.x <= w.hi) xs.push_back(a.x);
  }
  for (const Atom& a : s.G.atoms()) {
    if (a.x >= w.lo && a.x <= w.hi) xs.push_back(a.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<SnapshotRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    rows.push_back({x, s.u(x), s.F.eval_left(x), s.F.eval_right(x), s.G.eval_left(x), s.G.eval_right(x)});
  }
  return rows;
}

void emit_snapshot(const EulerianTriple& s, double t, const std::filesystem::path& path,
                   std::optional<Window> window) {
  write_file(path, snapshot_csv(snapshot_rows(s, window), t));
}

std::vector<SnapshotRow> read_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::vector<SnapshotRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "x,u,F_left,F_right,G_left,G_right") {
        throw std::runtime_error("unexpected snapshot header in " + path.string());
      }
      header = true;
      continue;
    }
    std::istringstream ss(line);
    std::string cell;
    double v[6];
    for (double& x : v) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short snapshot row");
      x = std::stod(cell);
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return rows;
}

std::vector<SnapshotRow> exact_snapshot_rows(const reference::ExactSolutionSpec& spec, double t,
                                             int samples) {
  if (samples < 2) throw std::invalid_argument("exact_snapshot_rows: need at least 2 samples");
  const Window ls = reference::lagrangian_support(spec);
  const double pad = std::max(1.0, 0.1 * (ls.hi - ls.lo));
  const double lo = ls.lo - pad, hi = ls.hi + pad;
  std::vector<SnapshotRow> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double xi = k + 1 == samples ? hi : lo + (hi - lo) * k / (samples - 1);
    const reference::LagrangianValue v = reference::lagrangian(spec, t, xi);
    rows.push_back({v.y, v.U, v.V, v.V, v.H, v.H});
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hsalpha::harness
