#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/reference.hpp"

namespace hsalpha::harness {

enum class Example { multipeakon, cusp, cosine, custom };
enum class Format { csv, json };

Example parse_example(const std::string& name);  // ConfigError on unknown names
const char* example_name(Example e);

struct ExperimentConfig {
  Example example = Example::multipeakon;
  double alpha = 0.5;
  double beta = 0.5;
  std::vector<double> dx_list;  // empty: default_dx_list()
  double grid_origin = -0.5;
  std::optional<Window> domain;  // extra region the grid and snapshots must cover
  double T = 4.0;
  int n_time_samples = 257;
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir;  // empty: nothing written
  Format format = Format::csv;
  int threads = 1;
  std::filesystem::path initial_data;  // custom only

  /// Throws ConfigError.
  void validate() const;
};

/// Geometric sequence of 8 spacings from 2.4e-1 down to 6e-3.
std::vector<double> default_dx_list();

/// n uniform times on [0, T] (both ends included) merged with the injected
/// instants that fall inside [0, T].
std::vector<double> sample_times(double T, int n, const std::vector<double>& injected);

struct ErrorRow {
  double dx = 0.0;
  double err_u_sup = 0.0;
  double err_Finf = 0.0;
  std::optional<double> err_A;
};

struct OrderFit {
  enum class Status { fitted, exact, insufficient };
  Status status = Status::insufficient;
  double order = 0.0;

  [[nodiscard]] bool defined() const { return status == Status::fitted; }
};

/// Least-squares slope of log(err) against log(dx). Needs at least 3 rows
/// with positive finite errors; all-zero errors are reported as exact.
OrderFit fit_order(const std::vector<double>& dx, const std::vector<double>& err);

struct ErrorTable {
  std::vector<ErrorRow> rows;  // dx descending
  OrderFit order_u, order_Finf, order_A;
  bool has_reference = true;
};

ErrorTable run_experiment(const ExperimentConfig& cfg);

std::string error_table_csv(const ErrorTable& table);
std::string error_table_json(const ErrorTable& table);
/// Human-readable table for the terminal.
std::string error_table_text(const ErrorTable& table);

struct SnapshotRow {
  double x, u, F_left, F_right, G_left, G_right;
};

/// Rows at every node of u, F, G, every atom and both window ends. The
/// default window pads the support by max(1, 10% of its width).
std::vector<SnapshotRow> snapshot_rows(const EulerianTriple& s, std::optional<Window> window = {});
void emit_snapshot(const EulerianTriple& s, double t, const std::filesystem::path& path,
                   std::optional<Window> window = {});
std::vector<SnapshotRow> read_snapshot(const std::filesystem::path& path);

/// Exact solution sampled through its Lagrangian parametrization.
std::vector<SnapshotRow> exact_snapshot_rows(const reference::ExactSolutionSpec& spec, double t,
                                             int samples = 2001);

std::string format_double(double v);

}  // namespace hsalpha::harness
