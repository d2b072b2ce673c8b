#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "binn/analytic.hpp"
#include "binn/mlp.hpp"
#include "binn/solver.hpp"

namespace binn::app {

inline constexpr const char* kVersion = "1.0.0";

/// Fully resolved description of one benchmark run.
struct RunConfig {
  std::string benchmark = "case1_dirichlet";
  int elements = 90;
  std::vector<int> layers{2, 10, 2};
  Activation activation = Activation::swish;
  LossKind loss = LossKind::plain;
  int iterations = 10000;
  int adam_iterations = 1000;
  bool polish = true;
  double learning_rate = 1e-2;
  int log_stride = 100;
  std::uint64_t seed = 1;
  /// One entry except for the sweep benchmark.
  std::vector<double> wave_numbers{2.0};
  double radius = 1.0;
  double velocity = 1.0;
  double rho = 1.2;
  double c = 341.0;
  /// Map inputs to O(1) coordinates around the benchmark centre.
  bool input_scaling = false;
  bool dump_matrices = false;
  std::filesystem::path out_dir = "out";
};

std::vector<std::string> benchmark_names();
std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

nlohmann::json to_json(const RunConfig& config);

/// Overlays the keys of `j` on `base`. Unknown keys and out-of-range values
/// raise ConfigError naming the offending field.
RunConfig apply_json(const nlohmann::json& j, RunConfig base);

/// Reads a JSON config file; parse errors report line and column. A "preset"
/// key selects the starting point, other keys override it.
RunConfig load_config(const std::filesystem::path& path);

void validate(const RunConfig& config);

/// Accuracy of one solution against its reference over the evaluation points.
struct ErrorRow {
  double k = 0.0;
  std::string method;     // binn or oracle
  std::string reference;  // analytic or oracle
  std::size_t points = 0;
  double re = 0.0;
  double im = 0.0;
  double modulus = 0.0;
  double max_pointwise_re = 0.0;
  double max_pointwise_im = 0.0;
  std::optional<double> final_loss;
  int iterations = 0;
};

struct RunSummary {
  std::vector<ErrorRow> errors;
  /// Oracle failures (e.g. near-singular systems) by wave number.
  std::vector<std::string> warnings;
};

/// Solves the configured benchmark and writes loss_history.csv,
/// boundary_solution.csv, field_eval.csv, error_report.csv, mesh.txt,
/// model.txt, plot.gp and run_manifest.json into config.out_dir (one
/// subdirectory per wave number for sweeps). Throws on failure after
/// writing whatever artifacts were complete.
RunSummary run(const RunConfig& config);

enum class Mode { binn_plain, binn_composite, oracle };
std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

enum class Table { none, architectures, activations };
Table table_from_string(const std::string& name);

struct CompareRow {
  std::string mode;
  std::vector<int> layers;
  Activation activation = Activation::swish;
  std::optional<double> final_loss;
  double re = 0.0;
  double im = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

/// Runs every requested mode (times the table's architectures or
/// activations) at the first wave number and writes compare.csv.
std::vector<CompareRow> compare(const RunConfig& config, const std::vector<Mode>& modes, Table table);

}  // namespace binn::app
