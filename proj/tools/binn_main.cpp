#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "binn/runner.hpp"

namespace {

using binn::app::RunConfig;

struct Common {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> iterations;
  std::optional<double> k;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--preset", c.preset, "Start from a built-in preset");
  cmd->add_option("--seed", c.seed, "Network initialisation seed");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--iterations", c.iterations, "Training iterations");
  cmd->add_option("--k", c.k, "Wave number (replaces any sweep)");
}

RunConfig resolve(const Common& c) {
  RunConfig config;
  if (!c.config_path.empty()) {
    config = binn::app::load_config(c.config_path);
    if (!c.preset.empty()) throw binn::ConfigError("--preset and --config are mutually exclusive");
  } else if (!c.preset.empty()) {
    config = binn::app::preset(c.preset);
  }
  if (c.seed) config.seed = *c.seed;
  if (!c.out.empty()) config.out_dir = c.out;
  if (c.iterations) config.iterations = *c.iterations;
  if (c.k) config.wave_numbers = {*c.k};
  binn::app::validate(config);
  return config;
}

void apply_thread_env() {
  if (const char* v = std::getenv("BINN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1) throw binn::ConfigError("BINN_THREADS must be a positive integer");
    omp_set_num_threads(static_cast<int>(n));
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary integrated neural network solver for 2D Helmholtz problems"};
  app.require_subcommand(1);

  Common run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Solve one benchmark and write its artifacts");
  add_common(run_cmd, run_opts);

  Common cmp_opts;
  std::string modes = "binn_plain,binn_composite,oracle";
  std::string table = "none";
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Tabulate solver modes on one benchmark");
  add_common(cmp_cmd, cmp_opts);
  cmp_cmd->add_option("--modes", modes, "Comma-separated: binn_plain, binn_composite, oracle");
  cmp_cmd->add_option("--table", table, "none, architectures or activations");

  CLI::App* presets_cmd = app.add_subcommand("presets", "List built-in presets as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_thread_env();
    if (presets_cmd->parsed()) {
      nlohmann::json j;
      for (const auto& name : binn::app::preset_names()) j[name] = binn::app::to_json(binn::app::preset(name));
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (run_cmd->parsed()) {
      const RunConfig config = resolve(run_opts);
      const binn::app::RunSummary s = binn::app::run(config);
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& r : s.errors) {
        std::cout << r.method << " k=" << r.k << " RE(Re)=" << r.re << " RE(Im)=" << r.im;
        if (r.final_loss) std::cout << " loss=" << *r.final_loss;
        std::cout << '\n';
      }
      std::cout << "artifacts written to " << config.out_dir.string() << '\n';
      return 0;
    }
    const RunConfig config = resolve(cmp_opts);
    std::vector<binn::app::Mode> mode_list;
    for (const auto& m : split(modes)) mode_list.push_back(binn::app::mode_from_string(m));
    const auto rows = binn::app::compare(config, mode_list, binn::app::table_from_string(table));
    for (const auto& r : rows) {
      std::cout << r.mode << ' ' << binn::to_string(r.activation) << " layers=" << r.layers.size() - 2
                << " RE(Re)=" << r.re << " RE(Im)=" << r.im << '\n';
    }
    std::cout << "table written to " << (config.out_dir / "compare.csv").string() << '\n';
    return 0;
  } catch (const binn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
