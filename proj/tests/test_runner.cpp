#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "binn/error.hpp"
#include "binn/runner.hpp"

using namespace binn;
using namespace binn::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("binn_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("binn_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("presets are valid and round-trip through JSON") {
    for (const std::string& name : preset_names()) {
      CAPTURE(name);
      const RunConfig c = preset(name);
      CHECK_NOTHROW(validate(c));
      const RunConfig r = apply_json(to_json(c), RunConfig{});
      CHECK(to_json(r) == to_json(c));
    }
    const RunConfig c1 = preset("case1_dirichlet");
    CHECK(c1.elements == 90);
    CHECK(c1.layers == std::vector<int>{2, 10, 2});
    CHECK(c1.activation == Activation::swish);
    CHECK(c1.loss == LossKind::plain);
    CHECK(c1.iterations == 10000);
    CHECK(c1.wave_numbers == std::vector<double>{2.0});
    const RunConfig sweep = preset("scattering_sweep");
    REQUIRE(sweep.wave_numbers.size() == 20);
    CHECK(sweep.wave_numbers.front() == 0.5);
    CHECK(sweep.wave_numbers.back() == 10.0);
    CHECK(preset("pulsating").elements == 50);
    CHECK(preset("case2_mixed").elements == 96);
    CHECK_THROWS_AS(preset("nope"), ConfigError);
  }

  TEST_CASE("config files") {
    const fs::path good = write_file("good.json", R"({"preset": "pulsating", "iterations": 12, "k": 1.5, "seed": 9})");
    const RunConfig c = load_config(good);
    CHECK(c.benchmark == "pulsating");
    CHECK(c.iterations == 12);
    CHECK(c.wave_numbers == std::vector<double>{1.5});
    CHECK(c.seed == 9);
    CHECK(c.elements == 50);

    const fs::path broken = write_file("broken.json", "{\n  \"iterations\": 12,\n  \"k\": ,\n}\n");
    try {
      load_config(broken);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    const fs::path unknown = write_file("unknown.json", R"({"iterations": 12, "colour": "red"})");
    CHECK_THROWS_WITH_AS(load_config(unknown), doctest::Contains("colour"), ConfigError);
    const fs::path typed = write_file("typed.json", R"({"iterations": "many"})");
    CHECK_THROWS_WITH_AS(load_config(typed), doctest::Contains("iterations"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.json"), ConfigError);
  }

  TEST_CASE("validation") {
    RunConfig c;
    c.elements = 91;
    CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("elements"), ConfigError);
    c = RunConfig{};
    c.layers = {2, 2};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.wave_numbers = {1.0, 2.0};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.wave_numbers = {-1.0};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.benchmark = "sphere";
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(mode_from_string("pinn"), ConfigError);
    CHECK_THROWS_AS(table_from_string("figure"), ConfigError);
  }

  TEST_CASE("run writes every artifact and is reproducible") {
    RunConfig c = preset("case2_mixed");
    c.elements = 24;
    c.iterations = 60;
    c.adam_iterations = 40;
    c.log_stride = 20;
    c.dump_matrices = true;
    c.out_dir = scratch("run_a");
    const RunSummary s = run(c);
    REQUIRE(s.errors.size() == 1);
    CHECK(s.errors[0].reference == "oracle");
    for (const char* f : {"loss_history.csv", "boundary_solution.csv", "field_eval.csv", "error_report.csv",
                          "run_manifest.json", "mesh.txt", "model.txt", "plot.gp", "matrices.txt"}) {
      CHECK(fs::exists(c.out_dir / f));
    }
    CHECK(first_line(c.out_dir / "loss_history.csv") == "iteration,loss,seconds");
    CHECK(first_line(c.out_dir / "boundary_solution.csv") == "x1,x2,re_p,im_p,re_q,im_q");
    CHECK(first_line(c.out_dir / "field_eval.csv") ==
          "x1,x2,re_p,im_p,abs_p,re_p_ref,im_p_ref,abs_p_ref,err_re,err_im");
    const auto manifest = nlohmann::json::parse(slurp(c.out_dir / "run_manifest.json"));
    CHECK(manifest["config"] == to_json(c));
    CHECK(manifest["seed"] == c.seed);

    RunConfig again = c;
    again.out_dir = scratch("run_b");
    run(again);
    for (const char* f : {"boundary_solution.csv", "field_eval.csv", "error_report.csv", "model.txt", "mesh.txt"}) {
      CHECK(slurp(c.out_dir / f) == slurp(again.out_dir / f));
    }
  }

  TEST_CASE("sweep writes one error row per wave number") {
    RunConfig c = preset("scattering_sweep");
    c.wave_numbers = {0.5, 1.5};
    c.elements = 8;
    c.iterations = 20;
    c.out_dir = scratch("sweep");
    const RunSummary s = run(c);
    std::size_t binn_rows = 0;
    for (const ErrorRow& r : s.errors) binn_rows += r.method == "binn";
    CHECK(binn_rows == 2);
    CHECK(fs::exists(c.out_dir / "k_0.5" / "field_eval.csv"));
    CHECK(fs::exists(c.out_dir / "k_1.5" / "loss_history.csv"));
    std::ifstream in(c.out_dir / "error_report.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1 + static_cast<int>(s.errors.size()));
  }

  TEST_CASE("compare tables") {
    RunConfig c = preset("case1_dirichlet");
    c.elements = 24;
    c.iterations = 10;
    c.out_dir = scratch("compare");
    const auto rows = compare(c, {Mode::binn_plain, Mode::binn_composite, Mode::oracle}, Table::architectures);
    CHECK(rows.size() == 9);
    CHECK(rows.back().mode == "oracle");
    CHECK_FALSE(rows.back().final_loss.has_value());
    CHECK(rows.front().final_loss.has_value());
    const auto acts = compare(c, {Mode::binn_plain}, Table::activations);
    CHECK(acts.size() == 5);
    CHECK(fs::exists(c.out_dir / "compare.csv"));
  }
}
