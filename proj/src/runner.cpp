#include "binn/runner.hpp"

#include <omp.h>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "binn/benchmarks.hpp"
#include "binn/field.hpp"

namespace binn::app {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> benchmark_names() {
  return {"case1_dirichlet", "case2_mixed", "pulsating", "scattering", "scattering_sweep"};
}

std::vector<std::string> preset_names() {
  return {"case1_dirichlet", "case2_mixed", "pulsating", "scattering", "scattering_sweep",
          "scattering_convergence"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "case1_dirichlet") {
    return c;
  }
  if (name == "case2_mixed") {
    c.benchmark = name;
    c.elements = 96;
    c.layers = {2, 20, 2};
    return c;
  }
  if (name == "pulsating") {
    c.benchmark = name;
    c.elements = 50;
    c.layers = {2, 10, 10, 2};
    c.iterations = 2000;
    c.wave_numbers = {1.0};
    return c;
  }
  if (name == "scattering" || name == "scattering_sweep") {
    c.benchmark = name;
    c.elements = 100;
    c.layers = {2, 20, 20, 2};
    c.iterations = 5000;
    c.wave_numbers = {5.0};
    if (name == "scattering_sweep") {
      c.wave_numbers.clear();
      for (int i = 1; i <= 20; ++i) c.wave_numbers.push_back(0.5 * i);
    }
    return c;
  }
  if (name == "scattering_convergence") {
    c.benchmark = "scattering";
    c.elements = 30;
    c.layers = {2, 20, 20, 2};
    c.iterations = 2000;
    c.log_stride = 50;
    c.wave_numbers = {0.5};
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

json to_json(const RunConfig& c) {
  json j;
  j["benchmark"] = c.benchmark;
  j["elements"] = c.elements;
  j["layers"] = c.layers;
  j["activation"] = std::string(to_string(c.activation));
  j["loss"] = std::string(to_string(c.loss));
  j["iterations"] = c.iterations;
  j["adam_iterations"] = c.adam_iterations;
  j["polish"] = c.polish;
  j["learning_rate"] = c.learning_rate;
  j["log_stride"] = c.log_stride;
  j["seed"] = c.seed;
  j["k"] = c.wave_numbers;
  j["radius"] = c.radius;
  j["velocity"] = c.velocity;
  j["rho"] = c.rho;
  j["c"] = c.c;
  j["input_scaling"] = c.input_scaling;
  j["dump_matrices"] = c.dump_matrices;
  j["out"] = c.out_dir.string();
  return j;
}

namespace {

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig apply_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "preset") continue;
    if (key == "benchmark") c.benchmark = field<std::string>(j, k);
    else if (key == "elements") c.elements = field<int>(j, k);
    else if (key == "layers") c.layers = field<std::vector<int>>(j, k);
    else if (key == "activation") {
      try {
        c.activation = activation_from_string(field<std::string>(j, k));
      } catch (const Error& e) {
        throw ConfigError(std::string("field 'activation': ") + e.what());
      }
    } else if (key == "loss") {
      c.loss = loss_kind_from_string(field<std::string>(j, k));
    } else if (key == "iterations") c.iterations = field<int>(j, k);
    else if (key == "adam_iterations") c.adam_iterations = field<int>(j, k);
    else if (key == "polish") c.polish = field<bool>(j, k);
    else if (key == "learning_rate") c.learning_rate = field<double>(j, k);
    else if (key == "log_stride") c.log_stride = field<int>(j, k);
    else if (key == "seed") c.seed = field<std::uint64_t>(j, k);
    else if (key == "k") {
      c.wave_numbers = value.is_array() ? field<std::vector<double>>(j, k) : std::vector<double>{field<double>(j, k)};
    } else if (key == "radius") c.radius = field<double>(j, k);
    else if (key == "velocity") c.velocity = field<double>(j, k);
    else if (key == "rho") c.rho = field<double>(j, k);
    else if (key == "c") c.c = field<double>(j, k);
    else if (key == "input_scaling") c.input_scaling = field<bool>(j, k);
    else if (key == "dump_matrices") c.dump_matrices = field<bool>(j, k);
    else if (key == "out") c.out_dir = field<std::string>(j, k);
    else throw ConfigError("unknown field '" + key + "'");
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n');
    const auto last_nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
    const auto column = last_nl == std::string::npos ? pos + 1 : pos - last_nl;
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                      ": syntax error: " + e.what());
  }
  RunConfig base;
  if (j.is_object() && j.contains("preset")) base = preset(field<std::string>(j, "preset"));
  RunConfig c = apply_json(j, base);
  validate(c);
  return c;
}

namespace {

bool is_rectangle(const std::string& b) { return b == "case1_dirichlet" || b == "case2_mixed"; }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void validate(const RunConfig& c) {
  const auto names = benchmark_names();
  require(std::find(names.begin(), names.end(), c.benchmark) != names.end(),
          "field 'benchmark': unknown benchmark '" + c.benchmark + "'");
  if (is_rectangle(c.benchmark)) {
    require(c.elements >= 6 && c.elements % 6 == 0,
            "field 'elements': rectangle meshes need a positive multiple of 6 elements");
  } else {
    require(c.elements >= 4, "field 'elements': circle meshes need at least 4 elements");
  }
  require(c.layers.size() >= 3 && c.layers.front() == 2 && c.layers.back() == 2,
          "field 'layers': expected [2, hidden..., 2] with at least one hidden layer");
  for (int n : c.layers) require(n >= 1, "field 'layers': layer widths must be positive");
  require(c.iterations >= 0, "field 'iterations': must be non-negative");
  require(c.adam_iterations >= 0, "field 'adam_iterations': must be non-negative");
  require(c.learning_rate > 0 && std::isfinite(c.learning_rate), "field 'learning_rate': must be positive");
  require(c.log_stride >= 1, "field 'log_stride': must be at least 1");
  require(!c.wave_numbers.empty(), "field 'k': at least one wave number required");
  for (double k : c.wave_numbers) require(k > 0 && std::isfinite(k), "field 'k': wave numbers must be positive");
  require(c.benchmark == "scattering_sweep" || c.wave_numbers.size() == 1,
          "field 'k': only scattering_sweep accepts several wave numbers");
  require(c.radius > 0 && std::isfinite(c.radius), "field 'radius': must be positive");
  require(std::isfinite(c.velocity), "field 'velocity': must be finite");
  require(c.rho > 0 && c.c > 0, "fields 'rho', 'c': must be positive");
  require(!c.out_dir.empty(), "field 'out': output directory required");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::binn_plain: return "binn_plain";
    case Mode::binn_composite: return "binn_composite";
    case Mode::oracle: return "oracle";
  }
  return "";
}

Mode mode_from_string(const std::string& name) {
  if (name == "binn_plain") return Mode::binn_plain;
  if (name == "binn_composite") return Mode::binn_composite;
  if (name == "oracle") return Mode::oracle;
  throw ConfigError("unknown mode '" + name + "'");
}

Table table_from_string(const std::string& name) {
  if (name == "none") return Table::none;
  if (name == "architectures") return Table::architectures;
  if (name == "activations") return Table::activations;
  throw ConfigError("unknown table '" + name + "'");
}

namespace {

struct Setup {
  double k = 0.0;
  ProblemSpec spec;
  BoundaryMesh mesh;
  BoundaryData data;
  InfluenceMatrices matrices;
  std::vector<Vec2> eval_points;
  std::optional<benchmarks::ExactField> exact;
  Vec2 input_shift = Vec2::Zero();
  double input_scale = 1.0;
};

Setup make_setup(const RunConfig& c, double k) {
  Setup s;
  s.k = k;
  const std::string& b = c.benchmark;
  if (b == "case1_dirichlet" || b == "case2_mixed") {
    s.spec = b == "case1_dirichlet" ? benchmarks::case1_problem(k) : benchmarks::case2_problem(k);
    if (b == "case1_dirichlet") {
      s.exact = benchmarks::case1_field(k);
      s.eval_points = benchmarks::case1_line();
    } else {
      s.eval_points = benchmarks::rectangle_grid(30, 15);
    }
    s.input_shift = benchmarks::kRectCenter;
    s.input_scale = 2.0 / benchmarks::kRectWidth;
  } else if (b == "pulsating") {
    AcousticMedium medium{c.rho, c.c, k};
    s.spec = benchmarks::pulsating_problem(medium, c.radius, c.velocity);
    s.exact = benchmarks::pulsating_field(medium, c.radius, c.velocity);
    s.eval_points = benchmarks::pulsating_grid(c.radius);
    s.input_scale = 1.0 / c.radius;
  } else {
    s.spec = benchmarks::scattering_problem(k, c.radius);
    s.exact = benchmarks::scattering_field(k, c.radius);
    s.eval_points = benchmarks::annulus_grid(c.radius, 2.0 * c.radius);
    s.input_scale = 1.0 / c.radius;
  }
  s.mesh = build_mesh(s.spec.curve, c.elements);
  s.data = encode_boundary(s.mesh, s.spec);
  s.matrices = assemble(s.mesh, k);
  return s;
}

Mlp make_model(const RunConfig& c, const Setup& s) {
  Mlp m = Mlp::init(c.layers, c.activation, c.seed);
  if (c.input_scaling) m.set_input_scaling(s.input_shift, s.input_scale);
  return m;
}

TrainConfig train_config(const RunConfig& c) {
  TrainConfig t;
  t.loss = c.loss;
  t.max_iterations = c.iterations;
  t.adam_iterations = c.adam_iterations;
  t.polish = c.polish;
  t.learning_rate = c.learning_rate;
  t.log_stride = c.log_stride;
  return t;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

void write_history(const fs::path& path, const TrainHistory& h) {
  std::ofstream out = open_out(path);
  out << "iteration,loss,seconds\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    out << h.iterations[i] << ',' << num(h.loss[i]) << ',' << num(h.seconds[i]) << '\n';
  }
  close_out(out, path);
}

void write_boundary(const fs::path& path, const BoundaryData& data, const BoundaryVectors& v) {
  std::ofstream out = open_out(path);
  out << "x1,x2,re_p,im_p,re_q,im_q\n";
  for (std::size_t m = 0; m < data.size(); ++m) {
    const auto i = static_cast<Eigen::Index>(m);
    out << num(data.points[m].x()) << ',' << num(data.points[m].y()) << ',' << num(v.p[i].real()) << ','
        << num(v.p[i].imag()) << ',' << num(v.q[i].real()) << ',' << num(v.q[i].imag()) << '\n';
  }
  close_out(out, path);
}

void write_field(const fs::path& path, std::span<const Vec2> points, std::span<const Complex> values,
                 std::span<const Complex> reference) {
  const std::vector<ComponentErrors> err = pointwise_errors(values, reference);
  std::ofstream out = open_out(path);
  out << "x1,x2,re_p,im_p,abs_p,re_p_ref,im_p_ref,abs_p_ref,err_re,err_im\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << num(points[i].x()) << ',' << num(points[i].y()) << ',' << num(values[i].real()) << ','
        << num(values[i].imag()) << ',' << num(std::abs(values[i])) << ',' << num(reference[i].real()) << ','
        << num(reference[i].imag()) << ',' << num(std::abs(reference[i])) << ',' << num(err[i].re) << ','
        << num(err[i].im) << '\n';
  }
  close_out(out, path);
}

void write_matrices(const fs::path& path, const InfluenceMatrices& m) {
  std::ofstream out = open_out(path);
  out << "binn-matrices 1\nk " << num(m.k) << "\nsize " << m.size() << '\n';
  for (const auto* name : {"H", "G"}) {
    const ComplexMatrix& a = name[0] == 'H' ? m.H : m.G;
    out << name << '\n';
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index col = 0; col < a.cols(); ++col) {
        out << (col ? " " : "") << num(a(r, col).real()) << ' ' << num(a(r, col).imag());
      }
      out << '\n';
    }
  }
  close_out(out, path);
}

const char* kErrorHeader =
    "k,method,reference,points,rel_error_re,rel_error_im,rel_error_modulus,max_pointwise_re,max_pointwise_im,"
    "final_loss,iterations\n";

void write_error_rows(std::ostream& out, const std::vector<ErrorRow>& rows) {
  for (const ErrorRow& r : rows) {
    out << num(r.k) << ',' << r.method << ',' << r.reference << ',' << r.points << ',' << num(r.re) << ','
        << num(r.im) << ',' << num(r.modulus) << ',' << num(r.max_pointwise_re) << ','
        << num(r.max_pointwise_im) << ',' << (r.final_loss ? num(*r.final_loss) : "") << ',' << r.iterations
        << '\n';
  }
}

void write_errors(const fs::path& path, const std::vector<ErrorRow>& rows) {
  std::ofstream out = open_out(path);
  out << kErrorHeader;
  write_error_rows(out, rows);
  close_out(out, path);
}

ErrorRow error_row(double k, const std::string& method, const std::string& reference,
                   std::span<const Complex> values, std::span<const Complex> ref) {
  ErrorRow r;
  r.k = k;
  r.method = method;
  r.reference = reference;
  r.points = values.size();
  const ComponentErrors e = relative_error(values, ref);
  r.re = e.re;
  r.im = e.im;
  r.modulus = relative_error_modulus(values, ref);
  for (const ComponentErrors& p : pointwise_errors(values, ref)) {
    r.max_pointwise_re = std::max(r.max_pointwise_re, p.re);
    r.max_pointwise_im = std::max(r.max_pointwise_im, p.im);
  }
  return r;
}

void write_plot_script(const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "set datafile separator ','\n"
         "set terminal pngcairo size 900,600\n"
         "set output 'loss_history.png'\n"
         "set logscale y\n"
         "set xlabel 'iteration'\n"
         "set ylabel 'loss'\n"
         "plot 'loss_history.csv' using 1:2 skip 1 with linespoints title 'loss'\n"
         "unset logscale y\n"
         "set output 'field_error.png'\n"
         "set xlabel 'x1'\n"
         "set ylabel 'x2'\n"
         "set size ratio -1\n"
         "plot 'field_eval.csv' using 1:2:9 skip 1 with points pt 5 ps 0.6 palette title 'pointwise error (Re)'\n";
  close_out(out, path);
}

json manifest(const RunConfig& c) {
  json j;
  j["version"] = kVersion;
  j["config"] = to_json(c);
  j["seed"] = c.seed;
  j["compiler"] = __VERSION__;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  j["threads"] = omp_get_max_threads();
  return j;
}

void write_manifest(const fs::path& dir, const RunConfig& c) {
  const fs::path path = dir / "run_manifest.json";
  std::ofstream out = open_out(path);
  out << manifest(c).dump(2) << '\n';
  close_out(out, path);
}

std::string k_label(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "k_%g", k);
  return buf;
}

/// One complete solve and its artifacts in `dir`.
std::vector<ErrorRow> run_single(const RunConfig& c, double k, const fs::path& dir,
                                 std::vector<std::string>& warnings) {
  fs::create_directories(dir);
  const Setup s = make_setup(c, k);
  {
    const fs::path path = dir / "mesh.txt";
    std::ofstream out = open_out(path);
    write_mesh(out, s.mesh);
    close_out(out, path);
  }
  if (c.dump_matrices) write_matrices(dir / "matrices.txt", s.matrices);

  std::optional<BoundaryVectors> oracle;
  try {
    oracle = oracle_solve(s.data, s.matrices);
  } catch (const SingularSystemError& e) {
    if (!s.exact) throw;
    warnings.push_back(k_label(k) + ": " + e.what());
  }

  TrainResult trained;
  try {
    trained = train(make_model(c, s), s.data, s.matrices, train_config(c));
  } catch (const DivergenceError& e) {
    write_history(dir / "loss_history.csv", e.history());
    throw;
  }
  write_history(dir / "loss_history.csv", trained.history);
  {
    const fs::path path = dir / "model.txt";
    std::ofstream out = open_out(path);
    trained.model.save(out);
    close_out(out, path);
  }

  const BoundaryVectors bv = boundary_vectors(trained.model, s.data);
  write_boundary(dir / "boundary_solution.csv", s.data, bv);

  const std::vector<Complex> values = eval_field_batch(s.eval_points, bv.p, bv.q, s.mesh, k);
  std::vector<Complex> reference;
  std::optional<std::vector<Complex>> oracle_values;
  if (oracle) oracle_values = eval_field_batch(s.eval_points, oracle->p, oracle->q, s.mesh, k);
  if (s.exact) {
    reference.reserve(s.eval_points.size());
    for (const Vec2& x : s.eval_points) reference.push_back((*s.exact)(x));
  } else {
    reference = *oracle_values;
  }
  write_field(dir / "field_eval.csv", s.eval_points, values, reference);

  const std::string ref_name = s.exact ? "analytic" : "oracle";
  std::vector<ErrorRow> rows;
  rows.push_back(error_row(k, "binn", ref_name, values, reference));
  rows.back().final_loss = trained.final_loss;
  rows.back().iterations = trained.iterations;
  if (s.exact && oracle_values) {
    rows.push_back(error_row(k, "oracle", ref_name, *oracle_values, reference));
    rows.back().final_loss = loss_plain(oracle->p, oracle->q, s.matrices);
  }
  write_errors(dir / "error_report.csv", rows);
  write_plot_script(dir / "plot.gp");
  return rows;
}

}  // namespace

RunSummary run(const RunConfig& config) {
  validate(config);
  fs::create_directories(config.out_dir);
  write_manifest(config.out_dir, config);
  RunSummary summary;
  if (config.benchmark != "scattering_sweep") {
    summary.errors = run_single(config, config.wave_numbers.front(), config.out_dir, summary.warnings);
    return summary;
  }
  for (double k : config.wave_numbers) {
    std::vector<ErrorRow> rows = run_single(config, k, config.out_dir / k_label(k), summary.warnings);
    summary.errors.insert(summary.errors.end(), rows.begin(), rows.end());
    write_errors(config.out_dir / "error_report.csv", summary.errors);
  }
  return summary;
}

std::vector<CompareRow> compare(const RunConfig& config, const std::vector<Mode>& modes, Table table) {
  validate(config);
  if (modes.empty()) throw ConfigError("no comparison modes requested");
  const Setup s = make_setup(config, config.wave_numbers.front());

  std::optional<BoundaryVectors> oracle;
  std::optional<std::vector<Complex>> oracle_values;
  try {
    oracle = oracle_solve(s.data, s.matrices);
    oracle_values = eval_field_batch(s.eval_points, oracle->p, oracle->q, s.mesh, s.k);
  } catch (const SingularSystemError&) {
    if (!s.exact) throw;
  }
  std::vector<Complex> reference;
  if (s.exact) {
    for (const Vec2& x : s.eval_points) reference.push_back((*s.exact)(x));
  } else {
    reference = *oracle_values;
  }

  std::vector<RunConfig> variants;
  if (table == Table::architectures) {
    for (const auto& layers : std::vector<std::vector<int>>{{2, 10, 2}, {2, 20, 2}, {2, 10, 10, 2}, {2, 20, 20, 2}}) {
      RunConfig v = config;
      v.layers = layers;
      variants.push_back(v);
    }
  } else if (table == Table::activations) {
    for (Activation a : kAllActivations) {
      RunConfig v = config;
      v.activation = a;
      variants.push_back(v);
    }
  } else {
    variants.push_back(config);
  }

  std::vector<CompareRow> rows;
  for (Mode mode : modes) {
    if (mode == Mode::oracle) {
      if (!oracle_values) throw SingularSystemError("oracle unavailable at this wave number", 0.0);
      CompareRow r;
      r.mode = to_string(mode);
      r.layers = config.layers;
      r.activation = config.activation;
      const ComponentErrors e = relative_error(*oracle_values, reference);
      r.re = e.re;
      r.im = e.im;
      rows.push_back(r);
      continue;
    }
    for (RunConfig v : variants) {
      v.loss = mode == Mode::binn_plain ? LossKind::plain : LossKind::composite;
      const TrainResult t = train(make_model(v, s), s.data, s.matrices, train_config(v));
      const BoundaryVectors bv = boundary_vectors(t.model, s.data);
      const std::vector<Complex> values = eval_field_batch(s.eval_points, bv.p, bv.q, s.mesh, s.k);
      const ComponentErrors e = relative_error(values, reference);
      CompareRow r;
      r.mode = to_string(mode);
      r.layers = v.layers;
      r.activation = v.activation;
      r.final_loss = t.final_loss;
      r.re = e.re;
      r.im = e.im;
      r.iterations = t.iterations;
      r.seconds = t.history.seconds.back();
      rows.push_back(r);
    }
  }

  fs::create_directories(config.out_dir);
  write_manifest(config.out_dir, config);
  const fs::path path = config.out_dir / "compare.csv";
  std::ofstream out = open_out(path);
  out << "mode,layers,activation,final_loss,rel_error_re,rel_error_im,iterations,seconds\n";
  for (const CompareRow& r : rows) {
    std::string layers;
    for (std::size_t i = 0; i < r.layers.size(); ++i) layers += (i ? "-" : "") + std::to_string(r.layers[i]);
    out << r.mode << ',' << layers << ',' << to_string(r.activation) << ','
        << (r.final_loss ? num(*r.final_loss) : "") << ',' << num(r.re) << ',' << num(r.im) << ','
        << r.iterations << ',' << num(r.seconds) << '\n';
  }
  close_out(out, path);
  return rows;
}

}  // namespace binn::app
