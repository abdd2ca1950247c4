// specknot: fit B-splines to periodic samples with spectrally informed knots.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "specknot/datagen.hpp"
#include "specknot/error.hpp"
#include "specknot/filters.hpp"
#include "specknot/io.hpp"
#include "specknot/jumps.hpp"
#include "specknot/knots.hpp"
#include "specknot/pipeline.hpp"

namespace fs = std::filesystem;
using namespace specknot;
using nlohmann::json;

namespace {

struct InputConfig {
  std::string signal = "expsin";
  double amplitude = 1.0;
  double width = 0.05;
  double center = 0.5;
  std::vector<std::string> jumps;  // KIND:LOC:SIZE
  std::vector<std::string> modes;  // L:M:WEIGHT
  std::string samples = "512";
  double noise = 0.0;
  std::optional<std::uint64_t> seed;
  std::string input;
  std::string layout = "csv_xy";
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> domain;
};

struct Config {
  InputConfig in;
  std::string out = ".";
  std::string method = "di_f";
  std::vector<std::string> methods{"uniform", "di_f", "di_fs", "di_fj"};
  int order = 4;
  std::string ctrl = "16";
  std::vector<std::size_t> counts;
  double ratio = 1.0;
  std::optional<double> threshold;
  std::size_t window = 5;
  std::string periodic_dims = "1,2";
  int q = 1;
  bool smooth = false;
  bool fd = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream ss(s);
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidInput, "cannot read " + what + " from '" + s + "'");
  }
}

std::size_t to_count(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  require(v >= 0.0 && v == std::floor(v), what + " must be a nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  for (const std::string& p : split(s, 'x')) out.push_back(to_count(p, "sample count"));
  require(out.size() == 1 || out.size() == 2, "--samples takes M or M1xM2");
  return out;
}

JumpKind parse_kind(const std::string& s) {
  if (s == "c0" || s == "C0") return JumpKind::C0;
  if (s == "c1" || s == "C1") return JumpKind::C1;
  fail(ErrorKind::InvalidInput, "jump kind must be c0 or c1, got '" + s + "'");
}

SignalSpec build_spec(const InputConfig& c) {
  if (!c.input.empty()) {
    FileLayout layout;
    if (c.layout == "csv_xy") {
      layout.kind = Layout::CsvXY;
    } else if (c.layout == "csv_grid") {
      layout.kind = Layout::CsvGrid;
    } else if (c.layout == "raw_rows") {
      layout = {Layout::RawRows, c.rows, c.cols};
    } else {
      fail(ErrorKind::InvalidInput, "unknown layout '" + c.layout + "'");
    }
    return {FromFile{c.input, layout}};
  }
  SignalSpec spec;
  if (c.signal == "harmonic") {
    Harmonic2D h;
    for (const std::string& m : c.modes) {
      const auto p = split(m, ':');
      require(p.size() == 3, "--mode takes L:M:WEIGHT, got '" + m + "'");
      h.modes.push_back({static_cast<int>(to_count(p[0], "l")), static_cast<int>(to_count(p[1], "m")),
                         to_double(p[2], "weight")});
    }
    if (h.modes.empty()) h.modes = {{3, 2, 1.0}, {3, 3, 1.0}};
    spec.kind = h;
  } else {
    SmoothPeriodic base{parse_formula(c.signal), c.amplitude, c.width, c.center};
    if (c.jumps.empty()) {
      spec.kind = base;
    } else {
      Piecewise pw{base, {}};
      for (const std::string& j : c.jumps) {
        const auto p = split(j, ':');
        require(p.size() == 3, "--jump takes KIND:LOCATION:SIZE, got '" + j + "'");
        pw.jumps.push_back({to_double(p[1], "jump location"), parse_kind(p[0]), to_double(p[2], "jump size")});
      }
      spec.kind = pw;
    }
  }
  if (c.noise != 0.0) {
    require(c.seed.has_value(), "--seed is required when --noise is set");
    spec = SignalSpec{Noisy{std::make_shared<SignalSpec>(spec), c.noise, c.seed}};
  }
  return spec;
}

Domain domain_at(const std::vector<double>& d, std::size_t slot) {
  if (d.size() >= 2 * slot + 2) return {d[2 * slot], d[2 * slot + 1]};
  return {};
}

using AnyGrid = std::variant<Grid1D, Grid2D>;

AnyGrid load_input(const InputConfig& c, const SignalSpec& spec) {
  require(c.domain.empty() || c.domain.size() == 2 || c.domain.size() == 4, "--domain takes a,b or a1,b1,a2,b2");
  if (const auto* f = std::get_if<FromFile>(&spec.kind)) {
    LoadOptions o;
    if (c.domain.size() >= 2) o.domain1 = domain_at(c.domain, 0);
    if (c.domain.size() == 4) o.domain2 = domain_at(c.domain, 1);
    return load_grid(f->path, f->layout, o);
  }
  const std::vector<std::size_t> dims = parse_dims(c.samples);
  if (c.signal == "harmonic") {
    require(dims.size() == 2, "harmonic fields need --samples M1xM2");
    const double two_pi = 2.0 * std::numbers::pi;
    const Domain d1 = c.domain.size() >= 2 ? domain_at(c.domain, 0) : Domain{0.0, two_pi};
    const Domain d2 = c.domain.size() == 4 ? domain_at(c.domain, 1) : Domain{0.0, two_pi};
    return generate_2d(spec, dims[0], dims[1], d1, d2);
  }
  require(dims.size() == 1, "one-dimensional signals take --samples M");
  return generate(spec, dims[0], c.domain.empty() ? Domain{} : domain_at(c.domain, 0));
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "failed while writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::array<bool, 2> parse_periodic(const std::string& s) {
  std::array<bool, 2> p{false, false};
  if (s == "none" || s.empty()) return p;
  for (const std::string& d : split(s, ',')) {
    if (d == "1") {
      p[0] = true;
    } else if (d == "2") {
      p[1] = true;
    } else {
      fail(ErrorKind::InvalidInput, "--periodic-dims takes a list drawn from 1,2 (or 'none'), got '" + s + "'");
    }
  }
  return p;
}

PlacementOptions placement(const Config& c, Method m) {
  PlacementOptions o;
  o.method = m;
  o.order = c.order;
  o.threshold = c.threshold;
  o.window = c.window;
  return o;
}

void check_common(const Config& c) {
  require(c.order >= 2, "--order must be at least 2");
  require(c.window >= 1, "--window must be at least 1");
  if (c.threshold) require(*c.threshold > 0.0, "--threshold must be positive");
}

std::pair<std::size_t, std::size_t> ctrl_pair(const std::string& s) {
  const auto p = split(s, ',');
  require(p.size() == 1 || p.size() == 2, "--ctrl takes N or N1,N2");
  const std::size_t n1 = to_count(p[0], "control count");
  return {n1, p.size() == 2 ? to_count(p[1], "control count") : n1};
}

void write_signal_sidecar(const fs::path& out, const SignalSpec& spec) {
  if (!std::holds_alternative<FromFile>(spec.kind)) write_json(out / "signal.json", ground_truth(spec));
}

int cmd_fit(const Config& c) {
  check_common(c);
  const SignalSpec spec = build_spec(c.in);
  const AnyGrid grid = load_input(c.in, spec);
  const fs::path out = prepare_out(c.out);
  const Method method = parse_method(c.method);
  const auto [n1, n2] = ctrl_pair(c.ctrl);

  if (const auto* g = std::get_if<Grid1D>(&grid)) {
    const FitResult r = fit_signal(*g, n1, placement(c, method));
    json report = to_json(r.fit.report);
    report["method"] = to_string(method);
    report["control_count"] = n1;
    write_json(out / "model.json", to_json(r.fit.model, g->domain));
    write_json(out / "report.json", report);
    json knots = to_json(r.placement.knots);
    knots["jumps"] = to_json(r.placement.jumps, g->size())["jumps"];
    write_json(out / "knots.json", knots);
    write_json(out / "timings.json", to_json(r.placement.timings));
    std::string csv = "schema_version,index,u,x,sample,residual\n";
    for (std::size_t i = 0; i < g->size(); ++i) {
      csv += std::to_string(kSchemaVersion) + "," + std::to_string(i) + "," + num(g->parameter(i)) + "," + num(g->x(i)) +
             "," + num(g->samples[i]) + "," + num(r.fit.report.residuals[i]) + "\n";
    }
    write_text(out / "residuals.csv", csv);
  } else {
    const Grid2D& g2 = std::get<Grid2D>(grid);
    const FitResult2D r = fit_signal_2d(g2, n1, n2, placement(c, method), parse_periodic(c.periodic_dims));
    json report = to_json(r.fit.report);
    report["method"] = to_string(method);
    report["control_count"] = {n1, n2};
    write_json(out / "model.json", to_json(r.fit.model, g2.domain1, g2.domain2));
    write_json(out / "report.json", report);
    write_json(out / "knots.json", {{"schema_version", kSchemaVersion},
                                    {"dimensions", {to_json(r.placement.knots1), to_json(r.placement.knots2)}}});
    write_json(out / "timings.json", to_json(r.placement.timings));
    std::string csv = "schema_version,i1,i2,sample,residual\n";
    for (std::size_t i1 = 0; i1 < g2.m1; ++i1) {
      for (std::size_t i2 = 0; i2 < g2.m2; ++i2) {
        csv += std::to_string(kSchemaVersion) + "," + std::to_string(i1) + "," + std::to_string(i2) + "," +
               num(g2.at(i1, i2)) + "," + num(r.fit.report.residuals[i1 * g2.m2 + i2]) + "\n";
      }
    }
    write_text(out / "residuals.csv", csv);
  }
  write_signal_sidecar(out, spec);
  return 0;
}

int cmd_compare(const Config& c) {
  check_common(c);
  require(c.counts.size() >= 2, "--counts needs at least two control counts");
  require(!c.methods.empty(), "--methods is empty");
  require(c.ratio > 0.0, "--ratio must be positive");
  std::vector<Method> methods;
  for (const std::string& m : c.methods) methods.push_back(parse_method(m));
  const SignalSpec spec = build_spec(c.in);
  const AnyGrid grid = load_input(c.in, spec);
  const fs::path out = prepare_out(c.out);
  const auto periodic = parse_periodic(c.periodic_dims);

  std::string csv = "schema_version,method,control_count,control_count_2,knot_count,rms_error,max_error,solve_rank,wall_s,status,message\n";
  for (Method m : methods) {
    for (std::size_t n : c.counts) {
      const auto t0 = std::chrono::steady_clock::now();
      std::string row = std::to_string(kSchemaVersion) + "," + std::string(to_string(m)) + "," + std::to_string(n) + ",";
      try {
        FitReport rep;
        std::size_t n_2 = 0;
        if (const auto* g = std::get_if<Grid1D>(&grid)) {
          rep = fit_signal(*g, n, placement(c, m)).fit.report;
        } else {
          n_2 = std::max<std::size_t>(static_cast<std::size_t>(c.order),
                                      static_cast<std::size_t>(std::lround(c.ratio * static_cast<double>(n))));
          rep = fit_signal_2d(std::get<Grid2D>(grid), n, n_2, placement(c, m), periodic).fit.report;
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row += (n_2 ? std::to_string(n_2) : "") + "," + std::to_string(rep.knot_count) + "," + num(rep.rms_error) + "," +
               num(rep.max_error) + "," + std::to_string(rep.solve_rank) + "," + num(wall) + ",ok,\n";
      } catch (const Error& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '"', '\'');
        row += ",,,,,,error,\"" + std::string(to_string(e.kind())) + ": " + msg + "\"\n";
      }
      csv += row;
    }
  }
  write_text(out / "convergence.csv", csv);
  write_signal_sidecar(out, spec);
  return 0;
}

int cmd_jumps(const Config& c) {
  check_common(c);
  const SignalSpec spec = build_spec(c.in);
  const AnyGrid grid = load_input(c.in, spec);
  const auto* g = std::get_if<Grid1D>(&grid);
  require(g != nullptr, "jumps works on one-dimensional input");
  const fs::path out = prepare_out(c.out);
  const std::vector<double> J = jump_indicator(*g);
  const double l = c.threshold.value_or(default_threshold(g->samples));
  const JumpReport report = classify_jumps(J, {l, c.window});
  json doc = to_json(report, g->size());
  doc["threshold"] = l;
  doc["window"] = c.window;
  write_json(out / "jumps.json", doc);
  std::string csv = "schema_version,index,u,x,sample,indicator\n";
  for (std::size_t i = 0; i < g->size(); ++i) {
    csv += std::to_string(kSchemaVersion) + "," + std::to_string(i) + "," + num(g->parameter(i)) + "," + num(g->x(i)) + "," +
           num(g->samples[i]) + "," + num(J[i]) + "\n";
  }
  write_text(out / "indicator.csv", csv);
  write_signal_sidecar(out, spec);
  return 0;
}

int cmd_derive(const Config& c) {
  require(c.q >= 0, "--q must be nonnegative");
  const SignalSpec spec = build_spec(c.in);
  const AnyGrid grid = load_input(c.in, spec);
  const auto* g = std::get_if<Grid1D>(&grid);
  require(g != nullptr, "derive works on one-dimensional input");
  const fs::path out = prepare_out(c.out);
  DerivativeOptions opts;
  opts.smooth = c.smooth;
  const std::vector<double> d = spectral_derivative(*g, c.q, opts);
  std::vector<double> fd;
  if (c.fd && c.q >= 1) fd = finite_difference_derivative(g->samples, g->spacing(), c.q, Boundary::Periodic);
  std::string csv = "schema_version,index,x,sample,spectral";
  if (!fd.empty()) csv += ",finite_difference";
  csv += "\n";
  for (std::size_t i = 0; i < g->size(); ++i) {
    csv += std::to_string(kSchemaVersion) + "," + std::to_string(i) + "," + num(g->x(i)) + "," + num(g->samples[i]) + "," + num(d[i]);
    if (!fd.empty()) csv += "," + num(fd[i]);
    csv += "\n";
  }
  write_text(out / "derivative.csv", csv);
  write_signal_sidecar(out, spec);
  return 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::Budget:
      return 2;
    case ErrorKind::Parse:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonFinite:
    case ErrorKind::Io:
      return 3;
    case ErrorKind::Numerical:
      return 4;
  }
  return 4;
}

int report_error(const Error& e, const std::string& out_dir) {
  const json j = to_json(e);
  std::cerr << j.dump() << "\n";
  std::error_code ec;
  if (!out_dir.empty() && (fs::is_directory(out_dir, ec) || fs::create_directories(out_dir, ec))) {
    std::ofstream f(fs::path(out_dir) / "error.json");
    f << j.dump(2) << "\n";
  }
  return exit_code(e.kind());
}

void add_input_options(CLI::App* app, InputConfig& in) {
  app->add_option("--signal", in.signal, "constant, sine, expsin, sinesum, peak or harmonic (2D)");
  app->add_option("--amplitude", in.amplitude, "signal amplitude");
  app->add_option("--width", in.width, "peak width");
  app->add_option("--center", in.center, "peak center in [0, 1)");
  app->add_option("--jump", in.jumps, "add a jump KIND:LOCATION:SIZE, KIND is c0 or c1 (repeatable)");
  app->add_option("--mode", in.modes, "harmonic mode L:M:WEIGHT (repeatable)");
  app->add_option("--samples", in.samples, "sample count M, or M1xM2 for 2D");
  app->add_option("--noise", in.noise, "Gaussian noise scale");
  app->add_option("--seed", in.seed, "noise seed");
  app->add_option("--input", in.input, "read samples from a file instead");
  app->add_option("--layout", in.layout, "csv_xy, csv_grid or raw_rows");
  app->add_option("--rows", in.rows, "raw_rows row count");
  app->add_option("--cols", in.cols, "raw_rows column count");
  app->add_option("--domain", in.domain, "domain a,b or a1,b1,a2,b2")->delimiter(',');
}

void add_method_options(CLI::App* app, Config& c) {
  app->add_option("--order", c.order, "spline order q (degree + 1)");
  app->add_option("--threshold", c.threshold, "jump threshold (default 0.1 * data range)");
  app->add_option("--window", c.window, "jump exclusion window in samples");
  app->add_option("--periodic-dims", c.periodic_dims, "periodic dimensions of 2D input: 1,2 / 1 / 2 / none");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit B-splines to periodic samples with spectrally informed knots"};
  app.require_subcommand(1);
  Config c;

  auto* fit = app.add_subcommand("fit", "fit one knot configuration and write model, report, residuals and knots");
  add_input_options(fit, c.in);
  add_method_options(fit, c);
  fit->add_option("--method", c.method, "uniform, di_f, di_fs or di_fj");
  fit->add_option("--ctrl", c.ctrl, "control-point count N, or N1,N2 for 2D");
  fit->add_option("--out", c.out, "output directory");

  auto* compare = app.add_subcommand("compare", "sweep control counts across methods into convergence.csv");
  add_input_options(compare, c.in);
  add_method_options(compare, c);
  compare->add_option("--methods", c.methods, "methods to compare")->delimiter(',');
  compare->add_option("--counts", c.counts, "control counts (first dimension for 2D)")->delimiter(',')->required();
  compare->add_option("--ratio", c.ratio, "2D: second-dimension count = round(ratio * first)");
  compare->add_option("--out", c.out, "output directory");

  auto* jumps = app.add_subcommand("jumps", "detect C0/C1 jumps and write jumps.json and indicator.csv");
  add_input_options(jumps, c.in);
  jumps->add_option("--threshold", c.threshold, "jump threshold (default 0.1 * data range)");
  jumps->add_option("--window", c.window, "exclusion window in samples");
  jumps->add_option("--out", c.out, "output directory");

  auto* derive = app.add_subcommand("derive", "write spectral derivative samples to derivative.csv");
  add_input_options(derive, c.in);
  derive->add_option("--q", c.q, "derivative order");
  derive->add_flag("--smooth", c.smooth, "chain the Gaussian smoothing filter");
  derive->add_flag("--fd", c.fd, "also write periodic central differences");
  derive->add_option("--out", c.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(Error(ErrorKind::InvalidInput, e.what()), "");
  }

  try {
    if (fit->parsed()) return cmd_fit(c);
    if (compare->parsed()) return cmd_compare(c);
    if (jumps->parsed()) return cmd_jumps(c);
    return cmd_derive(c);
  } catch (const Error& e) {
    return report_error(e, c.out);
  } catch (const std::exception& e) {
    return report_error(Error(ErrorKind::Numerical, e.what()), c.out);
  }
}
