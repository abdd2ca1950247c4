#include "specknot/datagen.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "specknot/error.hpp"

namespace specknot {
namespace {

constexpr double kPi = std::numbers::pi;

// Truncated Taylor series c_0 + c_1 t + ... + c_D t^D.
class Jet {
 public:
  explicit Jet(std::size_t degree, double value = 0.0) : c_(degree + 1, 0.0) { c_[0] = value; }

  static Jet variable(std::size_t degree, double at) {
    Jet j(degree, at);
    if (degree >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t degree() const { return c_.size() - 1; }
  double operator[](std::size_t k) const { return c_[k]; }

  /// k-th derivative at the expansion point.
  double derivative(std::size_t k) const { return c_[k] * boost::math::factorial<double>(static_cast<unsigned>(k)); }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t k = 0; k < a.c_.size(); ++k) a.c_[k] += b.c_[k];
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (double& v : a.c_) v *= s;
    return a;
  }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.degree());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; i + j < a.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    Jet e(a.degree(), std::exp(a.c_[0]));
    for (std::size_t k = 1; k < a.c_.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.c_[j] * e.c_[k - j];
      e.c_[k] = acc / static_cast<double>(k);
    }
    return e;
  }

  friend std::pair<Jet, Jet> sincos(const Jet& a) {
    Jet s(a.degree(), std::sin(a.c_[0]));
    Jet c(a.degree(), std::cos(a.c_[0]));
    for (std::size_t k = 1; k < a.c_.size(); ++k) {
      double as = 0.0;
      double ac = 0.0;
      for (std::size_t j = 1; j <= k; ++j) {
        as += static_cast<double>(j) * a.c_[j] * c.c_[k - j];
        ac += static_cast<double>(j) * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = as / static_cast<double>(k);
      c.c_[k] = -ac / static_cast<double>(k);
    }
    return {s, c};
  }

 private:
  std::vector<double> c_;
};

Jet sin(const Jet& a) { return sincos(a).first; }
Jet cos(const Jet& a) { return sincos(a).second; }

// Formula as a jet in s around s0.
Jet smooth_jet(const SmoothPeriodic& f, double s0, std::size_t degree) {
  const Jet s = Jet::variable(degree, s0);
  Jet v(degree);
  switch (f.formula) {
    case Formula::Constant:
      v = Jet(degree, 1.0);
      break;
    case Formula::Sine:
      v = sin(2.0 * kPi * s);
      break;
    case Formula::ExpSin:
      v = exp(sin(2.0 * kPi * s));
      break;
    case Formula::SineSum:
      v = sin(2.0 * kPi * s) + 0.5 * cos(4.0 * kPi * s) + 0.25 * sin(6.0 * kPi * s);
      break;
    case Formula::Peak: {
      const Jet z = (1.0 / f.width) * sin(kPi * (s + (-f.center)));
      v = exp(-1.0 * (z * z));
      break;
    }
  }
  return f.amplitude * v;
}

double frac(double x) { return x - std::floor(x); }

// Derivative k (in s) of the jump shape at s, right-hand limit at the jump.
double jump_shape(const JumpSpec& j, double s, int k) {
  const double t = frac(s - j.location);
  if (j.kind == JumpKind::C0) {
    if (k == 0) return 0.5 - t;
    return k == 1 ? -1.0 : 0.0;
  }
  switch (k) {
    case 0: return t / 2.0 - t * t / 2.0 - 1.0 / 12.0;
    case 1: return 0.5 - t;
    case 2: return -1.0;
    default: return 0.0;
  }
}

void check_smooth(const SmoothPeriodic& f) {
  require(std::isfinite(f.amplitude), "signal: amplitude must be finite");
  if (f.formula == Formula::Peak) require(f.width > 0.0, "signal: peak width must be positive");
}

void check_jumps(const std::vector<JumpSpec>& jumps) {
  for (const JumpSpec& j : jumps) {
    require(j.location > 0.0 && j.location < 1.0, "signal: jump location " + std::to_string(j.location) +
                                                      " is not inside (0, 1)");
    require(std::isfinite(j.size), "signal: jump size must be finite");
  }
}

double s_coord(std::size_t i, std::size_t m) { return static_cast<double>(i) / static_cast<double>(m); }

std::vector<double> sample_1d(const SmoothPeriodic& f, const std::vector<JumpSpec>& jumps, std::size_t m) {
  check_smooth(f);
  check_jumps(jumps);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = s_coord(i, m);
    double v = smooth_jet(f, s, 0)[0];
    for (const JumpSpec& j : jumps) v += j.size * jump_shape(j, s, 0);
    out[i] = v;
  }
  return out;
}

// d^m/dx^m of the Legendre polynomial P_l, as coefficients in x.
std::vector<double> legendre_derivative(int l, int m) {
  std::vector<double> c(static_cast<std::size_t>(l) + 1, 0.0);
  for (int k = 0; 2 * k <= l; ++k) {
    const double term = boost::math::binomial_coefficient<double>(static_cast<unsigned>(l), static_cast<unsigned>(k)) *
                        boost::math::binomial_coefficient<double>(static_cast<unsigned>(2 * l - 2 * k), static_cast<unsigned>(l));
    c[static_cast<std::size_t>(l - 2 * k)] = (k % 2 == 0 ? term : -term) / std::ldexp(1.0, l);
  }
  for (int d = 0; d < m; ++d) {
    for (std::size_t p = 1; p < c.size(); ++p) c[p - 1] = static_cast<double>(p) * c[p];
    c.back() = 0.0;
  }
  return c;
}

double harmonic_value(const Harmonic2D& h, double theta, double phi) {
  double v = 0.0;
  for (const HarmonicMode& mode : h.modes) {
    const std::vector<double> dp = legendre_derivative(mode.l, mode.m);
    const double x = std::cos(theta);
    double poly = 0.0;
    for (std::size_t p = dp.size(); p-- > 0;) poly = poly * x + dp[p];
    const double norm = std::sqrt((2.0 * mode.l + 1.0) / (4.0 * kPi) *
                                  boost::math::factorial<double>(static_cast<unsigned>(mode.l - mode.m)) /
                                  boost::math::factorial<double>(static_cast<unsigned>(mode.l + mode.m)));
    const double legendre = (mode.m % 2 == 0 ? 1.0 : -1.0) * std::pow(std::sin(theta), mode.m) * poly;
    v += mode.weight * norm * legendre * std::cos(mode.m * phi);
  }
  return v;
}

void add_noise(std::vector<double>& samples, const Noisy& n) {
  require(n.scale >= 0.0 && std::isfinite(n.scale), "signal: noise scale must be nonnegative");
  require(n.seed.has_value(), "signal: a seed is required for noisy signals");
  if (n.scale == 0.0) return;
  const std::vector<double> noise = gaussian_noise(samples.size(), *n.seed);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] += n.scale * noise[i];
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ParsedFile {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
  std::vector<double> domain;  // from the "# domain" header
};

double parse_number(const std::string& token, std::size_t line, std::size_t col) {
  const std::string t = trim(token);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col + 1) +
                               ": cannot parse '" + t + "' as a number");
  }
  if (!std::isfinite(v)) {
    fail(ErrorKind::NonFinite, "line " + std::to_string(line) + ", column " + std::to_string(col + 1) +
                                   ": non-finite value '" + t + "'");
  }
  return v;
}

ParsedFile read_file(const std::string& path, bool whitespace_separated) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  ParsedFile out;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::istringstream hs(t.substr(1));
      std::string key;
      hs >> key;
      if (key == "domain") {
        std::string tok;
        while (hs >> tok) out.domain.push_back(parse_number(tok, lineno, out.domain.size()));
        if (out.domain.size() != 2 && out.domain.size() != 4) {
          fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": domain header needs 2 or 4 numbers");
        }
      }
      continue;
    }
    // A single leading row of column names is allowed.
    if (!seen_data && std::any_of(t.begin(), t.end(), [](char ch) { return std::isalpha(static_cast<unsigned char>(ch)) && ch != 'e' && ch != 'E'; })) {
      const std::string lower = [&] {
        std::string s = t;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
        return s;
      }();
      if (lower.find("nan") == std::string::npos && lower.find("inf") == std::string::npos) {
        seen_data = true;
        continue;
      }
    }
    seen_data = true;
    std::vector<double> row;
    std::vector<std::string> tokens;
    if (whitespace_separated) {
      std::string u = t;
      std::replace(u.begin(), u.end(), ',', ' ');
      std::istringstream ws(u);
      std::string tok;
      while (ws >> tok) tokens.push_back(tok);
    } else {
      std::string tok;
      std::istringstream cs(t);
      while (std::getline(cs, tok, ',')) tokens.push_back(tok);
      if (!t.empty() && t.back() == ',') tokens.emplace_back();
    }
    for (std::size_t c = 0; c < tokens.size(); ++c) row.push_back(parse_number(tokens[c], lineno, c));
    out.rows.push_back(std::move(row));
    out.line_numbers.push_back(lineno);
  }
  if (out.rows.empty()) fail(ErrorKind::Parse, "'" + path + "' contains no data rows");
  return out;
}

Domain pick_domain(const std::optional<Domain>& flag, const std::vector<double>& header, std::size_t slot,
                   Domain fallback) {
  Domain d = fallback;
  if (header.size() >= 2 * slot + 2) d = {header[2 * slot], header[2 * slot + 1]};
  if (flag) d = *flag;
  require(d.b > d.a, "domain [" + std::to_string(d.a) + ", " + std::to_string(d.b) + ") is empty");
  return d;
}

}  // namespace

std::vector<double> gaussian_noise(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto uniform = [&engine] {
    // (0, 1]: 53 random bits, shifted off zero.
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  };
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * kPi * uniform();
    out[i] = r * std::cos(a);
    if (i + 1 < count) out[i + 1] = r * std::sin(a);
  }
  return out;
}

Grid1D generate(const SignalSpec& spec, std::size_t m, Domain domain) {
  require(m >= 2, "generate: need at least 2 samples");
  require(domain.b > domain.a, "generate: empty domain");
  return std::visit(
      [&](const auto& k) -> Grid1D {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SmoothPeriodic>) {
          return {sample_1d(k, {}, m), domain};
        } else if constexpr (std::is_same_v<T, Piecewise>) {
          return {sample_1d(k.base, k.jumps, m), domain};
        } else if constexpr (std::is_same_v<T, Noisy>) {
          require(k.base != nullptr, "generate: noisy signal without a base");
          Grid1D g = generate(*k.base, m, domain);
          add_noise(g.samples, k);
          return g;
        } else if constexpr (std::is_same_v<T, FromFile>) {
          auto loaded = load_grid(k.path, k.layout);
          if (!std::holds_alternative<Grid1D>(loaded)) fail(ErrorKind::DimensionMismatch, "'" + k.path + "' holds 2D data");
          return std::get<Grid1D>(std::move(loaded));
        } else {
          fail(ErrorKind::InvalidInput, "generate: a 2D harmonic field needs generate_2d");
        }
      },
      spec.kind);
}

Grid2D generate_2d(const SignalSpec& spec, std::size_t m1, std::size_t m2, Domain domain1, Domain domain2) {
  require(m1 >= 2 && m2 >= 2, "generate_2d: need at least 2 samples per dimension");
  require(domain1.b > domain1.a && domain2.b > domain2.a, "generate_2d: empty domain");
  return std::visit(
      [&](const auto& k) -> Grid2D {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Harmonic2D>) {
          require(!k.modes.empty(), "generate_2d: no harmonic modes");
          for (const HarmonicMode& mode : k.modes) {
            require(mode.l >= 0 && mode.m >= 0 && mode.m <= mode.l, "generate_2d: harmonic mode needs 0 <= m <= l");
          }
          Grid2D g{m1, m2, std::vector<double>(m1 * m2), domain1, domain2};
          for (std::size_t i1 = 0; i1 < m1; ++i1) {
            const double theta = 2.0 * kPi * s_coord(i1, m1);
            for (std::size_t i2 = 0; i2 < m2; ++i2) g.at(i1, i2) = harmonic_value(k, theta, 2.0 * kPi * s_coord(i2, m2));
          }
          return g;
        } else if constexpr (std::is_same_v<T, Noisy>) {
          require(k.base != nullptr, "generate_2d: noisy signal without a base");
          Grid2D g = generate_2d(*k.base, m1, m2, domain1, domain2);
          add_noise(g.samples, k);
          return g;
        } else if constexpr (std::is_same_v<T, FromFile>) {
          auto loaded = load_grid(k.path, k.layout);
          if (!std::holds_alternative<Grid2D>(loaded)) fail(ErrorKind::DimensionMismatch, "'" + k.path + "' holds 1D data");
          return std::get<Grid2D>(std::move(loaded));
        } else {
          fail(ErrorKind::InvalidInput, "generate_2d: this signal kind is one-dimensional");
        }
      },
      spec.kind);
}

std::vector<double> exact_derivative(const SignalSpec& spec, std::size_t m, int q, Domain domain) {
  require(q >= 0, "exact_derivative: order must be nonnegative");
  const SmoothPeriodic* base = nullptr;
  std::vector<JumpSpec> jumps;
  if (const auto* s = std::get_if<SmoothPeriodic>(&spec.kind)) {
    base = s;
  } else if (const auto* p = std::get_if<Piecewise>(&spec.kind)) {
    base = &p->base;
    jumps = p->jumps;
  } else {
    fail(ErrorKind::InvalidInput, "exact_derivative: only smooth and piecewise signals have closed forms");
  }
  check_smooth(*base);
  const double scale = std::pow(1.0 / domain.length(), q);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = s_coord(i, m);
    double v = smooth_jet(*base, s, static_cast<std::size_t>(q)).derivative(static_cast<std::size_t>(q));
    for (const JumpSpec& j : jumps) v += j.size * jump_shape(j, s, q);
    out[i] = scale * v;
  }
  return out;
}

std::vector<JumpSpec> declared_jumps(const SignalSpec& spec) {
  if (const auto* p = std::get_if<Piecewise>(&spec.kind)) return p->jumps;
  if (const auto* n = std::get_if<Noisy>(&spec.kind)) return n->base ? declared_jumps(*n->base) : std::vector<JumpSpec>{};
  return {};
}

std::variant<Grid1D, Grid2D> load_grid(const std::string& path, const FileLayout& layout, const LoadOptions& options) {
  const ParsedFile file = read_file(path, layout.kind == Layout::RawRows);
  switch (layout.kind) {
    case Layout::CsvXY: {
      const std::size_t m = file.rows.size();
      for (std::size_t r = 0; r < m; ++r) {
        if (file.rows[r].size() != 2) {
          fail(ErrorKind::DimensionMismatch, "line " + std::to_string(file.line_numbers[r]) + ": expected 2 columns (x, y), found " +
                                                 std::to_string(file.rows[r].size()));
        }
      }
      if (m < 2) fail(ErrorKind::DimensionMismatch, "csv_xy needs at least 2 rows");
      const double x0 = file.rows[0][0];
      const double h = file.rows[1][0] - x0;
      if (!(h > 0.0)) fail(ErrorKind::Parse, "csv_xy: x must increase");
      for (std::size_t r = 0; r < m; ++r) {
        const double expect = x0 + static_cast<double>(r) * h;
        if (std::abs(file.rows[r][0] - expect) > 1e-9 * std::max(1.0, std::abs(h * static_cast<double>(m)))) {
          fail(ErrorKind::Parse, "line " + std::to_string(file.line_numbers[r]) + ": x values are not uniformly spaced");
        }
      }
      Grid1D g;
      g.domain = pick_domain(options.domain1, file.domain, 0, {x0, x0 + static_cast<double>(m) * h});
      for (const auto& row : file.rows) g.samples.push_back(row[1]);
      return g;
    }
    case Layout::CsvGrid: {
      const std::size_t m2 = file.rows[0].size();
      for (std::size_t r = 0; r < file.rows.size(); ++r) {
        if (file.rows[r].size() != m2) {
          fail(ErrorKind::DimensionMismatch, "line " + std::to_string(file.line_numbers[r]) + ": row has " +
                                                 std::to_string(file.rows[r].size()) + " values, expected " + std::to_string(m2));
        }
      }
      Grid2D g;
      g.m1 = file.rows.size();
      g.m2 = m2;
      for (const auto& row : file.rows) g.samples.insert(g.samples.end(), row.begin(), row.end());
      g.domain1 = pick_domain(options.domain1, file.domain, 0, {});
      g.domain2 = pick_domain(options.domain2, file.domain, 1, {});
      return g;
    }
    case Layout::RawRows: {
      require(layout.rows >= 1 && layout.cols >= 1, "raw_rows layout needs positive rows and cols");
      Grid2D g;
      g.m1 = layout.rows;
      g.m2 = layout.cols;
      for (const auto& row : file.rows) g.samples.insert(g.samples.end(), row.begin(), row.end());
      if (g.samples.size() != g.m1 * g.m2) {
        fail(ErrorKind::DimensionMismatch, "raw_rows: found " + std::to_string(g.samples.size()) + " values, expected " +
                                               std::to_string(g.m1) + "x" + std::to_string(g.m2));
      }
      g.domain1 = pick_domain(options.domain1, file.domain, 0, {});
      g.domain2 = pick_domain(options.domain2, file.domain, 1, {});
      return g;
    }
  }
  fail(ErrorKind::InvalidInput, "unknown layout");
}

}  // namespace specknot
