#include "specknot/io.hpp"

#include <algorithm>
#include <string>

namespace specknot {

using nlohmann::json;

std::string_view to_string(JumpKind kind) noexcept { return kind == JumpKind::C0 ? "C0" : "C1"; }

std::string_view to_string(Formula f) noexcept {
  switch (f) {
    case Formula::Constant: return "constant";
    case Formula::Sine: return "sine";
    case Formula::ExpSin: return "expsin";
    case Formula::SineSum: return "sinesum";
    case Formula::Peak: return "peak";
  }
  return "unknown";
}

Formula parse_formula(std::string_view name) {
  for (Formula f : {Formula::Constant, Formula::Sine, Formula::ExpSin, Formula::SineSum, Formula::Peak}) {
    if (name == to_string(f)) return f;
  }
  fail(ErrorKind::InvalidInput, "unknown signal '" + std::string(name) +
                                    "' (expected constant, sine, expsin, sinesum or peak)");
}

json to_json(const KnotVector& k) {
  json sites = json::array();
  const auto& v = k.knots();
  for (std::size_t j = 0; j < v.size();) {
    std::size_t e = j;
    while (e < v.size() && v[e] == v[j]) ++e;
    sites.push_back({{"u", v[j]}, {"multiplicity", e - j}});
    j = e;
  }
  return {{"schema_version", kSchemaVersion},
          {"order", k.order()},
          {"degree", k.degree()},
          {"control_count", k.control_count()},
          {"knots", v},
          {"sites", sites}};
}

json to_json(const JumpReport& r, std::size_t samples) {
  json entries = json::array();
  for (const JumpEntry& e : r.entries) {
    entries.push_back({{"index", e.index}, {"u", e.u}, {"kind", to_string(e.kind)}, {"magnitude", e.magnitude}});
  }
  return {{"schema_version", kSchemaVersion}, {"samples", samples}, {"jumps", entries}};
}

json to_json(const BSplineModel& m, const Domain& domain) {
  return {{"schema_version", kSchemaVersion},
          {"order", m.knots().order()},
          {"knots", m.knots().knots()},
          {"control_points", m.control_points()},
          {"domain", {domain.a, domain.b}}};
}

json to_json(const TensorSplineModel& m, const Domain& d1, const Domain& d2) {
  json net = json::array();
  for (std::size_t i = 0; i < m.n1(); ++i) {
    const auto first = m.control_net().begin() + static_cast<long>(i * m.n2());
    net.push_back(std::vector<double>(first, first + static_cast<long>(m.n2())));
  }
  return {{"schema_version", kSchemaVersion},
          {"order", m.knots1().order()},
          {"knots", {m.knots1().knots(), m.knots2().knots()}},
          {"control_net", net},
          {"domain", {{d1.a, d1.b}, {d2.a, d2.b}}}};
}

json to_json(const FitReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"rms_error", r.rms_error},
          {"max_error", r.max_error},
          {"samples", r.residuals.size()},
          {"knot_count", r.knot_count},
          {"solve_rank", r.solve_rank}};
}

json to_json(const StageTimings& t) {
  return {{"schema_version", kSchemaVersion},
          {"transform_s", t.transform},
          {"filter_s", t.filter},
          {"knots_s", t.knots},
          {"solve_s", t.solve}};
}

json to_json(const Error& e) {
  return {{"schema_version", kSchemaVersion}, {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
}

json ground_truth(const SignalSpec& spec) {
  json out = {{"schema_version", kSchemaVersion}};
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        auto smooth = [](const SmoothPeriodic& s) {
          return json{{"formula", to_string(s.formula)}, {"amplitude", s.amplitude}, {"width", s.width}, {"center", s.center}};
        };
        if constexpr (std::is_same_v<T, SmoothPeriodic>) {
          out["kind"] = "smooth_periodic";
          out["base"] = smooth(k);
          out["jumps"] = json::array();
        } else if constexpr (std::is_same_v<T, Piecewise>) {
          out["kind"] = "piecewise";
          out["base"] = smooth(k.base);
          json jumps = json::array();
          for (const JumpSpec& j : k.jumps) {
            jumps.push_back({{"location", j.location}, {"kind", to_string(j.kind)}, {"size", j.size}});
          }
          out["jumps"] = jumps;
        } else if constexpr (std::is_same_v<T, Noisy>) {
          out = k.base ? ground_truth(*k.base) : out;
          out["noise"] = {{"scale", k.scale}, {"seed", k.seed.value_or(0)}};
        } else if constexpr (std::is_same_v<T, Harmonic2D>) {
          out["kind"] = "harmonic2d";
          json modes = json::array();
          for (const HarmonicMode& m : k.modes) modes.push_back({{"l", m.l}, {"m", m.m}, {"weight", m.weight}});
          out["modes"] = modes;
        } else {
          out["kind"] = "file";
          out["path"] = k.path;
        }
      },
      spec.kind);
  return out;
}

}  // namespace specknot
