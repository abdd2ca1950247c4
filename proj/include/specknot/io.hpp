#pragma once
// JSON forms of the library's values. Every document carries schema_version.

#include <json.hpp>

#include "specknot/bspline.hpp"
#include "specknot/datagen.hpp"
#include "specknot/error.hpp"
#include "specknot/jumps.hpp"
#include "specknot/knots.hpp"
#include "specknot/pipeline.hpp"

namespace specknot {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const KnotVector& k);
nlohmann::json to_json(const JumpReport& r, std::size_t samples);
nlohmann::json to_json(const BSplineModel& m, const Domain& domain);
nlohmann::json to_json(const TensorSplineModel& m, const Domain& d1, const Domain& d2);
/// Summary fields only; residuals are written separately.
nlohmann::json to_json(const FitReport& r);
nlohmann::json to_json(const StageTimings& t);
nlohmann::json to_json(const Error& e);
/// Ground-truth sidecar for a synthetic signal.
nlohmann::json ground_truth(const SignalSpec& spec);

std::string_view to_string(JumpKind kind) noexcept;
std::string_view to_string(Formula f) noexcept;
Formula parse_formula(std::string_view name);

}  // namespace specknot
