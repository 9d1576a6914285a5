#pragma once

// Bundled case-study scenarios and the reference values they are checked
// against. The scenario texts are identical to the files under scenarios/.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "certain_trust/opinion.hpp"

namespace ctm::cases {

// Multi-server topology: S = (A1 | A2) & (B1 | B2).
inline constexpr std::string_view kCase1 = R"json({
  "formula": "(A1 | A2) & (B1 | B2)",
  "defaults": {"f": 0.5, "scale": 5},
  "components": {
    "A1": {"t": 0.714, "c": 0.724, "f": 0.5},
    "A2": {"t": 0.459, "c": 0.806, "f": 0.5},
    "B1": {"t": 0.604, "c": 0.786, "f": 0.5},
    "B2": {"t": 0.867, "c": 0.648, "f": 0.5}
  }
}
)json";

// Composite rows evaluated from the tabled rows they combine.
inline constexpr std::string_view kCase1S1 = R"json({
  "formula": "A1 | A2",
  "defaults": {"f": 0.5, "scale": 5},
  "components": {
    "A1": {"t": 0.714, "c": 0.724},
    "A2": {"t": 0.459, "c": 0.806}
  }
}
)json";

inline constexpr std::string_view kCase1S2 = R"json({
  "formula": "B1 | B2",
  "defaults": {"f": 0.5, "scale": 5},
  "components": {
    "B1": {"t": 0.604, "c": 0.786},
    "B2": {"t": 0.867, "c": 0.648}
  }
}
)json";

inline constexpr std::string_view kCase1S = R"json({
  "formula": "S1 & S2",
  "defaults": {"f": 0.75, "scale": 5},
  "components": {
    "S1": {"t": 0.829, "c": 0.839},
    "S2": {"t": 0.892, "c": 0.863}
  }
}
)json";

// Single-site rating: full certainty from 20 of 20 respondents, t' = 3.75.
inline constexpr std::string_view kCase2 = R"json({
  "formula": "W",
  "defaults": {"f": 0.5, "scale": 5},
  "components": {
    "W": {"t": 0.75, "c": 1.0}
  }
}
)json";

/// One row of the multi-server reference table.
struct ReferenceRow {
  std::string system;
  std::string_view scenario;  // root of this scenario is the row
  double t, c, f, expectation, trust;
  Direction direction;
  std::optional<double> behavior;  // magnitude checked only where it is a stated result
};

inline std::vector<ReferenceRow> case1_reference() {
  using D = Direction;
  return {
      {"A1", R"json({"formula": "A1", "components": {"A1": {"t": 0.714, "c": 0.724, "f": 0.5}}})json", 0.714, 0.724, 0.5,
       0.65, 51.69, D::above_expectation, 3.39},
      {"A2", R"json({"formula": "A2", "components": {"A2": {"t": 0.459, "c": 0.806, "f": 0.5}}})json", 0.459, 0.806, 0.5,
       0.467, 37.0, D::below_expectation, std::nullopt},
      {"B1", R"json({"formula": "B1", "components": {"B1": {"t": 0.604, "c": 0.786, "f": 0.5}}})json", 0.604, 0.786, 0.5,
       0.582, 47.47, D::below_expectation, std::nullopt},
      {"B2", R"json({"formula": "B2", "components": {"B2": {"t": 0.867, "c": 0.648, "f": 0.5}}})json", 0.867, 0.648, 0.5,
       0.74, 56.18, D::above_expectation, std::nullopt},
      {"S1", kCase1S1, 0.829, 0.839, 0.75, 0.82, 69.55, D::below_expectation, std::nullopt},
      {"S2", kCase1S2, 0.892, 0.863, 0.75, 0.87, 77.0, D::above_expectation, std::nullopt},
      {"S", kCase1S, 0.736, 0.853, 0.5625, 0.753, 62.78, D::above_expectation, std::nullopt},
  };
}

struct Tolerances {
  double opinion = 0.005;
  double expectation = 0.01;
  double trust = 0.05;
  double behavior = 0.01;
};

inline constexpr double kCase2Trust = 75.0;
inline constexpr double kCase2Behavior = 50.0;

}  // namespace ctm::cases
