#pragma once

// Fuzzy associative memory: discrete (certainty, rating) -> trust class grids.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "certain_trust/errors.hpp"
#include "certain_trust/fuzzy.hpp"

namespace ctm::fam {

/// N (no trust) below the five fuzzy classes.
enum class TrustClass { none, very_low, low, medium, high, very_high };

inline std::string_view symbol(TrustClass k) {
  switch (k) {
    case TrustClass::none: return "N";
    case TrustClass::very_low: return "VL";
    case TrustClass::low: return "L";
    case TrustClass::medium: return "M";
    case TrustClass::high: return "H";
    case TrustClass::very_high: return "VH";
  }
  return "?";
}

inline std::optional<TrustClass> parse_symbol(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(TrustClass::very_high); ++i) {
    const auto k = static_cast<TrustClass>(i);
    if (symbol(k) == s) return k;
  }
  return std::nullopt;
}

constexpr int rank(TrustClass k) { return static_cast<int>(k); }

/// Fuzzy trust label on the same ordinal scale as TrustClass.
constexpr TrustClass from_label(fuzzy::Label l) { return static_cast<TrustClass>(fuzzy::index_of(l) + 1); }

class FamTable {
 public:
  FamTable(std::string name, std::vector<double> c_grid, std::vector<double> t_grid,
           std::vector<std::vector<TrustClass>> cells, int t_decimals = 1)
      : name_(std::move(name)),
        c_grid_(std::move(c_grid)),
        t_grid_(std::move(t_grid)),
        cells_(std::move(cells)),
        t_decimals_(t_decimals) {
    if (c_grid_.size() < 2 || t_grid_.size() < 2) throw InputError(name_ + ": grids need at least two values");
    check_increasing(c_grid_, "certainty");
    check_increasing(t_grid_, "rating");
    if (cells_.size() != c_grid_.size()) throw InputError(name_ + ": row count does not match the certainty grid");
    for (const auto& row : cells_) {
      if (row.size() != t_grid_.size()) throw InputError(name_ + ": column count does not match the rating grid");
    }
    if (c_grid_.front() == 0.0) {
      for (TrustClass k : cells_.front()) {
        if (k != TrustClass::none) throw InputError(name_ + ": the c=0 row must be all N");
      }
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      for (std::size_t j = 0; j < cells_[i].size(); ++j) {
        if ((i > 0 && rank(cells_[i][j]) < rank(cells_[i - 1][j])) ||
            (j > 0 && rank(cells_[i][j]) < rank(cells_[i][j - 1]))) {
          throw InputError(name_ + ": cells must be nondecreasing in c and t");
        }
      }
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<double>& c_grid() const { return c_grid_; }
  const std::vector<double>& t_grid() const { return t_grid_; }
  const std::vector<std::vector<TrustClass>>& cells() const { return cells_; }
  int t_decimals() const { return t_decimals_; }

  TrustClass at(std::size_t row, std::size_t col) const { return cells_.at(row).at(col); }

  /// Rounds c and t to the nearest grid values (ties toward the lower one).
  TrustClass lookup(double c, double t) const {
    return cells_[nearest(c_grid_, c, "c")][nearest(t_grid_, t, "t")];
  }

 private:
  void check_increasing(const std::vector<double>& g, const char* what) const {
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!(g[i] > g[i - 1])) throw InputError(name_ + ": " + what + " grid must be strictly increasing");
    }
  }

  std::size_t nearest(const std::vector<double>& g, double x, const char* what) const {
    constexpr double kTie = 1e-9;
    const double lo = g.front() - 0.5 * (g[1] - g[0]);
    const double hi = g.back() + 0.5 * (g.back() - g[g.size() - 2]);
    if (!std::isfinite(x) || x < lo - kTie || x > hi + kTie) {
      throw InputError(name_ + ": " + what + "=" + std::to_string(x) + " is outside the grid");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (std::fabs(g[i] - x) < std::fabs(g[best] - x) - kTie) best = i;
    }
    return best;
  }

  std::string name_;
  std::vector<double> c_grid_;
  std::vector<double> t_grid_;
  std::vector<std::vector<TrustClass>> cells_;
  int t_decimals_;
};

namespace detail {

inline std::vector<std::vector<TrustClass>> parse_rows(const std::vector<std::vector<std::string_view>>& rows) {
  std::vector<std::vector<TrustClass>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    auto& r = out.emplace_back();
    for (std::string_view s : row) r.push_back(parse_symbol(s).value());
  }
  return out;
}

}  // namespace detail

/// Certainty bucketed over 20 respondents, integer ratings.
inline FamTable people20() {
  return FamTable("people20", {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, {1, 2, 3, 4, 5},
                  detail::parse_rows({
                      {"N", "N", "N", "N", "N"},
                      {"VL", "VL", "VL", "VL", "VL"},
                      {"VL", "VL", "L", "L", "L"},
                      {"VL", "L", "L", "M", "M"},
                      {"VL", "L", "M", "H", "H"},
                      {"VL", "L", "M", "H", "VH"},
                  }),
                  0);
}

/// Certainty in tenths over 100 respondents, half-step ratings.
inline FamTable people100() {
  return FamTable("people100", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
                  {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0},
                  detail::parse_rows({
                      {"N", "N", "N", "N", "N", "N", "N", "N", "N"},
                      {"VL", "VL", "VL", "VL", "VL", "VL", "VL", "VL", "VL"},
                      {"VL", "VL", "VL", "VL", "VL", "VL", "VL", "VL", "VL"},
                      {"VL", "VL", "VL", "VL", "VL", "L", "L", "L", "L"},
                      {"VL", "VL", "VL", "VL", "L", "L", "L", "L", "L"},
                      {"VL", "VL", "VL", "L", "L", "L", "L", "M", "M"},
                      {"VL", "VL", "L", "L", "L", "M", "M", "M", "M"},
                      {"VL", "L", "L", "L", "M", "M", "M", "H", "H"},
                      {"VL", "L", "L", "L", "M", "M", "H", "H", "H"},
                      {"VL", "L", "L", "M", "M", "H", "H", "VH", "VH"},
                      {"VL", "L", "L", "M", "M", "H", "H", "VH", "VH"},
                  }),
                  1);
}

inline std::optional<FamTable> table_by_name(std::string_view name) {
  if (name == "people20") return people20();
  if (name == "people100") return people100();
  return std::nullopt;
}

}  // namespace ctm::fam
