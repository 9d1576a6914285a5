#pragma once

// Evidence-based opinions and the certain-logic operator algebra, plus the
// Trust (T) and behavioral probability (P) metrics built on top of them.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "certain_trust/errors.hpp"

namespace ctm {

namespace detail {

inline bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

inline std::string num(double x) { return std::to_string(x); }

// Snap operator outputs that drifted out of [0,1] by rounding only.
inline double snap_unit(double x, const char* what) {
  constexpr double kSlack = 1e-9;
  if (!std::isfinite(x) || x < -kSlack || x > 1.0 + kSlack) {
    throw DomainError(std::string(what) + " left [0,1]: " + num(x));
  }
  return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

}  // namespace detail

/// Positive/negative evidence counts plus the context parameters needed to
/// turn them into an opinion.
struct EvidenceRecord {
  double positive = 0.0;             // r
  double negative = 0.0;             // s
  double max_evidence = 1.0;         // N
  double dispositional_trust = 1.0;  // w
  double initial_expectation = 0.5;  // f
  double scale = 5.0;                // high value of the rating scale

  void validate() const {
    if (!(positive >= 0.0) || !(negative >= 0.0)) {
      throw InputError("evidence counts must be nonnegative");
    }
    if (!(max_evidence >= 1.0)) throw InputError("N must be >= 1, got " + detail::num(max_evidence));
    if (!(dispositional_trust > 0.0)) throw InputError("w must be > 0, got " + detail::num(dispositional_trust));
    if (!detail::in_unit(initial_expectation)) {
      throw InputError("f must lie in [0,1], got " + detail::num(initial_expectation));
    }
    if (!(scale >= 1.0)) throw InputError("rating scale must be >= 1, got " + detail::num(scale));
    if (positive + negative > max_evidence) {
      throw InputError("evidence r+s=" + detail::num(positive + negative) + " exceeds N=" +
                       detail::num(max_evidence));
    }
  }
};

/// The (average rating, certainty, initial expectation) triple. Every
/// component is checked against [0,1] on construction.
class Opinion {
 public:
  Opinion() = default;
  Opinion(double rating, double certainty, double expectation)
      : rating_(rating), certainty_(certainty), initial_(expectation) {
    if (!detail::in_unit(rating) || !detail::in_unit(certainty) || !detail::in_unit(expectation)) {
      throw InputError("opinion components must lie in [0,1]: (" + detail::num(rating) + ", " +
                       detail::num(certainty) + ", " + detail::num(expectation) + ")");
    }
  }

  double t() const { return rating_; }
  double c() const { return certainty_; }
  double f() const { return initial_; }

  friend bool operator==(const Opinion&, const Opinion&) = default;

 private:
  double rating_ = 0.5;
  double certainty_ = 0.0;
  double initial_ = 0.5;
};

inline double average_rating(double r, double s) {
  if (!(r >= 0.0) || !(s >= 0.0)) throw InputError("evidence counts must be nonnegative");
  return r + s == 0.0 ? 0.5 : r / (r + s);
}

inline double certainty(double r, double s, double max_evidence, double w) {
  if (!(r >= 0.0) || !(s >= 0.0)) throw InputError("evidence counts must be nonnegative");
  if (!(max_evidence >= 1.0)) throw InputError("N must be >= 1");
  if (!(w > 0.0)) throw InputError("w must be > 0");
  const double n = r + s;
  if (n > max_evidence) {
    throw InputError("evidence r+s=" + detail::num(n) + " exceeds N=" + detail::num(max_evidence));
  }
  return max_evidence * n / (2.0 * w * (max_evidence - n) + max_evidence * n);
}

inline Opinion derive_opinion(const EvidenceRecord& ev) {
  ev.validate();
  return Opinion(average_rating(ev.positive, ev.negative),
                 certainty(ev.positive, ev.negative, ev.max_evidence, ev.dispositional_trust),
                 ev.initial_expectation);
}

/// E(t, c, f) = t*c + (1 - c)*f
inline double expectation(const Opinion& op) { return op.t() * op.c() + (1.0 - op.c()) * op.f(); }

enum class NotMode { paper, preserve_certainty };

inline Opinion op_not(const Opinion& a, NotMode mode = NotMode::paper) {
  const double c = mode == NotMode::paper ? 1.0 - a.c() : a.c();
  return Opinion(1.0 - a.t(), c, 1.0 - a.f());
}

namespace detail {
// Below this the certainty is treated as zero and the rating falls back to 0.5.
inline constexpr double kZeroCertainty = 1e-12;
}  // namespace detail

inline Opinion op_and(const Opinion& a, const Opinion& b) {
  const double ta = a.t(), ca = a.c(), fa = a.f();
  const double tb = b.t(), cb = b.c(), fb = b.f();
  const double denom = 1.0 - fa * fb;
  if (denom == 0.0) throw DomainError("AND undefined for f_A = f_B = 1");

  const double c = ca + cb - ca * cb - ((1.0 - ca) * cb * (1.0 - fa) * tb + ca * (1.0 - cb) * (1.0 - fb) * ta) / denom;
  const double cs = detail::snap_unit(c, "AND certainty");
  if (cs <= detail::kZeroCertainty) return Opinion(0.5, 0.0, fa * fb);
  const double mixed = (ca * (1.0 - cb) * (1.0 - fa) * fb * ta + (1.0 - ca) * cb * fa * (1.0 - fb) * tb) / denom;
  const double t = detail::snap_unit((ca * cb * ta * tb + mixed) / cs, "AND rating");
  return Opinion(t, cs, fa * fb);
}

inline Opinion op_or(const Opinion& a, const Opinion& b) {
  const double ta = a.t(), ca = a.c(), fa = a.f();
  const double tb = b.t(), cb = b.c(), fb = b.f();
  const double f = fa + fb - fa * fb;
  if (f == 0.0) throw DomainError("OR undefined for f_A = f_B = 0");

  const double c = ca + cb - ca * cb - (ca * (1.0 - cb) * fb * (1.0 - ta) + (1.0 - ca) * cb * fa * (1.0 - tb)) / f;
  const double cs = detail::snap_unit(c, "OR certainty");
  if (cs <= detail::kZeroCertainty) return Opinion(0.5, 0.0, f);
  const double t = detail::snap_unit((ca * ta + cb * tb - ca * cb * ta * tb) / cs, "OR rating");
  return Opinion(t, cs, f);
}

/// t' = t * scale
inline double scaled_rating(const Opinion& op, double scale) {
  if (!(scale >= 1.0)) throw InputError("rating scale must be >= 1");
  return op.t() * scale;
}

/// T = c * t' / scale * 100, in percent.
inline double trust_percent(const Opinion& op, double scale) {
  return std::fmin(100.0, op.c() * scaled_rating(op, scale) / scale * 100.0);
}

enum class BehaviorClass { lowest, lower, low, balanced, high, higher, highest };
enum class Direction { below_expectation, balanced, above_expectation };

struct TrustAssessment {
  double trust_percent = 0.0;
  double behavior_percent = 0.0;      // clamped to [-100, 100]
  double raw_behavior_percent = 0.0;  // before clamping
  BehaviorClass behavior_class = BehaviorClass::balanced;
  Direction direction = Direction::balanced;
};

/// Classifies a clamped P into the seven behavior bands (bounds set for f = 0.5).
inline BehaviorClass behavior_class_for(double p) {
  constexpr double kEps = 1e-9;
  if (std::fabs(p) <= kEps) return BehaviorClass::balanced;
  if (p < 0.0) {
    if (p <= -60.0 + kEps) return BehaviorClass::lowest;
    if (p <= -20.0 + kEps) return BehaviorClass::lower;
    return BehaviorClass::low;
  }
  if (p <= 20.0 + kEps) return BehaviorClass::high;
  if (p <= 60.0 + kEps) return BehaviorClass::higher;
  return BehaviorClass::highest;
}

/// P = (T/100 - f) / f * 100, with T given in percent.
inline TrustAssessment behavioral_probability(double trust_pct, double f) {
  if (!(f > 0.0) || f > 1.0) throw InputError("initial expectation must lie in (0,1], got " + detail::num(f));
  if (!(trust_pct >= 0.0) || trust_pct > 100.0) {
    throw InputError("trust must lie in [0,100], got " + detail::num(trust_pct));
  }
  TrustAssessment out;
  out.trust_percent = trust_pct;
  const double diff = trust_pct / 100.0 - f;
  out.raw_behavior_percent = diff / f * 100.0;
  out.behavior_percent = std::fmax(-100.0, std::fmin(100.0, out.raw_behavior_percent));
  // Sampling round-off at T/100 == f counts as balanced.
  constexpr double kEps = 1e-9;
  out.direction = diff > kEps ? Direction::above_expectation
                              : (diff < -kEps ? Direction::below_expectation : Direction::balanced);
  out.behavior_class = out.direction == Direction::balanced ? BehaviorClass::balanced
                                                            : behavior_class_for(out.behavior_percent);
  return out;
}

/// Bucketed certainty from a head count: 0 for nobody, otherwise
/// ceil(n / bucket_size) / buckets.
inline double quantized_certainty(std::uint32_t n, std::uint32_t n_max, std::uint32_t buckets = 5) {
  if (buckets == 0 || n_max == 0 || n_max % buckets != 0) {
    throw InputError("n_max must be a positive multiple of the bucket count");
  }
  if (n > n_max) throw InputError("n=" + std::to_string(n) + " exceeds n_max=" + std::to_string(n_max));
  if (n == 0) return 0.0;
  const std::uint32_t width = n_max / buckets;
  const std::uint32_t bucket = (n + width - 1) / width;
  return static_cast<double>(bucket) / static_cast<double>(buckets);
}

inline std::string_view to_string(BehaviorClass b) {
  switch (b) {
    case BehaviorClass::lowest: return "lowest";
    case BehaviorClass::lower: return "lower";
    case BehaviorClass::low: return "low";
    case BehaviorClass::balanced: return "balanced";
    case BehaviorClass::high: return "high";
    case BehaviorClass::higher: return "higher";
    case BehaviorClass::highest: return "highest";
  }
  return "?";
}

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::below_expectation: return "lower";
    case Direction::balanced: return "balanced";
    case Direction::above_expectation: return "higher";
  }
  return "?";
}

inline std::string_view to_string(NotMode m) {
  return m == NotMode::paper ? "paper" : "preserve-certainty";
}

}  // namespace ctm
