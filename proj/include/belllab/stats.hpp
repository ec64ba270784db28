#ifndef BELLLAB_STATS_HPP
#define BELLLAB_STATS_HPP

#include <optional>
#include <span>
#include <vector>

#include "belllab/core.hpp"

namespace belllab::stats {

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t n = 0;
};

// Time-slot correlation: zeros contribute 0 to the sum but count in the
// denominator. This is the estimator the Bell bound constrains.
Estimate correlation_full(const Tally& tally, SettingPair pair);

// Detected-pair conditional correlation: the estimator that opens the
// loophole. Throws UndefinedConditionalError when no pair was detected.
Estimate correlation_postselected(const Tally& tally, SettingPair pair);

struct CorrelationRow {
  SettingPair pair;
  std::uint64_t n_slots = 0;
  std::uint64_t n_detected = 0;
  double e_full = 0.0;
  double se_full = 0.0;
  std::optional<double> e_post;  // empty when n_detected = 0
  double se_post = 0.0;
};

struct CorrelationTable {
  std::array<CorrelationRow, 4> rows;
  const CorrelationRow& row(SettingPair pair) const {
    return rows[static_cast<std::size_t>(pair.flat())];
  }
};

CorrelationTable correlation_table(const Tally& tally);

enum class Ensemble { Full, PostSelected };

// Evaluates all 8 odd-negative sign patterns against the chosen ensemble's
// four correlations; standard errors propagate in quadrature and a pattern
// is flagged when S > 2 + k_sigma * se.
ChshReport chsh_all(const CorrelationTable& table, Ensemble which, double k_sigma);

struct DetectionRow {
  SettingPair pair;
  std::uint64_t n_slots = 0;           // per-pair pre-ensemble size
  std::uint64_t n_detected_pairs = 0;  // per-pair good count
  double retained_fraction = 0.0;
  double efficiency_a = 0.0;
  double efficiency_b = 0.0;
};

struct DetectionReport {
  std::array<DetectionRow, 4> rows;
  std::uint64_t total_slots = 0;
  std::uint64_t total_detected = 0;  // what printing sum(Ns) reveals
  double retained_fraction = 0.0;
};

DetectionReport detection_stats(const Tally& tally);

struct KsResult {
  double d = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

// Classical two-sample Kolmogorov-Smirnov statistic with the asymptotic
// p-value (Stephens' effective-n correction).
KsResult ks_two_sample(std::span<const double> sample_a, std::span<const double> sample_b);

}  // namespace belllab::stats

#endif  // BELLLAB_STATS_HPP
