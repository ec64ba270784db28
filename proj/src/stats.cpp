#include "belllab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace belllab::stats {

namespace {

double bounded_mean_se(double estimate, std::uint64_t n) {
  const double variance = std::max(0.0, 1.0 - estimate * estimate);
  return std::sqrt(variance / static_cast<double>(n));
}

}  // namespace

Estimate correlation_full(const Tally& tally, SettingPair pair) {
  const TallyCell& c = tally.cell(pair);
  if (c.n_slots == 0) {
    throw NoDataError("correlation_full: no slots recorded for this setting pair");
  }
  Estimate e;
  e.n = c.n_slots;
  e.value = static_cast<double>(c.sum_product_all) / static_cast<double>(c.n_slots);
  e.standard_error = bounded_mean_se(e.value, c.n_slots);
  return e;
}

Estimate correlation_postselected(const Tally& tally, SettingPair pair) {
  const TallyCell& c = tally.cell(pair);
  if (c.n_detected_pairs == 0) {
    throw UndefinedConditionalError(
        "correlation_postselected: conditional is undefined, no detected pairs");
  }
  Estimate e;
  e.n = c.n_detected_pairs;
  e.value =
      static_cast<double>(c.sum_product_detected) / static_cast<double>(c.n_detected_pairs);
  e.standard_error = bounded_mean_se(e.value, c.n_detected_pairs);
  return e;
}

CorrelationTable correlation_table(const Tally& tally) {
  CorrelationTable table;
  for (const SettingPair pair : kAllPairs) {
    CorrelationRow& row = table.rows[static_cast<std::size_t>(pair.flat())];
    row.pair = pair;
    const TallyCell& c = tally.cell(pair);
    row.n_slots = c.n_slots;
    row.n_detected = c.n_detected_pairs;
    if (c.n_slots > 0) {
      const Estimate full = correlation_full(tally, pair);
      row.e_full = full.value;
      row.se_full = full.standard_error;
    }
    if (c.n_detected_pairs > 0) {
      const Estimate post = correlation_postselected(tally, pair);
      row.e_post = post.value;
      row.se_post = post.standard_error;
    }
  }
  return table;
}

ChshReport chsh_all(const CorrelationTable& table, Ensemble which, double k_sigma) {
  std::array<double, 4> corr{};
  std::array<double, 4> se{};
  for (const SettingPair pair : kAllPairs) {
    const CorrelationRow& row = table.row(pair);
    const auto k = static_cast<std::size_t>(pair.flat());
    if (which == Ensemble::Full) {
      if (row.n_slots == 0) {
        throw NoDataError("chsh_all: a setting pair has no slots");
      }
      corr[k] = row.e_full;
      se[k] = row.se_full;
    } else {
      if (!row.e_post.has_value()) {
        throw NoDataError("chsh_all: a setting pair has an undefined conditional correlation");
      }
      corr[k] = *row.e_post;
      se[k] = row.se_post;
    }
  }
  double propagated = 0.0;
  for (const double s : se) propagated += s * s;
  propagated = std::sqrt(propagated);

  ChshReport report;
  report.k_sigma = k_sigma;
  report.ensemble = which == Ensemble::Full ? "full" : "postselected";
  const auto patterns = odd_sign_patterns();
  for (std::size_t i = 0; i < 8; ++i) {
    ChshEntry& entry = report.entries[i];
    entry.pattern = patterns[i];
    entry.statistic = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      entry.statistic += static_cast<double>(patterns[i].s[k]) * corr[k];
    }
    entry.standard_error = propagated;
    entry.violation = entry.statistic > 2.0 + k_sigma * propagated;
  }
  return report;
}

DetectionReport detection_stats(const Tally& tally) {
  DetectionReport report;
  for (const SettingPair pair : kAllPairs) {
    DetectionRow& row = report.rows[static_cast<std::size_t>(pair.flat())];
    row.pair = pair;
    const TallyCell& c = tally.cell(pair);
    row.n_slots = c.n_slots;
    row.n_detected_pairs = c.n_detected_pairs;
    if (c.n_slots > 0) {
      const double slots = static_cast<double>(c.n_slots);
      row.retained_fraction = static_cast<double>(c.n_detected_pairs) / slots;
      row.efficiency_a = static_cast<double>(c.n_detected_a) / slots;
      row.efficiency_b = static_cast<double>(c.n_detected_b) / slots;
    }
    report.total_slots += c.n_slots;
    report.total_detected += c.n_detected_pairs;
  }
  if (report.total_slots > 0) {
    report.retained_fraction =
        static_cast<double>(report.total_detected) / static_cast<double>(report.total_slots);
  }
  return report;
}

namespace {

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::exp(-2.0 * static_cast<double>(j) * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> sample_a, std::span<const double> sample_b) {
  if (sample_a.empty() || sample_b.empty()) {
    throw std::domain_error("ks_two_sample: both samples must be non-empty");
  }
  std::vector<double> a(sample_a.begin(), sample_a.end());
  std::vector<double> b(sample_b.begin(), sample_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }

  const double ne = na * nb / (na + nb);
  const double sqrt_ne = std::sqrt(ne);
  const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;

  KsResult out;
  out.d = d;
  out.p_value = kolmogorov_survival(lambda);
  out.n_a = a.size();
  out.n_b = b.size();
  return out;
}

}  // namespace belllab::stats
