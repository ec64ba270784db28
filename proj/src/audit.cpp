#include "belllab/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "belllab/stats.hpp"

namespace belllab::audit {

namespace {

struct Functional {
  std::string name;
  std::function<double(const TrialRecord&)> value;
};

std::vector<Functional> functionals_for(const HiddenVariable& example) {
  if (std::holds_alternative<PearleHidden>(example)) {
    return {
        {"s", [](const TrialRecord& r) { return std::get<PearleHidden>(*r.hidden).s; }},
        {"abs_e_dot_a",
         [](const TrialRecord& r) {
           return std::abs(std::get<PearleHidden>(*r.hidden).e.dot(r.alice_direction));
         }},
        {"abs_e_dot_b",
         [](const TrialRecord& r) {
           return std::abs(std::get<PearleHidden>(*r.hidden).e.dot(r.bob_direction));
         }},
    };
  }
  return {
      {"coin",
       [](const TrialRecord& r) {
         return static_cast<double>(std::get<SocksHidden>(*r.hidden).coin);
       }},
  };
}

}  // namespace

AuditReport conspiracy_audit(std::span<const TrialRecord> records, Conditioning conditioning,
                             double alpha) {
  if (records.empty()) {
    throw std::invalid_argument("conspiracy_audit: no records");
  }
  for (const TrialRecord& r : records) {
    if (!r.hidden.has_value()) {
      throw std::invalid_argument(
          "conspiracy_audit: records carry no hidden-variable traces; rerun with tracing on");
    }
  }

  const auto functionals = functionals_for(*records.front().hidden);

  // Group record indices by setting pair within the conditioning set.
  std::array<std::vector<const TrialRecord*>, 4> groups;
  for (const TrialRecord& r : records) {
    if (conditioning == Conditioning::DetectedOnly &&
        !(r.outcome_a.detected() && r.outcome_b.detected())) {
      continue;
    }
    groups[static_cast<std::size_t>(r.pair.flat())].push_back(&r);
  }

  std::vector<SettingPair> present;
  for (const SettingPair pair : kAllPairs) {
    if (!groups[static_cast<std::size_t>(pair.flat())].empty()) present.push_back(pair);
  }
  if (present.size() < 2) {
    throw std::invalid_argument(
        "conspiracy_audit: need at least 2 setting pairs with data in the conditioning set");
  }

  AuditReport report;
  report.conditioning = conditioning;
  report.alpha = alpha;

  for (const Functional& fn : functionals) {
    std::array<std::vector<double>, 4> samples;
    for (const SettingPair pair : present) {
      const auto k = static_cast<std::size_t>(pair.flat());
      samples[k].reserve(groups[k].size());
      for (const TrialRecord* r : groups[k]) samples[k].push_back(fn.value(*r));
    }
    for (std::size_t i = 0; i < present.size(); ++i) {
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        const auto ki = static_cast<std::size_t>(present[i].flat());
        const auto kj = static_cast<std::size_t>(present[j].flat());
        const stats::KsResult ks = stats::ks_two_sample(samples[ki], samples[kj]);
        Comparison cmp;
        cmp.functional = fn.name;
        cmp.pair_x = present[i];
        cmp.pair_y = present[j];
        cmp.n_x = ks.n_a;
        cmp.n_y = ks.n_b;
        cmp.d = ks.d;
        cmp.p = ks.p_value;
        report.comparisons.push_back(cmp);
        report.max_d = std::max(report.max_d, ks.d);
        report.min_p = std::min(report.min_p, ks.p_value);
      }
    }
  }

  report.n_tests = report.comparisons.size();
  report.alpha_corrected = alpha / static_cast<double>(report.n_tests);
  report.conspiracy_detected = report.min_p < report.alpha_corrected;
  return report;
}

}  // namespace belllab::audit
