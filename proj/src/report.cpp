#include "belllab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace belllab::report {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

ResultRow result_row(double angle_rad, const Tally& tally, SettingPair pair,
                     double singlet_ref) {
  const TallyCell& cell = tally.cell(pair);
  ResultRow row;
  row.angle_rad = angle_rad;
  row.n_slots = cell.n_slots;
  row.n_detected = cell.n_detected_pairs;
  row.singlet_ref = singlet_ref;
  if (cell.n_slots > 0) {
    const auto full = stats::correlation_full(tally, pair);
    row.corr_full = full.value;
    row.se_full = full.standard_error;
  }
  if (cell.n_detected_pairs > 0) {
    const auto post = stats::correlation_postselected(tally, pair);
    row.corr_post = post.value;
    row.se_post = post.standard_error;
  }
  return row;
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "angle_rad,n_slots,n_detected,corr_full,se_full,corr_post,se_post,singlet_ref\n";
  for (const ResultRow& r : rows) {
    out << format_double(r.angle_rad) << ',' << r.n_slots << ',' << r.n_detected << ','
        << format_double(r.corr_full) << ',' << format_double(r.se_full) << ','
        << (r.corr_post ? format_double(*r.corr_post) : "nan") << ','
        << format_double(r.se_post) << ',' << format_double(r.singlet_ref) << '\n';
  }
}

Json to_json(const SettingPair& pair) {
  return Json{{"a", pair.a}, {"b", pair.b}};
}

Json to_json(const stats::CorrelationTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json j;
    j["pair"] = to_json(row.pair);
    j["n_slots"] = row.n_slots;
    j["n_detected"] = row.n_detected;
    j["corr_full"] = row.e_full;
    j["se_full"] = row.se_full;
    if (row.e_post) {
      j["corr_post"] = *row.e_post;
      j["se_post"] = row.se_post;
    } else {
      j["corr_post"] = nullptr;
      j["se_post"] = nullptr;
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

Json to_json(const ChshReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back(Json{{"signs", e.pattern.s},
                           {"statistic", e.statistic},
                           {"standard_error", e.standard_error},
                           {"violation", e.violation}});
  }
  const auto& best = report.max_entry();
  return Json{{"ensemble", report.ensemble},
              {"k_sigma", report.k_sigma},
              {"entries", std::move(entries)},
              {"max_statistic", best.statistic},
              {"max_signs", best.pattern.s},
              {"any_violation", report.any_violation()}};
}

Json to_json(const stats::DetectionReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    rows.push_back(Json{{"pair", to_json(row.pair)},
                        {"n_slots", row.n_slots},
                        {"n_detected_pairs", row.n_detected_pairs},
                        {"retained_fraction", row.retained_fraction},
                        {"efficiency_a", row.efficiency_a},
                        {"efficiency_b", row.efficiency_b}});
  }
  return Json{{"per_pair", std::move(rows)},
              {"total_slots", report.total_slots},
              {"total_detected", report.total_detected},
              {"retained_fraction", report.retained_fraction}};
}

Json to_json(const audit::AuditReport& report) {
  Json comparisons = Json::array();
  for (const auto& c : report.comparisons) {
    comparisons.push_back(Json{{"functional", c.functional},
                               {"pair_x", to_json(c.pair_x)},
                               {"pair_y", to_json(c.pair_y)},
                               {"n_x", c.n_x},
                               {"n_y", c.n_y},
                               {"d", c.d},
                               {"p", c.p}});
  }
  return Json{{"conditioning",
               report.conditioning == audit::Conditioning::All ? "all" : "detected-only"},
              {"alpha", report.alpha},
              {"n_tests", report.n_tests},
              {"alpha_corrected", report.alpha_corrected},
              {"max_d", report.max_d},
              {"min_p", report.min_p},
              {"verdict", report.verdict()},
              {"comparisons", std::move(comparisons)}};
}

Json to_json(const oracle::EnumerationReport& report) {
  Json patterns = Json::array();
  for (const auto& p : report.patterns) {
    patterns.push_back(Json{{"signs", p.pattern.s},
                            {"max", p.max_value},
                            {"argmax", Json{{"x1", p.argmax.x1},
                                            {"x2", p.argmax.x2},
                                            {"y1", p.argmax.y1},
                                            {"y2", p.argmax.y2}}}});
  }
  return Json{{"domain", report.domain == oracle::OutcomeDomain::PlusMinusOne
                             ? "plus_minus_one"
                             : "with_zero"},
              {"n_assignments", report.n_assignments},
              {"overall_max", report.overall_max},
              {"patterns", std::move(patterns)}};
}

Json to_json(const oracle::ThresholdCertificate& certificate) {
  Json samples = Json::array();
  for (const auto& s : certificate.samples) {
    Json j;
    j["theta"] = s.theta;
    j["detection_probability"] = s.detection_probability;
    if (s.correlation) {
      j["correlation"] = *s.correlation;
      j["deviation"] = s.deviation;
    } else {
      j["correlation"] = nullptr;
      j["deviation"] = nullptr;
    }
    samples.push_back(std::move(j));
  }
  Json out{{"pass", certificate.pass},
           {"tolerance", certificate.tolerance},
           {"max_abs_deviation", certificate.max_abs_deviation},
           {"max_deviation_angle", certificate.max_deviation_angle},
           {"n_angles", certificate.samples.size()}};
  if (certificate.failing_angle) {
    out["failing_angle"] = *certificate.failing_angle;
    out["failure_reason"] = certificate.failure_reason;
  }
  out["samples"] = std::move(samples);
  return out;
}

}  // namespace belllab::report
