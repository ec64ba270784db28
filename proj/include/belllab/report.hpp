#ifndef BELLLAB_REPORT_HPP
#define BELLLAB_REPORT_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "belllab/audit.hpp"
#include "belllab/core.hpp"
#include "belllab/netharness.hpp"
#include "belllab/oracle.hpp"
#include "belllab/stats.hpp"

namespace belllab::report {

using Json = nlohmann::ordered_json;

// All floating-point CSV fields use this format: 10 significant digits,
// '.' decimal separator. The column set and order are frozen.
std::string format_double(double v);

struct ResultRow {
  double angle_rad = 0.0;
  std::uint64_t n_slots = 0;
  std::uint64_t n_detected = 0;
  double corr_full = 0.0;
  double se_full = 0.0;
  std::optional<double> corr_post;
  double se_post = 0.0;
  double singlet_ref = 0.0;
};

ResultRow result_row(double angle_rad, const Tally& tally, SettingPair pair,
                     double singlet_ref);

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);

Json to_json(const SettingPair& pair);
Json to_json(const stats::CorrelationTable& table);
Json to_json(const ChshReport& report);
Json to_json(const stats::DetectionReport& report);
Json to_json(const audit::AuditReport& report);
Json to_json(const oracle::EnumerationReport& report);
Json to_json(const oracle::ThresholdCertificate& certificate);

}  // namespace belllab::report

#endif  // BELLLAB_REPORT_HPP
