#include "belllab/cli.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "belllab/audit.hpp"
#include "belllab/engine.hpp"
#include "belllab/netharness.hpp"
#include "belllab/oracle.hpp"
#include "belllab/report.hpp"
#include "belllab/stats.hpp"

namespace belllab::cli {

namespace fs = std::filesystem;
using report::Json;

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty angle literal");

  const auto parse_number = [](const std::string& part) {
    std::size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size()) {
      throw std::invalid_argument("malformed angle literal: '" + part + "'");
    }
    return v;
  };

  const std::size_t pos = s.find("pi");
  if (pos == std::string::npos) return parse_number(s);

  const std::string prefix = s.substr(0, pos);
  const std::string suffix = s.substr(pos + 2);
  double coefficient = 1.0;
  if (prefix == "-") {
    coefficient = -1.0;
  } else if (!prefix.empty()) {
    coefficient = parse_number(prefix);
  }
  double divisor = 1.0;
  if (!suffix.empty()) {
    if (suffix.front() != '/') {
      throw std::invalid_argument("malformed angle literal: '" + text + "'");
    }
    divisor = parse_number(suffix.substr(1));
    if (divisor == 0.0) throw std::invalid_argument("angle literal divides by zero");
  }
  return coefficient * kPi / divisor;
}

std::vector<double> parse_grid(const std::string& text) {
  std::array<std::string, 3> parts;
  std::size_t start = 0;
  for (int i = 0; i < 2; ++i) {
    const std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      throw std::invalid_argument("grid must be start:end:count, got '" + text + "'");
    }
    parts[static_cast<std::size_t>(i)] = text.substr(start, colon - start);
    start = colon + 1;
  }
  parts[2] = text.substr(start);

  const double lo = parse_angle(parts[0]);
  const double hi = parse_angle(parts[1]);
  long count = 0;
  const auto res =
      std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (res.ec != std::errc{} || res.ptr != parts[2].data() + parts[2].size() || count < 1) {
    throw std::invalid_argument("grid count must be a positive integer");
  }
  if (lo < -1e-12 || hi > kPi + 1e-12 || (count > 1 && !(lo < hi))) {
    throw std::invalid_argument("grid must be strictly increasing within [0, pi]");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  for (long i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

std::array<double, 4> parse_angle_list(const std::string& text) {
  std::array<double, 4> out{};
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const std::size_t comma = text.find(',', start);
    const bool last = i == 3;
    if (last != (comma == std::string::npos)) {
      throw std::invalid_argument("expected four comma-separated angles, got '" + text + "'");
    }
    const std::string part =
        last ? text.substr(start) : text.substr(start, comma - start);
    out[static_cast<std::size_t>(i)] = parse_angle(part);
    start = comma + 1;
  }
  return out;
}

namespace {

constexpr std::array<double, 4> kOptimalAngles = {0.0, kPi / 2.0, kPi / 4.0,
                                                  3.0 * kPi / 4.0};

struct CommonOptions {
  std::string model = "pearle";
  std::uint64_t slots = 1'000'000;
  std::uint64_t seed = 0;
  std::string grid_spec;
  std::string angles_spec;
  std::string out_dir;
  double k_sigma = 5.0;
  bool trace = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_grid) {
  cmd->add_option("--model", opt.model, "Model name: pearle or socks");
  cmd->add_option("--slots", opt.slots, "Slots per setting pair (or per grid angle)");
  cmd->add_option("--seed", opt.seed, "Master seed; the only source of randomness")
      ->required();
  if (with_grid) {
    cmd->add_option("--grid", opt.grid_spec, "Angle grid start:end:count (radians, pi ok)");
  }
  cmd->add_option("--angles", opt.angles_spec, "Four directions a,a',b,b' (radians, pi ok)");
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_flag("--trace", opt.trace, "Retain hidden-variable traces");
}

std::array<double, 4> resolve_angles(const CommonOptions& opt) {
  if (opt.angles_spec.empty()) return kOptimalAngles;
  return parse_angle_list(opt.angles_spec);
}

engine::RunConfig fixed_pairs_config(const CommonOptions& opt) {
  const auto angles = resolve_angles(opt);
  engine::RunConfig config;
  config.model = opt.model;
  config.mode = engine::SettingMode::FixedPairs;
  config.slots_per_pair = opt.slots;
  config.alice = {Direction::from_planar_angle(angles[0]),
                  Direction::from_planar_angle(angles[1])};
  config.bob = {Direction::from_planar_angle(angles[2]),
                Direction::from_planar_angle(angles[3])};
  config.seed = opt.seed;
  config.audit_trace = opt.trace;
  return config;
}

engine::RunConfig grid_row_config(const CommonOptions& opt, double theta,
                                  std::size_t angle_index) {
  engine::RunConfig config;
  config.model = opt.model;
  config.mode = engine::SettingMode::SinglePair;
  config.slots_per_pair = opt.slots;
  const Direction a = Direction::from_planar_angle(0.0);
  const Direction b = Direction::from_planar_angle(theta);
  config.alice = {a, a};
  config.bob = {b, b};
  config.seed = opt.seed;
  config.audit_trace = opt.trace;
  config.slot_offset = static_cast<std::uint64_t>(angle_index) * opt.slots;
  return config;
}

fs::path require_out_dir(const CommonOptions& opt) {
  if (opt.out_dir.empty()) {
    throw std::invalid_argument("this command requires --out DIR");
  }
  fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

void write_json_file(const fs::path& path, const Json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

Json angles_json(const std::array<double, 4>& angles) {
  return Json{{"a", angles[0]}, {"a_prime", angles[1]}, {"b", angles[2]},
              {"b_prime", angles[3]}};
}

std::vector<report::ResultRow> pair_rows(const Tally& tally,
                                         const engine::RunConfig& config) {
  std::vector<report::ResultRow> rows;
  rows.reserve(4);
  for (const SettingPair pair : kAllPairs) {
    const Direction& a = config.alice[static_cast<std::size_t>(pair.a - 1)];
    const Direction& b = config.bob[static_cast<std::size_t>(pair.b - 1)];
    rows.push_back(report::result_row(a.angle_to(b), tally, pair, singlet_correlation(a, b)));
  }
  return rows;
}

int cmd_simulate(const CommonOptions& opt) {
  const fs::path dir = require_out_dir(opt);
  std::vector<report::ResultRow> rows;
  Json summary;
  summary["command"] = "simulate";
  summary["model"] = opt.model;
  summary["seed"] = opt.seed;
  summary["slots"] = opt.slots;
  summary["trace"] = opt.trace;

  if (!opt.grid_spec.empty()) {
    const std::vector<double> grid = parse_grid(opt.grid_spec);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const engine::RunConfig config = grid_row_config(opt, grid[k], k);
      const engine::RunResult result = engine::run_experiment(config);
      rows.push_back(report::result_row(
          grid[k], result.tally, SettingPair{1, 1},
          singlet_correlation(config.alice[0], config.bob[0])));
    }
    summary["mode"] = "grid";
    summary["grid_rad"] = grid;
  } else {
    const engine::RunConfig config = fixed_pairs_config(opt);
    const engine::RunResult result = engine::run_experiment(config);
    rows = pair_rows(result.tally, config);
    summary["mode"] = "angles";
    summary["angles_rad"] = angles_json(resolve_angles(opt));
  }

  std::ostringstream csv;
  report::write_results_csv(csv, rows);
  write_text_file(dir / "results.csv", csv.str());
  summary["files"] = Json{{"results", "results.csv"}};
  write_json_file(dir / "summary.json", summary);
  return 0;
}

int cmd_chsh(const CommonOptions& opt) {
  const engine::RunConfig config = fixed_pairs_config(opt);
  const engine::RunResult result = engine::run_experiment(config);
  const stats::CorrelationTable table = stats::correlation_table(result.tally);

  Json out;
  out["command"] = "chsh";
  out["model"] = opt.model;
  out["seed"] = opt.seed;
  out["slots_per_pair"] = opt.slots;
  out["k_sigma"] = opt.k_sigma;
  out["angles_rad"] = angles_json(resolve_angles(opt));
  out["correlations"] = report::to_json(table);
  out["chsh_full"] = report::to_json(stats::chsh_all(table, stats::Ensemble::Full, opt.k_sigma));
  out["chsh_postselected"] =
      report::to_json(stats::chsh_all(table, stats::Ensemble::PostSelected, opt.k_sigma));
  out["detection"] = report::to_json(stats::detection_stats(result.tally));

  std::cout << out.dump(2) << "\n";
  if (!opt.out_dir.empty()) {
    write_json_file(require_out_dir(opt) / "chsh.json", out);
  }
  return 0;
}

int cmd_audit(const CommonOptions& opt, const std::string& conditioning_name, double alpha) {
  audit::Conditioning conditioning;
  if (conditioning_name == "all") {
    conditioning = audit::Conditioning::All;
  } else if (conditioning_name == "detected") {
    conditioning = audit::Conditioning::DetectedOnly;
  } else {
    throw std::invalid_argument("--conditioning must be 'all' or 'detected'");
  }

  engine::RunConfig config = fixed_pairs_config(opt);
  config.audit_trace = true;
  const engine::RunResult result = engine::run_experiment(config);
  const audit::AuditReport report = audit::conspiracy_audit(result.records, conditioning, alpha);

  Json out;
  out["command"] = "audit";
  out["model"] = opt.model;
  out["seed"] = opt.seed;
  out["slots_per_pair"] = opt.slots;
  out["angles_rad"] = angles_json(resolve_angles(opt));
  out["audit"] = report::to_json(report);

  std::cout << out.dump(2) << "\n";
  if (!opt.out_dir.empty()) {
    write_json_file(require_out_dir(opt) / "audit.json", out);
  }
  return 0;
}

int cmd_oracle(std::size_t grid_count, double tol, const std::string& out_dir) {
  const auto enum_pm = oracle::enumerate_quadruples(oracle::OutcomeDomain::PlusMinusOne);
  const auto enum_zero = oracle::enumerate_quadruples(oracle::OutcomeDomain::WithZero);
  const std::vector<double> grid = oracle::angle_grid(grid_count);
  const auto certificate =
      oracle::verify_threshold(pearle_threshold, oracle::uniform_density(), grid, tol);

  Json out;
  out["command"] = "oracle";
  out["enumeration_plus_minus_one"] = report::to_json(enum_pm);
  out["enumeration_with_zero"] = report::to_json(enum_zero);
  out["threshold_certificate"] = report::to_json(certificate);

  std::cout << out.dump(2) << "\n";
  if (!out_dir.empty()) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    write_json_file(dir / "certificate.json", out);
  }
  return certificate.pass ? 0 : 1;
}

int cmd_net(const CommonOptions& opt, const std::string& mode, std::uint64_t log_slots) {
  const bool conspiratorial = mode == "conspiratorial";
  if (!conspiratorial && mode != "strict") {
    throw std::invalid_argument("--mode must be 'strict' or 'conspiratorial'");
  }
  if (conspiratorial && opt.model != "pearle") {
    throw std::invalid_argument("conspiratorial mode is defined for the pearle model only");
  }
  const fs::path dir = require_out_dir(opt);
  static const PearleModel pearle;

  const auto run_one = [&](const engine::RunConfig& run_config) {
    net::NetConfig config;
    config.run = run_config;
    config.log_slot_limit = log_slots;
    if (conspiratorial) return net::run_conspiratorial(pearle, config);
    return net::run_strict(model_by_name(run_config.model), config);
  };

  std::vector<report::ResultRow> rows;
  std::vector<net::ScheduleVerdict> verdicts;
  std::ostringstream events;
  Json summary;
  summary["command"] = "net";
  summary["model"] = opt.model;
  summary["mode"] = mode;
  summary["seed"] = opt.seed;
  summary["slots"] = opt.slots;
  summary["log_slots"] = log_slots;
  std::uint64_t total_slots = 0;
  std::uint64_t total_detected = 0;

  if (!opt.grid_spec.empty()) {
    const std::vector<double> grid = parse_grid(opt.grid_spec);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      engine::RunConfig run_config = grid_row_config(opt, grid[k], k);
      const net::NetResult result = run_one(run_config);
      rows.push_back(report::result_row(
          grid[k], result.tally, SettingPair{1, 1},
          singlet_correlation(run_config.alice[0], run_config.bob[0])));
      verdicts.push_back(net::validate_log(result.log));
      result.log.to_ndjson(events);
      total_slots += result.tally.total_slots();
      total_detected += result.tally.total_detected();
    }
    summary["grid_rad"] = grid;
  } else {
    engine::RunConfig run_config = fixed_pairs_config(opt);
    run_config.mode = engine::SettingMode::RandomSettings;
    const net::NetResult result = run_one(run_config);
    rows = pair_rows(result.tally, run_config);
    verdicts.push_back(net::validate_log(result.log));
    result.log.to_ndjson(events);
    total_slots = result.tally.total_slots();
    total_detected = result.tally.total_detected();
    summary["angles_rad"] = angles_json(resolve_angles(opt));
  }

  bool all_local = true;
  Json verdict_list = Json::array();
  for (const auto& v : verdicts) {
    Json j{{"verdict", v.name()}};
    if (v.evidence) {
      j["evidence"] = Json{{"slot", v.evidence->slot},
                           {"from", std::string(net::node_name(v.evidence->from))},
                           {"to", std::string(net::node_name(v.evidence->to))},
                           {"kind", std::string(net::kind_name(v.evidence->kind))},
                           {"t", v.evidence->t}};
      j["reason"] = v.reason;
    }
    verdict_list.push_back(std::move(j));
    all_local = all_local && v.local;
  }
  summary["schedule_verdict"] = all_local ? "LOCAL-SCHEDULE" : "NONLOCAL-SCHEDULE";
  summary["runs"] = std::move(verdict_list);
  summary["total_slots"] = total_slots;
  summary["total_detected"] = total_detected;
  summary["files"] =
      Json{{"results", "results.csv"}, {"events", "events.ndjson"}};

  std::ostringstream csv;
  report::write_results_csv(csv, rows);
  write_text_file(dir / "results.csv", csv.str());
  write_text_file(dir / "events.ndjson", events.str());
  write_json_file(dir / "summary.json", summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Bell-CHSH simulation laboratory for local hidden-variable models"};
  app.require_subcommand(1);

  CommonOptions sim_opt;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Per-angle correlations (full-ensemble and post-selected) as CSV");
  add_common(simulate, sim_opt, true);

  CommonOptions chsh_opt;
  CLI::App* chsh = app.add_subcommand(
      "chsh", "All eight one-sided four-correlation statistics at four directions");
  add_common(chsh, chsh_opt, false);
  chsh->add_option("--ksigma", chsh_opt.k_sigma, "Violation gate in standard errors");

  CommonOptions audit_opt;
  audit_opt.slots = 100'000;
  std::string conditioning = "detected";
  double alpha = 1e-3;
  CLI::App* audit_cmd = app.add_subcommand(
      "audit", "Test independence of settings and hidden variables");
  add_common(audit_cmd, audit_opt, false);
  audit_cmd->add_option("--conditioning", conditioning, "'all' or 'detected'");
  audit_cmd->add_option("--alpha", alpha, "Family-wise false-alarm level");

  std::size_t oracle_grid = 61;
  double oracle_tol = 1e-4;
  std::string oracle_out;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Exact CHSH enumeration and the threshold quadrature certificate");
  oracle_cmd->add_option("--grid-count", oracle_grid, "Certification grid size over [0, pi]");
  oracle_cmd->add_option("--tol", oracle_tol, "Certification tolerance");
  oracle_cmd->add_option("--out", oracle_out, "Output directory");

  CommonOptions net_opt;
  std::string net_mode = "strict";
  std::uint64_t log_slots = 1000;
  CLI::App* net_cmd = app.add_subcommand(
      "net", "Message-scheduled source/station/referee protocol runs");
  add_common(net_cmd, net_opt, true);
  net_cmd->add_option("--mode", net_mode, "'strict' or 'conspiratorial'");
  net_cmd->add_option("--log-slots", log_slots, "Slots to retain in the event log");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_opt);
    if (chsh->parsed()) return cmd_chsh(chsh_opt);
    if (audit_cmd->parsed()) return cmd_audit(audit_opt, conditioning, alpha);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_grid, oracle_tol, oracle_out);
    if (net_cmd->parsed()) return cmd_net(net_opt, net_mode, log_slots);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace belllab::cli
