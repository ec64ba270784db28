#ifndef BELLLAB_NETHARNESS_HPP
#define BELLLAB_NETHARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "belllab/core.hpp"
#include "belllab/engine.hpp"
#include "belllab/models.hpp"

namespace belllab::net {

enum class NodeId { Source, Alice, Bob, Referee };

enum class MessageKind {
  Particle,          // hidden-variable payload, source -> station
  SettingDrawLocal,  // a station's local setting choice (self message)
  SettingForward,    // station -> source; only the conspiratorial schedule emits this
  OutcomeCommit,     // station -> referee
  Record,            // referee aggregates the slot
};

std::string_view node_name(NodeId id);
std::string_view kind_name(MessageKind kind);

struct Message {
  std::uint64_t slot = 0;
  NodeId from = NodeId::Source;
  NodeId to = NodeId::Source;
  MessageKind kind = MessageKind::Particle;
  int t = 0;  // logical timestamp within the slot
};

// Ordered per-slot message events. Retention may be capped for long runs;
// retained slots are always complete.
class MessageLog {
 public:
  void append(const Message& m) { messages_.push_back(m); }
  const std::vector<Message>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }

  // One line-delimited JSON object per event: {slot, from, to, kind, t}.
  void to_ndjson(std::ostream& out) const;

 private:
  std::vector<Message> messages_;
};

struct NetConfig {
  engine::RunConfig run;
  // Retain message events for at most this many slots (from the start of the
  // run). Validation and NDJSON output operate on the retained slots.
  std::uint64_t log_slot_limit = 10'000;
  std::uint64_t rejection_attempt_cap = 1'000'000;
};

struct NetResult {
  Tally tally;
  MessageLog log;
  std::vector<TrialRecord> records;  // one per slot when run.audit_trace is set
};

// Strict locality schedule, per slot: the source emits the hidden variable to
// both stations; each station then draws its own setting and commits an
// outcome computed from (own setting, hidden variable) alone; the referee
// records every slot. The station interface makes the other station's setting
// unreachable.
NetResult run_strict(const LhvModel& model, const NetConfig& config);

// Deliberately conspiratorial schedule: settings are drawn first and sent to
// the source, which rejection-samples the hidden variable until both stations
// would detect. Every slot then yields a +-1 pair, and the full-ensemble
// statistics equal the strict schedule's post-selected ones.
NetResult run_conspiratorial(const PearleModel& model, const NetConfig& config);

struct ScheduleVerdict {
  bool local = true;  // LOCAL-SCHEDULE when true, NONLOCAL-SCHEDULE otherwise
  std::optional<Message> evidence;
  std::string reason;

  std::string name() const { return local ? "LOCAL-SCHEDULE" : "NONLOCAL-SCHEDULE"; }
};

// Pure function of the log. Checks, per slot: the hidden variable is emitted
// before any setting draw, and no message channel lets a setting draw reach
// the other station's outcome or the source's emission.
ScheduleVerdict validate_log(const MessageLog& log);

}  // namespace belllab::net

#endif  // BELLLAB_NETHARNESS_HPP
