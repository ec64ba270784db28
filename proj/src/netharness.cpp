#include "belllab/netharness.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace belllab::net {

std::string_view node_name(NodeId id) {
  switch (id) {
    case NodeId::Source:
      return "source";
    case NodeId::Alice:
      return "alice";
    case NodeId::Bob:
      return "bob";
    case NodeId::Referee:
      return "referee";
  }
  return "?";
}

std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::Particle:
      return "particle";
    case MessageKind::SettingDrawLocal:
      return "setting-draw-local";
    case MessageKind::SettingForward:
      return "setting-forward";
    case MessageKind::OutcomeCommit:
      return "outcome-commit";
    case MessageKind::Record:
      return "record";
  }
  return "?";
}

void MessageLog::to_ndjson(std::ostream& out) const {
  for (const Message& m : messages_) {
    out << "{\"slot\":" << m.slot << ",\"from\":\"" << node_name(m.from) << "\",\"to\":\""
        << node_name(m.to) << "\",\"kind\":\"" << kind_name(m.kind) << "\",\"t\":" << m.t
        << "}\n";
  }
}

namespace {

// Station state machine. The commit handler can only see the station's own
// direction and the particle payload; there is no interface through which the
// other station's setting could arrive.
class StationNode {
 public:
  StationNode(Side side, const std::array<Direction, 2>& directions, const LhvModel& model)
      : side_(side), directions_(directions), model_(model) {}

  int draw_setting(const engine::RunConfig& config, std::uint64_t slot) const {
    switch (config.mode) {
      case engine::SettingMode::SinglePair:
        return 1;
      case engine::SettingMode::FixedPairs: {
        const std::uint64_t local = slot - config.slot_offset;
        const int block = static_cast<int>(local / config.slots_per_pair);
        const SettingPair pair = kAllPairs[static_cast<std::size_t>(block)];
        return side_ == Side::Alice ? pair.a : pair.b;
      }
      case engine::SettingMode::RandomSettings: {
        RandomStream coin = substream(
            config.seed, slot,
            side_ == Side::Alice ? StreamRole::AliceCoin : StreamRole::BobCoin);
        return coin.next_coin() > 0 ? 2 : 1;
      }
    }
    throw std::logic_error("draw_setting: unreachable");
  }

  const Direction& direction(int setting) const {
    return directions_.at(static_cast<std::size_t>(setting - 1));
  }

  Outcome commit(int setting, const HiddenVariable& particle) const {
    const Direction& own = direction(setting);
    return side_ == Side::Alice ? model_.station_a(own, particle)
                                : model_.station_b(own, particle);
  }

 private:
  Side side_;
  std::array<Direction, 2> directions_;
  const LhvModel& model_;
};

class RefereeNode {
 public:
  explicit RefereeNode(const engine::RunConfig& config)
      : tally_(config.alice, config.bob), trace_(config.audit_trace) {
    if (trace_) records_.reserve(config.total_slots());
  }

  void record(const TrialRecord& r) {
    tally_.add(r.pair, r.outcome_a, r.outcome_b);
    if (trace_) records_.push_back(r);
  }

  Tally take_tally() { return std::move(tally_); }
  std::vector<TrialRecord> take_records() { return std::move(records_); }

 private:
  Tally tally_;
  bool trace_;
  std::vector<TrialRecord> records_;
};

}  // namespace

NetResult run_strict(const LhvModel& model, const NetConfig& config) {
  const engine::RunConfig& run = config.run;
  const std::uint64_t begin = run.slot_offset;
  const std::uint64_t end = begin + run.total_slots();

  StationNode alice(Side::Alice, run.alice, model);
  StationNode bob(Side::Bob, run.bob, model);
  RefereeNode referee(run);
  NetResult out;

  for (std::uint64_t slot = begin; slot < end; ++slot) {
    const bool logged = slot - begin < config.log_slot_limit;
    const auto log = [&](NodeId from, NodeId to, MessageKind kind, int t) {
      if (logged) out.log.append(Message{slot, from, to, kind, t});
    };

    // t=0: the source emits the hidden variable to both stations.
    RandomStream source_rng = substream(run.seed, slot, StreamRole::Source);
    const HiddenVariable particle = model.source_sample(source_rng);
    log(NodeId::Source, NodeId::Alice, MessageKind::Particle, 0);
    log(NodeId::Source, NodeId::Bob, MessageKind::Particle, 0);

    // t=1: local setting draws, after the particle is already in flight.
    const int setting_a = alice.draw_setting(run, slot);
    const int setting_b = bob.draw_setting(run, slot);
    log(NodeId::Alice, NodeId::Alice, MessageKind::SettingDrawLocal, 1);
    log(NodeId::Bob, NodeId::Bob, MessageKind::SettingDrawLocal, 1);

    // t=2: each station commits an outcome from its own setting only.
    TrialRecord record;
    record.slot = slot;
    record.pair = SettingPair{setting_a, setting_b};
    record.alice_direction = alice.direction(setting_a);
    record.bob_direction = bob.direction(setting_b);
    record.outcome_a = alice.commit(setting_a, particle);
    record.outcome_b = bob.commit(setting_b, particle);
    if (run.audit_trace) record.hidden = particle;
    log(NodeId::Alice, NodeId::Referee, MessageKind::OutcomeCommit, 2);
    log(NodeId::Bob, NodeId::Referee, MessageKind::OutcomeCommit, 2);

    // t=3: the referee records the slot; nothing is ever dropped.
    referee.record(record);
    log(NodeId::Referee, NodeId::Referee, MessageKind::Record, 3);
  }

  out.tally = referee.take_tally();
  out.records = referee.take_records();
  return out;
}

NetResult run_conspiratorial(const PearleModel& model, const NetConfig& config) {
  const engine::RunConfig& run = config.run;
  const std::uint64_t begin = run.slot_offset;
  const std::uint64_t end = begin + run.total_slots();

  StationNode alice(Side::Alice, run.alice, model);
  StationNode bob(Side::Bob, run.bob, model);
  RefereeNode referee(run);
  NetResult out;

  for (std::uint64_t slot = begin; slot < end; ++slot) {
    const bool logged = slot - begin < config.log_slot_limit;
    const auto log = [&](NodeId from, NodeId to, MessageKind kind, int t) {
      if (logged) out.log.append(Message{slot, from, to, kind, t});
    };

    // t=0: settings first.
    const int setting_a = alice.draw_setting(run, slot);
    const int setting_b = bob.draw_setting(run, slot);
    log(NodeId::Alice, NodeId::Alice, MessageKind::SettingDrawLocal, 0);
    log(NodeId::Bob, NodeId::Bob, MessageKind::SettingDrawLocal, 0);

    // t=1: both settings are forwarded to the source. These are the extra
    // channels a strict schedule does not have.
    log(NodeId::Alice, NodeId::Source, MessageKind::SettingForward, 1);
    log(NodeId::Bob, NodeId::Source, MessageKind::SettingForward, 1);
    const Direction& dir_a = alice.direction(setting_a);
    const Direction& dir_b = bob.direction(setting_b);

    // t=2: the source rejection-samples until both stations would detect,
    // i.e. it emits from the conditional distribution given the settings.
    RandomStream source_rng = substream(run.seed, slot, StreamRole::Source);
    HiddenVariable particle;
    bool accepted = false;
    for (std::uint64_t attempt = 0; attempt < config.rejection_attempt_cap; ++attempt) {
      particle = model.source_sample(source_rng);
      if (model.station_a(dir_a, particle).detected() &&
          model.station_b(dir_b, particle).detected()) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "run_conspiratorial: rejection sampling exceeded "
          << config.rejection_attempt_cap << " attempts at slot " << slot;
      throw ProtocolFault(msg.str());
    }
    log(NodeId::Source, NodeId::Alice, MessageKind::Particle, 2);
    log(NodeId::Source, NodeId::Bob, MessageKind::Particle, 2);

    // t=3: commits; by construction neither outcome is 0.
    TrialRecord record;
    record.slot = slot;
    record.pair = SettingPair{setting_a, setting_b};
    record.alice_direction = dir_a;
    record.bob_direction = dir_b;
    record.outcome_a = alice.commit(setting_a, particle);
    record.outcome_b = bob.commit(setting_b, particle);
    if (run.audit_trace) record.hidden = particle;
    log(NodeId::Alice, NodeId::Referee, MessageKind::OutcomeCommit, 3);
    log(NodeId::Bob, NodeId::Referee, MessageKind::OutcomeCommit, 3);

    // t=4: record.
    referee.record(record);
    log(NodeId::Referee, NodeId::Referee, MessageKind::Record, 4);
  }

  out.tally = referee.take_tally();
  out.records = referee.take_records();
  return out;
}

namespace {

bool is_station(NodeId id) { return id == NodeId::Alice || id == NodeId::Bob; }

bool channel_allowed(const Message& m) {
  switch (m.kind) {
    case MessageKind::Particle:
      return m.from == NodeId::Source && is_station(m.to);
    case MessageKind::SettingDrawLocal:
      return is_station(m.from) && m.to == m.from;
    case MessageKind::SettingForward:
      return false;  // no channel toward the source exists in a local schedule
    case MessageKind::OutcomeCommit:
      return is_station(m.from) && m.to == NodeId::Referee;
    case MessageKind::Record:
      return m.from == NodeId::Referee && m.to == NodeId::Referee;
  }
  return false;
}

std::string describe(const Message& m) {
  std::ostringstream s;
  s << kind_name(m.kind) << " " << node_name(m.from) << "->" << node_name(m.to) << " at t="
    << m.t << " in slot " << m.slot;
  return s.str();
}

}  // namespace

ScheduleVerdict validate_log(const MessageLog& log) {
  std::map<std::uint64_t, std::vector<const Message*>> slots;
  for (const Message& m : log.messages()) {
    if (m.t < 0) throw std::invalid_argument("validate_log: negative logical timestamp");
    slots[m.slot].push_back(&m);
  }

  ScheduleVerdict verdict;
  for (const auto& [slot, messages] : slots) {
    int records = 0;
    int commits_alice = 0;
    int commits_bob = 0;
    int particles = 0;
    for (const Message* m : messages) {
      if (m->kind == MessageKind::Record) ++records;
      if (m->kind == MessageKind::OutcomeCommit && m->from == NodeId::Alice) ++commits_alice;
      if (m->kind == MessageKind::OutcomeCommit && m->from == NodeId::Bob) ++commits_bob;
      if (m->kind == MessageKind::Particle) ++particles;
    }
    if (records != 1 || commits_alice != 1 || commits_bob != 1 || particles < 2) {
      std::ostringstream msg;
      msg << "validate_log: slot " << slot << " is malformed (records=" << records
          << ", commits=" << commits_alice + commits_bob << ", particles=" << particles << ")";
      throw std::invalid_argument(msg.str());
    }

    // Channel topology: any message into the source is setting information
    // reaching the source; any station-to-station message is a direct
    // signalling channel. Both defeat the locality argument outright.
    for (const Message* m : messages) {
      if (m->to == NodeId::Source && m->from != NodeId::Source) {
        return {false, *m, "setting information reaches the source: " + describe(*m)};
      }
    }
    for (const Message* m : messages) {
      if (is_station(m->from) && is_station(m->to) && m->from != m->to) {
        return {false, *m, "direct channel between the stations: " + describe(*m)};
      }
      if (!channel_allowed(*m)) {
        return {false, *m, "message on a channel absent from the local schedule: " + describe(*m)};
      }
    }

    // Causal order: every hidden-variable emission precedes every setting draw.
    int first_draw_t = std::numeric_limits<int>::max();
    for (const Message* m : messages) {
      if (m->kind == MessageKind::SettingDrawLocal) first_draw_t = std::min(first_draw_t, m->t);
    }
    for (const Message* m : messages) {
      if (m->kind == MessageKind::Particle && m->t >= first_draw_t) {
        return {false, *m, "hidden variable emitted at or after a setting draw: " + describe(*m)};
      }
    }

    // Commits precede the record.
    int record_t = 0;
    for (const Message* m : messages) {
      if (m->kind == MessageKind::Record) record_t = m->t;
    }
    for (const Message* m : messages) {
      if (m->kind == MessageKind::OutcomeCommit && m->t > record_t) {
        std::ostringstream msg;
        msg << "validate_log: slot " << slot << " records before an outcome commit";
        throw std::invalid_argument(msg.str());
      }
    }
  }
  return verdict;
}

}  // namespace belllab::net
