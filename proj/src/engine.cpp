#include "belllab/engine.hpp"

#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace belllab::engine {

int max_workers() {
  int workers = 1;
#ifdef _OPENMP
  workers = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("BELLLAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && cap < workers) workers = static_cast<int>(cap);
  }
  return workers < 1 ? 1 : workers;
}

namespace {

SettingPair pick_pair(const RunConfig& config, std::uint64_t slot) {
  switch (config.mode) {
    case SettingMode::SinglePair:
      return SettingPair{1, 1};
    case SettingMode::FixedPairs: {
      const std::uint64_t local = slot - config.slot_offset;
      const int block = static_cast<int>(local / config.slots_per_pair);
      return kAllPairs[static_cast<std::size_t>(block)];
    }
    case SettingMode::RandomSettings: {
      RandomStream a_coin = substream(config.seed, slot, StreamRole::AliceCoin);
      RandomStream b_coin = substream(config.seed, slot, StreamRole::BobCoin);
      return SettingPair{a_coin.next_coin() > 0 ? 2 : 1, b_coin.next_coin() > 0 ? 2 : 1};
    }
  }
  throw std::logic_error("pick_pair: unreachable");
}

Tally make_tally(const RunConfig& config) { return Tally(config.alice, config.bob); }

}  // namespace

TrialRecord simulate_slot(const LhvModel& model, const RunConfig& config, std::uint64_t slot) {
  RandomStream source = substream(config.seed, slot, StreamRole::Source);
  const HiddenVariable hidden = model.source_sample(source);
  const SettingPair pair = pick_pair(config, slot);
  TrialRecord record;
  record.slot = slot;
  record.pair = pair;
  record.alice_direction = config.alice[static_cast<std::size_t>(pair.a - 1)];
  record.bob_direction = config.bob[static_cast<std::size_t>(pair.b - 1)];
  record.outcome_a = model.station_a(record.alice_direction, hidden);
  record.outcome_b = model.station_b(record.bob_direction, hidden);
  if (config.audit_trace) record.hidden = hidden;
  return record;
}

RunResult run_experiment_serial(const LhvModel& model, const RunConfig& config) {
  const std::uint64_t begin = config.slot_offset;
  const std::uint64_t end = config.slot_offset + config.total_slots();
  RunResult out;
  out.tally = make_tally(config);
  if (config.audit_trace) out.records.resize(config.total_slots());
  for (std::uint64_t slot = begin; slot < end; ++slot) {
    TrialRecord record = simulate_slot(model, config, slot);
    out.tally.add(record.pair, record.outcome_a, record.outcome_b);
    if (config.audit_trace) out.records[slot - begin] = std::move(record);
  }
  return out;
}

RunResult run_experiment(const LhvModel& model, const RunConfig& config) {
  const std::uint64_t begin = config.slot_offset;
  const std::uint64_t total = config.total_slots();
  RunResult out;
  out.tally = make_tally(config);
  if (config.audit_trace) out.records.resize(total);

  const int workers = max_workers();
#ifdef _OPENMP
  std::vector<Tally> partials(static_cast<std::size_t>(workers), make_tally(config));
  TrialRecord* records = out.records.data();
#pragma omp parallel num_threads(workers)
  {
    const std::size_t tid = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
      const std::uint64_t slot = begin + static_cast<std::uint64_t>(i);
      TrialRecord record = simulate_slot(model, config, slot);
      partials[tid].add(record.pair, record.outcome_a, record.outcome_b);
      if (config.audit_trace) records[i] = std::move(record);
    }
  }
  for (const Tally& partial : partials) out.tally = merge(out.tally, partial);
#else
  (void)workers;
  out = run_experiment_serial(model, config);
#endif
  return out;
}

RunResult run_experiment(const RunConfig& config) {
  return run_experiment(model_by_name(config.model), config);
}

Tally run_chunk(const LhvModel& model, const RunConfig& config, std::uint64_t begin,
                std::uint64_t end) {
  const std::uint64_t lo = config.slot_offset;
  const std::uint64_t hi = config.slot_offset + config.total_slots();
  if (begin < lo || end > hi || begin > end) {
    throw std::invalid_argument("run_chunk: slot range outside the configured run");
  }
  Tally tally = make_tally(config);
  for (std::uint64_t slot = begin; slot < end; ++slot) {
    const TrialRecord record = simulate_slot(model, config, slot);
    tally.add(record.pair, record.outcome_a, record.outcome_b);
  }
  return tally;
}

}  // namespace belllab::engine
