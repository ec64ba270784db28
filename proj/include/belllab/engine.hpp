#ifndef BELLLAB_ENGINE_HPP
#define BELLLAB_ENGINE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "belllab/core.hpp"
#include "belllab/models.hpp"
#include "belllab/rng.hpp"

namespace belllab::engine {

enum class SettingMode {
  FixedPairs,      // four blocks of slots_per_pair slots, one per setting pair
  RandomSettings,  // per-slot coin tosses at each station
  SinglePair,      // one block at (alice[0], bob[0]); used for angle grids
};

struct RunConfig {
  std::string model = "pearle";
  SettingMode mode = SettingMode::FixedPairs;
  std::uint64_t slots_per_pair = 1'000'000;
  std::array<Direction, 2> alice{Direction::from_planar_angle(0.0),
                                 Direction::from_planar_angle(kPi / 2.0)};
  std::array<Direction, 2> bob{Direction::from_planar_angle(kPi / 4.0),
                               Direction::from_planar_angle(3.0 * kPi / 4.0)};
  std::uint64_t seed = 0;
  bool audit_trace = false;
  // Base slot index. Runs that should not share random streams (for example
  // the rows of an angle grid) are separated by disjoint slot ranges.
  std::uint64_t slot_offset = 0;

  std::uint64_t total_slots() const {
    return mode == SettingMode::SinglePair ? slots_per_pair : 4 * slots_per_pair;
  }
};

struct RunResult {
  Tally tally;
  std::vector<TrialRecord> records;  // empty unless audit_trace; one per slot, in slot order
};

// Worker cap: BELLLAB_THREADS when set, otherwise the OpenMP default.
int max_workers();

// Simulate one slot. Settings draws never touch the source stream: the
// hidden variable is a function of (seed, slot, Source) only.
TrialRecord simulate_slot(const LhvModel& model, const RunConfig& config, std::uint64_t slot);

// OpenMP slot loop with per-worker tallies merged at the end. The result is
// identical to the serial reference for any worker count.
RunResult run_experiment(const LhvModel& model, const RunConfig& config);
RunResult run_experiment(const RunConfig& config);  // model looked up by name

// Serial reference implementation, kept as the comparison target for the
// parallel kernel (tests assert fieldwise equality, the benchmark times both).
RunResult run_experiment_serial(const LhvModel& model, const RunConfig& config);

// Tally over the slot sub-range [begin, end) of config's global range.
// merge of chunk tallies over a partition equals the whole-range tally.
Tally run_chunk(const LhvModel& model, const RunConfig& config, std::uint64_t begin,
                std::uint64_t end);

}  // namespace belllab::engine

#endif  // BELLLAB_ENGINE_HPP
