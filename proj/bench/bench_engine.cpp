// Times the OpenMP slot loop against the serial reference on the same
// configuration and checks that both produce the identical tally.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "belllab/engine.hpp"

using namespace belllab;

namespace {

template <class F>
double timed(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t slots_per_pair = 500'000;
  if (argc > 1) slots_per_pair = std::strtoull(argv[1], nullptr, 10);

  engine::RunConfig config;
  config.model = "pearle";
  config.mode = engine::SettingMode::RandomSettings;
  config.slots_per_pair = slots_per_pair;
  config.seed = 20211022;

  const auto& model = model_by_name(config.model);

  engine::RunResult serial;
  engine::RunResult parallel;
  const double t_serial = timed([&] { serial = engine::run_experiment_serial(model, config); });
  const double t_parallel = timed([&] { parallel = engine::run_experiment(model, config); });

  if (!(serial.tally == parallel.tally)) {
    std::fprintf(stderr, "FAIL: parallel tally differs from serial reference\n");
    return 1;
  }

  const double total = static_cast<double>(config.total_slots());
  std::printf("model=%s slots=%llu workers=%d\n", config.model.c_str(),
              static_cast<unsigned long long>(config.total_slots()), engine::max_workers());
  std::printf("serial   %8.3f s   %10.0f slots/s\n", t_serial, total / t_serial);
  std::printf("parallel %8.3f s   %10.0f slots/s   speedup %.2fx\n", t_parallel,
              total / t_parallel, t_serial / t_parallel);
  return 0;
}
