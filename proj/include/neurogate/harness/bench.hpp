#pragma once

#include "neurogate/harness/generator.hpp"
#include "neurogate/monitor/session.hpp"

namespace neurogate::harness {

struct BenchResult {
  std::uint64_t steps{0};
  std::size_t pool_frames{0};
  monitor::LatencySummary latency;
  std::uint64_t plan_cache_hits{0};
  std::size_t plan_cache_size{0};
};

// Monitor::step latency with a warm plan cache. A pool of generated frames
// (windows included when the scenario emits them) is fed through once
// unrecorded to fill the history and the cache, then cycled until `steps`
// per-step latencies have been collected from the monitor's own clock, so
// generation cost never pollutes the measurement.
BenchResult bench_latency(const ScenarioSpec& spec, std::uint64_t steps = 100000);

}  // namespace neurogate::harness
