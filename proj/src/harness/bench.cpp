#include "neurogate/harness/bench.hpp"

#include <stdexcept>

#include "neurogate/monitor/monitor.hpp"

namespace neurogate::harness {

BenchResult bench_latency(const ScenarioSpec& spec, std::uint64_t steps) {
  spec.validate();
  if (steps == 0) throw std::invalid_argument("bench: steps must be positive");

  const std::uint64_t pool_trials =
      std::max<std::uint64_t>(1, 1024 / spec.dwell_frames);
  SessionGenerator gen(spec, spec.snr_schedule_db.front(), pool_trials, spec.seed);

  std::vector<GeneratedFrame> pool;
  std::vector<GeneratedFrame> trial;
  while (gen.next_trial(trial)) {
    for (GeneratedFrame& g : trial) pool.push_back(std::move(g));
    trial.clear();
  }

  const TaskSetup task = build_task(spec);
  monitor::Monitor mon(task.model, task.initial_state, task.context, spec.config,
                       gen.baseline(), spec.mask, spec.limits);

  std::vector<double> lat;
  lat.reserve(steps);
  std::uint64_t index = 0;
  auto step_one = [&](const GeneratedFrame& g, bool record) {
    monitor::FrameInput in;
    in.index = index++;
    in.posterior = g.posterior;
    if (g.window) in.window = &*g.window;
    const monitor::StepResult r = mon.step(in);
    if (record) lat.push_back(r.latency_us);
  };

  for (const GeneratedFrame& g : pool) step_one(g, false);

  std::uint64_t done = 0;
  while (done < steps)
    for (const GeneratedFrame& g : pool) {
      if (done >= steps) break;
      step_one(g, true);
      ++done;
    }

  BenchResult out;
  out.steps = steps;
  out.pool_frames = pool.size();
  out.latency = monitor::summarize_latency(std::move(lat));
  out.plan_cache_hits = mon.plan_cache_hits();
  out.plan_cache_size = mon.plan_cache_size();
  return out;
}

}  // namespace neurogate::harness
