#pragma once

#include <span>

#include "neurogate/metrics/safety.hpp"
#include "neurogate/monitor/trace.hpp"

namespace neurogate::monitor {

// One frame of input to a session run: the decoded posterior plus, when
// available, the window it came from and the true intent label.
struct SessionFrame {
  intent::IntentPosterior posterior;
  const signal::EegWindow* window{nullptr};
  std::optional<double> artifact_score;
  std::optional<intent::Action> label;
};

struct LatencySummary {
  double p50_us{0.0};
  double p95_us{0.0};
  double p99_us{0.0};
  double max_us{0.0};
  double decisions_per_sec{0.0};
};

// Nearest-rank percentiles over per-step latencies.
LatencySummary summarize_latency(std::vector<double> samples_us);

struct SessionResult {
  metrics::SafetyLedger ledger;
  LatencySummary latency;
  std::uint64_t frames{0};
  std::uint64_t executed{0};
  std::uint64_t halted{0};
  std::uint64_t rejected{0};  // malformed input frames skipped upstream
  planner::WorldState final_state;
  std::vector<StepResult> steps;  // only when keep_steps
};

// Feeds frames through the monitor in order, filling the ledger from the
// labels and optionally mirroring every step into a trace.
SessionResult run_session(Monitor& mon, std::span<const SessionFrame> frames,
                          TraceWriter* trace = nullptr, bool keep_steps = false);

TraceRecord to_trace_record(const StepResult& r, const planner::GroundModel& model,
                            std::optional<intent::Action> label, std::uint64_t t_us);

struct ReplayMismatch {
  std::uint64_t frame{0};
  std::string recorded;
  std::string replayed;
};

struct ReplayResult {
  std::size_t frames{0};
  std::vector<ReplayMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Re-runs the gate from the recorded raw posteriors and artifact scores
// under the header's config and limits, and compares each record's
// decision fields with the recorded ones byte for byte (timing fields
// excluded).
ReplayResult replay_trace(const Trace& t, std::shared_ptr<planner::GroundModel> model,
                          const planner::WorldState& s0);

}  // namespace neurogate::monitor
