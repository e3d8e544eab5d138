#pragma once

#include <memory>
#include <unordered_map>

#include "neurogate/intent/history.hpp"
#include "neurogate/monitor/config.hpp"
#include "neurogate/monitor/decision.hpp"
#include "neurogate/planner/goal.hpp"
#include "neurogate/planner/search.hpp"
#include "neurogate/planner/verify.hpp"
#include "neurogate/signal/features.hpp"
#include "neurogate/signal/types.hpp"

namespace neurogate::monitor {

struct FrameInput {
  std::uint64_t index{0};
  intent::IntentPosterior posterior;
  // Either a window (scored against the baseline) or a precomputed
  // artifact score (replay path). Neither means the artifact check is
  // unmeasured and passes.
  const signal::EegWindow* window{nullptr};
  std::optional<double> artifact_score;
};

struct StepResult {
  std::uint64_t frame{0};
  Decision decision;
  Measurements m;
  std::array<double, 4> posterior_raw{};
  std::array<double, 4> posterior_cal{};
  planner::PlanResult plan;     // empty unless planning ran
  bool planned{false};
  double latency_us{0.0};
};

// Frame-by-frame gate in front of the plant. Owns the intent history, the
// evolving world state and a plan cache keyed by (goal, state), so a warm
// step re-verifies the cached plan instead of searching again.
//
// Per frame: calibrate, push history, then in order entropy, artifact,
// oscillation, then ground the goal, plan, verify. First failure halts
// and leaves the state untouched; otherwise the first plan step executes
// and advances the state.
class Monitor {
 public:
  Monitor(std::shared_ptr<planner::GroundModel> model, planner::WorldState s0,
          planner::TaskContext ctx, MonitorConfig cfg,
          std::optional<signal::BaselineStats> baseline = std::nullopt,
          AblationMask mask = {}, planner::SearchLimits limits = {});

  StepResult step(const FrameInput& in);

  const planner::WorldState& state() const { return state_; }
  std::uint64_t frames_seen() const { return frames_seen_; }
  std::size_t plan_cache_size() const { return plan_cache_.size(); }
  std::uint64_t plan_cache_hits() const { return cache_hits_; }
  const MonitorConfig& config() const { return cfg_; }
  const AblationMask& mask() const { return mask_; }
  const planner::TaskContext& context() const { return ctx_; }
  planner::GroundModel& model() { return *model_; }

 private:
  std::shared_ptr<planner::GroundModel> model_;
  planner::WorldState state_;
  planner::TaskContext ctx_;
  MonitorConfig cfg_;
  std::optional<signal::BaselineStats> baseline_;
  AblationMask mask_;
  planner::SearchLimits limits_;

  intent::IntentHistory history_;
  std::uint64_t frames_seen_{0};
  std::uint64_t cache_hits_{0};

  // goals per intent; empty slot when the context cannot express one
  std::array<std::optional<planner::Goal>, 4> goals_;
  std::array<std::string, 4> goal_errors_;

  std::unordered_map<std::uint64_t, planner::PlanResult> plan_cache_;
};

}  // namespace neurogate::monitor
