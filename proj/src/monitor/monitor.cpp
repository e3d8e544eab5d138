#include "neurogate/monitor/monitor.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "neurogate/core/hash.hpp"

namespace neurogate::monitor {

const char* to_string(Verdict v) {
  return v == Verdict::Execute ? "EXECUTE" : "HALT";
}

const char* to_string(Cause c) {
  switch (c) {
    case Cause::None: return "none";
    case Cause::Warmup: return "warmup";
    case Cause::LowConfidence: return "low-confidence";
    case Cause::HighArtifact: return "high-artifact";
    case Cause::HighOscillation: return "high-oscillation";
    case Cause::LogicalPhi1: return "logical-phi1";
    case Cause::LogicalPhi2: return "logical-phi2";
    case Cause::LogicalPhi3: return "logical-phi3";
  }
  return "?";
}

Cause first_failing_cause(const std::array<bool, 6>& passed) {
  static constexpr Cause kCauses[6] = {
      Cause::LowConfidence, Cause::HighArtifact,  Cause::HighOscillation,
      Cause::LogicalPhi1,   Cause::LogicalPhi2,   Cause::LogicalPhi3,
  };
  for (std::size_t i = 0; i < 6; ++i)
    if (!passed[i]) return kCauses[i];
  return Cause::None;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Cause phi_cause(int phi) {
  switch (phi) {
    case 1: return Cause::LogicalPhi1;
    case 2: return Cause::LogicalPhi2;
    default: return Cause::LogicalPhi3;
  }
}

}  // namespace

Monitor::Monitor(std::shared_ptr<planner::GroundModel> model, planner::WorldState s0,
                 planner::TaskContext ctx, MonitorConfig cfg,
                 std::optional<signal::BaselineStats> baseline, AblationMask mask,
                 planner::SearchLimits limits)
    : model_(std::move(model)),
      state_(std::move(s0)),
      ctx_(std::move(ctx)),
      cfg_(cfg),
      baseline_(std::move(baseline)),
      mask_(mask),
      limits_(limits),
      history_(cfg.k_frames) {
  cfg_.validate();
  if (!model_) throw std::invalid_argument("monitor needs a ground model");

  // Pre-ground whatever goals the context can express. Intents whose goal
  // cannot be formed halt conservatively at runtime instead of throwing.
  for (int i = 0; i < intent::kNumActions; ++i) {
    try {
      goals_[std::size_t(i)] = planner::ground_to_goal(*model_, intent::Action(i), ctx_);
    } catch (const std::exception& e) {
      goal_errors_[std::size_t(i)] = e.what();
    }
  }
}

StepResult Monitor::step(const FrameInput& in) {
  const auto t0 = std::chrono::steady_clock::now();

  // Validate signal inputs before any state mutates.
  if (in.window) {
    if (!baseline_)
      throw std::invalid_argument("monitor received a window but has no baseline statistics");
    if (in.window->m.channels != baseline_->channels())
      throw std::invalid_argument("window channel count does not match baseline");
  }

  StepResult out;
  out.frame = in.index;
  out.posterior_raw = in.posterior.probs();

  const double alpha = mask_.calibration ? cfg_.alpha_m : 1.0;
  const intent::CalibratedPosterior cal = intent::calibrate(in.posterior, alpha);
  out.posterior_cal = cal.p;

  history_.push_frame(cal);
  ++frames_seen_;

  out.m.entropy = intent::normalized_entropy(cal);
  out.m.omega = history_.oscillation_index();
  out.m.intent = cal.argmax();
  out.m.max_prob = cal.max_prob();
  if (in.window)
    out.m.artifact = signal::artifact_score(*in.window, *baseline_);
  else
    out.m.artifact = in.artifact_score;

  const auto finish = [&](Verdict v, Cause c, std::string action, std::string detail) {
    out.decision.verdict = v;
    out.decision.cause = c;
    out.decision.action = std::move(action);
    out.decision.detail = std::move(detail);
    out.latency_us = std::chrono::duration<double, std::micro>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return out;
  };

  if (cfg_.warmup_halt && frames_seen_ <= cfg_.k_frames)
    return finish(Verdict::Halt, Cause::Warmup,
                  "", "history " + std::to_string(history_.size()) + "/" +
                          std::to_string(cfg_.k_frames));

  if (mask_.entropy && !(out.m.entropy < cfg_.tau_h))
    return finish(Verdict::Halt, Cause::LowConfidence,
                  "", "entropy " + fmt(out.m.entropy) + " >= " + fmt(cfg_.tau_h));

  if (mask_.artifact && out.m.artifact && !(*out.m.artifact < cfg_.tau_a))
    return finish(Verdict::Halt, Cause::HighArtifact,
                  "", "artifact " + fmt(*out.m.artifact) + " >= " + fmt(cfg_.tau_a));

  if (mask_.oscillation && !(out.m.omega < cfg_.tau_omega))
    return finish(Verdict::Halt, Cause::HighOscillation,
                  "", "oscillation " + fmt(out.m.omega) + " >= " + fmt(cfg_.tau_omega));

  if (!mask_.logical) {
    // Logical layer ablated: pass the decoded intent straight through.
    return finish(Verdict::Execute, Cause::None, "", "logical checks disabled");
  }

  const auto& goal = goals_[std::size_t(out.m.intent)];
  if (!goal)
    return finish(Verdict::Halt, Cause::LogicalPhi1,
                  "", "goal ungroundable: " + goal_errors_[std::size_t(out.m.intent)]);

  const std::uint64_t key =
      core::hash_mix(state_.fingerprint(),
                     core::fnv1a64(goal->atoms.data(),
                                   goal->atoms.size() * sizeof(std::uint32_t)));
  planner::PlanResult plan;
  if (const auto it = plan_cache_.find(key); it != plan_cache_.end()) {
    plan = it->second;
    ++cache_hits_;
  } else {
    plan = planner::synthesize_plan(*model_, state_, *goal, limits_);
    if (plan_cache_.size() >= 4096) plan_cache_.clear();
    plan_cache_.emplace(key, plan);
  }
  out.plan = plan;
  out.planned = true;

  if (plan.status == planner::PlanStatus::NoPlan)
    return finish(Verdict::Halt, Cause::LogicalPhi1, "",
                  "no plan reaches goal [" + goal->description + "]");
  if (plan.status == planner::PlanStatus::BudgetExceeded)
    return finish(Verdict::Halt, Cause::LogicalPhi3, "",
                  "planning budget exceeded for goal [" + goal->description + "]");

  const auto violations = planner::check_logical(*model_, state_, plan.steps);
  if (!violations.empty()) {
    const auto& v = violations.front();
    return finish(Verdict::Halt, phi_cause(v.phi), "",
                  "step " + std::to_string(v.step) + " " + v.action + ": " + v.message);
  }

  if (plan.steps.empty())
    return finish(Verdict::Execute, Cause::None, "", "goal already satisfied");

  const planner::GroundAction& act = model_->action(plan.steps.front());
  state_ = planner::apply(state_, act);
  return finish(Verdict::Execute, Cause::None, act.name, "");
}

}  // namespace neurogate::monitor
