#include "neurogate/monitor/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace neurogate::monitor {

LatencySummary summarize_latency(std::vector<double> samples_us) {
  LatencySummary s;
  if (samples_us.empty()) return s;
  std::sort(samples_us.begin(), samples_us.end());
  const auto rank = [&](double q) {
    const std::size_t n = samples_us.size();
    std::size_t k = std::size_t(std::ceil(q * double(n)));
    if (k == 0) k = 1;
    return samples_us[std::min(k, n) - 1];
  };
  s.p50_us = rank(0.50);
  s.p95_us = rank(0.95);
  s.p99_us = rank(0.99);
  s.max_us = samples_us.back();
  const double total_us = std::accumulate(samples_us.begin(), samples_us.end(), 0.0);
  if (total_us > 0.0) s.decisions_per_sec = double(samples_us.size()) * 1e6 / total_us;
  return s;
}

TraceRecord to_trace_record(const StepResult& r, const planner::GroundModel& model,
                            std::optional<intent::Action> label, std::uint64_t t_us) {
  TraceRecord rec;
  rec.frame = r.frame;
  rec.t_us = t_us;
  rec.posterior_raw = r.posterior_raw;
  rec.posterior_cal = r.posterior_cal;
  rec.artifact_score = r.m.artifact;
  if (label) rec.label = int(*label);
  rec.entropy = r.m.entropy;
  rec.omega = r.m.omega;
  rec.max_prob = r.m.max_prob;
  rec.intent = int(r.m.intent);
  rec.verdict = to_string(r.decision.verdict);
  rec.cause = to_string(r.decision.cause);
  rec.action = r.decision.action;
  rec.detail = r.decision.detail;
  if (r.planned) {
    rec.plan_status = planner::to_string(r.plan.status);
    rec.plan.reserve(r.plan.steps.size());
    for (const std::uint32_t id : r.plan.steps) rec.plan.push_back(model.action(id).name);
  }
  rec.latency_us = r.latency_us;
  return rec;
}

SessionResult run_session(Monitor& mon, std::span<const SessionFrame> frames,
                          TraceWriter* trace, bool keep_steps) {
  SessionResult res;
  std::vector<double> lat;
  lat.reserve(frames.size());
  const auto start = std::chrono::steady_clock::now();

  for (const SessionFrame& f : frames) {
    FrameInput in;
    in.index = res.frames;
    in.posterior = f.posterior;
    in.window = f.window;
    in.artifact_score = f.artifact_score;
    StepResult r = mon.step(in);

    const bool intervened = r.decision.verdict == Verdict::Halt;
    if (intervened) {
      ++res.halted;
      res.ledger.record_cause(to_string(r.decision.cause));
    } else {
      ++res.executed;
    }
    if (f.label)
      res.ledger.record(r.m.intent == *f.label, intervened);
    else
      ++res.ledger.unlabeled;

    lat.push_back(r.latency_us);
    if (trace) {
      const auto t_us = std::uint64_t(std::chrono::duration_cast<std::chrono::microseconds>(
                                          std::chrono::steady_clock::now() - start)
                                          .count());
      trace->write(to_trace_record(r, mon.model(), f.label, t_us));
    }
    if (keep_steps) res.steps.push_back(std::move(r));
    ++res.frames;
  }

  res.latency = summarize_latency(std::move(lat));
  res.final_state = mon.state();
  return res;
}

ReplayResult replay_trace(const Trace& t, std::shared_ptr<planner::GroundModel> model,
                          const planner::WorldState& s0) {
  Monitor mon(model, s0, t.header.ctx, t.header.cfg, std::nullopt, t.header.mask,
              t.header.limits);

  ReplayResult res;
  for (const TraceRecord& rec : t.records) {
    FrameInput in;
    in.index = rec.frame;
    in.posterior = intent::IntentPosterior(rec.posterior_raw);
    in.artifact_score = rec.artifact_score;
    const StepResult r = mon.step(in);

    std::optional<intent::Action> label;
    if (rec.label) label = intent::Action(*rec.label);
    const std::string got = decision_line(to_trace_record(r, *model, label, 0));
    const std::string want = decision_line(rec);
    if (got != want) res.mismatches.push_back({rec.frame, want, got});
    ++res.frames;
  }
  return res;
}

}  // namespace neurogate::monitor
