#include "neurogate/harness/experiment.hpp"

#include <future>
#include <numeric>
#include <set>
#include <stdexcept>

#include "neurogate/core/hash.hpp"
#include "neurogate/monitor/monitor.hpp"

namespace neurogate::harness {

namespace {

std::uint64_t repetition_seed(std::uint64_t base, std::size_t rep) {
  return core::hash_mix(base, std::uint64_t(rep) + 1);
}

std::uint64_t bin_seed(std::uint64_t rep_seed, std::size_t bin) {
  return core::hash_mix(rep_seed, std::uint64_t(bin) + 1);
}

std::uint64_t trials_in_bin(std::uint64_t total, std::size_t bins, std::size_t i) {
  return total / bins + (i < total % bins ? 1 : 0);
}

BinResult run_bin_monitored(const ScenarioSpec& spec, const TaskSetup& task,
                            double snr_db, std::uint64_t trials, std::uint64_t seed,
                            const monitor::AblationMask& mask,
                            std::vector<metrics::LabeledPrediction>* collect) {
  SessionGenerator gen(spec, snr_db, trials, seed);
  monitor::Monitor mon(task.model, task.initial_state, task.context, spec.config,
                       gen.baseline(), mask, spec.limits);

  BinResult bin;
  bin.snr_db = snr_db;
  bin.trials = trials;
  std::vector<double> lat;
  lat.reserve(trials * spec.dwell_frames);
  std::uint64_t correct_decodes = 0;

  std::vector<GeneratedFrame> frames;
  while (gen.next_trial(frames)) {
    for (const GeneratedFrame& g : frames) {
      monitor::FrameInput in;
      in.index = g.index;
      in.posterior = g.posterior;
      if (g.window) in.window = &*g.window;
      const monitor::StepResult r = mon.step(in);

      const bool correct = r.m.intent == g.truth;
      const bool intervened = r.decision.verdict == monitor::Verdict::Halt;
      bin.ledger.record(correct, intervened);
      if (intervened) bin.ledger.record_cause(monitor::to_string(r.decision.cause));
      if (correct) ++correct_decodes;
      lat.push_back(r.latency_us);
      if (collect) collect->push_back({r.posterior_raw, int(g.truth)});
      ++bin.frames;
    }
    frames.clear();
  }

  bin.decoder_accuracy = bin.frames ? double(correct_decodes) / double(bin.frames) : 0.0;
  if (!lat.empty()) bin.latency = monitor::summarize_latency(std::move(lat));
  return bin;
}

RepetitionResult run_repetition(const ScenarioSpec& spec, std::size_t rep,
                                const monitor::AblationMask& mask,
                                std::vector<metrics::LabeledPrediction>* collect) {
  // Each repetition grounds its own model: atom interning mutates the
  // model, so instances are never shared across threads.
  const TaskSetup task = build_task(spec);
  const std::size_t nbins = spec.snr_schedule_db.size();

  RepetitionResult rr;
  rr.seed = repetition_seed(spec.seed, rep);
  rr.bins.reserve(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    rr.bins.push_back(run_bin_monitored(spec, task, spec.snr_schedule_db[b],
                                        trials_in_bin(spec.trials, nbins, b),
                                        bin_seed(rr.seed, b), mask, collect));
    rr.pooled.merge(rr.bins.back().ledger);
  }
  return rr;
}

metrics::PairedStats paired_or_mean(const std::vector<double>& deltas) {
  try {
    return metrics::paired_t_and_effect(deltas);
  } catch (const std::invalid_argument&) {
    // Degenerate deltas (identical nonzero values): keep the mean, leave
    // the diverging statistics at their defaults.
    metrics::PairedStats s;
    s.n = deltas.size();
    s.mean_delta = deltas.empty()
                       ? 0.0
                       : std::accumulate(deltas.begin(), deltas.end(), 0.0) / double(deltas.size());
    return s;
  }
}

}  // namespace

ExperimentResult run_experiment(const ScenarioSpec& spec) {
  spec.validate();
  ExperimentResult out;

  std::vector<metrics::LabeledPrediction> preds;
  std::vector<std::future<RepetitionResult>> futs;
  for (std::size_t rep = 1; rep < spec.repetitions; ++rep)
    futs.push_back(std::async(std::launch::async, [&spec, rep] {
      return run_repetition(spec, rep, spec.mask, nullptr);
    }));

  out.repetitions.push_back(run_repetition(spec, 0, spec.mask, &preds));
  for (auto& f : futs) out.repetitions.push_back(f.get());
  for (const RepetitionResult& rr : out.repetitions) out.pooled.merge(rr.pooled);

  if (!preds.empty()) {
    out.calibration = metrics::calibration_report(preds);
    std::set<int> labels;
    for (const auto& p : preds) labels.insert(p.label);
    if (labels.size() > 1) out.temperature = metrics::temperature_scale(preds);
  }

  if (out.repetitions.size() >= 2 && spec.snr_schedule_db.size() >= 2) {
    std::vector<double> rise, drop;
    for (const RepetitionResult& rr : out.repetitions) {
      const auto& first = rr.bins.front().ledger;
      const auto& last = rr.bins.back().ledger;
      rise.push_back(last.intervention_rate() - first.intervention_rate());
      drop.push_back(first.safety_rate() - last.safety_rate());
    }
    out.intervention_rise = paired_or_mean(rise);
    out.safety_drop = paired_or_mean(drop);
  }
  return out;
}

AblationResult run_ablation_suite(const ScenarioSpec& spec) {
  spec.validate();

  auto masked = [](bool entropy, bool artifact, bool oscillation, bool calibration,
                   bool logical) {
    monitor::AblationMask m;
    m.entropy = entropy;
    m.artifact = artifact;
    m.oscillation = oscillation;
    m.calibration = calibration;
    m.logical = logical;
    return m;
  };

  std::vector<AblationRow> rows;
  rows.push_back({"full", masked(true, true, true, true, true), true, {}});
  rows.push_back({"no-entropy", masked(false, true, true, true, true), true, {}});
  rows.push_back({"no-artifact", masked(true, false, true, true, true), true, {}});
  rows.push_back({"no-oscillation", masked(true, true, false, true, true), true, {}});
  rows.push_back({"no-calibration", masked(true, true, true, false, true), true, {}});
  rows.push_back({"no-logical", masked(true, true, true, true, false), true, {}});
  rows.push_back({"confidence-only", {}, false, {}});

  // Every row replays repetition 0's stream: same bin seeds, same frames.
  // The stream is generated once per bin; each frame's artifact score is
  // computed once against the bin baseline and handed to every monitor
  // variant through the precomputed-score path, which yields the same
  // double as in-monitor scoring.
  const std::uint64_t rep0 = repetition_seed(spec.seed, 0);
  const std::size_t nbins = spec.snr_schedule_db.size();
  const TaskSetup task = build_task(spec);

  for (std::size_t b = 0; b < nbins; ++b) {
    SessionGenerator gen(spec, spec.snr_schedule_db[b],
                         trials_in_bin(spec.trials, nbins, b), bin_seed(rep0, b));

    std::vector<std::unique_ptr<monitor::Monitor>> mons;
    for (const AblationRow& row : rows)
      mons.push_back(row.uses_monitor
                         ? std::make_unique<monitor::Monitor>(
                               task.model, task.initial_state, task.context,
                               spec.config, gen.baseline(), row.mask, spec.limits)
                         : nullptr);

    std::vector<GeneratedFrame> frames;
    while (gen.next_trial(frames)) {
      for (const GeneratedFrame& g : frames) {
        monitor::FrameInput in;
        in.index = g.index;
        in.posterior = g.posterior;
        if (g.window && gen.baseline())
          in.artifact_score = signal::artifact_score(*g.window, *gen.baseline());

        for (std::size_t i = 0; i < rows.size(); ++i) {
          bool correct, intervened;
          std::string cause;
          if (mons[i]) {
            const monitor::StepResult r = mons[i]->step(in);
            correct = r.m.intent == g.truth;
            intervened = r.decision.verdict == monitor::Verdict::Halt;
            if (intervened) cause = monitor::to_string(r.decision.cause);
          } else {
            correct = g.posterior.argmax() == g.truth;
            intervened = g.posterior.max_prob() < spec.confidence_only_tau;
            if (intervened) cause = "low-confidence";
          }
          rows[i].pooled.record(correct, intervened);
          if (intervened) rows[i].pooled.record_cause(cause);
        }
      }
      frames.clear();
    }
  }

  AblationResult out;
  out.rows = std::move(rows);
  return out;
}

}  // namespace neurogate::harness
