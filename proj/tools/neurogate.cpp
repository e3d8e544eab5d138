// neurogate: gate decoded intents behind physiological and logical checks.
//
// Subcommands: monitor, calibrate, sweep, noise-test, bench, replay-verify.
// Exit codes: 0 success, 1 verification mismatch, 2 input error,
// 3 internal error.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "neurogate/harness/bench.hpp"
#include "neurogate/harness/experiment.hpp"
#include "neurogate/intent/stream_io.hpp"
#include "neurogate/metrics/sweep.hpp"
#include "neurogate/monitor/monitor.hpp"
#include "neurogate/monitor/session.hpp"
#include "neurogate/monitor/trace.hpp"
#include "neurogate/signal/io.hpp"
#include "neurogate/signal/preprocess.hpp"

namespace {

using neurogate::harness::ScenarioSpec;
using neurogate::harness::TaskSetup;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GateFlags {
  std::optional<double> tau_h, tau_a, tau_omega, alpha_m;
  std::optional<std::size_t> k_frames;
  std::vector<std::string> ablate;
};

void add_gate_flags(CLI::App* cmd, GateFlags& g) {
  cmd->add_option("--tau-h", g.tau_h, "Normalized-entropy ceiling");
  cmd->add_option("--tau-a", g.tau_a, "Artifact z-score ceiling");
  cmd->add_option("--tau-omega", g.tau_omega, "Oscillation-index ceiling");
  cmd->add_option("--alpha-m", g.alpha_m, "Calibration mixing coefficient");
  cmd->add_option("--k-frames", g.k_frames, "Oscillation window length");
  cmd->add_option("--ablate", g.ablate,
                  "Disable checks: entropy, artifact, oscillation, calibration, logical")
      ->delimiter(',');
}

void apply_gate_flags(const GateFlags& g, neurogate::monitor::MonitorConfig& cfg,
                      neurogate::monitor::AblationMask& mask) {
  if (g.tau_h) cfg.tau_h = *g.tau_h;
  if (g.tau_a) cfg.tau_a = *g.tau_a;
  if (g.tau_omega) cfg.tau_omega = *g.tau_omega;
  if (g.alpha_m) cfg.alpha_m = *g.alpha_m;
  if (g.k_frames) cfg.k_frames = *g.k_frames;
  for (const std::string& name : g.ablate) {
    if (name == "entropy")
      mask.entropy = false;
    else if (name == "artifact")
      mask.artifact = false;
    else if (name == "oscillation")
      mask.oscillation = false;
    else if (name == "calibration")
      mask.calibration = false;
    else if (name == "logical")
      mask.logical = false;
    else
      throw InputError("unknown check in --ablate: " + name);
  }
  cfg.validate();
}

// Full-band analysis windows for the artifact score: common average
// reference, overlapping segmentation, per-window z-score. Unlike the
// decoder's preprocess() this keeps the muscle band, which is exactly the
// evidence the artifact check reads. The first `baseline_s` seconds form
// the baseline segment.
struct ArtifactWindows {
  std::vector<neurogate::signal::EegWindow> windows;
  neurogate::signal::BaselineStats baseline;
};

ArtifactWindows artifact_windows(const neurogate::signal::RawEeg& raw,
                                 double window_s, double stride_s, double baseline_s) {
  namespace sig = neurogate::signal;
  const auto win = std::size_t(std::lround(window_s * raw.sample_rate_hz));
  const auto stride = std::size_t(std::lround(stride_s * raw.sample_rate_hz));
  if (win < 2 || stride < 1) throw InputError("window and stride must span samples");
  if (raw.m.samples < win) throw InputError("recording shorter than one window");

  sig::ChannelMatrix m = raw.m;
  sig::common_average_reference(m);

  ArtifactWindows out;
  for (std::size_t start = 0; start + win <= m.samples; start += stride) {
    sig::EegWindow w;
    w.sample_rate_hz = raw.sample_rate_hz;
    w.t_index = out.windows.size();
    w.m = sig::ChannelMatrix::zeros(m.channels, win);
    for (std::size_t ch = 0; ch < m.channels; ++ch) {
      const auto src = m.channel(ch);
      std::copy(src.begin() + long(start), src.begin() + long(start + win),
                w.m.channel(ch).begin());
    }
    sig::zscore_channels(w.m, 1e-8);
    out.windows.push_back(std::move(w));
  }

  std::size_t nbase = 0;
  for (const auto& w : out.windows) {
    if ((double(nbase) * stride + win) / raw.sample_rate_hz > baseline_s) break;
    (void)w;
    ++nbase;
  }
  if (nbase < 2)
    throw InputError("recording too short for a baseline segment (need >= " +
                     std::to_string(baseline_s) + " s)");
  out.baseline = sig::compute_baseline(
      {out.windows.begin(), out.windows.begin() + long(nbase)});
  return out;
}

std::vector<neurogate::metrics::LabeledPrediction> labeled_predictions(
    const std::string& path) {
  const auto stream = neurogate::intent::read_posterior_stream(path);
  for (const auto& rej : stream.rejected)
    std::fprintf(stderr, "%s:%zu: %s\n", path.c_str(), rej.line, rej.reason.c_str());

  std::vector<neurogate::metrics::LabeledPrediction> preds;
  for (const auto& rec : stream.records)
    if (rec.label) preds.push_back({rec.p, int(*rec.label)});
  if (preds.empty()) throw InputError(path + ": no labeled predictions");
  return preds;
}

ScenarioSpec load_spec(const std::string& path, std::optional<std::uint64_t> seed) {
  ScenarioSpec spec;
  if (!path.empty()) spec = neurogate::harness::load_scenario(path);
  if (seed) {
    spec.seed = *seed;
    spec.decoder.rng_seed = *seed;
  }
  std::printf("seed: %" PRIu64 "\n", spec.seed);
  return spec;
}

void print_ledger(const neurogate::metrics::SafetyLedger& led) {
  std::printf("labeled %" PRIu64 " (tp %" PRIu64 " tn %" PRIu64 " fp %" PRIu64
              " fn %" PRIu64 "), unlabeled %" PRIu64 "\n",
              led.labeled(), led.tp, led.tn, led.fp, led.fn, led.unlabeled);
  if (led.labeled())
    std::printf("safety %.4f  intervention %.4f  f1 %.4f\n", led.safety_rate(),
                led.intervention_rate(), led.f1());
  if (!led.cause_counts.empty()) {
    std::printf("halt causes:");
    for (const auto& [cause, n] : led.cause_counts)
      std::printf("  %s=%" PRIu64, cause.c_str(), n);
    std::printf("\n");
  }
}

// ---------------------------------------------------------------- monitor

int cmd_monitor(const std::string& posteriors_path, const std::string& eeg_path,
                const std::string& out_path, ScenarioSpec spec, const GateFlags& flags,
                const neurogate::planner::TaskContext& ctx_override) {
  namespace mon = neurogate::monitor;
  apply_gate_flags(flags, spec.config, spec.mask);

  const TaskSetup task = neurogate::harness::build_task(spec);
  neurogate::planner::TaskContext ctx = neurogate::harness::default_context(*task.model);
  if (ctx_override.robot) ctx.robot = ctx_override.robot;
  if (ctx_override.item) ctx.item = ctx_override.item;
  if (ctx_override.location) ctx.location = ctx_override.location;
  if (ctx_override.orientation) ctx.orientation = ctx_override.orientation;

  const auto stream = neurogate::intent::read_posterior_stream(posteriors_path);
  for (const auto& rej : stream.rejected)
    std::fprintf(stderr, "%s:%zu: %s\n", posteriors_path.c_str(), rej.line,
                 rej.reason.c_str());
  if (stream.records.empty())
    throw InputError(posteriors_path + ": no valid posterior records");

  std::optional<ArtifactWindows> aw;
  if (!eeg_path.empty()) {
    const auto raw = neurogate::signal::read_raw_csv(eeg_path);
    aw = artifact_windows(raw, spec.window_seconds, spec.stride_seconds, 10.0);
    std::printf("eeg: %zu windows, baseline over first 10 s\n", aw->windows.size());
  }

  std::vector<mon::SessionFrame> frames;
  frames.reserve(stream.records.size());
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    mon::SessionFrame f;
    f.posterior = neurogate::intent::IntentPosterior(stream.records[i].p);
    f.label = stream.records[i].label;
    if (aw && i < aw->windows.size()) f.window = &aw->windows[i];
    frames.push_back(f);
  }

  mon::Monitor gate(task.model, task.initial_state, ctx, spec.config,
                    aw ? std::optional(aw->baseline) : std::nullopt, spec.mask,
                    spec.limits);

  std::optional<mon::TraceWriter> writer;
  if (!out_path.empty()) {
    mon::TraceHeader header;
    header.cfg = spec.config;
    header.mask = spec.mask;
    header.ctx = ctx;
    header.limits = spec.limits;
    header.domain_hash = task.domain_hash;
    header.init_hash = task.initial_state.fingerprint();
    header.seed = spec.seed;
    writer.emplace(out_path, header);
  }

  const mon::SessionResult res =
      run_session(gate, frames, writer ? &*writer : nullptr);
  if (writer) writer->close();

  std::printf("frames %" PRIu64 "  executed %" PRIu64 "  halted %" PRIu64
              "  rejected input lines %zu\n",
              res.frames, res.executed, res.halted, stream.rejected.size());
  print_ledger(res.ledger);
  std::printf("latency p50 %.1f us  p99 %.1f us  (%.0f decisions/s)\n",
              res.latency.p50_us, res.latency.p99_us, res.latency.decisions_per_sec);
  if (!out_path.empty()) std::printf("trace: %s\n", out_path.c_str());
  return kExitOk;
}

// -------------------------------------------------------------- calibrate

int cmd_calibrate(const std::string& path, int bins, const std::string& json_path) {
  namespace met = neurogate::metrics;
  const auto preds = labeled_predictions(path);
  const met::CalibrationReport rep = met::calibration_report(preds, bins);

  std::printf("n %zu  bins %d\n", rep.n, rep.bins);
  std::printf("accuracy %.4f  mean confidence %.4f  overconfident %.4f\n", rep.accuracy,
              rep.mean_confidence, rep.overconfidence_rate);
  std::printf("ece %.6f  mce %.6f  ace %.6f\n", rep.ece, rep.mce, rep.ace);
  std::printf("%5s %8s %10s %10s\n", "bin", "count", "confidence", "accuracy");
  for (std::size_t i = 0; i < rep.per_bin.size(); ++i) {
    const auto& b = rep.per_bin[i];
    if (b.count == 0)
      std::printf("%5zu %8s %10s %10s\n", i, "-", "-", "-");
    else
      std::printf("%5zu %8zu %10.4f %10.4f\n", i, b.count, b.confidence, b.accuracy);
  }

  std::set<int> labels;
  for (const auto& p : preds) labels.insert(p.label);
  met::TemperatureFit fit;
  if (labels.size() > 1) {
    fit = met::temperature_scale(preds, 0.25, 10.0, 0.01, bins);
    std::printf("temperature %.2f  nll %.4f  ece %.6f -> %.6f\n", fit.temperature,
                fit.nll, fit.ece_before, fit.ece_after);
  } else {
    std::printf("temperature: skipped (single-class labels)\n");
  }

  if (!json_path.empty()) {
    ordered_json j;
    j["n"] = rep.n;
    j["bins"] = rep.bins;
    j["ece"] = rep.ece;
    j["mce"] = rep.mce;
    j["ace"] = rep.ace;
    j["accuracy"] = rep.accuracy;
    j["mean_confidence"] = rep.mean_confidence;
    j["overconfidence_rate"] = rep.overconfidence_rate;
    j["per_bin"] = ordered_json::array();
    for (const auto& b : rep.per_bin)
      j["per_bin"].push_back(
          {{"count", b.count}, {"confidence", b.confidence}, {"accuracy", b.accuracy}});
    if (labels.size() > 1) {
      j["temperature"] = fit.temperature;
      j["nll"] = fit.nll;
      j["ece_after"] = fit.ece_after;
    }
    std::ofstream out(json_path);
    if (!out) throw InputError("cannot open output file: " + json_path);
    out << j.dump(2) << '\n';
    std::printf("report: %s\n", json_path.c_str());
  }
  return kExitOk;
}

// ------------------------------------------------------------------ sweep

int cmd_sweep(const std::string& path, const std::string& grid_spec,
              std::vector<double> weights) {
  namespace met = neurogate::metrics;
  const auto preds = labeled_predictions(path);

  double lo = 0.0, hi = 1.0, step = 0.05;
  if (!grid_spec.empty()) {
    if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
      throw InputError("--grid wants lo:hi:step, got: " + grid_spec);
  }
  const auto taus = met::make_grid(lo, hi, step);
  const met::SweepResult sweep = met::threshold_sweep(preds, taus);

  met::OptimizeWeights w;
  if (!weights.empty()) {
    if (weights.size() != 3) throw InputError("--weights wants three values a,b,c");
    w = {weights[0], weights[1], weights[2]};
  }

  std::printf("%8s %10s %14s %8s\n", "tau", "safety", "intervention", "f1");
  for (const auto& pt : sweep.points)
    std::printf("%8.4f %10.4f %14.4f %8.4f\n", pt.tau, pt.safety_rate,
                pt.intervention_rate, pt.f1);

  const std::size_t best = met::optimize_threshold(sweep, w);
  std::printf("tau* %.4f  (weights %.2f,%.2f,%.2f)\n", sweep.points[best].tau, w.safety,
              w.non_intervention, w.f1);
  return kExitOk;
}

// ------------------------------------------------------------- noise-test

ordered_json bin_json(std::size_t rep, const neurogate::harness::BinResult& b) {
  ordered_json j;
  j["repetition"] = rep;
  j["snr_db"] = b.snr_db;
  j["trials"] = b.trials;
  j["frames"] = b.frames;
  j["decoder_accuracy"] = b.decoder_accuracy;
  j["safety_rate"] = b.ledger.safety_rate();
  j["intervention_rate"] = b.ledger.intervention_rate();
  j["tp"] = b.ledger.tp;
  j["tn"] = b.ledger.tn;
  j["fp"] = b.ledger.fp;
  j["fn"] = b.ledger.fn;
  j["causes"] = b.ledger.cause_counts;
  return j;
}

int cmd_noise_test(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                   std::optional<std::uint64_t> trials, std::optional<std::size_t> reps,
                   bool with_ablation, const std::string& out_dir,
                   const GateFlags& flags) {
  ScenarioSpec spec = load_spec(scenario_path, seed);
  if (trials) spec.trials = *trials;
  if (reps) spec.repetitions = *reps;
  apply_gate_flags(flags, spec.config, spec.mask);

  const auto result = neurogate::harness::run_experiment(spec);

  std::printf("%4s %8s %10s %10s %10s %14s\n", "rep", "snr_db", "trials", "dec_acc",
              "safety", "intervention");
  for (std::size_t r = 0; r < result.repetitions.size(); ++r)
    for (const auto& b : result.repetitions[r].bins)
      std::printf("%4zu %8.2f %10" PRIu64 " %10.4f %10.4f %14.4f\n", r, b.snr_db,
                  b.trials, b.decoder_accuracy, b.ledger.safety_rate(),
                  b.ledger.intervention_rate());

  std::printf("pooled: ");
  print_ledger(result.pooled);
  std::printf("decoder calibration: ece %.4f  accuracy %.4f  mean confidence %.4f\n",
              result.calibration.ece, result.calibration.accuracy,
              result.calibration.mean_confidence);
  if (result.intervention_rise.n >= 2) {
    std::printf("intervention rise (noisiest-cleanest): %+.4f  t %.2f  p %.2g  d %.2f\n",
                result.intervention_rise.mean_delta, result.intervention_rise.t,
                result.intervention_rise.p_two_sided, result.intervention_rise.cohens_d);
    std::printf("safety drop (cleanest-noisiest):       %+.4f  t %.2f  p %.2g  d %.2f\n",
                result.safety_drop.mean_delta, result.safety_drop.t,
                result.safety_drop.p_two_sided, result.safety_drop.cohens_d);
  }

  neurogate::harness::AblationResult ablation;
  if (with_ablation) {
    ablation = neurogate::harness::run_ablation_suite(spec);
    const double full = ablation.rows.front().pooled.safety_rate();
    std::printf("%-18s %10s %14s %8s\n", "variant", "safety", "intervention", "delta");
    for (const auto& row : ablation.rows)
      std::printf("%-18s %10.4f %14.4f %+8.4f\n", row.name.c_str(),
                  row.pooled.safety_rate(), row.pooled.intervention_rate(),
                  row.pooled.safety_rate() - full);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    {
      std::ofstream out(out_dir + "/bins.jsonl");
      if (!out) throw InputError("cannot open " + out_dir + "/bins.jsonl");
      for (std::size_t r = 0; r < result.repetitions.size(); ++r)
        for (const auto& b : result.repetitions[r].bins)
          out << bin_json(r, b).dump() << '\n';
    }
    if (with_ablation) {
      std::ofstream out(out_dir + "/ablation.jsonl");
      if (!out) throw InputError("cannot open " + out_dir + "/ablation.jsonl");
      for (const auto& row : ablation.rows) {
        ordered_json j;
        j["variant"] = row.name;
        j["safety_rate"] = row.pooled.safety_rate();
        j["intervention_rate"] = row.pooled.intervention_rate();
        j["tp"] = row.pooled.tp;
        j["tn"] = row.pooled.tn;
        j["fp"] = row.pooled.fp;
        j["fn"] = row.pooled.fn;
        out << j.dump() << '\n';
      }
    }
    std::printf("results: %s\n", out_dir.c_str());
  }
  return kExitOk;
}

// ------------------------------------------------------------------ bench

int cmd_bench(const std::string& scenario_path, std::optional<std::uint64_t> seed,
              std::uint64_t steps) {
  const ScenarioSpec spec = load_spec(scenario_path, seed);
  const auto r = neurogate::harness::bench_latency(spec, steps);
  std::printf("steps %" PRIu64 "  pool %zu frames\n", r.steps, r.pool_frames);
  std::printf("latency p50 %.1f us  p95 %.1f us  p99 %.1f us  max %.1f us\n",
              r.latency.p50_us, r.latency.p95_us, r.latency.p99_us, r.latency.max_us);
  std::printf("throughput %.0f decisions/s\n", r.latency.decisions_per_sec);
  std::printf("plan cache: %zu entries, %" PRIu64 " hits\n", r.plan_cache_size,
              r.plan_cache_hits);
  return kExitOk;
}

// ---------------------------------------------------------- replay-verify

int cmd_replay_verify(const std::string& trace_path, ScenarioSpec spec) {
  namespace mon = neurogate::monitor;
  const mon::Trace trace = mon::read_trace(trace_path);
  const TaskSetup task = neurogate::harness::build_task(spec);

  if (task.domain_hash != trace.header.domain_hash) {
    std::fprintf(stderr,
                 "domain hash mismatch: trace %" PRIu64 ", loaded domain %" PRIu64 "\n",
                 trace.header.domain_hash, task.domain_hash);
    return kExitMismatch;
  }
  if (task.initial_state.fingerprint() != trace.header.init_hash) {
    std::fprintf(stderr, "initial state mismatch: trace %" PRIu64 ", loaded %" PRIu64 "\n",
                 trace.header.init_hash, task.initial_state.fingerprint());
    return kExitMismatch;
  }

  const mon::ReplayResult res =
      mon::replay_trace(trace, task.model, task.initial_state);
  if (!res.ok()) {
    std::fprintf(stderr, "%zu of %zu records diverge\n", res.mismatches.size(),
                 res.frames);
    for (std::size_t i = 0; i < res.mismatches.size() && i < 3; ++i) {
      const auto& m = res.mismatches[i];
      std::fprintf(stderr, "frame %" PRIu64 ":\n  recorded: %s\n  replayed: %s\n",
                   m.frame, m.recorded.c_str(), m.replayed.c_str());
    }
    return kExitMismatch;
  }
  std::printf("trace verified: %zu records reproduce byte for byte\n", res.frames);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime safety gate for EEG-decoded robot intents"};
  app.require_subcommand(1);

  // monitor
  std::string posteriors_path, eeg_path, trace_out, domain_path, problem_path;
  GateFlags mon_flags;
  neurogate::planner::TaskContext ctx_override;
  auto* mon_cmd = app.add_subcommand("monitor", "Gate a posterior stream, write a trace");
  mon_cmd->add_option("posteriors", posteriors_path, "Posterior stream CSV")->required();
  mon_cmd->add_option("--eeg", eeg_path, "Raw EEG CSV for the artifact check");
  mon_cmd->add_option("--out", trace_out, "Trace output path (JSON lines)");
  mon_cmd->add_option("--domain", domain_path, "PDDL domain (default: built-in)");
  mon_cmd->add_option("--problem", problem_path, "PDDL problem (default: built-in)");
  mon_cmd->add_option("--robot", ctx_override.robot, "Robot object name");
  mon_cmd->add_option("--item", ctx_override.item, "Item object name");
  mon_cmd->add_option("--location", ctx_override.location, "Location object name");
  mon_cmd->add_option("--orientation", ctx_override.orientation, "Orientation object name");
  add_gate_flags(mon_cmd, mon_flags);

  // calibrate
  std::string cal_path, cal_json;
  int cal_bins = 10;
  auto* cal_cmd = app.add_subcommand("calibrate", "Calibration report for predictions");
  cal_cmd->add_option("predictions", cal_path, "Labeled posterior stream CSV")->required();
  cal_cmd->add_option("--bins", cal_bins, "Confidence bins")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--json", cal_json, "Also write the report as JSON");

  // sweep
  std::string sweep_path, grid_spec;
  std::vector<double> sweep_weights;
  auto* sweep_cmd = app.add_subcommand("sweep", "Threshold sweep over a confidence gate");
  sweep_cmd->add_option("predictions", sweep_path, "Labeled posterior stream CSV")
      ->required();
  sweep_cmd->add_option("--grid", grid_spec, "Threshold grid as lo:hi:step");
  sweep_cmd->add_option("--weights", sweep_weights,
                        "Objective weights a,b,c for safety, non-intervention, f1")
      ->delimiter(',');

  // noise-test
  std::string scen_path, out_dir;
  std::optional<std::uint64_t> seed, nt_trials;
  std::optional<std::size_t> nt_reps;
  bool with_ablation = false;
  GateFlags noise_flags;
  auto* noise_cmd = app.add_subcommand("noise-test", "SNR-ramp experiment");
  noise_cmd->add_option("scenario", scen_path, "Scenario JSON (default scenario if omitted)");
  noise_cmd->add_option("--seed", seed, "Override the scenario seed");
  noise_cmd->add_option("--trials", nt_trials, "Override the scenario trial count");
  noise_cmd->add_option("--repetitions", nt_reps, "Override the repetition count");
  noise_cmd->add_flag("--ablation", with_ablation, "Also run the ablation table");
  noise_cmd->add_option("--out", out_dir, "Directory for line-delimited results");
  add_gate_flags(noise_cmd, noise_flags);

  // bench
  std::string bench_scen;
  std::optional<std::uint64_t> bench_seed;
  std::uint64_t bench_steps = 100000;
  auto* bench_cmd = app.add_subcommand("bench", "Latency benchmark of the gate step");
  bench_cmd->add_option("scenario", bench_scen, "Scenario JSON (default scenario if omitted)");
  bench_cmd->add_option("--seed", bench_seed, "Override the scenario seed");
  bench_cmd->add_option("--steps", bench_steps, "Steps to measure")
      ->check(CLI::PositiveNumber);

  // replay-verify
  std::string trace_path, rv_domain, rv_problem;
  auto* rv_cmd = app.add_subcommand("replay-verify", "Re-run a trace and compare decisions");
  rv_cmd->add_option("trace", trace_path, "Trace file (JSON lines)")->required();
  rv_cmd->add_option("--domain", rv_domain, "PDDL domain (default: built-in)");
  rv_cmd->add_option("--problem", rv_problem, "PDDL problem (default: built-in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*mon_cmd) {
      ScenarioSpec spec;
      spec.domain_path = domain_path;
      spec.problem_path = problem_path;
      return cmd_monitor(posteriors_path, eeg_path, trace_out, spec, mon_flags,
                         ctx_override);
    }
    if (*cal_cmd) return cmd_calibrate(cal_path, cal_bins, cal_json);
    if (*sweep_cmd) return cmd_sweep(sweep_path, grid_spec, sweep_weights);
    if (*noise_cmd)
      return cmd_noise_test(scen_path, seed, nt_trials, nt_reps, with_ablation, out_dir,
                            noise_flags);
    if (*bench_cmd) return cmd_bench(bench_scen, bench_seed, bench_steps);
    if (*rv_cmd) {
      ScenarioSpec spec;
      spec.domain_path = rv_domain;
      spec.problem_path = rv_problem;
      return cmd_replay_verify(trace_path, spec);
    }
    return kExitInternal;  // unreachable: a subcommand is required
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
