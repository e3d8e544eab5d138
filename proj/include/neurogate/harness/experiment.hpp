#pragma once

#include <string>
#include <vector>

#include "neurogate/harness/generator.hpp"
#include "neurogate/metrics/calibration.hpp"
#include "neurogate/metrics/safety.hpp"
#include "neurogate/metrics/stats.hpp"
#include "neurogate/monitor/session.hpp"

namespace neurogate::harness {

// One SNR bin of one repetition, run through the gate.
struct BinResult {
  double snr_db{0.0};
  std::uint64_t trials{0};
  std::uint64_t frames{0};
  double decoder_accuracy{0.0};  // raw-posterior argmax vs truth
  metrics::SafetyLedger ledger;
  monitor::LatencySummary latency;
};

struct RepetitionResult {
  std::uint64_t seed{0};
  std::vector<BinResult> bins;
  metrics::SafetyLedger pooled;
};

// SNR-ramp outcome. Calibration is measured on the raw decoder posteriors
// of the first repetition; the paired statistics compare the cleanest and
// noisiest bins across repetitions (all zero unless there are at least two
// repetitions and two bins).
struct ExperimentResult {
  std::vector<RepetitionResult> repetitions;
  metrics::SafetyLedger pooled;
  metrics::CalibrationReport calibration;
  metrics::TemperatureFit temperature;
  metrics::PairedStats intervention_rise;  // noisiest minus cleanest
  metrics::PairedStats safety_drop;        // cleanest minus noisiest
};

// Splits spec.trials across the SNR schedule (remainder to the leading
// bins), runs every repetition with its own monitor, grounded model and
// seed chain. Repetitions execute in parallel; the result is a pure
// function of the spec.
ExperimentResult run_experiment(const ScenarioSpec& spec);

// One gate variant of the ablation table.
struct AblationRow {
  std::string name;
  monitor::AblationMask mask;  // meaningless for the threshold baseline
  bool uses_monitor{true};     // false: raw max-probability threshold
  metrics::SafetyLedger pooled;
};

struct AblationResult {
  std::vector<AblationRow> rows;  // row 0 is the full gate
};

// Replays the first repetition's exact frame stream under each variant:
// the full gate, each check disabled one at a time, calibration disabled,
// and a bare confidence threshold (intervene iff raw max probability is
// below spec.confidence_only_tau). Frames are generated once and fed to
// every variant, so the comparison is paired by construction.
AblationResult run_ablation_suite(const ScenarioSpec& spec);

}  // namespace neurogate::harness
