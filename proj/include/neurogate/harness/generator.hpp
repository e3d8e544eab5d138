#pragma once

#include <optional>

#include "neurogate/harness/scenario.hpp"
#include "neurogate/intent/stream_io.hpp"
#include "neurogate/signal/features.hpp"
#include "neurogate/signal/noise.hpp"
#include "neurogate/signal/preprocess.hpp"

namespace neurogate::harness {

struct GeneratedFrame {
  std::uint64_t index{0};  // frame index within this generator's stream
  std::uint64_t trial{0};
  double snr_db{0.0};
  intent::Action truth{intent::Action::Grasp};
  TrialMode mode{TrialMode::Locked};
  intent::IntentPosterior posterior;
  std::optional<signal::EegWindow> window;
};

// Streams one SNR bin's trials: per trial a decode script plus, when the
// scenario emits windows, a synthetic EEG chunk long enough for `dwell`
// overlapping windows. Windows mirror the online pipeline's shape work
// (common average reference, per-window z-score) but keep the full band,
// since the muscle-band evidence the artifact check needs lives above the
// decoder's 8-30 Hz band.
//
// Trials never load the whole session into memory; memory use is one
// chunk. A fixed seed reproduces the stream byte for byte.
class SessionGenerator {
 public:
  SessionGenerator(const ScenarioSpec& spec, double snr_db, std::uint64_t trials,
                   std::uint64_t seed);

  // Baseline statistics from a 10 s burst-free prelude at the session's
  // SNR; present iff the scenario emits windows.
  const std::optional<signal::BaselineStats>& baseline() const { return baseline_; }

  // Appends the next trial's frames to `out`. False when exhausted.
  bool next_trial(std::vector<GeneratedFrame>& out);

  std::uint64_t trials_total() const { return trials_; }
  std::uint64_t trials_done() const { return done_; }
  double snr_db() const { return snr_db_; }

 private:
  signal::NoiseSpec ambient_noise();
  signal::ChannelMatrix clean_background(std::size_t samples);
  void add_burst(signal::ChannelMatrix& chunk);

  ScenarioSpec spec_;
  double snr_db_;
  std::uint64_t trials_;
  std::uint64_t done_{0};
  std::uint64_t frame_{0};
  core::Rng rng_;
  std::size_t win_{0}, stride_{0};
  std::optional<signal::BaselineStats> baseline_;
};

// Posterior-stream records (frame, posterior, true label) from the first
// SNR bin of the scenario, windows off; used for fixtures and stream
// tests.
std::vector<intent::PosteriorRecord> make_posterior_records(const ScenarioSpec& spec,
                                                            std::uint64_t frames);

}  // namespace neurogate::harness
