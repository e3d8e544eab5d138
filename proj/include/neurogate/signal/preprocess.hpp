#pragma once

#include "neurogate/signal/types.hpp"

namespace neurogate::signal {

struct PreprocessConfig {
  double band_lo_hz{8.0};
  double band_hi_hz{30.0};
  int filter_order{4};
  double window_ms{1000.0};
  double stride_ms{100.0};
  // Task-period crop applied after filtering. crop_end_s <= 0 means
  // "to the end of the recording".
  double crop_start_s{0.0};
  double crop_end_s{0.0};
  // Forward-backward filtering by default; set false for a causal
  // single-pass variant.
  bool zero_phase{true};
  double variance_floor{1e-8};
};

// Filter, crop, re-reference and segment a continuous recording.
// Each returned window is band-passed, common-average referenced and
// z-scored per channel with the window's own statistics.
// Throws std::invalid_argument on bad configs and std::runtime_error with
// an "insufficient samples" message when no full window fits.
std::vector<EegWindow> preprocess(const RawEeg& raw, const PreprocessConfig& cfg = {});

// Pipeline stages, exposed for direct use.
void common_average_reference(ChannelMatrix& m);
void zscore_channels(ChannelMatrix& m, double variance_floor);
std::size_t window_samples(const PreprocessConfig& cfg, double sample_rate_hz);
std::size_t stride_samples(const PreprocessConfig& cfg, double sample_rate_hz);

}  // namespace neurogate::signal
