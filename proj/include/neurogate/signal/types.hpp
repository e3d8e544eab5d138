#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace neurogate::signal {

// Channels-by-samples matrix, row major.
struct ChannelMatrix {
  std::size_t channels{0};
  std::size_t samples{0};
  std::vector<double> data;

  static ChannelMatrix zeros(std::size_t c, std::size_t s) {
    ChannelMatrix m;
    m.channels = c;
    m.samples = s;
    m.data.assign(c * s, 0.0);
    return m;
  }

  double& at(std::size_t c, std::size_t s) { return data[c * samples + s]; }
  double at(std::size_t c, std::size_t s) const { return data[c * samples + s]; }

  std::span<double> channel(std::size_t c) { return {data.data() + c * samples, samples}; }
  std::span<const double> channel(std::size_t c) const { return {data.data() + c * samples, samples}; }
};

// Continuous multichannel recording in acquisition units.
struct RawEeg {
  ChannelMatrix m;
  double sample_rate_hz{0.0};

  double duration_s() const { return sample_rate_hz > 0 ? double(m.samples) / sample_rate_hz : 0.0; }
};

// One analysis window. Dimensionless: values are per-channel z-scores.
struct EegWindow {
  ChannelMatrix m;
  double sample_rate_hz{0.0};
  std::uint64_t t_index{0};  // frame counter within the session
};

// Per-channel mean and standard deviation of band-limited RMS over a
// calibration segment. stddev entries are floored strictly positive.
struct BaselineStats {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t channels() const { return mean.size(); }
};

// Additive contamination recipe. The white, pink (1/f shaped) and
// muscle-band components are all derived from one white draw; target_snr_db
// scales that draw against the clean signal power.
struct NoiseSpec {
  double target_snr_db{0.0};
  double w_white{0.7};
  double w_pink{0.2};
  double w_emg{0.1};
  double emg_lo_hz{20.0};
  double emg_hi_hz{45.0};
  std::uint64_t seed{0};
};

}  // namespace neurogate::signal
