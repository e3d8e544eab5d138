#include "neurogate/signal/preprocess.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "neurogate/signal/filter.hpp"

namespace neurogate::signal {

std::size_t window_samples(const PreprocessConfig& cfg, double fs) {
  return std::size_t(std::lround(cfg.window_ms * 1e-3 * fs));
}

std::size_t stride_samples(const PreprocessConfig& cfg, double fs) {
  return std::size_t(std::lround(cfg.stride_ms * 1e-3 * fs));
}

void common_average_reference(ChannelMatrix& m) {
  for (std::size_t s = 0; s < m.samples; ++s) {
    double mean = 0.0;
    for (std::size_t c = 0; c < m.channels; ++c) mean += m.at(c, s);
    mean /= double(m.channels);
    for (std::size_t c = 0; c < m.channels; ++c) m.at(c, s) -= mean;
  }
}

void zscore_channels(ChannelMatrix& m, double variance_floor) {
  for (std::size_t c = 0; c < m.channels; ++c) {
    auto row = m.channel(c);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= double(row.size());
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    var /= double(row.size());
    const double sd = std::sqrt(std::max(var, variance_floor));
    for (double& v : row) v = (v - mean) / sd;
  }
}

std::vector<EegWindow> preprocess(const RawEeg& raw, const PreprocessConfig& cfg) {
  if (raw.m.channels == 0) throw std::invalid_argument("preprocess: no channels");
  if (!(raw.sample_rate_hz > 0)) throw std::invalid_argument("preprocess: bad sample rate");
  if (cfg.window_ms <= 0 || cfg.stride_ms <= 0)
    throw std::invalid_argument("preprocess: window and stride must be positive");
  if (!(cfg.variance_floor > 0)) throw std::invalid_argument("preprocess: variance floor must be positive");

  const double fs = raw.sample_rate_hz;
  const std::size_t w = window_samples(cfg, fs);
  const std::size_t stride = stride_samples(cfg, fs);
  if (w == 0 || stride == 0)
    throw std::invalid_argument("preprocess: window/stride shorter than one sample");

  // Filter the full recording so the task region sees no crop-edge transients.
  const ButterworthBandpass bp(cfg.filter_order, cfg.band_lo_hz, cfg.band_hi_hz, fs);
  ChannelMatrix filt = ChannelMatrix::zeros(raw.m.channels, raw.m.samples);
  for (std::size_t c = 0; c < raw.m.channels; ++c) {
    auto y = cfg.zero_phase ? bp.apply_zero_phase(raw.m.channel(c)) : bp.apply(raw.m.channel(c));
    std::copy(y.begin(), y.end(), filt.channel(c).begin());
  }

  // Task-period crop.
  std::size_t i0 = std::size_t(std::llround(std::max(0.0, cfg.crop_start_s) * fs));
  std::size_t i1 = cfg.crop_end_s > 0
                       ? std::min(filt.samples, std::size_t(std::llround(cfg.crop_end_s * fs)))
                       : filt.samples;
  if (i0 >= i1) throw std::invalid_argument("preprocess: empty crop region");

  common_average_reference(filt);

  const std::size_t n = i1 - i0;
  if (n < w)
    throw std::runtime_error("preprocess: insufficient samples for one window (" +
                             std::to_string(n) + " < " + std::to_string(w) + ")");

  const std::size_t count = (n - w) / stride + 1;
  std::vector<EegWindow> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    EegWindow win;
    win.sample_rate_hz = fs;
    win.t_index = k;
    win.m = ChannelMatrix::zeros(filt.channels, w);
    const std::size_t start = i0 + k * stride;
    for (std::size_t c = 0; c < filt.channels; ++c) {
      auto src = filt.channel(c).subspan(start, w);
      std::copy(src.begin(), src.end(), win.m.channel(c).begin());
    }
    zscore_channels(win.m, cfg.variance_floor);
    out.push_back(std::move(win));
  }
  return out;
}

}  // namespace neurogate::signal
