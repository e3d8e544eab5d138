#include "neurogate/signal/features.hpp"

#include <cmath>
#include <stdexcept>

#include "neurogate/signal/filter.hpp"

namespace neurogate::signal {

std::vector<double> band_rms(const EegWindow& w, double lo_hz, double hi_hz) {
  const ButterworthBandpass bp(4, lo_hz, hi_hz, w.sample_rate_hz);
  std::vector<double> out(w.m.channels);
  for (std::size_t c = 0; c < w.m.channels; ++c) {
    const auto y = bp.apply_zero_phase(w.m.channel(c));
    double acc = 0.0;
    for (double v : y) acc += v * v;
    out[c] = std::sqrt(acc / double(y.size()));
  }
  return out;
}

double artifact_score(const EegWindow& w, const BaselineStats& baseline,
                      double lo_hz, double hi_hz) {
  if (baseline.channels() != w.m.channels)
    throw std::invalid_argument("artifact_score: channel count mismatch between window and baseline");
  const auto rms = band_rms(w, lo_hz, hi_hz);
  double acc = 0.0;
  for (std::size_t c = 0; c < rms.size(); ++c)
    acc += (rms[c] - baseline.mean[c]) / baseline.stddev[c];
  return acc / double(rms.size());
}

BaselineStats compute_baseline(const std::vector<EegWindow>& windows,
                               double lo_hz, double hi_hz, double stddev_floor) {
  if (windows.size() < 2)
    throw std::invalid_argument("compute_baseline: need at least two windows");
  const std::size_t channels = windows[0].m.channels;

  std::vector<std::vector<double>> rms(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].m.channels != channels)
      throw std::invalid_argument("compute_baseline: inconsistent channel counts");
    rms[i] = band_rms(windows[i], lo_hz, hi_hz);
  }

  BaselineStats st;
  st.mean.assign(channels, 0.0);
  st.stddev.assign(channels, 0.0);
  const double n = double(windows.size());
  for (std::size_t c = 0; c < channels; ++c) {
    double mean = 0.0;
    for (const auto& r : rms) mean += r[c];
    mean /= n;
    double var = 0.0;
    for (const auto& r : rms) var += (r[c] - mean) * (r[c] - mean);
    var /= (n - 1.0);
    st.mean[c] = mean;
    st.stddev[c] = std::max(std::sqrt(var), stddev_floor);
  }
  return st;
}

}  // namespace neurogate::signal
