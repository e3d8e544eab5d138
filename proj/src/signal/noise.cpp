#include "neurogate/signal/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "neurogate/core/rng.hpp"
#include "neurogate/signal/filter.hpp"

namespace neurogate::signal {

namespace {
// FFTW plan creation is not thread safe; execution is.
std::mutex fftw_plan_mutex;
}  // namespace

void pink_shape(std::span<double> x, double sample_rate_hz) {
  const std::size_t n = x.size();
  if (n < 2) {
    for (double& v : x) v = 0.0;  // only a DC bin, which is zeroed
    return;
  }
  const std::size_t nb = n / 2 + 1;

  double* in = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(nb);

  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    fwd = fftw_plan_dft_r2c_1d(int(n), in, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(int(n), spec, in, FFTW_ESTIMATE);
  }

  std::copy(x.begin(), x.end(), in);
  fftw_execute(fwd);

  spec[0][0] = 0.0;
  spec[0][1] = 0.0;
  for (std::size_t k = 1; k < nb; ++k) {
    const double f = double(k) * sample_rate_hz / double(n);
    spec[k][0] /= f;
    spec[k][1] /= f;
  }

  fftw_execute(inv);
  for (std::size_t i = 0; i < n; ++i) x[i] = in[i] / double(n);

  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(in);
  fftw_free(spec);
}

RawEeg inject_noise(const RawEeg& clean, const NoiseSpec& spec) {
  if (clean.m.channels == 0 || clean.m.samples == 0)
    throw std::invalid_argument("inject_noise: empty signal");
  if (!(clean.sample_rate_hz > 0))
    throw std::invalid_argument("inject_noise: bad sample rate");
  if (!(0 < spec.emg_lo_hz && spec.emg_lo_hz < spec.emg_hi_hz &&
        spec.emg_hi_hz < clean.sample_rate_hz / 2))
    throw std::invalid_argument("inject_noise: muscle band must fit below Nyquist");

  const std::size_t c = clean.m.channels;
  const std::size_t t = clean.m.samples;

  double p_signal = 0.0;
  for (double v : clean.m.data) p_signal += v * v;
  p_signal /= double(clean.m.data.size());

  const double p_noise = p_signal / std::pow(10.0, spec.target_snr_db / 10.0);
  const double sigma = std::sqrt(p_noise);

  // One seeded white draw, channel major.
  core::Rng rng(spec.seed);
  ChannelMatrix white = ChannelMatrix::zeros(c, t);
  for (double& v : white.data) v = rng.gaussian(0.0, sigma);

  ChannelMatrix pink = white;
  for (std::size_t ch = 0; ch < c; ++ch)
    pink_shape(pink.channel(ch), clean.sample_rate_hz);

  ChannelMatrix emg = ChannelMatrix::zeros(c, t);
  const ButterworthBandpass bp(4, spec.emg_lo_hz, spec.emg_hi_hz, clean.sample_rate_hz);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto y = bp.apply_zero_phase(white.channel(ch));
    std::copy(y.begin(), y.end(), emg.channel(ch).begin());
  }

  RawEeg out = clean;
  for (std::size_t i = 0; i < out.m.data.size(); ++i) {
    out.m.data[i] += spec.w_white * white.data[i] + spec.w_pink * pink.data[i] +
                     spec.w_emg * emg.data[i];
  }
  return out;
}

}  // namespace neurogate::signal
