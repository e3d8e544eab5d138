#include <stdexcept>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "neurogate/core/rng.hpp"
#include "neurogate/signal/features.hpp"
#include "neurogate/signal/filter.hpp"
#include "neurogate/signal/io.hpp"
#include "neurogate/signal/noise.hpp"
#include "neurogate/signal/preprocess.hpp"

using namespace neurogate;

namespace {

std::vector<double> sine(double f_hz, double fs, std::size_t n, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * M_PI * f_hz * double(i) / fs);
  return x;
}

double rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / double(x.size()));
}

double channel_power(const signal::ChannelMatrix& m) {
  double s = 0.0;
  for (double v : m.data) s += v * v;
  return s / double(m.data.size());
}

signal::RawEeg random_raw(std::size_t channels, std::size_t samples, double fs,
                          std::uint64_t seed) {
  core::Rng rng(seed);
  signal::RawEeg raw;
  raw.m = signal::ChannelMatrix::zeros(channels, samples);
  raw.sample_rate_hz = fs;
  for (double& v : raw.m.data) v = rng.gaussian();
  return raw;
}

}  // namespace

TEST_CASE("band-pass filter frequency response") {
  const signal::ButterworthBandpass bp(4, 8.0, 30.0, 250.0);
  CHECK(bp.sections().size() == 2);

  const double center = std::sqrt(8.0 * 30.0);
  CHECK(bp.magnitude_at(center) == doctest::Approx(1.0).epsilon(0.03));
  CHECK(bp.magnitude_at(8.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.1));
  CHECK(bp.magnitude_at(30.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.1));
  CHECK(bp.magnitude_at(2.0) < 0.1);
  CHECK(bp.magnitude_at(100.0) < 0.1);
}

TEST_CASE("band-pass filter on sinusoids") {
  const double fs = 250.0;
  const signal::ButterworthBandpass bp(4, 8.0, 30.0, fs);
  const auto x = sine(15.0, fs, 2500);

  SUBCASE("causal pass reaches the design gain in steady state") {
    const auto y = bp.apply(x);
    REQUIRE(y.size() == x.size());
    const std::span<const double> tail(y.data() + 1500, 1000);
    CHECK(rms(tail) == doctest::Approx(bp.magnitude_at(15.0) / std::sqrt(2.0)).epsilon(0.05));
  }

  SUBCASE("zero-phase pass squares the magnitude and keeps alignment") {
    const auto y = bp.apply_zero_phase(x);
    REQUIRE(y.size() == x.size());
    const double g = bp.magnitude_at(10.0);
    const auto x10 = sine(10.0, fs, 2500);
    const auto y10 = bp.apply_zero_phase(x10);
    const std::span<const double> mid(y10.data() + 500, 1500);
    const std::span<const double> midx(x10.data() + 500, 1500);
    CHECK(rms(mid) / rms(midx) == doctest::Approx(g * g).epsilon(0.05));
    // phase alignment: normalized correlation with the input stays near 1
    double dot = 0.0;
    for (std::size_t i = 0; i < mid.size(); ++i) dot += mid[i] * midx[i];
    dot /= double(mid.size()) * rms(mid) * rms(midx);
    CHECK(dot > 0.99);
  }

  SUBCASE("out-of-band tone is attenuated hard") {
    const auto hum = sine(60.0, fs, 2500);
    const auto y = bp.apply_zero_phase(hum);
    const std::span<const double> mid(y.data() + 500, 1500);
    CHECK(rms(mid) < 0.05);
  }
}

TEST_CASE("band-pass filter rejects bad designs") {
  CHECK_THROWS_AS(signal::ButterworthBandpass(3, 8, 30, 250), std::invalid_argument);
  CHECK_THROWS_AS(signal::ButterworthBandpass(4, 30, 8, 250), std::invalid_argument);
  CHECK_THROWS_AS(signal::ButterworthBandpass(4, 8, 200, 250), std::invalid_argument);
  CHECK_THROWS_AS(signal::ButterworthBandpass(4, 8, 30, 0), std::invalid_argument);
}

TEST_CASE("common average reference zeroes the channel mean per sample") {
  auto m = signal::ChannelMatrix::zeros(3, 4);
  core::Rng rng(7);
  for (double& v : m.data) v = rng.uniform(-5, 5);
  signal::common_average_reference(m);
  for (std::size_t s = 0; s < m.samples; ++s) {
    double col = 0.0;
    for (std::size_t c = 0; c < m.channels; ++c) col += m.at(c, s);
    CHECK(col == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("z-scoring normalizes each channel and floors flat ones") {
  auto m = signal::ChannelMatrix::zeros(2, 100);
  core::Rng rng(11);
  for (std::size_t s = 0; s < 100; ++s) m.at(0, s) = rng.gaussian(3.0, 2.0);
  for (std::size_t s = 0; s < 100; ++s) m.at(1, s) = 42.0;  // flat
  signal::zscore_channels(m, 1e-8);

  const auto ch0 = m.channel(0);
  const double mean = std::accumulate(ch0.begin(), ch0.end(), 0.0) / 100.0;
  double var = 0.0;
  for (double v : ch0) var += (v - mean) * (v - mean);
  var /= 100.0;
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(1e-6));
  for (double v : m.channel(1)) CHECK(v == 0.0);
}

TEST_CASE("preprocess segments, references and z-scores") {
  const auto raw = random_raw(8, 2500, 250.0, 5);
  const auto windows = signal::preprocess(raw);

  REQUIRE(windows.size() == 91);  // (2500 - 250) / 25 + 1
  for (std::size_t i = 0; i < windows.size(); ++i) CHECK(windows[i].t_index == i);
  const auto& w = windows[40];
  CHECK(w.m.channels == 8);
  CHECK(w.m.samples == 250);
  CHECK(w.sample_rate_hz == 250.0);
  for (std::size_t c = 0; c < 8; ++c) {
    const auto ch = w.m.channel(c);
    const double mean = std::accumulate(ch.begin(), ch.end(), 0.0) / double(ch.size());
    double var = 0.0;
    for (double v : ch) var += (v - mean) * (v - mean);
    var /= double(ch.size());
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(var == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("preprocess crop and failure modes") {
  const auto raw = random_raw(4, 2500, 250.0, 6);

  signal::PreprocessConfig cfg;
  cfg.crop_start_s = 1.0;
  CHECK(signal::preprocess(raw, cfg).size() == 81);  // (2250 - 250) / 25 + 1

  signal::PreprocessConfig tiny;
  tiny.crop_end_s = 0.5;  // 125 samples, shorter than one window
  CHECK_THROWS_WITH_AS(signal::preprocess(raw, tiny),
                       doctest::Contains("insufficient samples"), std::runtime_error);

  signal::PreprocessConfig bad;
  bad.window_ms = -1.0;
  CHECK_THROWS_AS(signal::preprocess(raw, bad), std::invalid_argument);
  CHECK(signal::window_samples({}, 250.0) == 250);
  CHECK(signal::stride_samples({}, 250.0) == 25);
}

TEST_CASE("pink shaping removes DC") {
  std::vector<double> flat(512, 1.0);
  signal::pink_shape(flat, 250.0);
  CHECK(rms(flat) < 1e-9);
}

TEST_CASE("noise injection is deterministic and scales with target SNR") {
  signal::RawEeg clean;
  clean.sample_rate_hz = 250.0;
  clean.m = signal::ChannelMatrix::zeros(4, 2500);
  for (std::size_t c = 0; c < 4; ++c) {
    auto s = sine(11.0 + double(c), 250.0, 2500, std::sqrt(2.0));  // unit power
    std::copy(s.begin(), s.end(), clean.m.channel(c).begin());
  }

  signal::NoiseSpec spec;
  spec.seed = 99;
  spec.target_snr_db = 10.0;
  const auto a = signal::inject_noise(clean, spec);
  const auto b = signal::inject_noise(clean, spec);
  CHECK(a.m.data == b.m.data);

  auto residual_power = [&](double snr_db) {
    signal::NoiseSpec s = spec;
    s.target_snr_db = snr_db;
    auto noisy = signal::inject_noise(clean, s);
    for (std::size_t i = 0; i < noisy.m.data.size(); ++i) noisy.m.data[i] -= clean.m.data[i];
    return channel_power(noisy.m);
  };
  const double p20 = residual_power(20.0);
  const double p10 = residual_power(10.0);
  const double p0 = residual_power(0.0);
  CHECK(p20 < p10);
  CHECK(p10 < p0);
  // each 10 dB drop multiplies the injected power by roughly 10
  CHECK(p0 / p10 == doctest::Approx(10.0).epsilon(0.5));

  signal::NoiseSpec bad = spec;
  bad.emg_hi_hz = 200.0;
  CHECK_THROWS_AS(signal::inject_noise(clean, bad), std::invalid_argument);
}

TEST_CASE("band RMS concentrates in the tone's band") {
  signal::EegWindow w;
  w.sample_rate_hz = 250.0;
  w.m = signal::ChannelMatrix::zeros(2, 500);
  for (std::size_t c = 0; c < 2; ++c) {
    auto s = sine(25.0, 250.0, 500);
    std::copy(s.begin(), s.end(), w.m.channel(c).begin());
  }
  const auto in_band = signal::band_rms(w, 20.0, 30.0);
  const auto out_band = signal::band_rms(w, 60.0, 90.0);
  REQUIRE(in_band.size() == 2);
  CHECK(in_band[0] > 10.0 * out_band[0]);
  CHECK(in_band[1] > 10.0 * out_band[1]);
}

TEST_CASE("baseline statistics and artifact score") {
  core::Rng rng(21);
  auto make_window = [&](double burst_amp) {
    signal::EegWindow w;
    w.sample_rate_hz = 250.0;
    w.m = signal::ChannelMatrix::zeros(3, 250);
    for (std::size_t c = 0; c < 3; ++c) {
      auto ch = w.m.channel(c);
      for (double& v : ch) v = rng.gaussian();
      if (burst_amp > 0.0) {
        const auto tone = sine(30.0, 250.0, 250, burst_amp);
        for (std::size_t i = 0; i < 250; ++i) ch[i] += tone[i];
      }
    }
    return w;
  };

  std::vector<signal::EegWindow> calm;
  for (int i = 0; i < 40; ++i) calm.push_back(make_window(0.0));
  const auto baseline = signal::compute_baseline(calm);
  CHECK(baseline.channels() == 3);
  for (double sd : baseline.stddev) CHECK(sd > 0.0);

  double quiet = 0.0;
  for (int i = 0; i < 20; ++i) quiet += signal::artifact_score(make_window(0.0), baseline);
  quiet /= 20.0;
  const double loud = signal::artifact_score(make_window(6.0), baseline);
  CHECK(std::abs(quiet) < 1.0);
  CHECK(loud > 5.0);

  CHECK_THROWS_AS(signal::compute_baseline({calm[0]}), std::invalid_argument);
  signal::BaselineStats wrong;
  wrong.mean = {0.0, 0.0};
  wrong.stddev = {1.0, 1.0};
  CHECK_THROWS_AS(signal::artifact_score(calm[0], wrong), std::invalid_argument);
}

TEST_CASE("raw EEG CSV round trip") {
  const auto raw = random_raw(3, 40, 250.0, 31);
  const std::string text = signal::format_raw_csv(raw);
  const auto back = signal::parse_raw_csv(text);
  CHECK(back.m.channels == 3);
  CHECK(back.m.samples == 40);
  CHECK(back.sample_rate_hz == 250.0);
  CHECK(back.m.data == raw.m.data);
  CHECK(signal::format_raw_csv(back) == text);

  CHECK_THROWS_WITH_AS(signal::parse_raw_csv("no header\n1,2\n"),
                       doctest::Contains("<string>:1"), std::runtime_error);
  const std::string short_row =
      "# eeg csv v1 channels=2 samples=3 sample_rate_hz=250\n1,2,3\n4,5\n";
  CHECK_THROWS_WITH_AS(signal::parse_raw_csv(short_row), doctest::Contains(":3"),
                       std::runtime_error);
}
