#include "neurogate/harness/generator.hpp"

#include <cmath>

#include "neurogate/core/hash.hpp"
#include "neurogate/signal/filter.hpp"

namespace neurogate::harness {

namespace {

double channel_rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / double(x.size()));
}

}  // namespace

SessionGenerator::SessionGenerator(const ScenarioSpec& spec, double snr_db,
                                   std::uint64_t trials, std::uint64_t seed)
    : spec_(spec), snr_db_(snr_db), trials_(trials), rng_(seed) {
  spec_.validate();
  win_ = std::size_t(std::lround(spec_.window_seconds * spec_.sample_rate_hz));
  stride_ = std::size_t(std::lround(spec_.stride_seconds * spec_.sample_rate_hz));
  if (win_ < 2 || stride_ < 1)
    throw std::invalid_argument("generator: window and stride must span samples");

  if (spec_.emit_windows) {
    // 10 s burst-free prelude at the session's own SNR, windowed like the
    // trials, defines the baseline: the artifact score then measures
    // departures from this session's background, not from silence.
    const std::size_t prelude = std::size_t(std::lround(10.0 * spec_.sample_rate_hz));
    signal::RawEeg raw;
    raw.m = clean_background(std::max(prelude, win_ + stride_));
    raw.sample_rate_hz = spec_.sample_rate_hz;
    raw = signal::inject_noise(raw, ambient_noise());
    signal::ChannelMatrix m = std::move(raw.m);
    signal::common_average_reference(m);
    std::vector<signal::EegWindow> windows;
    for (std::size_t start = 0; start + win_ <= m.samples; start += stride_) {
      signal::EegWindow w;
      w.sample_rate_hz = spec_.sample_rate_hz;
      w.t_index = windows.size();
      w.m = signal::ChannelMatrix::zeros(m.channels, win_);
      for (std::size_t ch = 0; ch < m.channels; ++ch) {
        const auto src = m.channel(ch);
        std::copy(src.begin() + long(start), src.begin() + long(start + win_),
                  w.m.channel(ch).begin());
      }
      signal::zscore_channels(w.m, 1e-8);
      windows.push_back(std::move(w));
    }
    baseline_ = signal::compute_baseline(windows);
  }
}

signal::NoiseSpec SessionGenerator::ambient_noise() {
  signal::NoiseSpec noise;
  noise.target_snr_db = snr_db_;
  noise.w_white = spec_.w_white;
  noise.w_pink = spec_.w_pink;
  noise.w_emg = spec_.w_emg;
  noise.seed = rng_.next_u64();
  return noise;
}

signal::ChannelMatrix SessionGenerator::clean_background(std::size_t samples) {
  // Pink-spectrum background, unit RMS per channel.
  signal::ChannelMatrix m = signal::ChannelMatrix::zeros(spec_.channels, samples);
  for (std::size_t ch = 0; ch < m.channels; ++ch) {
    auto row = m.channel(ch);
    for (double& v : row) v = rng_.gaussian();
    signal::pink_shape(row, spec_.sample_rate_hz);
    const double r = channel_rms(row);
    if (r > 0)
      for (double& v : row) v /= r;
  }
  return m;
}

void SessionGenerator::add_burst(signal::ChannelMatrix& chunk) {
  if (spec_.burst_power_ratio <= 0.0) return;
  const signal::ButterworthBandpass bp(4, 20.0, 45.0, spec_.sample_rate_hz);
  const double target = std::sqrt(spec_.burst_power_ratio);
  std::vector<double> noise(chunk.samples);
  for (std::size_t ch = 0; ch < chunk.channels; ++ch) {
    for (double& v : noise) v = rng_.gaussian();
    const auto y = bp.apply_zero_phase(noise);
    const double r = channel_rms(y);
    const double g = r > 0 ? target / r : 0.0;
    auto row = chunk.channel(ch);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] += g * y[i];
  }
}

bool SessionGenerator::next_trial(std::vector<GeneratedFrame>& out) {
  if (done_ >= trials_) return false;

  TrialScript script = draw_trial(spec_.decoder, snr_db_, rng_);

  std::vector<signal::EegWindow> windows;
  if (spec_.emit_windows) {
    const std::size_t chunk_len = win_ + (spec_.dwell_frames - 1) * stride_;
    signal::RawEeg raw;
    raw.m = clean_background(chunk_len);
    raw.sample_rate_hz = spec_.sample_rate_hz;
    raw = signal::inject_noise(raw, ambient_noise());

    if (script.mode == TrialMode::ConfidentWrong) add_burst(raw.m);

    signal::common_average_reference(raw.m);
    windows.reserve(spec_.dwell_frames);
    for (std::size_t f = 0; f < spec_.dwell_frames; ++f) {
      signal::EegWindow w;
      w.sample_rate_hz = spec_.sample_rate_hz;
      w.t_index = frame_ + f;
      w.m = signal::ChannelMatrix::zeros(raw.m.channels, win_);
      const std::size_t start = f * stride_;
      for (std::size_t ch = 0; ch < raw.m.channels; ++ch) {
        const auto src = raw.m.channel(ch);
        std::copy(src.begin() + long(start), src.begin() + long(start + win_),
                  w.m.channel(ch).begin());
      }
      signal::zscore_channels(w.m, 1e-8);
      windows.push_back(std::move(w));
    }
  }

  for (std::size_t f = 0; f < spec_.dwell_frames; ++f) {
    GeneratedFrame g;
    g.index = frame_++;
    g.trial = done_;
    g.snr_db = snr_db_;
    g.truth = script.truth;
    g.mode = script.mode;
    g.posterior = decode_frame(spec_.decoder, script, f, rng_);
    if (spec_.emit_windows) g.window = std::move(windows[f]);
    out.push_back(std::move(g));
  }

  ++done_;
  return true;
}

std::vector<intent::PosteriorRecord> make_posterior_records(const ScenarioSpec& spec,
                                                            std::uint64_t frames) {
  ScenarioSpec s = spec;
  s.emit_windows = false;
  const double snr = s.snr_schedule_db.front();
  const std::uint64_t trials = (frames + s.dwell_frames - 1) / s.dwell_frames;
  SessionGenerator gen(s, snr, trials, s.seed);

  std::vector<intent::PosteriorRecord> records;
  std::vector<GeneratedFrame> trial;
  while (records.size() < frames && gen.next_trial(trial)) {
    for (const GeneratedFrame& g : trial) {
      if (records.size() >= frames) break;
      intent::PosteriorRecord r;
      r.frame = records.size();
      r.p = g.posterior.probs();
      r.label = g.truth;
      records.push_back(r);
    }
    trial.clear();
  }
  return records;
}

}  // namespace neurogate::harness
