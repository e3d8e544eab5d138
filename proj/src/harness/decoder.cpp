#include "neurogate/harness/decoder.hpp"

#include <algorithm>
#include <stdexcept>

namespace neurogate::harness {

const char* to_string(TrialMode m) {
  switch (m) {
    case TrialMode::Locked: return "locked";
    case TrialMode::ConfidentWrong: return "confident-wrong";
    case TrialMode::Oscillating: return "oscillating";
    case TrialMode::Diffuse: return "diffuse";
  }
  return "?";
}

double SyntheticDecoderModel::accuracy_at(double snr_db) const {
  const double t = base_accuracy - accuracy_loss_per_db * (ref_snr_db - snr_db);
  return std::clamp(t, chance_accuracy, 1.0);
}

double SyntheticDecoderModel::mu_locked() const {
  return std::min(0.97, base_accuracy + overconfidence_gap);
}

SyntheticDecoderModel::ModeMix SyntheticDecoderModel::mode_mix_at(double snr_db) const {
  const double t = accuracy_at(snr_db);
  ModeMix mix;
  mix.diffuse = std::min(diffuse_rate, (1.0 - t) / (1.0 - chance_accuracy));
  mix.locked = t - chance_accuracy * mix.diffuse;
  const double wrong_confident = 1.0 - mix.locked - mix.diffuse;
  mix.oscillating = wrong_confident * osc_share;
  mix.confident_wrong = wrong_confident - mix.oscillating;
  return mix;
}

void SyntheticDecoderModel::validate() const {
  if (!(base_accuracy > 0.0 && base_accuracy <= 1.0))
    throw std::invalid_argument("decoder base_accuracy must lie in (0, 1]");
  if (!(accuracy_loss_per_db >= 0.0))
    throw std::invalid_argument("decoder accuracy_loss_per_db must be nonnegative");
  if (!(chance_accuracy > 0.0 && chance_accuracy <= base_accuracy))
    throw std::invalid_argument("decoder chance_accuracy must lie in (0, base_accuracy]");
  if (!(overconfidence_gap >= 0.0))
    throw std::invalid_argument("decoder overconfidence_gap must be nonnegative");
  if (!(diffuse_rate >= 0.0 && diffuse_rate <= 1.0))
    throw std::invalid_argument("decoder diffuse_rate must lie in [0, 1]");
  if (!(osc_share >= 0.0 && osc_share <= 1.0))
    throw std::invalid_argument("decoder osc_share must lie in [0, 1]");
  if (!(diffuse_flip_prob >= 0.0 && diffuse_flip_prob <= 1.0))
    throw std::invalid_argument("decoder diffuse_flip_prob must lie in [0, 1]");
  for (double mu : {mu_conf_wrong, mu_osc, mu_diffuse, mu_locked()})
    if (!(mu > 0.0 && mu < 1.0))
      throw std::invalid_argument("decoder confidence means must lie in (0, 1)");
  for (double k : {kappa_locked, kappa_conf_wrong, kappa_osc, kappa_diffuse})
    if (!(k > 0.0)) throw std::invalid_argument("decoder kappas must be positive");
}

namespace {

intent::Action other_than(core::Rng& rng, intent::Action a) {
  const int pick = int(rng.uniform_int(3));
  const int v = pick >= int(a) ? pick + 1 : pick;
  return intent::Action(v);
}

double draw_confidence(core::Rng& rng, double mu, double kappa) {
  const double c = rng.beta(mu * kappa, (1.0 - mu) * kappa);
  return std::clamp(c, 0.26, 0.997);
}

}  // namespace

TrialScript draw_trial(const SyntheticDecoderModel& m, double snr_db, core::Rng& rng) {
  const auto mix = m.mode_mix_at(snr_db);

  TrialScript s;
  s.truth = intent::Action(rng.uniform_int(4));

  const double u = rng.uniform();
  if (u < mix.locked)
    s.mode = TrialMode::Locked;
  else if (u < mix.locked + mix.confident_wrong)
    s.mode = TrialMode::ConfidentWrong;
  else if (u < mix.locked + mix.confident_wrong + mix.oscillating)
    s.mode = TrialMode::Oscillating;
  else
    s.mode = TrialMode::Diffuse;

  s.wrong[0] = other_than(rng, s.truth);
  do {
    s.wrong[1] = other_than(rng, s.truth);
  } while (s.wrong[1] == s.wrong[0]);
  s.diffuse_current = intent::Action(rng.uniform_int(4));
  return s;
}

intent::IntentPosterior decode_frame(const SyntheticDecoderModel& m, TrialScript& script,
                                     std::size_t frame_in_trial, core::Rng& rng) {
  intent::Action pred = script.truth;
  double c = 0.5;

  switch (script.mode) {
    case TrialMode::Locked:
      pred = script.truth;
      c = draw_confidence(rng, m.mu_locked(), m.kappa_locked);
      break;
    case TrialMode::ConfidentWrong:
      pred = script.wrong[0];
      c = draw_confidence(rng, m.mu_conf_wrong, m.kappa_conf_wrong);
      break;
    case TrialMode::Oscillating:
      pred = script.wrong[frame_in_trial % 2];
      c = draw_confidence(rng, m.mu_osc, m.kappa_osc);
      break;
    case TrialMode::Diffuse:
      if (frame_in_trial > 0 && rng.uniform() < m.diffuse_flip_prob)
        script.diffuse_current = other_than(rng, script.diffuse_current);
      pred = script.diffuse_current;
      c = draw_confidence(rng, m.mu_diffuse, m.kappa_diffuse);
      break;
  }

  std::array<double, 4> p;
  p.fill((1.0 - c) / 3.0);
  p[std::size_t(pred)] = c;
  return intent::IntentPosterior(p);
}

}  // namespace neurogate::harness
