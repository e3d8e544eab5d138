#pragma once

#include <array>
#include <cstdint>

#include "neurogate/core/rng.hpp"
#include "neurogate/intent/posterior.hpp"

namespace neurogate::harness {

// Decode quality of one trial, drawn once per trial and held for a dwell.
enum class TrialMode {
  Locked,          // tracks the true intent with high confidence
  ConfidentWrong,  // muscle-artifact corruption: stable wrong label, confident
  Oscillating,     // alternates between two wrong labels, confident each frame
  Diffuse,         // near-chance labels and low confidence
};

const char* to_string(TrialMode m);

// Stand-in for a trained intent decoder. Emits 4-way posteriors whose
// frame accuracy tracks an SNR-dependent target and whose confidence is
// deliberately miscalibrated (mean confidence above accuracy), so the
// gate sees realistic failure shapes: confident artifact-driven errors,
// unstable decodes and diffuse uncertainty.
struct SyntheticDecoderModel {
  double base_accuracy{0.85};         // frame accuracy at the reference SNR
  double accuracy_loss_per_db{0.024};
  double ref_snr_db{20.0};
  double chance_accuracy{0.25};

  // Miscalibration knob: mean confidence of correct decodes sits this far
  // above base accuracy.
  double overconfidence_gap{0.03};

  double diffuse_rate{0.05};     // trial share with near-chance decodes
  double osc_share{0.12};        // fraction of wrong-confident mass that oscillates
  double diffuse_flip_prob{0.15};

  // Confidence Beta(mu * kappa, (1 - mu) * kappa) per mode; draws are
  // clamped to [0.26, 0.997] so the argmax always equals the intended
  // label (the runner-up probability is (1 - c) / 3 < 0.25).
  double mu_conf_wrong{0.85};
  double mu_osc{0.82};
  double mu_diffuse{0.42};
  double kappa_locked{150.0};
  double kappa_conf_wrong{25.0};
  double kappa_osc{30.0};
  double kappa_diffuse{12.0};

  std::uint64_t rng_seed{42};

  // clamp(base - loss * (ref - snr), chance, 1)
  double accuracy_at(double snr_db) const;
  double mu_locked() const;

  struct ModeMix {
    double locked{0.0}, confident_wrong{0.0}, oscillating{0.0}, diffuse{0.0};
  };
  // Trial-mode probabilities at an SNR. Sums to one, and the implied
  // frame accuracy equals accuracy_at(snr_db):
  //   locked + chance * diffuse = accuracy.
  ModeMix mode_mix_at(double snr_db) const;

  void validate() const;
};

// Per-trial decode script: the drawn mode plus the labels it commits to.
struct TrialScript {
  intent::Action truth{intent::Action::Grasp};
  TrialMode mode{TrialMode::Locked};
  std::array<intent::Action, 2> wrong{intent::Action::Release, intent::Action::MoveTo};
  intent::Action diffuse_current{intent::Action::Grasp};
};

TrialScript draw_trial(const SyntheticDecoderModel& m, double snr_db, core::Rng& rng);

// Emits the posterior for frame `frame_in_trial` (0-based), advancing the
// diffuse walk inside the script.
intent::IntentPosterior decode_frame(const SyntheticDecoderModel& m, TrialScript& script,
                                     std::size_t frame_in_trial, core::Rng& rng);

}  // namespace neurogate::harness
