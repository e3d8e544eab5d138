#pragma once

#include <cstddef>
#include <stdexcept>

namespace neurogate::monitor {

struct MonitorConfig {
  double tau_h{0.75};      // normalized-entropy ceiling, [0, 1]; 0 halts every frame
  double tau_a{2.5};       // artifact z-score ceiling
  double tau_omega{0.3};   // oscillation-index ceiling, [0, 1]
  double alpha_m{0.8};     // confidence mass kept by calibration, [0, 1]
  std::size_t k_frames{10};  // oscillation window, >= 2
  // Halt the first k_frames of a session while the history fills. The
  // oscillation index is optimistic while short, so this keeps warm-up
  // conservative.
  bool warmup_halt{true};

  void validate() const {
    if (!(tau_h >= 0.0 && tau_h <= 1.0))
      throw std::invalid_argument("tau_h must lie in [0, 1]");
    if (!(tau_omega >= 0.0 && tau_omega <= 1.0))
      throw std::invalid_argument("tau_omega must lie in [0, 1]");
    if (!(alpha_m >= 0.0 && alpha_m <= 1.0))
      throw std::invalid_argument("alpha_m must lie in [0, 1]");
    if (k_frames < 2) throw std::invalid_argument("k_frames must be at least 2");
  }
};

// Which checks run; disabled checks pass unconditionally. `calibration`
// off means the raw posterior is used as-is (alpha treated as 1).
struct AblationMask {
  bool entropy{true};
  bool artifact{true};
  bool oscillation{true};
  bool calibration{true};
  bool logical{true};

  bool all_on() const { return entropy && artifact && oscillation && calibration && logical; }
};

}  // namespace neurogate::monitor
