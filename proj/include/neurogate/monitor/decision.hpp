#pragma once

#include <array>
#include <optional>
#include <string>

#include "neurogate/intent/posterior.hpp"

namespace neurogate::monitor {

enum class Verdict { Execute, Halt };

enum class Cause {
  None,
  Warmup,
  LowConfidence,    // normalized entropy at or above tau_h
  HighArtifact,     // artifact score at or above tau_a
  HighOscillation,  // oscillation index at or above tau_omega
  LogicalPhi1,      // unreachable goal or location
  LogicalPhi2,      // unsafe configuration
  LogicalPhi3,      // invalid transition / inapplicable step
};

const char* to_string(Verdict v);
const char* to_string(Cause c);

// The six gate checks in evaluation order.
enum class GateCheck : int {
  Entropy = 0,
  Artifact = 1,
  Oscillation = 2,
  Phi1 = 3,
  Phi2 = 4,
  Phi3 = 5,
};

// Pure gate: given pass/fail of the six checks in order, the cause is the
// first failure, or None when everything passed (then the verdict is
// Execute). The monitor's early-exit evaluation implements exactly this
// mapping.
Cause first_failing_cause(const std::array<bool, 6>& passed);

struct Measurements {
  double entropy{0.0};
  std::optional<double> artifact;  // empty when no window was available
  double omega{0.0};
  intent::Action intent{intent::Action::Grasp};
  double max_prob{0.0};
};

struct Decision {
  Verdict verdict{Verdict::Halt};
  Cause cause{Cause::None};
  std::string action;  // executed ground action, empty on halt or no-op
  std::string detail;  // offending value or violation text
};

}  // namespace neurogate::monitor
