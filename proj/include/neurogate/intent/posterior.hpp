#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace neurogate::intent {

// The four decodable intents. The numeric order is load bearing: argmax
// ties resolve to the lowest index.
enum class Action : int { Grasp = 0, Release = 1, MoveTo = 2, Rotate = 3 };

inline constexpr int kNumActions = 4;

const char* to_string(Action a);
std::optional<Action> action_from_string(std::string_view s);

Action argmax_lowest(const std::array<double, 4>& p);

// Decoder output over the four intents, validated on construction:
// entries must be finite and non-negative, and the sum must be within
// 1e-6 of one (it is then renormalized). Anything else throws.
class IntentPosterior {
 public:
  IntentPosterior() = default;  // uniform
  explicit IntentPosterior(const std::array<double, 4>& p);

  const std::array<double, 4>& probs() const { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }
  Action argmax() const { return argmax_lowest(p_); }
  double max_prob() const;

 private:
  std::array<double, 4> p_{0.25, 0.25, 0.25, 0.25};
};

// Posterior after mixing with the uniform distribution:
//   q = alpha * p + (1 - alpha) / 4
// Every entry is at least (1 - alpha) / 4.
struct CalibratedPosterior {
  std::array<double, 4> p;
  double alpha{1.0};

  Action argmax() const { return argmax_lowest(p); }
  double max_prob() const;
};

// alpha outside [0, 1] throws.
CalibratedPosterior calibrate(const IntentPosterior& p, double alpha);

// Shannon entropy over four outcomes normalized to [0, 1] by log 4,
// with 0 * log 0 taken as 0. Assumes a probability vector.
double normalized_entropy(const std::array<double, 4>& p);
inline double normalized_entropy(const IntentPosterior& p) { return normalized_entropy(p.probs()); }
inline double normalized_entropy(const CalibratedPosterior& p) { return normalized_entropy(p.p); }

}  // namespace neurogate::intent
