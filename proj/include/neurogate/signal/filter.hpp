#pragma once

#include <span>
#include <vector>

namespace neurogate::signal {

struct BiquadSection {
  double b0, b1, b2;  // numerator
  double a1, a2;      // denominator, a0 normalized to 1
};

// Butterworth band-pass realized as a cascade of second-order sections
// (direct form II transposed). `order` is the pole count of the band-pass
// response, so order 4 means a 2nd-order low-pass prototype.
class ButterworthBandpass {
 public:
  ButterworthBandpass(int order, double lo_hz, double hi_hz, double sample_rate_hz);

  const std::vector<BiquadSection>& sections() const { return sections_; }
  double sample_rate_hz() const { return sample_rate_hz_; }

  // |H| of the cascade at f_hz for a single causal pass.
  double magnitude_at(double f_hz) const;

  // Single causal pass, zero initial state.
  std::vector<double> apply(std::span<const double> x) const;

  // Forward-backward pass with odd-reflection padding at both ends.
  // Squares the magnitude response and cancels phase.
  std::vector<double> apply_zero_phase(std::span<const double> x) const;

 private:
  std::vector<BiquadSection> sections_;
  double sample_rate_hz_{0.0};
  int order_{0};
};

}  // namespace neurogate::signal
