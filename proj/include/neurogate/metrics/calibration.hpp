#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace neurogate::metrics {

// One prediction with its ground truth, probabilities over the four
// intents. Confidence is the max probability; the predicted class is the
// argmax (ties to the lowest index).
struct LabeledPrediction {
  std::array<double, 4> p{};
  int label{0};
};

struct BinStat {
  std::size_t count{0};
  double accuracy{0.0};
  double confidence{0.0};  // mean max-probability of the bin
};

// Confidence bin index among `bins` equal-width bins: intervals are
// left-open right-closed except the first, so a confidence of exactly 0
// lands in bin 0 and 1.0 in the last bin.
std::size_t confidence_bin(double confidence, int bins);

// Expected calibration error over equal-width bins:
//   sum over bins of (|B| / n) * |accuracy(B) - confidence(B)|
double ece(std::span<const LabeledPrediction> preds, int bins = 10);

// Max over nonempty bins of |accuracy - confidence|.
double mce(std::span<const LabeledPrediction> preds, int bins = 10);

// Adaptive variant: equal-count bins from a quantile split (remainder
// spread over the leading bins). Adjacent groups whose boundary
// confidences are equal merge, so identical confidences degenerate to a
// single bin and ACE then equals ECE.
double ace(std::span<const LabeledPrediction> preds, int bins = 10);

struct CalibrationReport {
  std::size_t n{0};
  int bins{10};
  double ece{0.0};
  double mce{0.0};
  double ace{0.0};
  double accuracy{0.0};
  double mean_confidence{0.0};
  // fraction of predictions whose confidence exceeds their bin's accuracy
  double overconfidence_rate{0.0};
  std::vector<BinStat> per_bin;
};

CalibrationReport calibration_report(std::span<const LabeledPrediction> preds, int bins = 10);

struct TemperatureFit {
  double temperature{1.0};
  double nll{0.0};
  double ece_before{0.0};
  double ece_after{0.0};
};

// Grid search for the temperature minimizing NLL of p^(1/T), renormalized.
// The grid runs [t_lo, t_hi] at t_step resolution; ties go to the smaller
// temperature. Throws on empty input or when all labels are one class.
TemperatureFit temperature_scale(std::span<const LabeledPrediction> preds, double t_lo = 0.25,
                                 double t_hi = 10.0, double t_step = 0.01, int bins = 10);

// p^(1/T) renormalized.
std::array<double, 4> apply_temperature(const std::array<double, 4>& p, double t);

}  // namespace neurogate::metrics
