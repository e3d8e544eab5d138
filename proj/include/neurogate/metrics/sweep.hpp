#pragma once

#include "neurogate/metrics/calibration.hpp"
#include "neurogate/metrics/safety.hpp"

namespace neurogate::metrics {

// Single-threshold confidence gate: intervene iff max-probability < tau.
struct SweepPoint {
  double tau{0.0};
  SafetyLedger ledger;
  double safety_rate{0.0};
  double intervention_rate{0.0};
  double f1{0.0};
};

struct SweepResult {
  std::vector<SweepPoint> points;  // in the given tau order
};

SweepResult threshold_sweep(std::span<const LabeledPrediction> preds,
                            std::span<const double> taus);

std::vector<double> make_grid(double lo, double hi, double step);

struct OptimizeWeights {
  double safety{1.0};
  double non_intervention{1.0};
  double f1{1.0};
};

// Index of the tau maximizing
//   safety * w1 + (1 - intervention) * w2 + f1 * w3,
// ties resolved toward the smallest tau.
std::size_t optimize_threshold(const SweepResult& sweep, const OptimizeWeights& w = {});

}  // namespace neurogate::metrics
