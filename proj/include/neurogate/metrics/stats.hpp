#pragma once

#include <span>

namespace neurogate::metrics {

// Paired comparison over per-subject (or per-repetition) deltas.
struct PairedStats {
  std::size_t n{0};
  double mean_delta{0.0};
  double sd_delta{0.0};   // sample standard deviation
  double t{0.0};          // mean / (sd / sqrt(n)), n - 1 dof
  double p_two_sided{1.0};
  double cohens_d{0.0};   // mean / sd of the deltas
};

// Throws when n < 2, or when the deltas are identical but nonzero (the
// statistic diverges). All-zero deltas return t = 0, d = 0, p = 1.
PairedStats paired_t_and_effect(std::span<const double> deltas);

}  // namespace neurogate::metrics
