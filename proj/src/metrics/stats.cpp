#include "neurogate/metrics/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <stdexcept>

namespace neurogate::metrics {

PairedStats paired_t_and_effect(std::span<const double> deltas) {
  const std::size_t n = deltas.size();
  if (n < 2) throw std::invalid_argument("paired test needs at least two deltas");

  double mean = 0.0;
  for (double d : deltas) mean += d;
  mean /= double(n);

  double var = 0.0;
  for (double d : deltas) var += (d - mean) * (d - mean);
  var /= double(n - 1);
  const double sd = std::sqrt(var);

  PairedStats s;
  s.n = n;
  s.mean_delta = mean;
  s.sd_delta = sd;
  if (!(sd > 0.0)) {
    // Degenerate deltas: identical values. All-zero deltas mean no effect.
    if (mean != 0.0)
      throw std::invalid_argument("paired test needs nonzero delta variance");
    return s;
  }
  s.t = mean / (sd / std::sqrt(double(n)));
  s.cohens_d = mean / sd;

  const boost::math::students_t dist(double(n - 1));
  s.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(s.t)));
  return s;
}

}  // namespace neurogate::metrics
