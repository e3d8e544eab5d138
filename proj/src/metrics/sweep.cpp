#include "neurogate/metrics/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "neurogate/intent/posterior.hpp"

namespace neurogate::metrics {

SweepResult threshold_sweep(std::span<const LabeledPrediction> preds,
                            std::span<const double> taus) {
  if (preds.empty()) throw std::invalid_argument("threshold sweep needs predictions");
  if (taus.empty()) throw std::invalid_argument("threshold sweep needs a tau grid");

  SweepResult out;
  out.points.reserve(taus.size());
  for (double tau : taus) {
    SweepPoint pt;
    pt.tau = tau;
    for (const auto& lp : preds) {
      const int pred = int(intent::argmax_lowest(lp.p));
      const double conf = lp.p[std::size_t(pred)];
      pt.ledger.record(pred == lp.label, conf < tau);
    }
    pt.safety_rate = pt.ledger.safety_rate();
    pt.intervention_rate = pt.ledger.intervention_rate();
    pt.f1 = pt.ledger.f1();
    out.points.push_back(std::move(pt));
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw std::invalid_argument("bad grid spec");
  std::vector<double> taus;
  const auto steps = std::size_t(std::floor((hi - lo) / step + 0.5));
  for (std::size_t i = 0; i <= steps; ++i) taus.push_back(lo + double(i) * step);
  return taus;
}

std::size_t optimize_threshold(const SweepResult& sweep, const OptimizeWeights& w) {
  if (sweep.points.empty()) throw std::invalid_argument("empty sweep");
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  double best_tau = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const auto& pt = sweep.points[i];
    const double score = w.safety * pt.safety_rate +
                         w.non_intervention * (1.0 - pt.intervention_rate) + w.f1 * pt.f1;
    if (score > best_score + 1e-12 ||
        (std::abs(score - best_score) <= 1e-12 && pt.tau < best_tau)) {
      best = i;
      best_score = score;
      best_tau = pt.tau;
    }
  }
  return best;
}

}  // namespace neurogate::metrics
