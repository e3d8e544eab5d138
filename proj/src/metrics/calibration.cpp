#include "neurogate/metrics/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "neurogate/intent/posterior.hpp"

namespace neurogate::metrics {

namespace {

int argmax4(const std::array<double, 4>& p) {
  return int(intent::argmax_lowest(p));
}

double confidence_of(const LabeledPrediction& lp) {
  return lp.p[std::size_t(argmax4(lp.p))];
}

bool correct(const LabeledPrediction& lp) { return argmax4(lp.p) == lp.label; }

void validate(std::span<const LabeledPrediction> preds, int bins) {
  if (preds.empty()) throw std::invalid_argument("calibration metrics need at least one prediction");
  if (bins < 1) throw std::invalid_argument("bin count must be at least 1");
  for (const auto& lp : preds)
    if (lp.label < 0 || lp.label > 3)
      throw std::invalid_argument("labels must lie in [0, 3]");
}

struct BinAccum {
  std::size_t count{0};
  double acc_sum{0.0};
  double conf_sum{0.0};
};

std::vector<BinAccum> accumulate_bins(std::span<const LabeledPrediction> preds, int bins) {
  std::vector<BinAccum> acc(static_cast<std::size_t>(bins));
  for (const auto& lp : preds) {
    auto& b = acc[confidence_bin(confidence_of(lp), bins)];
    ++b.count;
    b.acc_sum += correct(lp) ? 1.0 : 0.0;
    b.conf_sum += confidence_of(lp);
  }
  return acc;
}

}  // namespace

std::size_t confidence_bin(double confidence, int bins) {
  if (confidence <= 0.0) return 0;
  const auto idx = std::size_t(std::ceil(confidence * bins)) - 1;
  return std::min(idx, std::size_t(bins) - 1);
}

double ece(std::span<const LabeledPrediction> preds, int bins) {
  validate(preds, bins);
  const auto acc = accumulate_bins(preds, bins);
  const double n = double(preds.size());
  double e = 0.0;
  for (const auto& b : acc) {
    if (b.count == 0) continue;
    const double c = double(b.count);
    e += (c / n) * std::abs(b.acc_sum / c - b.conf_sum / c);
  }
  return e;
}

double mce(std::span<const LabeledPrediction> preds, int bins) {
  validate(preds, bins);
  const auto acc = accumulate_bins(preds, bins);
  double m = 0.0;
  for (const auto& b : acc) {
    if (b.count == 0) continue;
    const double c = double(b.count);
    m = std::max(m, std::abs(b.acc_sum / c - b.conf_sum / c));
  }
  return m;
}

double ace(std::span<const LabeledPrediction> preds, int bins) {
  validate(preds, bins);
  const std::size_t n = preds.size();
  const std::size_t r = std::min<std::size_t>(std::size_t(bins), n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return confidence_of(preds[a]) < confidence_of(preds[b]);
  });

  // Equal-count cuts; the remainder goes to the leading groups. A cut
  // sitting inside a run of equal confidences slides right until the run
  // ends, which merges the tied groups.
  std::vector<std::size_t> cuts{0};
  const std::size_t base = n / r, extra = n % r;
  std::size_t pos = 0;
  for (std::size_t g = 0; g < r; ++g) {
    pos += base + (g < extra ? 1 : 0);
    std::size_t cut = pos;
    while (cut < n &&
           confidence_of(preds[order[cut - 1]]) == confidence_of(preds[order[cut]]))
      ++cut;
    if (cut > cuts.back() && cut <= n) cuts.push_back(cut);
    pos = cut;
    if (pos >= n) break;
  }
  if (cuts.back() != n) cuts.push_back(n);

  double e = 0.0;
  for (std::size_t g = 0; g + 1 < cuts.size(); ++g) {
    const std::size_t lo = cuts[g], hi = cuts[g + 1];
    double acc = 0.0, conf = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      acc += correct(preds[order[k]]) ? 1.0 : 0.0;
      conf += confidence_of(preds[order[k]]);
    }
    const double c = double(hi - lo);
    e += (c / double(n)) * std::abs(acc / c - conf / c);
  }
  return e;
}

CalibrationReport calibration_report(std::span<const LabeledPrediction> preds, int bins) {
  validate(preds, bins);
  CalibrationReport rep;
  rep.n = preds.size();
  rep.bins = bins;
  rep.ece = ece(preds, bins);
  rep.mce = mce(preds, bins);
  rep.ace = ace(preds, bins);

  const auto acc = accumulate_bins(preds, bins);
  rep.per_bin.resize(acc.size());
  double acc_total = 0.0, conf_total = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    rep.per_bin[i].count = acc[i].count;
    if (acc[i].count) {
      rep.per_bin[i].accuracy = acc[i].acc_sum / double(acc[i].count);
      rep.per_bin[i].confidence = acc[i].conf_sum / double(acc[i].count);
    }
    acc_total += acc[i].acc_sum;
    conf_total += acc[i].conf_sum;
  }
  rep.accuracy = acc_total / double(rep.n);
  rep.mean_confidence = conf_total / double(rep.n);

  std::size_t over = 0;
  for (const auto& lp : preds) {
    const auto& b = rep.per_bin[confidence_bin(confidence_of(lp), bins)];
    if (confidence_of(lp) > b.accuracy) ++over;
  }
  rep.overconfidence_rate = double(over) / double(rep.n);
  return rep;
}

std::array<double, 4> apply_temperature(const std::array<double, 4>& p, double t) {
  std::array<double, 4> q{};
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = p[i] > 0.0 ? std::exp(std::log(p[i]) / t) : 0.0;
    sum += q[i];
  }
  if (sum <= 0.0) return p;
  for (double& v : q) v /= sum;
  return q;
}

TemperatureFit temperature_scale(std::span<const LabeledPrediction> preds, double t_lo,
                                 double t_hi, double t_step, int bins) {
  validate(preds, bins);
  if (!(t_lo > 0) || !(t_hi > t_lo) || !(t_step > 0))
    throw std::invalid_argument("temperature grid must satisfy 0 < lo < hi, step > 0");

  bool seen[4] = {false, false, false, false};
  for (const auto& lp : preds) seen[lp.label] = true;
  if (std::count(std::begin(seen), std::end(seen), true) < 2)
    throw std::invalid_argument("temperature scaling needs more than one label class");

  // Precompute logs once; the grid then only exponentiates.
  std::vector<std::array<double, 4>> logp(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i)
    for (std::size_t k = 0; k < 4; ++k)
      logp[i][k] = preds[i].p[k] > 0.0 ? std::log(preds[i].p[k]) : -1e300;

  TemperatureFit fit;
  fit.nll = std::numeric_limits<double>::infinity();
  const auto steps = std::size_t(std::floor((t_hi - t_lo) / t_step + 0.5));
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = t_lo + double(s) * t_step;
    double nll = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      double sum = 0.0;
      std::array<double, 4> q{};
      for (std::size_t k = 0; k < 4; ++k) {
        q[k] = std::exp(logp[i][k] / t);
        sum += q[k];
      }
      const double prob = q[std::size_t(preds[i].label)] / sum;
      nll -= std::log(std::max(prob, 1e-300));
    }
    if (nll < fit.nll - 1e-12) {
      fit.nll = nll;
      fit.temperature = t;
    }
  }

  fit.ece_before = ece(preds, bins);
  std::vector<LabeledPrediction> scaled(preds.begin(), preds.end());
  for (auto& lp : scaled) lp.p = apply_temperature(lp.p, fit.temperature);
  fit.ece_after = ece(scaled, bins);
  return fit;
}

}  // namespace neurogate::metrics
