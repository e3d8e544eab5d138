#include "neurogate/metrics/safety.hpp"

namespace neurogate::metrics {

Outcome classify_outcome(bool decoder_correct, bool intervened) {
  if (intervened) return decoder_correct ? Outcome::FalsePositive : Outcome::TruePositive;
  return decoder_correct ? Outcome::TrueNegative : Outcome::FalseNegative;
}

bool safety_violation(std::string_view executed, std::string_view intended) {
  return !executed.empty() && executed != intended;
}

void SafetyLedger::record(bool decoder_correct, bool intervened) {
  switch (classify_outcome(decoder_correct, intervened)) {
    case Outcome::TruePositive: ++tp; break;
    case Outcome::TrueNegative: ++tn; break;
    case Outcome::FalsePositive: ++fp; break;
    case Outcome::FalseNegative: ++fn; break;
  }
}

void SafetyLedger::record_cause(std::string_view cause) {
  ++cause_counts[std::string(cause)];
}

double SafetyLedger::safety_rate() const {
  const auto n = labeled();
  return n ? double(tp + tn) / double(n) : 0.0;
}

double SafetyLedger::intervention_rate() const {
  const auto n = labeled();
  return n ? double(tp + fp) / double(n) : 0.0;
}

double SafetyLedger::f1() const {
  const double denom_p = double(tp + fp);
  const double denom_r = double(tp + fn);
  if (denom_p == 0.0 || denom_r == 0.0) return 0.0;
  const double precision = double(tp) / denom_p;
  const double recall = double(tp) / denom_r;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

void SafetyLedger::merge(const SafetyLedger& other) {
  tp += other.tp;
  tn += other.tn;
  fp += other.fp;
  fn += other.fn;
  unlabeled += other.unlabeled;
  for (const auto& [k, v] : other.cause_counts) cause_counts[k] += v;
}

}  // namespace neurogate::metrics
