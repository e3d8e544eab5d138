#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace neurogate::metrics {

// Intervention-as-positive-class accounting:
//   true positive   intervened while the decode was wrong
//   true negative   passed a correct decode through
//   false positive  intervened on a correct decode
//   false negative  let a wrong decode execute
enum class Outcome { TruePositive, TrueNegative, FalsePositive, FalseNegative };

Outcome classify_outcome(bool decoder_correct, bool intervened);

// true iff something was actually executed and it differs from the
// intended action; a halt (empty executed name) never violates.
bool safety_violation(std::string_view executed, std::string_view intended);

struct SafetyLedger {
  std::uint64_t tp{0}, tn{0}, fp{0}, fn{0};
  std::map<std::string, std::uint64_t> cause_counts;  // halts by cause name
  std::uint64_t unlabeled{0};  // decisions without ground truth

  void record(bool decoder_correct, bool intervened);
  void record_cause(std::string_view cause);

  std::uint64_t labeled() const { return tp + tn + fp + fn; }
  // (TP + TN) / labeled
  double safety_rate() const;
  // (TP + FP) / labeled
  double intervention_rate() const;
  // intervention as the positive class; 0 when undefined
  double f1() const;

  void merge(const SafetyLedger& other);
};

}  // namespace neurogate::metrics
