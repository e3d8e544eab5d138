#pragma once

#include <cstddef>
#include <deque>

#include "neurogate/intent/posterior.hpp"

namespace neurogate::intent {

// Sliding window over the most recent calibrated frames. Only the argmax
// labels matter for the oscillation index, so only those are stored.
class IntentHistory {
 public:
  // capacity is the K of the oscillation window; at least 2.
  explicit IntentHistory(std::size_t capacity);

  void push_frame(const CalibratedPosterior& p);
  void push_label(Action a);

  std::size_t size() const { return labels_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return labels_.size() == capacity_; }
  Action label_at(std::size_t i) const { return labels_[i]; }  // oldest first

  // Fraction of adjacent argmax flips over the buffered frames:
  //   (1 / (K - 1)) * sum of argmax changes between consecutive frames.
  // Returns 0 until the buffer is full (optimistic warm-up; the monitor
  // holds a separate warm-up gate for exactly this reason).
  double oscillation_index() const;

 private:
  std::size_t capacity_;
  std::deque<Action> labels_;
};

}  // namespace neurogate::intent
