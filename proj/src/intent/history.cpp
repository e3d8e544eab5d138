#include "neurogate/intent/history.hpp"

#include <stdexcept>

namespace neurogate::intent {

IntentHistory::IntentHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity < 2) throw std::invalid_argument("history capacity must be at least 2");
}

void IntentHistory::push_frame(const CalibratedPosterior& p) { push_label(p.argmax()); }

void IntentHistory::push_label(Action a) {
  labels_.push_back(a);
  if (labels_.size() > capacity_) labels_.pop_front();
}

double IntentHistory::oscillation_index() const {
  if (!full()) return 0.0;
  std::size_t flips = 0;
  for (std::size_t i = 1; i < labels_.size(); ++i)
    if (labels_[i] != labels_[i - 1]) ++flips;
  return double(flips) / double(capacity_ - 1);
}

}  // namespace neurogate::intent
