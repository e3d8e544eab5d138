#include "neurogate/intent/posterior.hpp"

#include <cmath>
#include <stdexcept>

namespace neurogate::intent {

const char* to_string(Action a) {
  switch (a) {
    case Action::Grasp: return "GRASP";
    case Action::Release: return "RELEASE";
    case Action::MoveTo: return "MOVE_TO";
    case Action::Rotate: return "ROTATE";
  }
  return "?";
}

std::optional<Action> action_from_string(std::string_view s) {
  if (s == "GRASP" || s == "grasp" || s == "0") return Action::Grasp;
  if (s == "RELEASE" || s == "release" || s == "1") return Action::Release;
  if (s == "MOVE_TO" || s == "move_to" || s == "2") return Action::MoveTo;
  if (s == "ROTATE" || s == "rotate" || s == "3") return Action::Rotate;
  return std::nullopt;
}

Action argmax_lowest(const std::array<double, 4>& p) {
  int best = 0;
  for (int i = 1; i < kNumActions; ++i)
    if (p[i] > p[best]) best = i;
  return Action(best);
}

IntentPosterior::IntentPosterior(const std::array<double, 4>& p) : p_(p) {
  double sum = 0.0;
  for (double v : p_) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("posterior entries must be finite and non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("posterior does not sum to one within 1e-6");
  for (double& v : p_) v /= sum;
}

double IntentPosterior::max_prob() const {
  return p_[std::size_t(argmax())];
}

double CalibratedPosterior::max_prob() const {
  return p[std::size_t(argmax())];
}

CalibratedPosterior calibrate(const IntentPosterior& p, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("calibrate: alpha must lie in [0, 1]");
  CalibratedPosterior out;
  out.alpha = alpha;
  const double base = (1.0 - alpha) * 0.25;
  for (int i = 0; i < kNumActions; ++i)
    out.p[std::size_t(i)] = alpha * p[std::size_t(i)] + base;
  return out;
}

double normalized_entropy(const std::array<double, 4>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  h /= std::log(4.0);
  if (h < 0.0) h = 0.0;
  if (h > 1.0) h = 1.0;
  return h;
}

}  // namespace neurogate::intent
