#include "engine/tracker.hpp"

#include <algorithm>
#include <stdexcept>

namespace liftrisk {

TransitionTracker::TransitionTracker(double drop_threshold,
                                     double rise_threshold, int history_cycles)
    : drop_threshold_(drop_threshold),
      rise_threshold_(rise_threshold),
      history_(history_cycles) {
  if (drop_threshold <= 0.0 || drop_threshold >= 1.0 || rise_threshold <= 0.0 ||
      rise_threshold >= 1.0) {
    throw std::invalid_argument("transition thresholds must lie in (0, 1)");
  }
  if (history_cycles < 2) {
    throw std::invalid_argument("history must cover at least 2 cycles");
  }
}

void TransitionTracker::reset() {
  buffer_.clear();
  initialized_ = false;
  refractory_ = 0;
  current_ = ActionLabel::Standing;
}

std::optional<TransitionEvent> TransitionTracker::update(
    const std::array<double, kActionCount>& probs, double t) {
  buffer_.push_back(probs);
  if (buffer_.size() > static_cast<std::size_t>(history_)) {
    buffer_.pop_front();
  }

  if (!initialized_) {
    initialized_ = true;
    int best = 0;
    for (int j = 1; j < kActionCount; ++j) {
      if (probs[j] > probs[best]) best = j;
    }
    current_ = static_cast<ActionLabel>(best);
    return std::nullopt;
  }

  if (refractory_ > 0) {
    --refractory_;
    return std::nullopt;
  }

  const int cur = static_cast<int>(current_);
  double peak = 0.0;
  for (const auto& sample : buffer_) peak = std::max(peak, sample[cur]);
  if (peak - probs[cur] < drop_threshold_) return std::nullopt;

  for (int j = 0; j < kActionCount; ++j) {
    if (j == cur) continue;
    double trough = 1.0;
    for (const auto& sample : buffer_) trough = std::min(trough, sample[j]);
    if (probs[j] - trough >= rise_threshold_) {
      TransitionEvent event{current_, static_cast<ActionLabel>(j), t};
      current_ = event.to;
      refractory_ = history_;
      return event;
    }
  }
  return std::nullopt;
}

}  // namespace liftrisk
