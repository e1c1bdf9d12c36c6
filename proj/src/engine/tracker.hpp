#pragma once

#include <array>
#include <deque>
#include <optional>

#include "core/frame.hpp"

namespace liftrisk {

struct TransitionEvent {
  ActionLabel from = ActionLabel::Standing;
  ActionLabel to = ActionLabel::Standing;
  double t = 0.0;
};

// Debounced action switching on the step-0 gate probabilities. The current
// action is held until its probability has dropped at least drop_threshold
// below its recent peak; the successor must have risen at least
// rise_threshold above its recent trough. After a switch the tracker stays
// quiet for a full history length, which bounds the transition rate.
class TransitionTracker {
 public:
  TransitionTracker(double drop_threshold = 0.2, double rise_threshold = 0.2,
                    int history_cycles = 10);

  // One cycle: probs are the step-0 action probabilities at time t.
  // Returns an event on the cycle a transition fires.
  std::optional<TransitionEvent> update(
      const std::array<double, kActionCount>& probs, double t);

  ActionLabel current() const { return current_; }
  bool initialized() const { return initialized_; }
  void reset();

 private:
  double drop_threshold_;
  double rise_threshold_;
  int history_;
  std::deque<std::array<double, kActionCount>> buffer_;
  ActionLabel current_ = ActionLabel::Standing;
  bool initialized_ = false;
  int refractory_ = 0;
};

}  // namespace liftrisk
