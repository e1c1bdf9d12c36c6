#pragma once

#include <array>
#include <deque>
#include <optional>
#include <vector>

#include "core/frame.hpp"

namespace liftrisk {

// Ten frames sampled 3 raw steps apart; frames[9] is the newest (the
// anchor). With a 100 Hz stream that covers 0.27 s of history.
struct InputWindow {
  std::array<StateFrame, kWindowLen> frames;
  double anchor_time = 0.0;
};

// Incremental window builder for a live stream. Frames must arrive with
// strictly increasing timestamps; once 28 frames have been seen, every
// further push (and the 28th itself) yields one window anchored at the
// newest frame.
class WindowAssembler {
 public:
  // Throws std::invalid_argument when the frame fails validation or its
  // timestamp does not advance.
  std::optional<InputWindow> push(const StateFrame& frame);

  void reset();
  std::size_t frames_seen() const { return frames_seen_; }

 private:
  std::deque<StateFrame> buffer_;
  std::size_t frames_seen_ = 0;
  double last_t_ = 0.0;
};

// Batch form: all windows of a recorded sequence, anchors 27..size-1.
std::vector<InputWindow> window_stream(const std::vector<StateFrame>& frames);

}  // namespace liftrisk
