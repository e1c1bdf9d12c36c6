#include "core/window.hpp"

#include <stdexcept>

namespace liftrisk {

namespace {

InputWindow make_window(const std::deque<StateFrame>& buffer) {
  // buffer holds the last 28 frames; pick offsets 0, 3, ..., 27.
  InputWindow win;
  for (int i = 0; i < kWindowLen; ++i) {
    win.frames[i] = buffer[static_cast<std::size_t>(i * kFrameSpacing)];
  }
  win.anchor_time = win.frames[kWindowLen - 1].t;
  return win;
}

}  // namespace

std::optional<InputWindow> WindowAssembler::push(const StateFrame& frame) {
  const FrameValidity validity = validate_frame(frame);
  if (!validity.ok) {
    throw std::invalid_argument("invalid frame: " + validity.reason);
  }
  if (frames_seen_ > 0 && frame.t <= last_t_) {
    throw std::invalid_argument("non-monotone timestamp");
  }
  last_t_ = frame.t;
  ++frames_seen_;

  buffer_.push_back(frame);
  if (buffer_.size() > static_cast<std::size_t>(kWindowSpan + 1)) {
    buffer_.pop_front();
  }
  if (buffer_.size() < static_cast<std::size_t>(kWindowSpan + 1)) {
    return std::nullopt;
  }
  return make_window(buffer_);
}

void WindowAssembler::reset() {
  buffer_.clear();
  frames_seen_ = 0;
  last_t_ = 0.0;
}

std::vector<InputWindow> window_stream(const std::vector<StateFrame>& frames) {
  std::vector<InputWindow> windows;
  if (frames.size() <= static_cast<std::size_t>(kWindowSpan)) return windows;
  windows.reserve(frames.size() - kWindowSpan);
  WindowAssembler assembler;
  for (const StateFrame& frame : frames) {
    if (auto win = assembler.push(frame)) {
      windows.push_back(std::move(*win));
    }
  }
  return windows;
}

}  // namespace liftrisk
