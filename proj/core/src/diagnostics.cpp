#include "twinbeam/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace twinbeam {

namespace {

std::mutex& capture_mutex() {
  static std::mutex m;
  return m;
}

WarningCapture* active_capture = nullptr;

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(capture_mutex());
  if (active_capture != nullptr) {
    active_capture->messages_.emplace_back(message);
    return;
  }
  std::cerr << "warning: " << message << '\n';
}

WarningCapture::WarningCapture() {
  std::lock_guard lock(capture_mutex());
  previous_ = active_capture;
  active_capture = this;
}

WarningCapture::~WarningCapture() {
  std::lock_guard lock(capture_mutex());
  active_capture = previous_;
}

std::vector<std::string> WarningCapture::messages() const {
  std::lock_guard lock(capture_mutex());
  return messages_;
}

}  // namespace twinbeam
