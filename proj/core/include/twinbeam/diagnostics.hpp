#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace twinbeam {

using WarningHandler = std::function<void(std::string_view)>;

// Reports a non-fatal condition (degraded accuracy, boundary leakage).
// Goes to stderr unless a WarningCapture is active.
void warn(std::string_view message);

// Collects warnings for its lifetime instead of printing them. Nests; the
// innermost capture receives messages.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  std::vector<std::string> messages() const;

 private:
  friend void warn(std::string_view message);

  std::vector<std::string> messages_;
  WarningCapture* previous_;
};

}  // namespace twinbeam
