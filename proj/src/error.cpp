#include "hcwave/error.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace hcwave {

namespace {
std::atomic<bool> warnings_enabled{true};
std::mutex warn_mutex;
}  // namespace

void warn(const std::string &message) {
  if (!warnings_enabled) return;
  std::lock_guard<std::mutex> lock(warn_mutex);
  std::cerr << "hcwave: warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { warnings_enabled = enabled; }

}  // namespace hcwave
