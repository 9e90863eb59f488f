#include "tracerl/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace tracerl {

namespace {
std::atomic<bool> g_quiet{false};
std::mutex g_mutex;
}  // namespace

void set_quiet(bool quiet) { g_quiet = quiet; }
bool quiet() { return g_quiet; }

void log_info(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "[tracerl] " << message << '\n';
}

void log_warning(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "[tracerl] warning: " << message << '\n';
}

}  // namespace tracerl
