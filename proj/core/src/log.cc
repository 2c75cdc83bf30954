#include "netalign/log.h"

#include <atomic>
#include <iostream>
#include <mutex>

namespace netalign {
namespace {

std::atomic<LogLevel> g_level{LogLevel::kWarning};
std::mutex g_mutex;

void Emit(std::string_view tag, std::string_view message) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::clog << "[netalign " << tag << "] " << message << '\n';
}

}  // namespace

void SetLogLevel(LogLevel level) { g_level.store(level); }
LogLevel GetLogLevel() { return g_level.load(); }

void LogWarning(std::string_view message) {
  if (g_level.load() >= LogLevel::kWarning) Emit("warning", message);
}

void LogInfo(std::string_view message) {
  if (g_level.load() >= LogLevel::kInfo) Emit("info", message);
}

}  // namespace netalign
