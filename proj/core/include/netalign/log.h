#ifndef NETALIGN_LOG_H_
#define NETALIGN_LOG_H_

#include <string_view>

namespace netalign {

enum class LogLevel { kQuiet = 0, kWarning = 1, kInfo = 2 };

void SetLogLevel(LogLevel level);
LogLevel GetLogLevel();

// Both write a single line to std::clog when the level permits.
void LogWarning(std::string_view message);
void LogInfo(std::string_view message);

}  // namespace netalign

#endif  // NETALIGN_LOG_H_
