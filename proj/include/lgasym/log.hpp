#pragma once

// Diagnostics on standard error, filtered by LG_LOG = error | info | debug.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

namespace lgasym::diag {

enum class Level { Error = 0, Info = 1, Debug = 2 };

inline Level parse_level(const char* text) {
  if (text == nullptr) return Level::Error;
  const std::string_view v(text);
  if (v == "debug") return Level::Debug;
  if (v == "info") return Level::Info;
  return Level::Error;
}

inline Level& threshold() {
  static Level level = parse_level(std::getenv("LG_LOG"));
  return level;
}

inline void set_level(Level level) { threshold() = level; }

inline bool enabled(Level level) { return static_cast<int>(level) <= static_cast<int>(threshold()); }

inline void write(Level level, const std::string& message) {
  if (!enabled(level)) return;
  static constexpr const char* names[] = {"error", "info", "debug"};
  std::fprintf(stderr, "[lgasym %s] %s\n", names[static_cast<int>(level)], message.c_str());
}

inline void error(const std::string& m) { write(Level::Error, m); }
inline void info(const std::string& m) { write(Level::Info, m); }
inline void debug(const std::string& m) { write(Level::Debug, m); }

}  // namespace lgasym::diag
