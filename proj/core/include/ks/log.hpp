#pragma once

#include <sstream>
#include <string>

namespace ks {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// global threshold, initialised once from the KS_LOG environment variable
// (error|warn|info|debug, default warn)
LogLevel log_level();
void set_log_level(LogLevel lvl);

void log_message(LogLevel lvl, const std::string& msg);

namespace detail {
template <typename... Args>
void log_fmt(LogLevel lvl, const Args&... args) {
    if (lvl > log_level()) return;
    std::ostringstream os;
    (os << ... << args);
    log_message(lvl, os.str());
}
} // namespace detail

template <typename... Args> void log_error(const Args&... args) { detail::log_fmt(LogLevel::Error, args...); }
template <typename... Args> void log_warn(const Args&... args) { detail::log_fmt(LogLevel::Warn, args...); }
template <typename... Args> void log_info(const Args&... args) { detail::log_fmt(LogLevel::Info, args...); }
template <typename... Args> void log_debug(const Args&... args) { detail::log_fmt(LogLevel::Debug, args...); }

} // namespace ks
