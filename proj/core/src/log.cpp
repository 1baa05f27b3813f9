#include "ks/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace ks {

namespace {

LogLevel parse_env_level() {
    const char* v = std::getenv("KS_LOG");
    if (!v) return LogLevel::Warn;
    std::string s(v);
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "error") return LogLevel::Error;
    if (s == "warn" || s == "warning") return LogLevel::Warn;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

LogLevel g_level = parse_env_level();
std::mutex g_mutex;

const char* level_name(LogLevel lvl) {
    switch (lvl) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "?";
}

} // namespace

LogLevel log_level() { return g_level; }

void set_log_level(LogLevel lvl) { g_level = lvl; }

void log_message(LogLevel lvl, const std::string& msg) {
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << "[" << level_name(lvl) << "] " << msg << "\n";
}

} // namespace ks
