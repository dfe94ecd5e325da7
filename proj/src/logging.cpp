#include "boah/logging.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string>

namespace boah {

namespace {

spdlog::logger& logger() {
  static auto instance = [] {
    auto l = spdlog::stderr_logger_mt("boah");
    l->set_pattern("[boah %l] %v");
    l->set_level(spdlog::level::err);
    return l;
  }();
  return *instance;
}

}  // namespace

void set_log_level(LogLevel level) {
  switch (level) {
    case LogLevel::error: logger().set_level(spdlog::level::err); break;
    case LogLevel::info: logger().set_level(spdlog::level::info); break;
    case LogLevel::debug: logger().set_level(spdlog::level::debug); break;
  }
}

void configure_logging_from_env() {
  const char* v = std::getenv("BOAH_LOG");
  const std::string s = v ? v : "";
  if (s == "debug") set_log_level(LogLevel::debug);
  else if (s == "info") set_log_level(LogLevel::info);
  else set_log_level(LogLevel::error);
}

void log_error(std::string_view message) { logger().error("{}", message); }
void log_info(std::string_view message) { logger().info("{}", message); }
void log_debug(std::string_view message) { logger().debug("{}", message); }

}  // namespace boah
