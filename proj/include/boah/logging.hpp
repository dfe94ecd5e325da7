#pragma once

#include <string_view>

namespace boah {

enum class LogLevel { error, info, debug };

/// Reads BOAH_LOG (error|info|debug); unset or unknown means error.
void configure_logging_from_env();
void set_log_level(LogLevel level);

void log_error(std::string_view message);
void log_info(std::string_view message);
void log_debug(std::string_view message);

}  // namespace boah
