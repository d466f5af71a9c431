#include "cavkin/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include "cavkin/errors.hpp"

namespace cavkin {

void init_logging(const std::string& level) {
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && level != "off") throw ConfigError("unknown log level '" + level + "'");
  auto logger = spdlog::stderr_logger_mt("cavkin");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e level=%l %v");
  spdlog::set_level(lvl);
}

}  // namespace cavkin
