#pragma once

#include <string>

#include <spdlog/spdlog.h>

namespace cavkin {

// Line-oriented records: "<time> level=<lvl> event=<name> key=value ...".
void init_logging(const std::string& level);

}  // namespace cavkin
