#include "nme/log.h"

#include <cstdlib>
#include <memory>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace nme {

namespace {

spdlog::level::level_enum LevelFromEnv() {
  const char* env = std::getenv("NME_LOG");
  if (env == nullptr) return spdlog::level::err;
  const std::string value(env);
  if (value == "debug") return spdlog::level::debug;
  if (value == "info") return spdlog::level::info;
  return spdlog::level::err;
}

}  // namespace

spdlog::logger& Log() {
  static const std::shared_ptr<spdlog::logger> logger = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto l = std::make_shared<spdlog::logger>("nme", sink);
    l->set_level(LevelFromEnv());
    l->set_pattern("[%l] %v");
    return l;
  }();
  return *logger;
}

}  // namespace nme
