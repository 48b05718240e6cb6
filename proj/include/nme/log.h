#pragma once

#include <spdlog/spdlog.h>

namespace nme {

/// Logger writing to stderr. Level comes from NME_LOG (error|info|debug),
/// default "error".
spdlog::logger& Log();

}  // namespace nme
