#pragma once

#include <spdlog/spdlog.h>

namespace segrega {

/// Library logger; verbosity comes from SEGREGA_LOG (trace, debug, info,
/// warn, error, off). Defaults to warn.
spdlog::logger& logger();

}  // namespace segrega
