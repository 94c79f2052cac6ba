// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <spdlog/spdlog.h>

namespace selo {

// Reads SELO_LOG (trace|debug|info|warn|error|off); default is warn.
void init_logging();

}  // namespace selo
