#pragma once

#include <string>

namespace uavmag {

std::string tool_version();

}  // namespace uavmag
