#include "uavmag/version.hpp"

namespace uavmag {

std::string tool_version() { return "0.1.0"; }

}  // namespace uavmag
