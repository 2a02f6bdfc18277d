#pragma once

namespace eprsim {

inline constexpr const char *kArtifactVersion = "0.1.0";

} // namespace eprsim
