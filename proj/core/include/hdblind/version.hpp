#pragma once

#define HDBLIND_VERSION "1.0.0"

namespace hdblind {
inline constexpr const char* version_string = HDBLIND_VERSION;
}
