#pragma once

namespace mmwave {
inline constexpr const char* kVersion = "v0.1.0";
}
