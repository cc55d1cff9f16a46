#pragma once

#define UOAN_SIM_VERSION "0.1.0"

namespace uoan {
inline constexpr const char* kToolVersion = "uoan-sim " UOAN_SIM_VERSION;
}
