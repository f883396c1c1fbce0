#pragma once

#include <cstdio>
#include <string>

namespace modechoice {

/// Shortest round-trip-ish representation; fixed formatting keeps every
/// emitted file byte-stable across reruns.
inline std::string fmt_g(double v, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

inline std::string fmt_f(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string fmt_exact(double v) { return fmt_g(v, 17); }

} // namespace modechoice
