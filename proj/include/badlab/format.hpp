#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace badlab {

// Shortest text that parses back to exactly `v`.
inline std::string fmt_exact(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// Half-away-from-zero rounding to `decimals` places, printed with exactly that
// many decimals. Negative zero prints as "0".
inline std::string fmt_fixed(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    double r = std::round(v * scale) / scale;
    if (r == 0.0) r = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
    return buf;
}

inline std::string fmt_sig(double v, int digits = 6) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

} // namespace badlab
