#pragma once

// Locale-independent shortest round-trip formatting for doubles; keeps CSV and
// JSON output byte-stable across runs.

#include <charconv>
#include <string>

namespace ring_ladder {

inline std::string fmt_g(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace ring_ladder
