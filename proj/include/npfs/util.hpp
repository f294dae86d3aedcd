#pragma once

#include <cstdio>
#include <string>

namespace npfs {

/// Shortest decimal form that round-trips a double exactly (%.17g), used for
/// config echoes and CSV output so reruns are byte-identical.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace npfs
