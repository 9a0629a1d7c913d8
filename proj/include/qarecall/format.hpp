#pragma once

#include <cstdio>
#include <string>

namespace qarecall {

// Shortest round-trippable rendering of a double.
inline std::string fmt_double(double value) {
    char buf[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        double back = 0.0;
        if (std::sscanf(buf, "%lf", &back) == 1 && back == value)
            break;
    }
    return buf;
}

} // namespace qarecall
