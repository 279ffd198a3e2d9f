#pragma once

#include <cstdio>
#include <string>

namespace clpwan {

// Shortest-ish round-trippable decimal form, stable across runs.
inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Full-precision form for values that are compared after re-parsing.
inline std::string fmt_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace clpwan
