#pragma once

#include <charconv>
#include <string>

namespace fnt {

// Shortest decimal text that parses back to exactly the same double. Keeps
// generated CSV output byte-stable and lossless.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace fnt
