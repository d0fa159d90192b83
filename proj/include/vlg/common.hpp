#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vlg {

/// Error thrown on any contract violation (shape mismatch, bad input, IO failure).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
inline void format_into(std::ostringstream&) {}
template <class T, class... Rest>
void format_into(std::ostringstream& os, const T& v, const Rest&... rest) {
    os << v;
    format_into(os, rest...);
}
} // namespace detail

template <class... Args>
[[noreturn]] void fail(const Args&... args) {
    std::ostringstream os;
    detail::format_into(os, args...);
    throw Error(os.str());
}

} // namespace vlg

#define VLG_CHECK(cond, ...)            \
    do {                                \
        if (!(cond)) {                  \
            ::vlg::fail(__VA_ARGS__);   \
        }                               \
    } while (0)
