#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace pnkit {

inline constexpr double pi = std::numbers::pi;

// Domain/contract violations thrown by the toolkit. Messages are one line,
// suitable for CLI diagnostics.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw error(msg);
}

}  // namespace pnkit
