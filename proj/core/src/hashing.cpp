#include "triggerkit/hashing.hpp"

#include <array>
#include <cstdio>

namespace triggerkit {

std::string to_hex(std::uint64_t value) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf.data(), 16);
}

fingerprint_builder& fingerprint_builder::add(double v) {
    // Hash the shortest round-trippable decimal form so that textual configs
    // and in-memory configs fingerprint identically.
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return add(std::string_view(buf.data()));
}

}  // namespace triggerkit
