#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace freqwm {

using Digest = std::array<std::uint8_t, 32>;

// SHA-256 of the concatenation a || b. Either part may be empty.
Digest sha256(std::string_view a, std::string_view b = {});

// SHA-256 of bytes || b.
Digest sha256(const std::uint8_t* data, std::size_t len, std::string_view b);

} // namespace freqwm
