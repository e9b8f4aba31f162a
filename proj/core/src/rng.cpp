#include "freqwm/rng.hpp"

#include "freqwm/sha256.hpp"

namespace freqwm {

std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view stream) {
    std::uint8_t le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(master >> (8 * i));
    Digest d = sha256(le, sizeof le, stream);
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= static_cast<std::uint64_t>(d[i]) << (8 * i);
    return out;
}

} // namespace freqwm
