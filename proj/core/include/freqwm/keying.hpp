#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace freqwm {

// A watermarked pair in stored orientation: `hi` is the member that had the
// higher frequency when the watermark was generated.
struct TokenPair {
    std::string hi;
    std::string lo;
    bool operator==(const TokenPair&) const = default;
};

// The detection secret: 32 bytes of entropy, the modulus bound z, and the
// list of watermarked pairs. Pairs are vertex-disjoint.
struct WatermarkSecret {
    std::array<std::uint8_t, 32> entropy{};
    std::int64_t z = 0;
    std::vector<TokenPair> pairs;
    bool operator==(const WatermarkSecret&) const = default;
};

// Pair modulus s = big_endian(SHA256(hi || SHA256(entropy || lo))) mod z.
// Deliberately order-sensitive: callers pass tokens in stored orientation.
std::int64_t derive_pair_modulus(const WatermarkSecret& secret, std::string_view hi,
                                 std::string_view lo);

// Batch derivation helper: caches the inner digest per `lo` token so scoring
// all candidate pairs of a histogram needs one inner hash per token.
class PairModulusCache {
public:
    explicit PairModulusCache(const WatermarkSecret& secret) : secret_(secret) {}
    std::int64_t modulus(std::string_view hi, const std::string& lo);

private:
    const WatermarkSecret& secret_;
    std::unordered_map<std::string, std::array<std::uint8_t, 32>> inner_;
};

// Entropy from the OS CSPRNG. For reproducible tests only, a seeded variant;
// a seeded secret is guessable and must never protect a real asset.
WatermarkSecret make_secret(std::int64_t z);
WatermarkSecret make_secret_seeded(std::int64_t z, std::uint64_t seed);

// Versioned JSON secret file: {"version":1,"z":...,"r_hex":...,"pairs":[...]}.
// Save emits canonical field order; load validates version, shape, z >= 2 and
// pair disjointness.
void save_secret(const WatermarkSecret& secret, const std::filesystem::path& file);
WatermarkSecret load_secret(const std::filesystem::path& file);

std::string secret_to_json(const WatermarkSecret& secret);
WatermarkSecret secret_from_json(const std::string& text);

} // namespace freqwm
