#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace freqwm {

// Derives the seed of a named sub-stream from a master seed so that every
// source of randomness in one command is reproducible from a single value.
std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view stream);

// Deterministic RNG with portable integer/double sampling. mt19937_64 output
// is fully specified by the standard; the bounded samplers below avoid
// std::uniform_*_distribution, whose mapping is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling over the largest multiple of n
        const std::uint64_t limit = (0 - n) % n; // 2^64 mod n
        for (;;) {
            std::uint64_t x = gen_();
            if (x >= limit) return x % n;
        }
    }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(span == 0 ? gen_() : below(span));
    }

    // Uniform in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace freqwm
