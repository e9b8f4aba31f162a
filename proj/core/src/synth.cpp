#include "freqwm/synth.hpp"

#include <algorithm>
#include <cmath>

#include "freqwm/error.hpp"
#include "freqwm/rng.hpp"

namespace freqwm {
namespace {

TokenDataset sample(const std::vector<std::string>& names, std::int64_t n_samples, double alpha,
                    std::uint64_t seed) {
    if (names.empty()) throw Error("synth: need at least one token");
    if (n_samples < 1) throw Error("synth: need at least one sample");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("synth: alpha must be in [0, 1]");

    // Normalized cumulative distribution; cdf.back() is forced to 1 so the
    // inversion below can never fall off the end.
    std::vector<double> cdf(names.size());
    long double norm = 0.0L;
    for (std::size_t i = 0; i < names.size(); ++i) {
        norm += powl(static_cast<long double>(i) + 1.0L, -static_cast<long double>(alpha));
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < names.size(); ++i) {
        acc += powl(static_cast<long double>(i) + 1.0L, -static_cast<long double>(alpha)) / norm;
        cdf[i] = static_cast<double>(acc);
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    TokenDataset out;
    out.tokens.reserve(static_cast<std::size_t>(n_samples));
    for (std::int64_t s = 0; s < n_samples; ++s) {
        const double u = rng.unit();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = static_cast<std::size_t>(
            std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        out.tokens.push_back(names[idx]);
    }
    return out;
}

}  // namespace

TokenDataset synth_dataset(const SynthSpec& spec) {
    if (spec.n_tokens < 1) throw Error("synth: need at least one token");
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(spec.n_tokens));
    for (std::int64_t i = 0; i < spec.n_tokens; ++i) {
        names.push_back("tk" + std::to_string(i));
    }
    return sample(names, spec.n_samples, spec.alpha, spec.seed);
}

TokenDataset synth_over_tokens(const std::vector<std::string>& tokens, std::int64_t n_samples,
                               double alpha, std::uint64_t seed) {
    return sample(tokens, n_samples, alpha, seed);
}

}  // namespace freqwm
