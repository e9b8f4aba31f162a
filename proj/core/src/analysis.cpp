#include "freqwm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "freqwm/error.hpp"

namespace freqwm {

std::vector<double> pair_acceptance_probs(const std::vector<std::int64_t>& moduli,
                                          std::int64_t threshold) {
    if (threshold < 0) throw Error("analysis: threshold must be non-negative");
    std::vector<double> probs;
    probs.reserve(moduli.size());
    for (const std::int64_t s : moduli) {
        if (s < 2) throw Error("analysis: modulus must be >= 2");
        probs.push_back(static_cast<double>(std::min(threshold + 1, s)) / static_cast<double>(s));
    }
    return probs;
}

double markov_bound(const std::vector<double>& probs, std::int64_t k) {
    if (k < 0) throw Error("analysis: k must be non-negative");
    if (k == 0) return 1.0;
    double mean = 0.0;
    for (const double p : probs) {
        if (p < 0.0 || p > 1.0) throw Error("analysis: probability outside [0, 1]");
        mean += p;
    }
    return std::min(1.0, mean / static_cast<double>(k));
}

double poisson_binomial_survival(const std::vector<double>& probs, std::int64_t k) {
    const auto n = static_cast<std::int64_t>(probs.size());
    if (k < 0 || k > n) throw Error("analysis: k must be in [0, n]");
    for (const double p : probs) {
        if (p < 0.0 || p > 1.0) throw Error("analysis: probability outside [0, 1]");
    }
    // pmf(j) = (1/(n+1)) * sum_l w^{-lj} * prod_m (1 + (w^l - 1) p_m) with
    // w = exp(2 pi i / (n+1)). Long-double complex keeps the tail terms clean.
    using C = std::complex<long double>;
    const std::int64_t m = n + 1;
    const long double step = 2.0L * std::numbers::pi_v<long double> / static_cast<long double>(m);
    std::vector<C> phi(static_cast<std::size_t>(m));
    for (std::int64_t l = 0; l < m; ++l) {
        const C w = std::polar(1.0L, step * static_cast<long double>(l));
        C prod(1.0L, 0.0L);
        for (const double p : probs) {
            prod *= C(1.0L, 0.0L) + (w - C(1.0L, 0.0L)) * static_cast<long double>(p);
        }
        phi[static_cast<std::size_t>(l)] = prod;
    }
    long double survival = 0.0L;
    for (std::int64_t j = k; j <= n; ++j) {
        C acc(0.0L, 0.0L);
        for (std::int64_t l = 0; l < m; ++l) {
            const C w = std::polar(1.0L, -step * static_cast<long double>(l * j % m));
            acc += w * phi[static_cast<std::size_t>(l)];
        }
        acc /= static_cast<long double>(m);
        if (std::abs(acc.imag()) > 1e-9L) {
            throw Error("analysis: distribution inversion lost precision");
        }
        survival += std::max(0.0L, acc.real());
    }
    return static_cast<double>(std::min(1.0L, survival));
}

std::pair<std::int64_t, std::int64_t> z_range(const Histogram& h) {
    if (h.size() == 0) throw Error("analysis: empty histogram");
    const std::int64_t r_max = h.entries.front().freq - h.entries.back().freq;
    if (r_max < 2) {
        throw Error("analysis: frequency spread " + std::to_string(r_max) +
                    " admits no valid modulus bound; dataset cannot carry a watermark");
    }
    return {2, r_max};
}

std::int64_t max_threshold(std::int64_t z) {
    if (z < 2) throw Error("analysis: z must be >= 2");
    return z - 1;
}

std::int64_t effective_threshold(std::int64_t s, double pct) {
    if (s < 2) throw Error("analysis: modulus must be >= 2");
    if (pct < 0.0 || pct >= 1.0) {
        throw Error("analysis: percentage threshold must be in [0, 1)");
    }
    return static_cast<std::int64_t>(static_cast<double>(s) * pct);
}

}  // namespace freqwm
