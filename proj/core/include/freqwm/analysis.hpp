#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "freqwm/dataset.hpp"

namespace freqwm {

// Probability that a random pair with modulus s[i] lands within threshold t by
// chance: min(t + 1, s) / s.
std::vector<double> pair_acceptance_probs(const std::vector<std::int64_t>& moduli,
                                          std::int64_t threshold);

// Markov bound on P(X >= k) for X a sum of independent Bernoulli(p_i).
// k == 0 accepts vacuously, so the bound is 1.
double markov_bound(const std::vector<double>& probs, std::int64_t k);

// Exact P(X >= k) for the Poisson binomial X = sum of Bernoulli(p_i),
// evaluated through the characteristic function (DFT of the pmf).
double poisson_binomial_survival(const std::vector<double>& probs, std::int64_t k);

// Valid range [2, r_max] for the modulus bound z on this histogram, where
// r_max is the spread between the top and bottom frequencies. Throws when the
// spread leaves no valid z (the dataset cannot carry a watermark).
std::pair<std::int64_t, std::int64_t> z_range(const Histogram& h);

// Largest detection threshold that still rejects anything: z - 1.
std::int64_t max_threshold(std::int64_t z);

// Per-pair threshold for a percentage-of-modulus policy: floor(s * pct) with
// pct in [0, 1).
std::int64_t effective_threshold(std::int64_t s, double pct);

}  // namespace freqwm
