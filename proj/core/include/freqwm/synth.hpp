#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freqwm/dataset.hpp"

namespace freqwm {

// Synthetic dataset recipe: n_samples independent draws over n_tokens tokens
// named "tk0".."tk<n-1>" with rank-power-law probabilities p_i ∝ (i+1)^(-alpha).
// alpha = 0 is uniform; alpha = 1 is heavy-tailed.
struct SynthSpec {
    std::int64_t n_tokens = 1000;
    std::int64_t n_samples = 1000000;
    double alpha = 0.5;
    std::uint64_t seed = 0;
};

TokenDataset synth_dataset(const SynthSpec& spec);

// Same sampling model over caller-supplied token names; the i-th name gets
// probability ∝ (i+1)^(-alpha). Used to build non-watermarked baseline data
// over an existing token space with a different skew.
TokenDataset synth_over_tokens(const std::vector<std::string>& tokens, std::int64_t n_samples,
                               double alpha, std::uint64_t seed);

}  // namespace freqwm
