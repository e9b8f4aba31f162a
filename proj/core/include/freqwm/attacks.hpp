#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freqwm/dataset.hpp"
#include "freqwm/detect.hpp"
#include "freqwm/embed.hpp"

namespace freqwm {

// Keep a uniformly-random pct% subsample of the tokens, preserving order.
// The result records the pre-sampling total so detection can rescale.
TokenDataset attack_sampling(const TokenDataset& data, double pct, std::uint64_t seed);

// Perturb every token's frequency by a uniform amount within its rank
// boundaries, walking the histogram top-down so the rank order survives.
TokenDataset attack_destroy_bounded(const TokenDataset& data, std::uint64_t seed);

// Same walk with the boundaries shrunk to pct% of their size first.
TokenDataset attack_destroy_percent(const TokenDataset& data, double pct, std::uint64_t seed);

// Rescale each token's frequency by a random factor in [0, 2] with
// probability pct/100, ignoring rank boundaries entirely.
TokenDataset attack_destroy_reorder(const TokenDataset& data, double pct, std::uint64_t seed);

// Embed a second watermark on top of an already-watermarked dataset. The
// attacker's secret and run randomness are derived from `seed`.
WatermarkedAsset attack_rewatermark(const TokenDataset& data, const GenerateOptions& options,
                                    std::uint64_t seed);

struct GuessCost {
    double bits = 0.0;  // log2 of the brute-force search space
    std::string warning;
};

// Work factor for forging a secret without the key: recover the 256-bit
// entropy or enumerate k-subsets of the C(n, 2) candidate pairs.
GuessCost guess_attack_cost(std::int64_t n_tokens, std::int64_t k);

struct SweepRow {
    std::string attack;
    double intensity = 0.0;  // attack parameter; 0 when it takes none
    std::int64_t threshold = 0;
    ComparisonMode mode = ComparisonMode::kRemainder;
    double rate = 0.0;  // mean fraction of pairs still detected
    int reps = 0;
};

struct SweepConfig {
    std::vector<std::int64_t> thresholds = {0, 1, 2, 4, 10};
    std::vector<double> sampling_pcts = {10, 20, 50};
    std::vector<double> percent_pcts = {10, 50, 100};
    std::vector<double> reorder_pcts = {10, 30, 50, 70, 90};
    bool include_bounded = true;
    // Unrelated data over the same vocabulary, as a false-positive floor.
    bool include_baseline = true;
    ComparisonMode mode = ComparisonMode::kRemainder;
    int reps = 20;
    std::uint64_t seed = 0;
};

// Run every configured attack at every intensity `reps` times and measure the
// surviving pair fraction at each threshold.
std::vector<SweepRow> run_robustness_sweep(const WatermarkedAsset& asset,
                                           const SweepConfig& config);

}  // namespace freqwm
