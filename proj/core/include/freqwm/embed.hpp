#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freqwm/dataset.hpp"
#include "freqwm/keying.hpp"
#include "freqwm/selection.hpp"

namespace freqwm {

struct FrequencyDelta {
    std::string token;
    std::int64_t delta = 0;
};

struct GenerateReport {
    std::int64_t pairs_embedded = 0;
    std::int64_t eligible_count = 0;
    double similarity = 100.0;  // cosine(original, watermarked), percent
    std::string warning;        // empty when none
};

struct WatermarkedAsset {
    TokenDataset data;
    WatermarkSecret secret;
    GenerateReport report;
};

// The modulation rule: deltas (for the higher / lower member) that move a
// non-negative difference to its nearest multiple of s, splitting the change
// across both members (ceiling half on the shrinking/growing hi side).
// Never removes more than floor(s/2) total.
std::pair<std::int64_t, std::int64_t> modulation_deltas(std::int64_t difference, std::int64_t s);

// Deltas for one pair against the histogram's (original) frequencies.
// Throws if the pair fails the eligibility invariants for h.
std::pair<FrequencyDelta, FrequencyDelta> compute_deltas(const Histogram& h,
                                                         const EligiblePair& pair);

// Rewrites the dataset so each listed token's count changes by its delta:
// removals pick occurrences uniformly without replacement; insertions land
// at uniformly-random positions of the final sequence. Deterministic per
// seed. Errors on unknown tokens, duplicate entries, or overdrawn removals.
TokenDataset apply_frequency_changes(const TokenDataset& data,
                                     const std::vector<FrequencyDelta>& deltas,
                                     std::uint64_t rng_seed);

// Applies a whole plan and re-verifies the result: every pair's difference
// is ≡ 0 (mod s), rank order over tokens with distinct original frequencies
// is unchanged, and the measured similarity matches the plan's projection.
// The returned asset carries `secret` with pairs filled from the plan.
WatermarkedAsset apply_plan(const TokenDataset& data, const Histogram& h,
                            const SelectionPlan& plan, const WatermarkSecret& secret,
                            std::uint64_t rng_seed);

struct GenerateOptions {
    double budget_percent = 2.0;
    std::int64_t z = 131;
    Strategy strategy = Strategy::kOptimal;
    CostMode cost_mode = CostMode::kComplement;
    // Drives the selection shuffle and placement streams.
    std::uint64_t run_seed = 0;
    // When set, the secret entropy R is derived from this seed instead of the
    // OS CSPRNG — reproducible but guessable; tests and attack sims only.
    std::optional<std::uint64_t> secret_seed;
};

// End-to-end generation: histogram → fresh secret → eligibility → selection
// → modulation → dataset rewrite. A dataset with no eligible pairs (or a
// budget excluding all of them) yields the input data unchanged, an empty
// pair list, and a warning in the report.
WatermarkedAsset wm_generate(const TokenDataset& data, const GenerateOptions& options);

}  // namespace freqwm
