#pragma once

#include <cstdint>
#include <vector>

#include "freqwm/dataset.hpp"
#include "freqwm/keying.hpp"

namespace freqwm {

enum class Strategy { kOptimal, kGreedy, kRandom };

// How strategies rank a pair's expense: kComplement uses the true total
// frequency change min(remainder, s - remainder); kRaw uses the bare
// remainder, which overstates pairs whose difference is cheaper to grow
// than to shrink. Embedding always applies the nearest-multiple rule either
// way — the mode only affects ordering and matching weights.
enum class CostMode { kComplement, kRaw };

// A candidate pair, referenced by histogram rank. hi_rank is the
// higher-frequency member. Eligibility: all four boundaries of the two
// members are >= ceil(s/2) and s >= 2.
struct EligiblePair {
    std::int32_t hi_rank = 0;
    std::int32_t lo_rank = 0;
    std::int64_t modulus = 0;    // s derived for (hi, lo)
    std::int64_t remainder = 0;  // (f_hi - f_lo) mod s
    std::int64_t cost = 0;       // min(remainder, s - remainder)
};

struct SelectionPlan {
    std::vector<EligiblePair> chosen;  // vertex-disjoint
    Strategy strategy = Strategy::kOptimal;
    // Cosine similarity (percent) between the original histogram and the one
    // the plan's deltas would produce; >= 100 - budget by construction.
    double projected_similarity = 100.0;
};

// All pairs passing the eligibility predicate, in (hi_rank, lo_rank) order.
std::vector<EligiblePair> eligible_pairs(const Histogram& h, const WatermarkSecret& secret);

// Maximum-weight matching over the eligibility graph (weight T - cost), then
// a greedy equal-value knapsack by ascending cost under the similarity budget.
SelectionPlan select_optimal(const Histogram& h, const std::vector<EligiblePair>& eligible,
                             double budget_percent, CostMode cost_mode = CostMode::kComplement);

// Visits pairs by ascending cost, accepting disjoint ones within budget.
SelectionPlan select_greedy(const Histogram& h, const std::vector<EligiblePair>& eligible,
                            double budget_percent, CostMode cost_mode = CostMode::kComplement);

// Visits pairs in seeded-shuffle order, accepting disjoint ones within budget.
SelectionPlan select_random(const Histogram& h, const std::vector<EligiblePair>& eligible,
                            double budget_percent, std::uint64_t rng_seed,
                            CostMode cost_mode = CostMode::kComplement);

// Strategy dispatch; rng_seed is only consumed by kRandom.
SelectionPlan select_pairs(const Histogram& h, const std::vector<EligiblePair>& eligible,
                           double budget_percent, Strategy strategy, CostMode cost_mode,
                           std::uint64_t rng_seed);

}  // namespace freqwm
