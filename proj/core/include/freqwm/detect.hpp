#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "freqwm/dataset.hpp"
#include "freqwm/keying.hpp"

namespace freqwm {

// How a pair's frequency difference is compared against the threshold.
// kRemainder checks the remainder in the stored (hi, lo) orientation;
// kSymmetric also accepts a difference sitting just above a multiple.
enum class ComparisonMode { kRemainder, kSymmetric };

struct DetectionParams {
    // Absolute threshold t; a pair is accepted when its distance from the
    // nearest multiple (per `mode`) is at most t. Mutually exclusive with
    // threshold_pct. When neither is set, t = 0 (exact multiples only).
    std::optional<std::int64_t> threshold;
    // Per-pair threshold floor(s * pct) with pct in [0, 1).
    std::optional<double> threshold_pct;
    // Minimum number of accepted pairs for an overall accept verdict.
    std::int64_t min_pairs = 1;
    ComparisonMode mode = ComparisonMode::kRemainder;
    // Rescale observed frequencies to this total before checking, for
    // detection on a sampled subset. When unset, a dataset that carries an
    // original_total_count is rescaled to that value automatically.
    std::optional<std::int64_t> scale_to;
};

struct PairResult {
    TokenPair pair;
    bool found = false;          // both tokens present in the histogram
    std::int64_t modulus = 0;    // s for this pair
    std::int64_t remainder = -1; // difference mod s in stored orientation; -1 if absent
    std::int64_t threshold = 0;  // effective threshold applied to this pair
    bool accepted = false;
};

struct DetectionReport {
    std::vector<PairResult> per_pair;
    std::int64_t accepted_count = 0;
    std::int64_t required_count = 1;
    bool accept = false;
};

// Round each frequency to its expected value in a dataset of
// `original_total` tokens (half away from zero, exact integer arithmetic).
Histogram scale_histogram(const Histogram& h, std::int64_t original_total);

DetectionReport wm_detect(const Histogram& h, const WatermarkSecret& secret,
                          const DetectionParams& params = {});
DetectionReport wm_detect(const TokenDataset& data, const WatermarkSecret& secret,
                          const DetectionParams& params = {});

enum class JudgeVerdict { kOwnerA, kOwnerB, kInconclusive };

struct JudgeParams {
    std::optional<std::int64_t> threshold;
    std::optional<double> threshold_pct;
    ComparisonMode mode = ComparisonMode::kRemainder;
    // Each claimant must recover this fraction of their own pairs (rounded
    // up, floor of one) from BOTH datasets to establish ownership.
    double k_fraction = 0.4;
    // Absolute override for the per-claimant pair requirement.
    std::optional<std::int64_t> min_pairs;
};

struct JudgeReport {
    DetectionReport a_on_a, a_on_b, b_on_a, b_on_b;
    JudgeVerdict verdict = JudgeVerdict::kInconclusive;
};

// Ownership arbitration between two claimants, each presenting a dataset and
// a secret. The owner is the claimant whose secret verifies on both datasets;
// if both or neither do, the dispute is inconclusive.
JudgeReport judge(const TokenDataset& data_a, const WatermarkSecret& secret_a,
                  const TokenDataset& data_b, const WatermarkSecret& secret_b,
                  const JudgeParams& params = {});

}  // namespace freqwm
