#include "freqwm/embed.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "freqwm/analysis.hpp"
#include "freqwm/error.hpp"
#include "freqwm/rng.hpp"

namespace freqwm {

std::pair<std::int64_t, std::int64_t> modulation_deltas(std::int64_t difference, std::int64_t s) {
    if (s < 2) throw Error("embed: modulus must be >= 2");
    if (difference < 0) throw Error("embed: difference must be non-negative");
    const std::int64_t rm = difference % s;
    if (rm == 0) return {0, 0};
    if (rm <= s / 2) {
        // Shrink the difference down to the lower multiple.
        return {-((rm + 1) / 2), rm / 2};
    }
    // Cheaper to grow the difference up to the next multiple.
    const std::int64_t c = s - rm;
    return {(c + 1) / 2, -(c / 2)};
}

std::pair<FrequencyDelta, FrequencyDelta> compute_deltas(const Histogram& h,
                                                         const EligiblePair& pair) {
    const auto n = static_cast<std::int32_t>(h.size());
    if (pair.hi_rank < 0 || pair.lo_rank < 0 || pair.hi_rank >= n || pair.lo_rank >= n ||
        pair.hi_rank == pair.lo_rank) {
        throw Error("embed: pair ranks out of range");
    }
    const auto hi = static_cast<std::size_t>(pair.hi_rank);
    const auto lo = static_cast<std::size_t>(pair.lo_rank);
    const std::int64_t s = pair.modulus;
    const std::int64_t need = (s + 1) / 2;
    if (s < 2 || std::min(h.upper[hi], h.lower[hi]) < need ||
        std::min(h.upper[lo], h.lower[lo]) < need || h.entries[hi].freq < h.entries[lo].freq) {
        throw Error("embed: pair is not eligible for this histogram");
    }
    const auto [dhi, dlo] = modulation_deltas(h.entries[hi].freq - h.entries[lo].freq, s);
    return {FrequencyDelta{h.entries[hi].token, dhi}, FrequencyDelta{h.entries[lo].token, dlo}};
}

TokenDataset apply_frequency_changes(const TokenDataset& data,
                                     const std::vector<FrequencyDelta>& deltas,
                                     std::uint64_t rng_seed) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const std::string& t : data.tokens) ++counts[t];

    std::unordered_set<std::string> touched;
    for (const FrequencyDelta& d : deltas) {
        if (!counts.count(d.token)) throw Error("rewrite: token not in dataset: " + d.token);
        if (!touched.insert(d.token).second) {
            throw Error("rewrite: duplicate delta for token: " + d.token);
        }
        if (d.delta < 0 && counts[d.token] < -d.delta) {
            throw Error("rewrite: removing more occurrences than exist for: " + d.token);
        }
    }

    Rng rng(rng_seed);
    // Uniform k-subset of [0, n) (Floyd's method), returned sorted.
    const auto sample_k = [&rng](std::int64_t k, std::int64_t n) {
        std::unordered_set<std::int64_t> set;
        for (std::int64_t j = n - k; j < n; ++j) {
            const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
            set.insert(set.count(t) ? j : t);
        }
        std::vector<std::int64_t> out(set.begin(), set.end());
        std::sort(out.begin(), out.end());
        return out;
    };

    // Removals first: choose occurrence ordinals per token, then drop them in
    // one pass. Ordinal = how many occurrences of that token came before.
    std::unordered_map<std::string, std::unordered_set<std::int64_t>> drop;
    std::vector<std::string> insertions;
    for (const FrequencyDelta& d : deltas) {
        if (d.delta < 0) {
            const auto picks = sample_k(-d.delta, counts[d.token]);
            drop[d.token] = std::unordered_set<std::int64_t>(picks.begin(), picks.end());
        } else {
            for (std::int64_t c = 0; c < d.delta; ++c) insertions.push_back(d.token);
        }
    }

    std::vector<std::string> kept;
    kept.reserve(data.tokens.size());
    std::unordered_map<std::string, std::int64_t> seen;
    for (const std::string& t : data.tokens) {
        const auto it = drop.find(t);
        if (it != drop.end() && it->second.count(seen[t]++)) continue;
        kept.push_back(t);
    }

    TokenDataset out;
    out.original_total_count = data.original_total_count;
    const auto final_size = static_cast<std::int64_t>(kept.size() + insertions.size());
    if (insertions.empty()) {
        out.tokens = std::move(kept);
        return out;
    }
    // Inserted copies take a uniformly-random set of slots in the final
    // sequence; survivors fill the rest in their original order.
    const auto slots = sample_k(static_cast<std::int64_t>(insertions.size()), final_size);
    out.tokens.reserve(static_cast<std::size_t>(final_size));
    std::size_t next_slot = 0;
    std::size_t next_kept = 0;
    for (std::int64_t pos = 0; pos < final_size; ++pos) {
        if (next_slot < slots.size() && slots[next_slot] == pos) {
            out.tokens.push_back(std::move(insertions[next_slot]));
            ++next_slot;
        } else {
            out.tokens.push_back(std::move(kept[next_kept++]));
        }
    }
    return out;
}

WatermarkedAsset apply_plan(const TokenDataset& data, const Histogram& h,
                            const SelectionPlan& plan, const WatermarkSecret& secret,
                            std::uint64_t rng_seed) {
    std::vector<FrequencyDelta> deltas;
    WatermarkSecret full = secret;
    full.pairs.clear();
    for (const EligiblePair& p : plan.chosen) {
        const auto [dhi, dlo] = compute_deltas(h, p);
        full.pairs.push_back(TokenPair{dhi.token, dlo.token});
        if (dhi.delta != 0) deltas.push_back(dhi);
        if (dlo.delta != 0) deltas.push_back(dlo);
    }

    WatermarkedAsset asset;
    asset.data = apply_frequency_changes(data, deltas, rng_seed);
    asset.secret = std::move(full);
    asset.report.pairs_embedded = static_cast<std::int64_t>(plan.chosen.size());

    const Histogram after = build_histogram(asset.data);
    PairModulusCache cache(asset.secret);
    for (const TokenPair& pr : asset.secret.pairs) {
        const std::int32_t ri = after.rank_of(pr.hi);
        const std::int32_t rj = after.rank_of(pr.lo);
        if (ri < 0 || rj < 0) throw Error("embed: watermarked token vanished from the dataset");
        const std::int64_t s = cache.modulus(pr.hi, pr.lo);
        const std::int64_t diff = after.entries[static_cast<std::size_t>(ri)].freq -
                                  after.entries[static_cast<std::size_t>(rj)].freq;
        if (diff < 0 || diff % s != 0) {
            throw Error("embed: pair difference is not a multiple of its modulus");
        }
    }

    // Defense in depth: the rewrite may never reorder the histogram. Moves are
    // capped by the rank boundaries and ties are only allowed when the byte
    // tiebreak agrees with the original order, so the full token sequence must
    // come back unchanged.
    if (after.size() != h.size()) throw Error("embed: plan changed the token inventory");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (after.entries[i].token != h.entries[i].token) {
            throw Error("embed: plan would change the histogram rank order");
        }
    }

    asset.report.similarity = cosine_similarity(h, after);
    if (std::abs(asset.report.similarity - plan.projected_similarity) > 1e-6) {
        throw Error("embed: measured similarity diverged from the plan projection");
    }
    return asset;
}

WatermarkedAsset wm_generate(const TokenDataset& data, const GenerateOptions& options) {
    if (!(options.budget_percent > 0.0 && options.budget_percent < 100.0)) {
        throw Error("generate: budget must be in (0, 100)");
    }
    const Histogram h = build_histogram(data);
    const auto [zmin, zmax] = z_range(h);
    if (options.z < zmin || options.z > zmax) {
        throw Error("generate: z=" + std::to_string(options.z) + " outside the valid range [" +
                    std::to_string(zmin) + ", " + std::to_string(zmax) + "] for this dataset");
    }

    const WatermarkSecret secret =
        options.secret_seed ? make_secret_seeded(options.z, *options.secret_seed)
                            : make_secret(options.z);

    const auto eligible = eligible_pairs(h, secret);
    WatermarkedAsset asset;
    if (eligible.empty()) {
        asset.data = data;
        asset.secret = secret;
        asset.report.similarity = 100.0;
        asset.report.warning = "no eligible pairs; dataset left unmodified";
        return asset;
    }

    const SelectionPlan plan =
        select_pairs(h, eligible, options.budget_percent, options.strategy, options.cost_mode,
                     derive_stream_seed(options.run_seed, "selection"));
    asset = apply_plan(data, h, plan, secret, derive_stream_seed(options.run_seed, "placement"));
    asset.report.eligible_count = static_cast<std::int64_t>(eligible.size());
    if (plan.chosen.empty()) {
        asset.report.warning = "budget excluded every eligible pair; dataset left unmodified";
    }
    return asset;
}

}  // namespace freqwm
