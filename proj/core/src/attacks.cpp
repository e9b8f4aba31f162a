#include "freqwm/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "freqwm/error.hpp"
#include "freqwm/rng.hpp"
#include "freqwm/synth.hpp"

namespace freqwm {

TokenDataset attack_sampling(const TokenDataset& data, double pct, std::uint64_t seed) {
    if (!(pct > 0.0 && pct <= 100.0)) throw Error("sampling: pct must be in (0, 100]");
    const auto total = static_cast<std::int64_t>(data.tokens.size());
    const auto want = static_cast<std::int64_t>(static_cast<double>(total) * pct / 100.0);
    if (want < 1) throw Error("sampling: pct keeps no tokens at all");

    // Sequential sampling: keep each token with probability (still needed) /
    // (still available), which yields a uniform size-`want` subset in order.
    Rng rng(seed);
    TokenDataset out;
    out.tokens.reserve(static_cast<std::size_t>(want));
    std::int64_t kept = 0;
    for (std::int64_t i = 0; i < total && kept < want; ++i) {
        const auto need = static_cast<double>(want - kept);
        const auto left = static_cast<double>(total - i);
        if (rng.unit() * left < need) {
            out.tokens.push_back(data.tokens[static_cast<std::size_t>(i)]);
            ++kept;
        }
    }
    out.original_total_count = data.original_total_count.value_or(total);
    return out;
}

namespace {

// Shared top-down boundary walk for the destroy attacks. pct scales the
// boundaries; 100 uses them whole.
TokenDataset destroy_walk(const TokenDataset& data, double pct, std::uint64_t seed) {
    if (!(pct > 0.0 && pct <= 100.0)) throw Error("destroy: pct must be in (0, 100]");
    const Histogram h = build_histogram(data);
    Rng rng(derive_stream_seed(seed, "deltas"));

    std::vector<FrequencyDelta> deltas;
    std::int64_t prev_new_freq = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const std::int64_t freq = h.entries[i].freq;
        // The up-room above the top rank is unbounded; cap it to the
        // down-room so the draw stays finite and roughly symmetric.
        std::int64_t up = i == 0 ? h.lower[0] : prev_new_freq - freq;
        std::int64_t down = h.lower[i];
        if (pct < 100.0) {
            up = static_cast<std::int64_t>(static_cast<double>(up) * pct / 100.0);
            down = static_cast<std::int64_t>(static_cast<double>(down) * pct / 100.0);
        }
        const std::int64_t r = rng.range(-down, up);
        prev_new_freq = freq + r;
        if (r != 0) deltas.push_back(FrequencyDelta{h.entries[i].token, r});
    }
    return apply_frequency_changes(data, deltas, derive_stream_seed(seed, "placement"));
}

}  // namespace

TokenDataset attack_destroy_bounded(const TokenDataset& data, std::uint64_t seed) {
    return destroy_walk(data, 100.0, seed);
}

TokenDataset attack_destroy_percent(const TokenDataset& data, double pct, std::uint64_t seed) {
    return destroy_walk(data, pct, seed);
}

TokenDataset attack_destroy_reorder(const TokenDataset& data, double pct, std::uint64_t seed) {
    if (!(pct > 0.0 && pct <= 100.0)) throw Error("destroy: pct must be in (0, 100]");
    const Histogram h = build_histogram(data);
    Rng rng(derive_stream_seed(seed, "deltas"));

    std::vector<FrequencyDelta> deltas;
    for (const auto& e : h.entries) {
        if (rng.unit() * 100.0 >= pct) continue;
        const double factor = 2.0 * rng.unit();  // uniform in [0, 2)
        const auto target = static_cast<std::int64_t>(
            std::llround(static_cast<double>(e.freq) * factor));
        if (target != e.freq) deltas.push_back(FrequencyDelta{e.token, target - e.freq});
    }
    return apply_frequency_changes(data, deltas, derive_stream_seed(seed, "placement"));
}

WatermarkedAsset attack_rewatermark(const TokenDataset& data, const GenerateOptions& options,
                                    std::uint64_t seed) {
    GenerateOptions opts = options;
    opts.secret_seed = derive_stream_seed(seed, "secret");
    opts.run_seed = seed;
    return wm_generate(data, opts);
}

GuessCost guess_attack_cost(std::int64_t n_tokens, std::int64_t k) {
    if (n_tokens < 2) throw Error("guess: need at least two tokens");
    if (k < 0) throw Error("guess: k must be non-negative");
    GuessCost cost;
    cost.bits = 256.0;  // recovering the secret entropy outright
    if (k == 0) {
        cost.warning = "k=0 accepts every dataset; the watermark proves nothing";
        return cost;
    }
    // log2 C(C(n,2), k) without overflow: sum of log2 of the factors.
    const double n_pairs = static_cast<double>(n_tokens) * static_cast<double>(n_tokens - 1) / 2.0;
    if (static_cast<double>(k) > n_pairs) throw Error("guess: k exceeds the candidate pair count");
    double log2_choose = 0.0;
    for (std::int64_t i = 0; i < k; ++i) {
        log2_choose += std::log2(n_pairs - static_cast<double>(i)) -
                       std::log2(static_cast<double>(i + 1));
    }
    cost.bits += log2_choose;
    return cost;
}

std::vector<SweepRow> run_robustness_sweep(const WatermarkedAsset& asset,
                                           const SweepConfig& config) {
    if (asset.secret.pairs.empty()) throw Error("sweep: asset carries no embedded pairs");
    if (config.reps < 1) throw Error("sweep: reps must be >= 1");
    const auto n_pairs = static_cast<double>(asset.secret.pairs.size());
    const Histogram base = build_histogram(asset.data);

    std::vector<SweepRow> rows;
    const auto measure = [&](const std::string& name, double intensity,
                             const std::vector<Histogram>& attacked,
                             const std::vector<std::optional<std::int64_t>>& scale_to) {
        for (const std::int64_t t : config.thresholds) {
            SweepRow row;
            row.attack = name;
            row.intensity = intensity;
            row.threshold = t;
            row.mode = config.mode;
            row.reps = config.reps;
            double sum = 0.0;
            for (std::size_t r = 0; r < attacked.size(); ++r) {
                DetectionParams dp;
                dp.threshold = t;
                dp.mode = config.mode;
                dp.scale_to = scale_to[r];
                const DetectionReport rep = wm_detect(attacked[r], asset.secret, dp);
                sum += static_cast<double>(rep.accepted_count) / n_pairs;
            }
            row.rate = sum / static_cast<double>(attacked.size());
            rows.push_back(std::move(row));
        }
    };

    const auto rep_seed = [&](const std::string& name, double intensity, int rep) {
        char stream[96];
        std::snprintf(stream, sizeof stream, "attack/%s/%g/%d", name.c_str(), intensity, rep);
        return derive_stream_seed(config.seed, stream);
    };
    const auto run = [&](const std::string& name, double intensity, const auto& attack) {
        std::vector<Histogram> attacked;
        std::vector<std::optional<std::int64_t>> scale_to;
        for (int r = 0; r < config.reps; ++r) {
            const TokenDataset d = attack(rep_seed(name, intensity, r));
            attacked.push_back(build_histogram(d));
            scale_to.push_back(d.original_total_count
                                   ? std::optional<std::int64_t>(
                                         static_cast<std::int64_t>(*d.original_total_count))
                                   : std::nullopt);
        }
        measure(name, intensity, attacked, scale_to);
    };

    for (const double pct : config.sampling_pcts) {
        run("sampling", pct,
            [&](std::uint64_t s) { return attack_sampling(asset.data, pct, s); });
    }
    if (config.include_bounded) {
        run("destroy_bounded", 0.0,
            [&](std::uint64_t s) { return attack_destroy_bounded(asset.data, s); });
    }
    for (const double pct : config.percent_pcts) {
        run("destroy_percent", pct,
            [&](std::uint64_t s) { return attack_destroy_percent(asset.data, pct, s); });
    }
    for (const double pct : config.reorder_pcts) {
        run("destroy_reorder", pct,
            [&](std::uint64_t s) { return attack_destroy_reorder(asset.data, pct, s); });
    }
    if (config.include_baseline) {
        std::vector<std::string> vocab;
        vocab.reserve(base.size());
        for (const auto& e : base.entries) vocab.push_back(e.token);
        run("baseline", 0.0, [&](std::uint64_t s) {
            return synth_over_tokens(vocab, static_cast<std::int64_t>(asset.data.tokens.size()),
                                     0.7, s);
        });
    }
    return rows;
}

}  // namespace freqwm
