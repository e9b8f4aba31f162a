#include "freqwm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "freqwm/analysis.hpp"
#include "freqwm/error.hpp"

namespace freqwm {

Histogram scale_histogram(const Histogram& h, std::int64_t original_total) {
    if (original_total < 1) throw Error("detect: scale target must be positive");
    if (h.total < 1) throw Error("detect: cannot scale an empty histogram");
    std::vector<HistogramEntry> counts;
    counts.reserve(h.size());
    for (const auto& e : h.entries) {
        const auto num = static_cast<__int128>(2) * e.freq * original_total + h.total;
        counts.push_back(HistogramEntry{
            e.token, static_cast<std::int64_t>(num / (2 * static_cast<__int128>(h.total)))});
    }
    return histogram_from_counts(std::move(counts));
}

namespace {

DetectionReport detect_on(const Histogram& h, const WatermarkSecret& secret,
                          const DetectionParams& params) {
    if (params.threshold && params.threshold_pct) {
        throw Error("detect: threshold and threshold_pct are mutually exclusive");
    }
    if (params.min_pairs < 1) throw Error("detect: min_pairs must be >= 1");
    if (params.threshold) {
        if (*params.threshold < 0) throw Error("detect: threshold must be non-negative");
        if (*params.threshold > max_threshold(secret.z)) {
            throw Error("detect: threshold " + std::to_string(*params.threshold) +
                        " exceeds the maximum " + std::to_string(max_threshold(secret.z)) +
                        " for z=" + std::to_string(secret.z));
        }
    }
    if (params.threshold_pct && (*params.threshold_pct < 0.0 || *params.threshold_pct >= 1.0)) {
        throw Error("detect: threshold_pct must be in [0, 1)");
    }

    DetectionReport report;
    report.required_count = params.min_pairs;
    report.per_pair.reserve(secret.pairs.size());
    PairModulusCache cache(secret);
    for (const TokenPair& pr : secret.pairs) {
        PairResult r;
        r.pair = pr;
        r.modulus = cache.modulus(pr.hi, pr.lo);
        r.threshold = params.threshold_pct ? effective_threshold(r.modulus, *params.threshold_pct)
                                           : params.threshold.value_or(0);
        const std::int32_t ri = h.rank_of(pr.hi);
        const std::int32_t rj = h.rank_of(pr.lo);
        if (ri >= 0 && rj >= 0) {
            r.found = true;
            const std::int64_t diff = h.entries[static_cast<std::size_t>(ri)].freq -
                                      h.entries[static_cast<std::size_t>(rj)].freq;
            r.remainder = ((diff % r.modulus) + r.modulus) % r.modulus;
            const std::int64_t distance = params.mode == ComparisonMode::kSymmetric
                                              ? std::min(r.remainder, r.modulus - r.remainder)
                                              : r.remainder;
            r.accepted = distance <= r.threshold;
        }
        if (r.accepted) ++report.accepted_count;
        report.per_pair.push_back(std::move(r));
    }
    report.accept = report.accepted_count >= report.required_count;
    return report;
}

}  // namespace

DetectionReport wm_detect(const Histogram& h, const WatermarkSecret& secret,
                          const DetectionParams& params) {
    if (params.scale_to) return detect_on(scale_histogram(h, *params.scale_to), secret, params);
    return detect_on(h, secret, params);
}

DetectionReport wm_detect(const TokenDataset& data, const WatermarkSecret& secret,
                          const DetectionParams& params) {
    const Histogram h = build_histogram(data);
    std::optional<std::int64_t> target = params.scale_to;
    if (!target && data.original_total_count) {
        target = static_cast<std::int64_t>(*data.original_total_count);
    }
    if (target) return detect_on(scale_histogram(h, *target), secret, params);
    return detect_on(h, secret, params);
}

JudgeReport judge(const TokenDataset& data_a, const WatermarkSecret& secret_a,
                  const TokenDataset& data_b, const WatermarkSecret& secret_b,
                  const JudgeParams& params) {
    if (!(params.k_fraction > 0.0 && params.k_fraction <= 1.0)) {
        throw Error("judge: k_fraction must be in (0, 1]");
    }
    const auto required = [&](const WatermarkSecret& s) {
        if (params.min_pairs) return *params.min_pairs;
        const auto n = static_cast<double>(s.pairs.size());
        return std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::ceil(params.k_fraction * n)));
    };
    const auto detect_with = [&](const TokenDataset& d, const WatermarkSecret& s) {
        DetectionParams dp;
        dp.threshold = params.threshold;
        dp.threshold_pct = params.threshold_pct;
        dp.mode = params.mode;
        dp.min_pairs = required(s);
        return wm_detect(d, s, dp);
    };

    JudgeReport report;
    report.a_on_a = detect_with(data_a, secret_a);
    report.a_on_b = detect_with(data_b, secret_a);
    report.b_on_a = detect_with(data_a, secret_b);
    report.b_on_b = detect_with(data_b, secret_b);
    const bool a_owns = report.a_on_a.accept && report.a_on_b.accept;
    const bool b_owns = report.b_on_a.accept && report.b_on_b.accept;
    if (a_owns && !b_owns) {
        report.verdict = JudgeVerdict::kOwnerA;
    } else if (b_owns && !a_owns) {
        report.verdict = JudgeVerdict::kOwnerB;
    }
    return report;
}

}  // namespace freqwm
