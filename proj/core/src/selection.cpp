#include "freqwm/selection.hpp"

#include <algorithm>
#include <unordered_map>

#include "freqwm/embed.hpp"
#include "freqwm/error.hpp"
#include "freqwm/matching.hpp"
#include "freqwm/rng.hpp"

namespace freqwm {
namespace {

std::int64_t selection_cost(const EligiblePair& p, CostMode mode) {
    return mode == CostMode::kRaw ? p.remainder : p.cost;
}

// Orders candidates the way the knapsack stage consumes them: cheapest first,
// rank pair as a deterministic tie-break.
struct CostOrder {
    CostMode mode;
    bool operator()(const EligiblePair& a, const EligiblePair& b) const {
        const std::int64_t ca = selection_cost(a, mode);
        const std::int64_t cb = selection_cost(b, mode);
        if (ca != cb) return ca < cb;
        if (a.hi_rank != b.hi_rank) return a.hi_rank < b.hi_rank;
        return a.lo_rank < b.lo_rank;
    }
};

// Incrementally maintains the plan state: projected frequencies, the exact
// integer dot/norm accumulators behind the cosine projection, vertex usage,
// and a frequency → ranks index used to reject pairs that would create a
// rank-order-breaking tie.
class PlanBuilder {
  public:
    PlanBuilder(const Histogram& h, double budget_percent) : h_(h) {
        if (!(budget_percent > 0.0 && budget_percent < 100.0)) {
            throw Error("selection: budget must be in (0, 100)");
        }
        min_cos_ = (100.0L - static_cast<long double>(budget_percent)) / 100.0L;
        const auto n = h.size();
        planned_.resize(n);
        used_.assign(n, 0);
        norm_o_ = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t f = h.entries[i].freq;
            planned_[i] = f;
            norm_o_ += static_cast<unsigned __int128>(f) * static_cast<unsigned __int128>(f);
            at_freq_[f].push_back(static_cast<std::int32_t>(i));
        }
        norm_p_ = norm_o_;
        dot_ = norm_o_;
    }

    bool vertex_free(const EligiblePair& p) const {
        return !used_[static_cast<std::size_t>(p.hi_rank)] &&
               !used_[static_cast<std::size_t>(p.lo_rank)];
    }

    // Accepts the pair if its members are unused, the projected similarity
    // stays within budget, neither member's count would drop to zero, and no
    // unsafe frequency tie appears. Returns whether it was added.
    bool try_add(const EligiblePair& p) {
        if (!vertex_free(p)) return false;
        const std::size_t hi = static_cast<std::size_t>(p.hi_rank);
        const std::size_t lo = static_cast<std::size_t>(p.lo_rank);
        const std::int64_t fhi = h_.entries[hi].freq;
        const std::int64_t flo = h_.entries[lo].freq;
        const auto [dhi, dlo] = modulation_deltas(fhi - flo, p.modulus);
        if (dhi == 0 && dlo == 0) {
            used_[hi] = used_[lo] = 1;
            return true;
        }
        const std::int64_t nhi = fhi + dhi;
        const std::int64_t nlo = flo + dlo;
        if (nhi < 1 || nlo < 1) return false;
        if (!tie_safe(p.hi_rank, nhi, p.lo_rank) || !tie_safe(p.lo_rank, nlo, p.hi_rank)) {
            return false;
        }
        if (nhi == nlo && !(h_.entries[hi].token < h_.entries[lo].token)) return false;

        // Projected similarity with both deltas applied.
        unsigned __int128 dot = dot_;
        unsigned __int128 np = norm_p_;
        apply_to(dot, np, hi, nhi);
        apply_to(dot, np, lo, nlo);
        const long double cos =
            static_cast<long double>(dot) /
            sqrtl(static_cast<long double>(norm_o_) * static_cast<long double>(np));
        if (cos < min_cos_) return false;

        dot_ = dot;
        norm_p_ = np;
        move_rank(p.hi_rank, nhi);
        move_rank(p.lo_rank, nlo);
        used_[hi] = used_[lo] = 1;
        return true;
    }

    double similarity_percent() const {
        const long double cos =
            static_cast<long double>(dot_) /
            sqrtl(static_cast<long double>(norm_o_) * static_cast<long double>(norm_p_));
        const long double pct = 100.0L * cos;
        return static_cast<double>(pct > 100.0L ? 100.0L : (pct < 0.0L ? 0.0L : pct));
    }

  private:
    void apply_to(unsigned __int128& dot, unsigned __int128& np, std::size_t rank,
                  std::int64_t nf) const {
        const auto o = static_cast<unsigned __int128>(h_.entries[rank].freq);
        const auto p_old = static_cast<unsigned __int128>(planned_[rank]);
        const auto p_new = static_cast<unsigned __int128>(nf);
        dot += o * p_new - o * p_old;
        np += p_new * p_new - p_old * p_old;
    }

    // A tie with another token is only allowed when byte order agrees with
    // the original frequency order; otherwise rebuilding the histogram would
    // permute ranks. `partner` is exempt (checked separately).
    bool tie_safe(std::int32_t rank, std::int64_t nf, std::int32_t partner) const {
        const auto it = at_freq_.find(nf);
        if (it == at_freq_.end()) return true;
        const std::string& tok = h_.entries[static_cast<std::size_t>(rank)].token;
        for (const std::int32_t other : it->second) {
            if (other == rank || other == partner) continue;
            const std::string& otok = h_.entries[static_cast<std::size_t>(other)].token;
            const bool was_higher = rank < other;  // strict: distinct original freqs
            if (was_higher != (tok < otok)) return false;
        }
        return true;
    }

    void move_rank(std::int32_t rank, std::int64_t nf) {
        auto& from = at_freq_[planned_[static_cast<std::size_t>(rank)]];
        from.erase(std::find(from.begin(), from.end(), rank));
        planned_[static_cast<std::size_t>(rank)] = nf;
        at_freq_[nf].push_back(rank);
    }

    const Histogram& h_;
    long double min_cos_ = 0.0L;
    std::vector<std::int64_t> planned_;
    std::vector<char> used_;
    unsigned __int128 norm_o_ = 0;
    unsigned __int128 norm_p_ = 0;
    unsigned __int128 dot_ = 0;
    std::unordered_map<std::int64_t, std::vector<std::int32_t>> at_freq_;
};

SelectionPlan accept_in_order(const Histogram& h, std::vector<EligiblePair> order,
                              double budget_percent, Strategy strategy) {
    PlanBuilder builder(h, budget_percent);
    SelectionPlan plan;
    plan.strategy = strategy;
    for (const EligiblePair& p : order) {
        if (builder.try_add(p)) plan.chosen.push_back(p);
    }
    plan.projected_similarity = builder.similarity_percent();
    return plan;
}

}  // namespace

std::vector<EligiblePair> eligible_pairs(const Histogram& h, const WatermarkSecret& secret) {
    if (h.size() == 0) throw Error("selection: empty histogram");
    // Tokens with a zero boundary can never absorb ceil(s/2) >= 1, so the
    // quadratic pair scan only runs over the survivors.
    std::vector<std::int32_t> cand;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h.upper[i] >= 1 && h.lower[i] >= 1) cand.push_back(static_cast<std::int32_t>(i));
    }
    PairModulusCache cache(secret);
    std::vector<EligiblePair> out;
    for (std::size_t a = 0; a < cand.size(); ++a) {
        const std::size_t i = static_cast<std::size_t>(cand[a]);
        const std::int64_t bi = std::min(h.upper[i], h.lower[i]);
        for (std::size_t b = a + 1; b < cand.size(); ++b) {
            const std::size_t j = static_cast<std::size_t>(cand[b]);
            const std::int64_t minb = std::min(bi, std::min(h.upper[j], h.lower[j]));
            const std::int64_t s = cache.modulus(h.entries[i].token, h.entries[j].token);
            if (s < 2 || (s + 1) / 2 > minb) continue;
            const std::int64_t diff = h.entries[i].freq - h.entries[j].freq;
            const std::int64_t rm = diff % s;
            out.push_back(EligiblePair{static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                                       s, rm, std::min(rm, s - rm)});
        }
    }
    return out;
}

SelectionPlan select_optimal(const Histogram& h, const std::vector<EligiblePair>& eligible,
                             double budget_percent, CostMode cost_mode) {
    if (eligible.empty()) {
        PlanBuilder check(h, budget_percent);  // side effect: validates budget
        return SelectionPlan{{}, Strategy::kOptimal, check.similarity_percent()};
    }
    // Compact vertex ids for ranks that appear in at least one pair.
    std::unordered_map<std::int32_t, std::int32_t> vid;
    auto id_of = [&vid](std::int32_t rank) {
        const auto [it, fresh] = vid.try_emplace(rank, static_cast<std::int32_t>(vid.size()));
        (void)fresh;
        return it->second;
    };
    std::int64_t max_gain = 0;
    for (const EligiblePair& p : eligible) {
        const std::int64_t diff = h.entries[static_cast<std::size_t>(p.hi_rank)].freq -
                                  h.entries[static_cast<std::size_t>(p.lo_rank)].freq;
        max_gain = std::max({max_gain, diff, selection_cost(p, cost_mode)});
    }
    // T exceeds every cost, so weights stay positive and the matching
    // maximizes cardinality first, then minimizes total cost.
    const std::int64_t T = max_gain + 1;
    std::vector<MatchEdge> edges;
    edges.reserve(eligible.size());
    for (const EligiblePair& p : eligible) {
        edges.push_back(MatchEdge{id_of(p.hi_rank), id_of(p.lo_rank),
                                  T - selection_cost(p, cost_mode)});
    }
    const auto mate = max_weight_matching(static_cast<std::int32_t>(vid.size()), edges);
    std::vector<EligiblePair> matched;
    for (const EligiblePair& p : eligible) {
        if (mate[static_cast<std::size_t>(vid.at(p.hi_rank))] == vid.at(p.lo_rank)) {
            matched.push_back(p);
        }
    }
    std::sort(matched.begin(), matched.end(), CostOrder{cost_mode});
    return accept_in_order(h, std::move(matched), budget_percent, Strategy::kOptimal);
}

SelectionPlan select_greedy(const Histogram& h, const std::vector<EligiblePair>& eligible,
                            double budget_percent, CostMode cost_mode) {
    std::vector<EligiblePair> order = eligible;
    std::sort(order.begin(), order.end(), CostOrder{cost_mode});
    return accept_in_order(h, std::move(order), budget_percent, Strategy::kGreedy);
}

SelectionPlan select_random(const Histogram& h, const std::vector<EligiblePair>& eligible,
                            double budget_percent, std::uint64_t rng_seed, CostMode cost_mode) {
    (void)cost_mode;  // visitation is random; the cost ordering plays no role
    std::vector<EligiblePair> order = eligible;
    Rng rng(rng_seed);
    rng.shuffle(order);
    return accept_in_order(h, std::move(order), budget_percent, Strategy::kRandom);
}

SelectionPlan select_pairs(const Histogram& h, const std::vector<EligiblePair>& eligible,
                           double budget_percent, Strategy strategy, CostMode cost_mode,
                           std::uint64_t rng_seed) {
    switch (strategy) {
        case Strategy::kOptimal:
            return select_optimal(h, eligible, budget_percent, cost_mode);
        case Strategy::kGreedy:
            return select_greedy(h, eligible, budget_percent, cost_mode);
        case Strategy::kRandom:
            return select_random(h, eligible, budget_percent, rng_seed, cost_mode);
    }
    throw Error("selection: unknown strategy");
}

}  // namespace freqwm
