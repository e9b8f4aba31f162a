#include "doctest.h"

#include <cstdint>
#include <random>
#include <vector>

#include "freqwm/error.hpp"
#include "freqwm/matching.hpp"

using freqwm::MatchEdge;
using freqwm::max_weight_matching;

namespace {

// Exhaustive maximum-weight matching for small graphs: each vertex either
// stays single or pairs with a neighbor; maximize the total weight.
std::int64_t brute_force_weight(int n, const std::vector<MatchEdge>& edges) {
    std::vector<std::vector<std::int64_t>> w(
        static_cast<std::size_t>(n),
        std::vector<std::int64_t>(static_cast<std::size_t>(n), INT64_MIN));
    for (const auto& e : edges) {
        w[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = e.weight;
        w[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = e.weight;
    }
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    struct Rec {
        int n;
        std::vector<char>& used;
        std::vector<std::vector<std::int64_t>>& w;
        std::int64_t operator()(int start) {
            int v = -1;
            for (int i = start; i < n; ++i) {
                if (!used[static_cast<std::size_t>(i)]) {
                    v = i;
                    break;
                }
            }
            if (v == -1) return 0;
            used[static_cast<std::size_t>(v)] = 1;
            std::int64_t best = (*this)(v + 1);
            for (int u = 0; u < n; ++u) {
                const auto wu = w[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
                if (!used[static_cast<std::size_t>(u)] && wu != INT64_MIN) {
                    used[static_cast<std::size_t>(u)] = 1;
                    best = std::max(best, wu + (*this)(v + 1));
                    used[static_cast<std::size_t>(u)] = 0;
                }
            }
            used[static_cast<std::size_t>(v)] = 0;
            return best;
        }
    } rec{n, used, w};
    return rec(0);
}

std::int64_t matched_weight(const std::vector<std::int32_t>& mate,
                            const std::vector<MatchEdge>& edges) {
    std::int64_t total = 0;
    for (const auto& e : edges) {
        if (mate[static_cast<std::size_t>(e.u)] == e.v) total += e.weight;
    }
    return total;
}

void check_valid(int n, const std::vector<MatchEdge>& edges,
                 const std::vector<std::int32_t>& mate) {
    REQUIRE(mate.size() == static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const auto m = mate[static_cast<std::size_t>(v)];
        if (m == -1) continue;
        REQUIRE(m >= 0);
        REQUIRE(m < n);
        CHECK(mate[static_cast<std::size_t>(m)] == v);  // symmetric
        bool is_edge = false;
        for (const auto& e : edges) {
            is_edge |= (e.u == v && e.v == m) || (e.u == m && e.v == v);
        }
        CHECK(is_edge);  // matches only along real edges
    }
}

}  // namespace

TEST_CASE("trivial graphs") {
    CHECK(max_weight_matching(0, {}).empty());
    CHECK(max_weight_matching(3, {}) == std::vector<std::int32_t>{-1, -1, -1});
    const std::vector<MatchEdge> one = {{0, 1, 5}};
    CHECK(max_weight_matching(2, one) == std::vector<std::int32_t>{1, 0});
}

TEST_CASE("negative edges are never matched") {
    const std::vector<MatchEdge> edges = {{0, 1, -3}, {1, 2, -1}};
    CHECK(max_weight_matching(3, edges) == std::vector<std::int32_t>{-1, -1, -1});
}

TEST_CASE("prefers one heavy edge over two light ones when it pays") {
    // Path 0-1-2-3: taking the middle edge (20) beats the two ends (6+6=12).
    const std::vector<MatchEdge> edges = {{0, 1, 6}, {1, 2, 20}, {2, 3, 6}};
    const auto mate = max_weight_matching(4, edges);
    CHECK(mate == std::vector<std::int32_t>{-1, 2, 1, -1});
    // But when the ends pay more, take both.
    const std::vector<MatchEdge> edges2 = {{0, 1, 6}, {1, 2, 10}, {2, 3, 6}};
    CHECK(max_weight_matching(4, edges2) == std::vector<std::int32_t>{1, 0, 3, 2});
}

TEST_CASE("triangle collapses into a blossom") {
    const std::vector<MatchEdge> edges = {{0, 1, 8}, {1, 2, 9}, {2, 0, 10}};
    const auto mate = max_weight_matching(3, edges);
    CHECK(matched_weight(mate, edges) == 10);
    check_valid(3, edges, mate);
}

TEST_CASE("blossom with augmenting path through it") {
    // Odd cycle 0-1-2 plus tails; the optimum must expand the blossom.
    const std::vector<MatchEdge> edges = {{0, 1, 9}, {0, 2, 8},  {1, 2, 10},
                                          {1, 3, 5}, {3, 4, 4},  {0, 5, 3}};
    const auto mate = max_weight_matching(6, edges);
    CHECK(matched_weight(mate, edges) == brute_force_weight(6, edges));
    check_valid(6, edges, mate);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(max_weight_matching(2, {{0, 0, 1}}), freqwm::Error);    // self-loop
    CHECK_THROWS_AS(max_weight_matching(2, {{0, 2, 1}}), freqwm::Error);    // out of range
    CHECK_THROWS_AS(max_weight_matching(2, {{-1, 1, 1}}), freqwm::Error);   // negative id
    CHECK_THROWS_AS(max_weight_matching(3, {{0, 1, 1}, {1, 0, 2}}), freqwm::Error);  // parallel
}

TEST_CASE("random graphs match the exhaustive oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 250; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);  // 2..8
        const double p = 0.2 + 0.7 * static_cast<double>(rng() % 1000) / 1000.0;
        const bool negatives = trial % 3 == 0;
        std::vector<MatchEdge> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (static_cast<double>(rng() % 1000) / 1000.0 < p) {
                    std::int64_t w = static_cast<std::int64_t>(rng() % 100) + 1;
                    if (negatives) w -= 40;
                    edges.push_back({i, j, w});
                }
            }
        }
        const auto mate = max_weight_matching(n, edges);
        check_valid(n, edges, mate);
        CHECK(matched_weight(mate, edges) == brute_force_weight(n, edges));
    }
}

TEST_CASE("tie-heavy complete graphs match the oracle") {
    std::mt19937_64 rng(5150);
    for (int n = 3; n <= 7; ++n) {
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<MatchEdge> edges;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    edges.push_back({i, j, static_cast<std::int64_t>(rng() % 6)});
                }
            }
            const auto mate = max_weight_matching(n, edges);
            check_valid(n, edges, mate);
            CHECK(matched_weight(mate, edges) == brute_force_weight(n, edges));
        }
    }
}

TEST_CASE("chained odd cycles match the oracle") {
    std::mt19937_64 rng(31337);
    for (int rep = 0; rep < 60; ++rep) {
        std::vector<MatchEdge> edges;
        int base = 0;
        std::vector<int> firsts;
        const int cycles = 2 + static_cast<int>(rng() % 2);
        for (int c = 0; c < cycles; ++c) {
            const int len = 3 + 2 * static_cast<int>(rng() % 2);  // 3 or 5
            firsts.push_back(base);
            for (int i = 0; i < len; ++i) {
                edges.push_back(
                    {base + i, base + (i + 1) % len, static_cast<std::int64_t>(rng() % 20) + 1});
            }
            base += len;
        }
        for (std::size_t c = 1; c < firsts.size(); ++c) {
            edges.push_back({firsts[c - 1], firsts[c], static_cast<std::int64_t>(rng() % 20) + 1});
        }
        const auto mate = max_weight_matching(base, edges);
        check_valid(base, edges, mate);
        CHECK(matched_weight(mate, edges) == brute_force_weight(base, edges));
    }
}
