#include "doctest.h"

#include <cmath>

#include "freqwm/dataset.hpp"
#include "freqwm/error.hpp"
#include "freqwm/synth.hpp"

using namespace freqwm;

TEST_CASE("synth is deterministic per seed") {
    SynthSpec spec;
    spec.n_tokens = 50;
    spec.n_samples = 2000;
    spec.alpha = 0.5;
    spec.seed = 77;
    const TokenDataset a = synth_dataset(spec);
    const TokenDataset b = synth_dataset(spec);
    CHECK(a.tokens == b.tokens);
    spec.seed = 78;
    CHECK(synth_dataset(spec).tokens != a.tokens);
    CHECK(a.tokens.size() == 2000);
}

TEST_CASE("token names are tk<i> and every draw is one of them") {
    SynthSpec spec;
    spec.n_tokens = 5;
    spec.n_samples = 500;
    spec.alpha = 0.3;
    spec.seed = 1;
    const TokenDataset d = synth_dataset(spec);
    const Histogram h = build_histogram(d);
    CHECK(h.total == 500);
    for (const auto& e : h.entries) {
        CHECK(e.token.substr(0, 2) == "tk");
        const int idx = std::stoi(e.token.substr(2));
        CHECK(idx >= 0);
        CHECK(idx < 5);
    }
}

TEST_CASE("frequencies follow the power law") {
    SynthSpec spec;
    spec.n_tokens = 100;
    spec.n_samples = 400000;
    spec.alpha = 0.7;
    spec.seed = 9;
    const Histogram h = build_histogram(synth_dataset(spec));
    // Expected frequency of token i is proportional to (i+1)^-alpha. Compare
    // the realized count of tk0 and tk99 against theory within 5 sigma.
    long double norm = 0;
    for (int i = 0; i < 100; ++i) norm += std::pow(static_cast<long double>(i + 1), -0.7L);
    const auto check_token = [&](const std::string& name, int idx) {
        const std::int32_t r = h.rank_of(name);
        REQUIRE(r >= 0);
        const long double p = std::pow(static_cast<long double>(idx + 1), -0.7L) / norm;
        const long double mean = 400000.0L * p;
        const long double sd = std::sqrt(400000.0L * p * (1 - p));
        CHECK(std::abs(h.entries[static_cast<std::size_t>(r)].freq - mean) < 5 * sd);
    };
    check_token("tk0", 0);
    check_token("tk10", 10);
    check_token("tk99", 99);
    // alpha > 0 puts tk0 firmly above tk99.
    CHECK(h.entries[static_cast<std::size_t>(h.rank_of("tk0"))].freq >
          h.entries[static_cast<std::size_t>(h.rank_of("tk99"))].freq);
}

TEST_CASE("alpha zero is uniform in expectation") {
    SynthSpec spec;
    spec.n_tokens = 20;
    spec.n_samples = 200000;
    spec.alpha = 0.0;
    spec.seed = 4;
    const Histogram h = build_histogram(synth_dataset(spec));
    for (const auto& e : h.entries) {
        CHECK(std::abs(e.freq - 10000) < 500);  // 5 sigma ~ 487
    }
}

TEST_CASE("synth_over_tokens reuses the caller's vocabulary in rank order") {
    const std::vector<std::string> vocab = {"most", "mid", "least"};
    const TokenDataset d = synth_over_tokens(vocab, 30000, 0.9, 3);
    const Histogram h = build_histogram(d);
    CHECK(h.total == 30000);
    CHECK(h.entries[static_cast<std::size_t>(h.rank_of("most"))].freq >
          h.entries[static_cast<std::size_t>(h.rank_of("least"))].freq);
}

TEST_CASE("synth validation") {
    SynthSpec spec;
    spec.n_tokens = 0;
    CHECK_THROWS_AS(synth_dataset(spec), Error);
    spec.n_tokens = 5;
    spec.n_samples = 0;
    CHECK_THROWS_AS(synth_dataset(spec), Error);
    spec.n_samples = 10;
    spec.alpha = 1.5;
    CHECK_THROWS_AS(synth_dataset(spec), Error);
    spec.alpha = -0.1;
    CHECK_THROWS_AS(synth_dataset(spec), Error);
    CHECK_THROWS_AS(synth_over_tokens({}, 10, 0.5, 1), Error);
}
