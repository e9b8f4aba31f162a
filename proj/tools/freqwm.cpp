// freqwm: frequency-watermarking toolkit for token datasets.
//
// Subcommands cover the full workflow: synthesize corpora, embed and detect
// watermarks, simulate attacks, sweep robustness, bound false positives, and
// arbitrate ownership disputes. Detection-style commands exit 0 on accept,
// 1 on reject, 2 on error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "freqwm/analysis.hpp"
#include "freqwm/attacks.hpp"
#include "freqwm/dataset.hpp"
#include "freqwm/detect.hpp"
#include "freqwm/embed.hpp"
#include "freqwm/error.hpp"
#include "freqwm/keying.hpp"
#include "freqwm/rng.hpp"
#include "freqwm/selection.hpp"
#include "freqwm/synth.hpp"

namespace {

using nlohmann::json;

struct SeedChoice {
    std::uint64_t value = 0;
    bool explicit_seed = false;  // given on the command line or via FREQWM_SEED
};

SeedChoice resolve_seed(const CLI::Option* opt, std::uint64_t cli_value) {
    if (opt != nullptr && opt->count() > 0) return {cli_value, true};
    if (const char* env = std::getenv("FREQWM_SEED")) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (errno != 0 || end == env || *end != '\0') {
            throw freqwm::Error("FREQWM_SEED is not a valid unsigned integer: " +
                                std::string(env));
        }
        return {static_cast<std::uint64_t>(v), true};
    }
    std::random_device rd;
    const std::uint64_t hi = rd();
    const std::uint64_t lo = rd();
    return {(hi << 32) ^ lo, false};
}

// Shared --in flags: dataset path plus optional CSV column selection.
struct InputFlags {
    std::string path;
    std::vector<std::string> columns;
    std::vector<std::size_t> indices;
    bool skip_header = false;

    void add_to(CLI::App* cmd, const std::string& flag = "--in", const std::string& suffix = "") {
        cmd->add_option(flag, path, "input dataset (.csv or newline-delimited tokens)")
            ->required();
        cmd->add_option("--columns" + suffix, columns,
                        "CSV columns to join into tokens, by header name")
            ->delimiter(',');
        cmd->add_option("--col-indices" + suffix, indices, "CSV columns to join, by 0-based index")
            ->delimiter(',');
        cmd->add_flag("--skip-header" + suffix, skip_header,
                      "index mode: discard the first CSV row");
    }

    freqwm::TokenDataset load() const {
        if (columns.empty() && indices.empty() && !skip_header) return freqwm::ingest(path);
        freqwm::ColumnSelector sel;
        sel.names = columns;
        sel.indices = indices;
        sel.skip_header = skip_header;
        return freqwm::ingest(path, sel);
    }
};

void write_report(const std::string& path, const json& report) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw freqwm::Error("cannot write report file: " + path);
    out << report.dump(2) << '\n';
}

json detection_json(const freqwm::DetectionReport& r) {
    json pairs = json::array();
    for (const auto& p : r.per_pair) {
        pairs.push_back({{"hi", p.pair.hi},
                         {"lo", p.pair.lo},
                         {"found", p.found},
                         {"modulus", p.modulus},
                         {"remainder", p.remainder},
                         {"threshold", p.threshold},
                         {"accepted", p.accepted}});
    }
    return {{"accepted_count", r.accepted_count},
            {"required_count", r.required_count},
            {"accept", r.accept},
            {"pairs", pairs}};
}

const std::map<std::string, freqwm::Strategy> kStrategies = {
    {"optimal", freqwm::Strategy::kOptimal},
    {"greedy", freqwm::Strategy::kGreedy},
    {"random", freqwm::Strategy::kRandom}};
const std::map<std::string, freqwm::CostMode> kCostModes = {
    {"complement", freqwm::CostMode::kComplement}, {"raw", freqwm::CostMode::kRaw}};
const std::map<std::string, freqwm::ComparisonMode> kModes = {
    {"remainder", freqwm::ComparisonMode::kRemainder},
    {"symmetric", freqwm::ComparisonMode::kSymmetric}};

std::string strategy_name(freqwm::Strategy s) {
    for (const auto& [k, v] : kStrategies)
        if (v == s) return k;
    return "?";
}
std::string mode_name(freqwm::ComparisonMode m) {
    return m == freqwm::ComparisonMode::kSymmetric ? "symmetric" : "remainder";
}

// ---- generate ----

struct GenerateArgs {
    InputFlags in;
    std::string out, secret_path, report_path;
    double budget = 2.0;
    std::int64_t z = 131;
    freqwm::Strategy strategy = freqwm::Strategy::kOptimal;
    freqwm::CostMode cost_mode = freqwm::CostMode::kComplement;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

int run_generate(const GenerateArgs& a) {
    const SeedChoice seed = resolve_seed(a.seed_opt, a.seed);
    freqwm::GenerateOptions opts;
    opts.budget_percent = a.budget;
    opts.z = a.z;
    opts.strategy = a.strategy;
    opts.cost_mode = a.cost_mode;
    opts.run_seed = seed.value;
    if (seed.explicit_seed) {
        opts.secret_seed = freqwm::derive_stream_seed(seed.value, "secret");
        std::cerr << "warning: secret derived from the run seed is reproducible and "
                     "guessable; do not use seeded runs to protect real assets\n";
    }

    const freqwm::TokenDataset data = a.in.load();
    const freqwm::WatermarkedAsset asset = freqwm::wm_generate(data, opts);
    freqwm::write_dataset(asset.data, a.out);
    freqwm::save_secret(asset.secret, a.secret_path);

    json report = {{"command", "generate"},
                   {"config",
                    {{"in", a.in.path},
                     {"out", a.out},
                     {"secret", a.secret_path},
                     {"budget", a.budget},
                     {"z", a.z},
                     {"strategy", strategy_name(a.strategy)},
                     {"cost_mode", a.cost_mode == freqwm::CostMode::kRaw ? "raw" : "complement"},
                     {"seed", seed.value},
                     {"seed_explicit", seed.explicit_seed}}},
                   {"result",
                    {{"pairs_embedded", asset.report.pairs_embedded},
                     {"eligible_count", asset.report.eligible_count},
                     {"similarity", asset.report.similarity}}}};
    if (!asset.report.warning.empty()) report["result"]["warning"] = asset.report.warning;
    write_report(a.report_path, report);

    std::cout << "embedded " << asset.report.pairs_embedded << " pairs ("
              << asset.report.eligible_count << " eligible), similarity "
              << asset.report.similarity << "%\n";
    if (!asset.report.warning.empty()) std::cout << "warning: " << asset.report.warning << '\n';
    return 0;
}

// ---- detect ----

struct DetectArgs {
    InputFlags in;
    std::string secret_path, report_path;
    std::optional<std::int64_t> t;
    std::optional<double> t_pct;
    std::int64_t k = 1;
    freqwm::ComparisonMode mode = freqwm::ComparisonMode::kRemainder;
    std::optional<std::int64_t> scale_to;
};

int run_detect(const DetectArgs& a) {
    const freqwm::WatermarkSecret secret = freqwm::load_secret(a.secret_path);
    freqwm::DetectionParams params;
    params.threshold = a.t;
    params.threshold_pct = a.t_pct;
    params.min_pairs = a.k;
    params.mode = a.mode;
    params.scale_to = a.scale_to;
    const freqwm::DetectionReport r = freqwm::wm_detect(a.in.load(), secret, params);

    json report = {{"command", "detect"},
                   {"config",
                    {{"in", a.in.path},
                     {"secret", a.secret_path},
                     {"t", a.t ? json(*a.t) : json()},
                     {"t_pct", a.t_pct ? json(*a.t_pct) : json()},
                     {"k", a.k},
                     {"mode", mode_name(a.mode)},
                     {"scale_to", a.scale_to ? json(*a.scale_to) : json()}}},
                   {"result", detection_json(r)}};
    write_report(a.report_path, report);

    std::cout << (r.accept ? "accept" : "reject") << ": " << r.accepted_count << "/"
              << r.per_pair.size() << " pairs within threshold (need " << r.required_count
              << ")\n";
    return r.accept ? 0 : 1;
}

// ---- synth ----

struct SynthArgs {
    std::string out;
    std::int64_t tokens = 1000;
    std::int64_t samples = 1000000;
    double alpha = 0.5;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

int run_synth(const SynthArgs& a) {
    const SeedChoice seed = resolve_seed(a.seed_opt, a.seed);
    freqwm::SynthSpec spec;
    spec.n_tokens = a.tokens;
    spec.n_samples = a.samples;
    spec.alpha = a.alpha;
    spec.seed = seed.value;
    freqwm::write_dataset(freqwm::synth_dataset(spec), a.out);
    std::cout << "wrote " << a.samples << " samples over " << a.tokens << " tokens (alpha "
              << a.alpha << ", seed " << seed.value << ") to " << a.out << '\n';
    return 0;
}

// ---- attack ----

struct AttackArgs {
    InputFlags in;
    std::string kind, out, out_secret, report_path;
    double pct = 50.0;
    double budget = 2.0;
    std::int64_t z = 131;
    freqwm::Strategy strategy = freqwm::Strategy::kOptimal;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

int run_attack(const AttackArgs& a) {
    const SeedChoice seed = resolve_seed(a.seed_opt, a.seed);
    const freqwm::TokenDataset data = a.in.load();
    json extra;
    freqwm::TokenDataset out;
    if (a.kind == "sampling") {
        out = freqwm::attack_sampling(data, a.pct, seed.value);
    } else if (a.kind == "bounded") {
        out = freqwm::attack_destroy_bounded(data, seed.value);
    } else if (a.kind == "percent") {
        out = freqwm::attack_destroy_percent(data, a.pct, seed.value);
    } else if (a.kind == "reorder") {
        out = freqwm::attack_destroy_reorder(data, a.pct, seed.value);
    } else if (a.kind == "rewatermark") {
        freqwm::GenerateOptions opts;
        opts.budget_percent = a.budget;
        opts.z = a.z;
        opts.strategy = a.strategy;
        const freqwm::WatermarkedAsset asset = freqwm::attack_rewatermark(data, opts, seed.value);
        out = asset.data;
        if (!a.out_secret.empty()) freqwm::save_secret(asset.secret, a.out_secret);
        extra = {{"pairs_embedded", asset.report.pairs_embedded},
                 {"similarity", asset.report.similarity}};
    } else {
        throw freqwm::Error("unknown attack kind: " + a.kind);
    }
    freqwm::write_dataset(out, a.out);

    json report = {{"command", "attack"},
                   {"config",
                    {{"kind", a.kind},
                     {"in", a.in.path},
                     {"out", a.out},
                     {"pct", a.pct},
                     {"seed", seed.value},
                     {"seed_explicit", seed.explicit_seed}}},
                   {"result", {{"tokens_out", out.tokens.size()}}}};
    if (!extra.is_null()) report["result"]["rewatermark"] = extra;
    write_report(a.report_path, report);

    std::cout << a.kind << " attack wrote " << out.tokens.size() << " tokens to " << a.out
              << '\n';
    return 0;
}

// ---- sweep ----

struct SweepArgs {
    InputFlags in;
    std::string secret_path, out;
    freqwm::SweepConfig config;
    freqwm::ComparisonMode mode = freqwm::ComparisonMode::kRemainder;
    bool no_bounded = false, no_baseline = false;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

int run_sweep(const SweepArgs& a) {
    const SeedChoice seed = resolve_seed(a.seed_opt, a.seed);
    freqwm::WatermarkedAsset asset;
    asset.data = a.in.load();
    asset.secret = freqwm::load_secret(a.secret_path);

    freqwm::SweepConfig config = a.config;
    config.mode = a.mode;
    config.include_bounded = !a.no_bounded;
    config.include_baseline = !a.no_baseline;
    config.seed = seed.value;
    const std::vector<freqwm::SweepRow> rows = freqwm::run_robustness_sweep(asset, config);

    std::ofstream csv(a.out);
    if (!csv) throw freqwm::Error("cannot write sweep output: " + a.out);
    csv << "attack,intensity,threshold,mode,rate,reps\n";
    for (const auto& r : rows) {
        csv << r.attack << ',' << r.intensity << ',' << r.threshold << ',' << mode_name(r.mode)
            << ',' << r.rate << ',' << r.reps << '\n';
    }
    std::cout << "wrote " << rows.size() << " sweep rows to " << a.out << " (seed " << seed.value
              << ")\n";
    return 0;
}

// ---- analyze ----

struct AnalyzeFpArgs {
    std::string secret_path, out;
    std::int64_t n = 0;
    std::int64_t z = 0;
    std::int64_t t = 0;
    std::int64_t k = 1;
    bool k_sweep = false;
};

int run_analyze_fp(const AnalyzeFpArgs& a) {
    std::vector<std::int64_t> moduli;
    if (!a.secret_path.empty()) {
        const freqwm::WatermarkSecret secret = freqwm::load_secret(a.secret_path);
        if (a.t > freqwm::max_threshold(secret.z)) {
            throw freqwm::Error("threshold exceeds z-1");
        }
        freqwm::PairModulusCache cache(secret);
        for (const auto& p : secret.pairs) moduli.push_back(cache.modulus(p.hi, p.lo));
    } else {
        if (a.n < 1 || a.z < 2) {
            throw freqwm::Error("analyze fp needs --secret, or --n and --z for a hypothetical");
        }
        // Hypothetical: n pairs, every modulus at the bound z.
        moduli.assign(static_cast<std::size_t>(a.n), a.z);
    }
    const std::vector<double> probs = freqwm::pair_acceptance_probs(moduli, a.t);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw freqwm::Error("cannot write output: " + a.out);
        os = &file;
    }
    if (a.k_sweep) {
        *os << "k,markov,exact\n";
        for (std::int64_t k = 0; k <= static_cast<std::int64_t>(probs.size()); ++k) {
            *os << k << ',' << freqwm::markov_bound(probs, k) << ','
                << freqwm::poisson_binomial_survival(probs, k) << '\n';
        }
    } else {
        *os << "pairs: " << probs.size() << ", t: " << a.t << ", k: " << a.k << '\n'
            << "markov bound:   " << freqwm::markov_bound(probs, a.k) << '\n'
            << "exact survival: " << freqwm::poisson_binomial_survival(probs, a.k) << '\n';
    }
    return 0;
}

int run_analyze_zrange(const InputFlags& in) {
    const auto [lo, hi] = freqwm::z_range(freqwm::build_histogram(in.load()));
    std::cout << "valid z range: [" << lo << ", " << hi << "]\n";
    return 0;
}

int run_analyze_guess(std::int64_t tokens, std::int64_t k) {
    const freqwm::GuessCost cost = freqwm::guess_attack_cost(tokens, k);
    std::cout << "guess work factor: 2^" << cost.bits << " candidate secrets\n";
    if (!cost.warning.empty()) std::cout << "warning: " << cost.warning << '\n';
    return 0;
}

// ---- judge ----

struct JudgeArgs {
    InputFlags data_a, data_b;
    std::string secret_a, secret_b, report_path;
    std::optional<std::int64_t> t;
    std::optional<double> t_pct;
    freqwm::ComparisonMode mode = freqwm::ComparisonMode::kRemainder;
    double k_fraction = 0.4;
    std::optional<std::int64_t> k;
};

int run_judge(const JudgeArgs& a) {
    freqwm::JudgeParams params;
    params.threshold = a.t;
    params.threshold_pct = a.t_pct;
    params.mode = a.mode;
    params.k_fraction = a.k_fraction;
    params.min_pairs = a.k;
    const freqwm::JudgeReport r =
        freqwm::judge(a.data_a.load(), freqwm::load_secret(a.secret_a), a.data_b.load(),
                      freqwm::load_secret(a.secret_b), params);

    const char* verdict = r.verdict == freqwm::JudgeVerdict::kOwnerA   ? "owner: A"
                          : r.verdict == freqwm::JudgeVerdict::kOwnerB ? "owner: B"
                                                                       : "inconclusive";
    json report = {{"command", "judge"},
                   {"config",
                    {{"data_a", a.data_a.path},
                     {"data_b", a.data_b.path},
                     {"secret_a", a.secret_a},
                     {"secret_b", a.secret_b},
                     {"mode", mode_name(a.mode)},
                     {"k_fraction", a.k_fraction}}},
                   {"result",
                    {{"verdict", verdict},
                     {"a_on_a", detection_json(r.a_on_a)},
                     {"a_on_b", detection_json(r.a_on_b)},
                     {"b_on_a", detection_json(r.b_on_a)},
                     {"b_on_b", detection_json(r.b_on_b)}}}};
    write_report(a.report_path, report);

    std::cout << verdict << '\n';
    return r.verdict == freqwm::JudgeVerdict::kInconclusive ? 1 : 0;
}

// ---- multiwm ----

struct MultiwmArgs {
    InputFlags in;
    std::string out, report_path;
    int rounds = 10;
    double budget = 2.0;
    std::int64_t z = 131;
    freqwm::Strategy strategy = freqwm::Strategy::kOptimal;
    std::int64_t t = 0;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

int run_multiwm(const MultiwmArgs& a) {
    if (a.rounds < 1) throw freqwm::Error("multiwm: rounds must be >= 1");
    const SeedChoice seed = resolve_seed(a.seed_opt, a.seed);
    const freqwm::TokenDataset original = a.in.load();
    const freqwm::Histogram h_original = freqwm::build_histogram(original);

    freqwm::TokenDataset current = original;
    std::vector<freqwm::WatermarkSecret> secrets;
    json rounds = json::array();
    for (int i = 0; i < a.rounds; ++i) {
        const std::string label = "round/" + std::to_string(i);
        freqwm::GenerateOptions opts;
        opts.budget_percent = a.budget;
        opts.z = a.z;
        opts.strategy = a.strategy;
        opts.run_seed = freqwm::derive_stream_seed(seed.value, label);
        if (seed.explicit_seed) {
            opts.secret_seed = freqwm::derive_stream_seed(opts.run_seed, "secret");
        }
        freqwm::WatermarkedAsset asset = freqwm::wm_generate(current, opts);
        current = std::move(asset.data);
        secrets.push_back(std::move(asset.secret));
        const double sim = freqwm::cosine_similarity(h_original, freqwm::build_histogram(current));
        rounds.push_back({{"round", i},
                          {"pairs_embedded", asset.report.pairs_embedded},
                          {"similarity_to_original", sim}});
        std::cout << "round " << i << ": " << asset.report.pairs_embedded
                  << " pairs, similarity to original " << sim << "%\n";
    }
    if (seed.explicit_seed) {
        std::cerr << "warning: secrets derived from the run seed are reproducible and "
                     "guessable; do not use seeded runs to protect real assets\n";
    }

    freqwm::DetectionParams params;
    params.threshold = a.t;
    json detections = json::array();
    for (int i = 0; i < a.rounds; ++i) {
        const auto& s = secrets[static_cast<std::size_t>(i)];
        const freqwm::DetectionReport r = freqwm::wm_detect(current, s, params);
        const double rate = s.pairs.empty() ? 0.0
                                            : static_cast<double>(r.accepted_count) /
                                                  static_cast<double>(s.pairs.size());
        detections.push_back({{"round", i},
                              {"accepted", r.accepted_count},
                              {"pairs", s.pairs.size()},
                              {"rate_on_final", rate}});
        std::cout << "watermark " << i << " on final asset: " << r.accepted_count << "/"
                  << s.pairs.size() << " pairs at t=" << a.t << '\n';
    }

    if (!a.out.empty()) freqwm::write_dataset(current, a.out);
    json report = {{"command", "multiwm"},
                   {"config",
                    {{"in", a.in.path},
                     {"rounds", a.rounds},
                     {"budget", a.budget},
                     {"z", a.z},
                     {"strategy", strategy_name(a.strategy)},
                     {"t", a.t},
                     {"seed", seed.value},
                     {"seed_explicit", seed.explicit_seed}}},
                   {"rounds", rounds},
                   {"detections", detections}};
    write_report(a.report_path, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"freqwm: invisible frequency watermarks for token datasets"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* cg = app.add_subcommand("generate", "embed a watermark into a dataset");
    gen.in.add_to(cg);
    cg->add_option("--out", gen.out, "watermarked dataset path")->required();
    cg->add_option("--secret", gen.secret_path, "where to store the detection secret")
        ->required();
    cg->add_option("--budget", gen.budget, "distortion budget b, percent of similarity");
    cg->add_option("--z", gen.z, "upper bound (exclusive) for pair moduli");
    cg->add_option("--strategy", gen.strategy, "pair selection strategy")
        ->transform(CLI::CheckedTransformer(kStrategies, CLI::ignore_case));
    cg->add_option("--cost", gen.cost_mode, "pair cost model")
        ->transform(CLI::CheckedTransformer(kCostModes, CLI::ignore_case));
    cg->add_option("--report", gen.report_path, "write a JSON run report here");
    gen.seed_opt = cg->add_option("--seed", gen.seed, "seed for reproducible runs");

    DetectArgs det;
    CLI::App* cd = app.add_subcommand("detect", "check a dataset for a watermark");
    det.in.add_to(cd);
    cd->add_option("--secret", det.secret_path, "detection secret file")->required();
    cd->add_option("--t", det.t, "absolute threshold on the remainder");
    cd->add_option("--t-pct", det.t_pct, "per-pair threshold as a fraction of the modulus");
    cd->add_option("--k", det.k, "pairs required for an accept verdict");
    cd->add_option("--mode", det.mode, "remainder comparison mode")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    cd->add_option("--scale-to", det.scale_to, "rescale frequencies to this total first");
    cd->add_option("--report", det.report_path, "write a JSON run report here");

    SynthArgs syn;
    CLI::App* cs = app.add_subcommand("synth", "generate a power-law synthetic dataset");
    cs->add_option("--out", syn.out, "output dataset path")->required();
    cs->add_option("--tokens", syn.tokens, "vocabulary size");
    cs->add_option("--samples", syn.samples, "number of token draws");
    cs->add_option("--alpha", syn.alpha, "power-law exponent in [0, 1]");
    syn.seed_opt = cs->add_option("--seed", syn.seed, "seed for reproducible runs");

    AttackArgs atk;
    CLI::App* ca = app.add_subcommand("attack", "simulate an attack on a dataset");
    ca->add_option("--kind", atk.kind, "sampling|bounded|percent|reorder|rewatermark")
        ->required();
    atk.in.add_to(ca);
    ca->add_option("--out", atk.out, "attacked dataset path")->required();
    ca->add_option("--pct", atk.pct, "attack intensity percentage");
    ca->add_option("--budget", atk.budget, "rewatermark: distortion budget");
    ca->add_option("--z", atk.z, "rewatermark: modulus bound");
    ca->add_option("--strategy", atk.strategy, "rewatermark: selection strategy")
        ->transform(CLI::CheckedTransformer(kStrategies, CLI::ignore_case));
    ca->add_option("--out-secret", atk.out_secret, "rewatermark: store the attacker's secret");
    ca->add_option("--report", atk.report_path, "write a JSON run report here");
    atk.seed_opt = ca->add_option("--seed", atk.seed, "seed for reproducible runs");

    SweepArgs swp;
    CLI::App* cw = app.add_subcommand("sweep", "robustness sweep over the attack grid");
    swp.in.add_to(cw);
    cw->add_option("--secret", swp.secret_path, "detection secret file")->required();
    cw->add_option("--out", swp.out, "output CSV path")->required();
    cw->add_option("--reps", swp.config.reps, "repetitions per attack configuration");
    cw->add_option("--thresholds", swp.config.thresholds, "detection thresholds to measure")->delimiter(',');
    cw->add_option("--sampling-pcts", swp.config.sampling_pcts, "sampling attack percentages")->delimiter(',');
    cw->add_option("--percent-pcts", swp.config.percent_pcts, "percent attack intensities")->delimiter(',');
    cw->add_option("--reorder-pcts", swp.config.reorder_pcts, "reorder attack intensities")->delimiter(',');
    cw->add_flag("--no-bounded", swp.no_bounded, "skip the bounded destroy attack");
    cw->add_flag("--no-baseline", swp.no_baseline, "skip the unrelated-data baseline");
    cw->add_option("--mode", swp.mode, "remainder comparison mode")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    swp.seed_opt = cw->add_option("--seed", swp.seed, "seed for reproducible runs");

    CLI::App* cn = app.add_subcommand("analyze", "false-positive bounds and dataset limits");
    cn->require_subcommand(1);
    AnalyzeFpArgs afp;
    CLI::App* cfp = cn->add_subcommand("fp", "false-positive probability of a detection config");
    cfp->add_option("--secret", afp.secret_path, "detection secret file");
    cfp->add_option("--n", afp.n, "hypothetical: number of pairs");
    cfp->add_option("--z", afp.z, "hypothetical: modulus for every pair");
    cfp->add_option("--t", afp.t, "detection threshold");
    cfp->add_option("--k", afp.k, "pairs required for accept");
    cfp->add_flag("--k-sweep", afp.k_sweep, "emit bounds for every k as CSV");
    cfp->add_option("--out", afp.out, "write output here instead of stdout");
    InputFlags azr;
    CLI::App* czr = cn->add_subcommand("zrange", "valid modulus-bound range for a dataset");
    azr.add_to(czr);
    std::int64_t guess_tokens = 0, guess_k = 0;
    CLI::App* cgs = cn->add_subcommand("guess", "brute-force work factor without the secret");
    cgs->add_option("--tokens", guess_tokens, "distinct tokens in the dataset")->required();
    cgs->add_option("--k", guess_k, "pairs the detector requires")->required();

    JudgeArgs jdg;
    CLI::App* cj = app.add_subcommand("judge", "arbitrate an ownership dispute");
    jdg.data_a.add_to(cj, "--data-a", "-a");
    jdg.data_b.add_to(cj, "--data-b", "-b");
    cj->add_option("--secret-a", jdg.secret_a, "claimant A's secret")->required();
    cj->add_option("--secret-b", jdg.secret_b, "claimant B's secret")->required();
    cj->add_option("--t", jdg.t, "absolute threshold on the remainder");
    cj->add_option("--t-pct", jdg.t_pct, "per-pair threshold as a fraction of the modulus");
    cj->add_option("--k-fraction", jdg.k_fraction, "fraction of own pairs each claimant needs");
    cj->add_option("--k", jdg.k, "absolute override for the pair requirement");
    cj->add_option("--mode", jdg.mode, "remainder comparison mode")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    cj->add_option("--report", jdg.report_path, "write a JSON run report here");

    MultiwmArgs mwm;
    CLI::App* cm = app.add_subcommand("multiwm", "stack several watermarks and re-detect all");
    mwm.in.add_to(cm);
    cm->add_option("--out", mwm.out, "final dataset path");
    cm->add_option("--rounds", mwm.rounds, "number of watermark insertions");
    cm->add_option("--budget", mwm.budget, "distortion budget per insertion");
    cm->add_option("--z", mwm.z, "modulus bound per insertion");
    cm->add_option("--strategy", mwm.strategy, "selection strategy")
        ->transform(CLI::CheckedTransformer(kStrategies, CLI::ignore_case));
    cm->add_option("--t", mwm.t, "threshold for the final re-detection pass");
    cm->add_option("--report", mwm.report_path, "write a JSON run report here");
    mwm.seed_opt = cm->add_option("--seed", mwm.seed, "seed for reproducible runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cg) return run_generate(gen);
        if (*cd) return run_detect(det);
        if (*cs) return run_synth(syn);
        if (*ca) return run_attack(atk);
        if (*cw) return run_sweep(swp);
        if (*cfp) return run_analyze_fp(afp);
        if (*czr) return run_analyze_zrange(azr);
        if (*cgs) return run_analyze_guess(guess_tokens, guess_k);
        if (*cj) return run_judge(jdg);
        if (*cm) return run_multiwm(mwm);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
