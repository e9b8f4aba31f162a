// End-to-end checks of the freqwm binary. The build bakes in the tool's path
// (FREQWM_CLI_PATH); the FREQWM_CLI environment variable overrides it, and
// without either these cases are skipped.

#include "doctest.h"
#include "helpers.hpp"

#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include "freqwm/keying.hpp"

using testutil::TempDir;

namespace {

std::string cli_path() {
    if (const char* env = std::getenv("FREQWM_CLI")) return env;
#ifdef FREQWM_CLI_PATH
    return FREQWM_CLI_PATH;
#else
    return {};
#endif
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const TempDir& dir, const std::string& args,
                  const std::string& env_prefix = "") {
    const auto out_file = dir.file("stdout.txt");
    const auto err_file = dir.file("stderr.txt");
    const std::string cmd = env_prefix + cli_path() + " " + args + " > " + out_file.string() +
                            " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), testutil::read_text(out_file), testutil::read_text(err_file)};
}

#define SKIP_WITHOUT_CLI()                                         \
    if (cli_path().empty()) {                                      \
        MESSAGE("FREQWM_CLI not set; skipping CLI integration");   \
        return;                                                    \
    }

}  // namespace

TEST_CASE("cli: synth, generate, detect round trip and exit codes") {
    SKIP_WITHOUT_CLI();
    TempDir dir;
    const std::string data = dir.file("data.txt").string();
    const std::string wm = dir.file("wm.txt").string();
    const std::string secret = dir.file("secret.json").string();
    const std::string report = dir.file("report.json").string();

    CliResult r = run_cli(dir, "synth --out " + data +
                                   " --tokens 80 --samples 30000 --alpha 0.5 --seed 7");
    CHECK(r.exit_code == 0);

    r = run_cli(dir, "generate --in " + data + " --out " + wm + " --secret " + secret +
                         " --budget 2 --z 131 --seed 11 --report " + report);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("embedded") != std::string::npos);
    // Seeded runs warn that the secret is reproducible.
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(testutil::read_text(report).find("\"pairs_embedded\"") != std::string::npos);

    r = run_cli(dir, "detect --in " + wm + " --secret " + secret + " --t 0 --k 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("accept") == 0);

    // A fresh secret knows no pairs, so detection rejects with exit 1.
    const std::string other = dir.file("other_secret.json").string();
    freqwm::save_secret(freqwm::make_secret_seeded(131, 999), other);
    r = run_cli(dir, "detect --in " + wm + " --secret " + other + " --t 0 --k 1");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("reject") == 0);

    // Operational errors exit 2.
    r = run_cli(dir, "detect --in " + wm + " --secret " + dir.file("missing.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
    r = run_cli(dir, "generate --in " + data + " --out " + wm + " --secret " + secret + " --z 1");
    CHECK(r.exit_code == 2);
    r = run_cli(dir, "detect --in " + wm + " --secret " + secret + " --t 1 --t-pct 0.1");
    CHECK(r.exit_code == 2);
    // Unknown flags are usage errors, also exit 2.
    r = run_cli(dir, "detect --in " + wm + " --secret " + secret + " --bogus");
    CHECK(r.exit_code == 2);
    r = run_cli(dir, "frobnicate");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: seeded runs are byte-identical") {
    SKIP_WITHOUT_CLI();
    TempDir dir;
    const std::string data = dir.file("data.txt").string();
    run_cli(dir, "synth --out " + data + " --tokens 60 --samples 20000 --alpha 0.7 --seed 3");

    auto generate = [&](const std::string& tag) {
        const std::string wm = dir.file("wm_" + tag + ".txt").string();
        const std::string secret = dir.file("secret_" + tag + ".json").string();
        const CliResult r = run_cli(dir, "generate --in " + data + " --out " + wm +
                                             " --secret " + secret + " --seed 42");
        CHECK(r.exit_code == 0);
        return std::pair{testutil::read_text(wm), testutil::read_text(secret)};
    };
    const auto [wm1, secret1] = generate("1");
    const auto [wm2, secret2] = generate("2");
    CHECK(wm1 == wm2);
    CHECK(secret1 == secret2);

    // FREQWM_SEED in the environment acts like --seed.
    const std::string env_out1 = dir.file("env1.txt").string();
    const std::string env_out2 = dir.file("env2.txt").string();
    CliResult r = run_cli(dir, "synth --out " + env_out1 + " --tokens 50 --samples 5000",
                          "FREQWM_SEED=42 ");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("seed 42") != std::string::npos);
    run_cli(dir, "synth --out " + env_out2 + " --tokens 50 --samples 5000", "FREQWM_SEED=42 ");
    CHECK(testutil::read_text(env_out1) == testutil::read_text(env_out2));

    r = run_cli(dir, "synth --out " + env_out1 + " --tokens 50 --samples 5000",
                "FREQWM_SEED=nonsense ");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: csv datasets with column selection") {
    SKIP_WITHOUT_CLI();
    TempDir dir;
    const std::string csv = dir.file("tracks.csv").string();
    std::string text = "artist,track\n";
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j <= i % 7; ++j) {
            text += "artist" + std::to_string(i) + ",track" + std::to_string(i % 13) + "\n";
        }
    }
    testutil::write_text(csv, text);

    const std::string wm = dir.file("wm.csv").string();
    const std::string secret = dir.file("secret.json").string();
    CliResult r = run_cli(dir, "generate --in " + csv + " --columns artist,track --out " + wm +
                                   " --secret " + secret + " --z 2 --seed 5");
    CHECK(r.exit_code == 0);

    // The written CSV has no header row, so detection selects by index.
    r = run_cli(dir, "detect --in " + wm + " --col-indices 0,1 --secret " + secret + " --t 0");
    CHECK(r.exit_code <= 1);  // verdict depends on eligibility; parsing must succeed
    CHECK(r.out.find("pairs within threshold") != std::string::npos);
}

TEST_CASE("cli: attack, sweep and analyze outputs") {
    SKIP_WITHOUT_CLI();
    TempDir dir;
    const std::string data = dir.file("data.txt").string();
    const std::string wm = dir.file("wm.txt").string();
    const std::string secret = dir.file("secret.json").string();
    run_cli(dir, "synth --out " + data + " --tokens 80 --samples 30000 --alpha 0.6 --seed 2");
    run_cli(dir, "generate --in " + data + " --out " + wm + " --secret " + secret + " --seed 4");

    const std::string attacked = dir.file("attacked.txt").string();
    CliResult r = run_cli(dir, "attack --kind sampling --pct 50 --in " + wm + " --out " +
                                   attacked + " --seed 6");
    CHECK(r.exit_code == 0);
    // The sample declares its origin so detection can rescale.
    CHECK(std::filesystem::exists(attacked + ".meta.json"));

    r = run_cli(dir, "attack --kind rewatermark --in " + wm + " --out " +
                         dir.file("rewm.txt").string() + " --out-secret " +
                         dir.file("attacker.json").string() + " --seed 8");
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(dir.file("attacker.json")));

    r = run_cli(dir, "attack --kind nonsense --in " + wm + " --out " + attacked);
    CHECK(r.exit_code == 2);

    const std::string sweep_csv = dir.file("sweep.csv").string();
    r = run_cli(dir, "sweep --in " + wm + " --secret " + secret + " --out " + sweep_csv +
                         " --reps 2 --thresholds 0,4 --sampling-pcts 50 --percent-pcts 100" +
                         " --reorder-pcts 50 --seed 10");
    CHECK(r.exit_code == 0);
    const std::string csv_text = testutil::read_text(sweep_csv);
    CHECK(csv_text.rfind("attack,intensity,threshold,mode,rate,reps\n", 0) == 0);
    CHECK(csv_text.find("sampling,50,") != std::string::npos);
    CHECK(csv_text.find("baseline,") != std::string::npos);

    r = run_cli(dir, "analyze fp --secret " + secret + " --t 0 --k 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("markov bound") != std::string::npos);
    CHECK(r.out.find("exact survival") != std::string::npos);

    r = run_cli(dir, "analyze fp --n 10 --z 131 --t 0 --k-sweep");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("k,markov,exact\n", 0) == 0);

    r = run_cli(dir, "analyze zrange --in " + data);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("valid z range: [2,") != std::string::npos);

    r = run_cli(dir, "analyze guess --tokens 1000 --k 10");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("2^423.51") != std::string::npos);
}

TEST_CASE("cli: judge verdicts and exit codes") {
    SKIP_WITHOUT_CLI();
    TempDir dir;
    const std::string data = dir.file("data.txt").string();
    const std::string wm = dir.file("wm.txt").string();
    const std::string secret_a = dir.file("a.json").string();
    run_cli(dir, "synth --out " + data + " --tokens 80 --samples 30000 --alpha 0.5 --seed 13");
    run_cli(dir, "generate --in " + data + " --out " + wm + " --secret " + secret_a +
                     " --seed 17");
    const std::string secret_b = dir.file("b.json").string();
    freqwm::save_secret(freqwm::make_secret_seeded(131, 12345), secret_b);

    // A's secret verifies on both datasets; B's verifies on neither.
    CliResult r = run_cli(dir, "judge --data-a " + wm + " --data-b " + wm + " --secret-a " +
                                   secret_a + " --secret-b " + secret_b + " --t 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("owner: A") != std::string::npos);

    r = run_cli(dir, "judge --data-a " + wm + " --data-b " + wm + " --secret-a " + secret_b +
                         " --secret-b " + secret_a + " --t 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("owner: B") != std::string::npos);

    r = run_cli(dir, "judge --data-a " + wm + " --data-b " + wm + " --secret-a " + secret_b +
                         " --secret-b " + secret_b + " --t 0");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("inconclusive") != std::string::npos);
}

TEST_CASE("cli: multiwm stacks watermarks and re-detects each") {
    SKIP_WITHOUT_CLI();
    TempDir dir;
    const std::string data = dir.file("data.txt").string();
    const std::string report = dir.file("report.json").string();
    run_cli(dir, "synth --out " + data + " --tokens 100 --samples 40000 --alpha 0.5 --seed 19");

    const CliResult r = run_cli(dir, "multiwm --in " + data + " --rounds 2 --budget 2 --t 0" +
                                         " --seed 23 --report " + report);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("round 0:") != std::string::npos);
    CHECK(r.out.find("round 1:") != std::string::npos);
    CHECK(r.out.find("watermark 0 on final asset:") != std::string::npos);
    const std::string rep = testutil::read_text(report);
    CHECK(rep.find("\"rate_on_final\"") != std::string::npos);
    CHECK(rep.find("\"similarity_to_original\"") != std::string::npos);
}
