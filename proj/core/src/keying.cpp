#include "freqwm/keying.hpp"

#include "freqwm/error.hpp"
#include "freqwm/rng.hpp"
#include "freqwm/sha256.hpp"

#include <nlohmann/json.hpp>
#include <openssl/rand.h>

#include <fstream>
#include <unordered_set>

namespace freqwm {

namespace {

std::int64_t reduce_digest(const Digest& d, std::int64_t z) {
    // big-endian 256-bit value mod z, reduced bytewise
    unsigned __int128 acc = 0;
    for (std::uint8_t byte : d) acc = (acc << 8 | byte) % static_cast<std::uint64_t>(z);
    return static_cast<std::int64_t>(acc);
}

void check_z(std::int64_t z) {
    if (z < 2) throw Error("modulus bound z must be >= 2, got " + std::to_string(z));
}

char hex_digit(unsigned v) { return static_cast<char>(v < 10 ? '0' + v : 'a' + v - 10); }

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

void check_pairs(const std::vector<TokenPair>& pairs) {
    std::unordered_set<std::string> seen;
    for (const auto& p : pairs) {
        if (p.hi.empty() || p.lo.empty()) throw Error("secret pair with empty token");
        if (p.hi == p.lo) throw Error("secret pair with identical tokens: " + p.hi);
        if (!seen.insert(p.hi).second) throw Error("secret pairs share token: " + p.hi);
        if (!seen.insert(p.lo).second) throw Error("secret pairs share token: " + p.lo);
    }
}

} // namespace

std::int64_t derive_pair_modulus(const WatermarkSecret& secret, std::string_view hi,
                                 std::string_view lo) {
    check_z(secret.z);
    const Digest inner = sha256(secret.entropy.data(), secret.entropy.size(), lo);
    const Digest outer = sha256(hi, std::string_view(reinterpret_cast<const char*>(inner.data()), inner.size()));
    return reduce_digest(outer, secret.z);
}

std::int64_t PairModulusCache::modulus(std::string_view hi, const std::string& lo) {
    check_z(secret_.z);
    auto it = inner_.find(lo);
    if (it == inner_.end()) {
        it = inner_.emplace(lo, sha256(secret_.entropy.data(), secret_.entropy.size(), lo)).first;
    }
    const Digest& inner = it->second;
    const Digest outer = sha256(hi, std::string_view(reinterpret_cast<const char*>(inner.data()), inner.size()));
    return reduce_digest(outer, secret_.z);
}

WatermarkSecret make_secret(std::int64_t z) {
    check_z(z);
    WatermarkSecret s;
    s.z = z;
    if (RAND_bytes(s.entropy.data(), static_cast<int>(s.entropy.size())) != 1)
        throw Error("OS entropy source unavailable");
    return s;
}

WatermarkSecret make_secret_seeded(std::int64_t z, std::uint64_t seed) {
    check_z(z);
    WatermarkSecret s;
    s.z = z;
    Rng rng(derive_stream_seed(seed, "secret"));
    for (std::size_t i = 0; i < s.entropy.size(); i += 8) {
        std::uint64_t x = rng.next();
        for (std::size_t b = 0; b < 8; ++b) s.entropy[i + b] = static_cast<std::uint8_t>(x >> (8 * b));
    }
    return s;
}

std::string secret_to_json(const WatermarkSecret& secret) {
    check_z(secret.z);
    check_pairs(secret.pairs);
    std::string r_hex;
    r_hex.reserve(64);
    for (std::uint8_t b : secret.entropy) {
        r_hex += hex_digit(b >> 4);
        r_hex += hex_digit(b & 0xf);
    }
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["z"] = secret.z;
    j["r_hex"] = r_hex;
    auto& pairs = j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : secret.pairs) {
        nlohmann::ordered_json jp;
        jp["i"] = p.hi;
        jp["j"] = p.lo;
        pairs.push_back(std::move(jp));
    }
    return j.dump(2) + "\n";
}

WatermarkSecret secret_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed secret file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer())
        throw Error("secret file missing integer 'version'");
    if (j["version"].get<int>() != 1)
        throw Error("unsupported secret file version " + j["version"].dump());
    if (!j.contains("z") || !j["z"].is_number_integer())
        throw Error("secret file missing integer 'z'");
    if (!j.contains("r_hex") || !j["r_hex"].is_string())
        throw Error("secret file missing string 'r_hex'");
    if (!j.contains("pairs") || !j["pairs"].is_array())
        throw Error("secret file missing array 'pairs'");

    WatermarkSecret s;
    s.z = j["z"].get<std::int64_t>();
    check_z(s.z);
    const std::string r_hex = j["r_hex"].get<std::string>();
    if (r_hex.size() != 64) throw Error("r_hex must be 64 hex characters");
    for (std::size_t i = 0; i < 32; ++i) {
        const int hiv = hex_value(r_hex[2 * i]), lov = hex_value(r_hex[2 * i + 1]);
        if (hiv < 0 || lov < 0) throw Error("r_hex contains a non-hex character");
        s.entropy[i] = static_cast<std::uint8_t>(hiv << 4 | lov);
    }
    for (const auto& jp : j["pairs"]) {
        if (!jp.is_object() || !jp.contains("i") || !jp.contains("j") ||
            !jp["i"].is_string() || !jp["j"].is_string())
            throw Error("secret pair entries need string fields 'i' and 'j'");
        s.pairs.push_back({jp["i"].get<std::string>(), jp["j"].get<std::string>()});
    }
    check_pairs(s.pairs);
    return s;
}

void save_secret(const WatermarkSecret& secret, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + file.string());
    const std::string text = secret_to_json(secret);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed: " + file.string());
}

WatermarkSecret load_secret(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return secret_from_json(text);
}

} // namespace freqwm
