#include "freqwm/sha256.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace freqwm {

namespace {

EVP_MD_CTX* scratch_ctx() {
    thread_local EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
    return ctx;
}

} // namespace

Digest sha256(const std::uint8_t* data, std::size_t len, std::string_view b) {
    EVP_MD_CTX* ctx = scratch_ctx();
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("EVP_DigestInit_ex failed");
    if (len) EVP_DigestUpdate(ctx, data, len);
    if (!b.empty()) EVP_DigestUpdate(ctx, b.data(), b.size());
    Digest out;
    unsigned int n = 0;
    if (EVP_DigestFinal_ex(ctx, out.data(), &n) != 1 || n != out.size())
        throw std::runtime_error("EVP_DigestFinal_ex failed");
    return out;
}

Digest sha256(std::string_view a, std::string_view b) {
    return sha256(reinterpret_cast<const std::uint8_t*>(a.data()), a.size(), b);
}

} // namespace freqwm
