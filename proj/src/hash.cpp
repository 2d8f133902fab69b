#include "lngate/hash.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

namespace lngate {

Hash32 sha256(std::span<const std::uint8_t> data) {
    Hash32 out{};
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
    return out;
}

Hash32 sha256(const Bytes& data) { return sha256(std::span<const std::uint8_t>(data)); }

Hash32 sha256_cat(std::initializer_list<std::span<const std::uint8_t>> parts) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    for (const auto& p : parts) EVP_DigestUpdate(ctx, p.data(), p.size());
    Hash32 out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, out.data(), &len);
    EVP_MD_CTX_free(ctx);
    return out;
}

Hash32 hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data) {
    Hash32 out{};
    unsigned int len = 0;
    HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
         out.data(), &len);
    return out;
}

Bytes aes256_ctr(std::span<const std::uint8_t, 32> key, std::span<const std::uint8_t, 16> nonce,
                 std::span<const std::uint8_t> data) {
    Bytes out(data.size());
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    EVP_EncryptInit_ex(ctx, EVP_aes_256_ctr(), nullptr, key.data(), nonce.data());
    int outl = 0;
    if (!data.empty())
        EVP_EncryptUpdate(ctx, out.data(), &outl, data.data(), static_cast<int>(data.size()));
    int finl = 0;
    EVP_EncryptFinal_ex(ctx, out.data() + outl, &finl);
    EVP_CIPHER_CTX_free(ctx);
    out.resize(static_cast<std::size_t>(outl + finl));
    return out;
}

}  // namespace lngate
