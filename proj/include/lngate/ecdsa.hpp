#ifndef LNGATE_ECDSA_HPP_INCLUDED
#define LNGATE_ECDSA_HPP_INCLUDED

#include "lngate/ec.hpp"

namespace lngate::ecdsa {

/// A plain ECDSA signature over secp256k1. `r` is the x-coordinate of R mod n;
/// `s` is kept low-s normalized by every signer in this project.
struct EcdsaSignature {
    mpz_class r;
    mpz_class s;

    std::array<std::uint8_t, 64> serialize() const;  // r || s, 32-byte BE each
    static EcdsaSignature parse(std::span<const std::uint8_t> in);

    bool operator==(const EcdsaSignature&) const = default;
};

/// s <= (n-1)/2 (Bitcoin standardness rule).
bool is_low_s(const mpz_class& s);
mpz_class normalize_low_s(const mpz_class& s);

/// Textbook single-key signer, message hashed with SHA-256. Retries the nonce
/// on the (negligible) r == 0 / s == 0 cases.
EcdsaSignature sign_single(const mpz_class& secret_key, std::span<const std::uint8_t> message,
                           Rng& rng);

/// Standard ECDSA verification of `sig` on SHA-256(message) under `pubkey`.
/// Accepts any s in [1, n-1]; low-s is the signer's concern.
bool verify_standard(const ec::Point& pubkey, std::span<const std::uint8_t> message,
                     const EcdsaSignature& sig);

}  // namespace lngate::ecdsa

#endif
