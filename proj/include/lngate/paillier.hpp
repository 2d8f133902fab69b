#ifndef LNGATE_PAILLIER_HPP_INCLUDED
#define LNGATE_PAILLIER_HPP_INCLUDED

#include "lngate/bigint.hpp"

namespace lngate::paillier {

struct PublicKey {
    mpz_class n;
    mpz_class n_squared;

    bool operator==(const PublicKey&) const = default;
};

struct PrivateKey {
    mpz_class lambda;  // lcm(p-1, q-1)
    mpz_class mu;      // lambda^-1 mod n
    PublicKey pub;
};

struct Keypair {
    PublicKey pub;
    PrivateKey priv;
};

struct Ciphertext {
    mpz_class value;

    bool operator==(const Ciphertext&) const = default;
};

/// Default modulus size; tests may drop to 1024 bits for speed.
constexpr unsigned kDefaultModulusBits = 2048;
constexpr unsigned kMinModulusBits = 1024;

Keypair generate_keypair(Rng& rng, unsigned modulus_bits = kDefaultModulusBits);

/// Throws Error(PlaintextTooLarge) when m >= n or m < 0.
Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng);
mpz_class decrypt(const PrivateKey& sk, const Ciphertext& c);

/// Dec(add(Enc(a), Enc(b))) = a + b mod n.
Ciphertext homomorphic_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
/// Dec(scalar_mul(Enc(a), m)) = a * m mod n.
Ciphertext homomorphic_scalar_mul(const PublicKey& pk, const Ciphertext& c, const mpz_class& m);

}  // namespace lngate::paillier

#endif
