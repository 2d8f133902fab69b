#include "lngate/paillier.hpp"

namespace lngate::paillier {

Keypair generate_keypair(Rng& rng, unsigned modulus_bits) {
    if (modulus_bits < kMinModulusBits)
        throw Error(Errc::Internal, "paillier modulus below configured minimum");
    for (;;) {
        mpz_class p = random_prime(rng, modulus_bits / 2);
        mpz_class q = random_prime(rng, modulus_bits / 2);
        if (p == q) continue;
        mpz_class n = p * q;
        mpz_class lambda;
        mpz_lcm(lambda.get_mpz_t(), mpz_class(p - 1).get_mpz_t(), mpz_class(q - 1).get_mpz_t());
        // mu = lambda^-1 mod n; retry on the degenerate gcd(lambda, n) != 1 case.
        mpz_class mu;
        if (mpz_invert(mu.get_mpz_t(), lambda.get_mpz_t(), n.get_mpz_t()) == 0) continue;
        PublicKey pub{n, n * n};
        return Keypair{pub, PrivateKey{lambda, mu, pub}};
    }
}

Ciphertext encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng) {
    if (m < 0 || m >= pk.n) throw Error(Errc::PlaintextTooLarge, "plaintext outside [0, n)");
    mpz_class r;
    do {
        r = random_nonzero_below(rng, pk.n);
    } while (gcd(r, pk.n) != 1);
    // g = n + 1, so g^m = 1 + m*n mod n^2.
    mpz_class gm = (1 + m * pk.n) % pk.n_squared;
    return Ciphertext{gm * mod_pow(r, pk.n, pk.n_squared) % pk.n_squared};
}

mpz_class decrypt(const PrivateKey& sk, const Ciphertext& c) {
    if (c.value <= 0 || c.value >= sk.pub.n_squared)
        throw Error(Errc::BadEncoding, "ciphertext outside Z_{n^2}");
    mpz_class u = mod_pow(c.value, sk.lambda, sk.pub.n_squared);
    mpz_class l = (u - 1) / sk.pub.n;
    return l * sk.mu % sk.pub.n;
}

Ciphertext homomorphic_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
    return Ciphertext{a.value * b.value % pk.n_squared};
}

Ciphertext homomorphic_scalar_mul(const PublicKey& pk, const Ciphertext& c, const mpz_class& m) {
    if (m < 0) throw Error(Errc::PlaintextTooLarge, "negative scalar");
    return Ciphertext{mod_pow(c.value, m, pk.n_squared)};
}

}  // namespace lngate::paillier
