#include <doctest.h>

#include "lngate/paillier.hpp"

using namespace lngate;

namespace {
paillier::Keypair test_keypair(std::uint64_t seed = 77) {
    DeterministicRng rng(seed, "paillier-test");
    return paillier::generate_keypair(rng, paillier::kMinModulusBits);
}
}  // namespace

TEST_CASE("encrypt/decrypt identity over random plaintexts") {
    auto kp = test_keypair();
    DeterministicRng rng(5, "paillier-plaintexts");
    for (int i = 0; i < 100; ++i) {
        mpz_class m = random_below(rng, kp.pub.n);
        auto c = paillier::encrypt(kp.pub, m, rng);
        CHECK(paillier::decrypt(kp.priv, c) == m);
    }
}

TEST_CASE("homomorphic identities") {
    auto kp = test_keypair();
    DeterministicRng rng(6, "paillier-homomorphic");

    SUBCASE("Enc(2) + Enc(3) decrypts to 5") {
        auto c = paillier::homomorphic_add(kp.pub, paillier::encrypt(kp.pub, 2, rng),
                                           paillier::encrypt(kp.pub, 3, rng));
        CHECK(paillier::decrypt(kp.priv, c) == 5);
    }
    SUBCASE("Enc(2) * 3 decrypts to 6") {
        auto c = paillier::homomorphic_scalar_mul(kp.pub, paillier::encrypt(kp.pub, 2, rng), 3);
        CHECK(paillier::decrypt(kp.priv, c) == 6);
    }
    SUBCASE("random a+b and a*m mod n") {
        for (int i = 0; i < 20; ++i) {
            mpz_class a = random_below(rng, kp.pub.n);
            mpz_class b = random_below(rng, kp.pub.n);
            mpz_class m = random_below(rng, mpz_class(1) << 128);
            auto sum = paillier::homomorphic_add(kp.pub, paillier::encrypt(kp.pub, a, rng),
                                                 paillier::encrypt(kp.pub, b, rng));
            CHECK(paillier::decrypt(kp.priv, sum) == (a + b) % kp.pub.n);
            auto prod =
                paillier::homomorphic_scalar_mul(kp.pub, paillier::encrypt(kp.pub, a, rng), m);
            CHECK(paillier::decrypt(kp.priv, prod) == a * m % kp.pub.n);
        }
    }
}

TEST_CASE("plaintext bounds are enforced") {
    auto kp = test_keypair();
    DeterministicRng rng(7, "paillier-bounds");
    CHECK_THROWS_AS(paillier::encrypt(kp.pub, kp.pub.n, rng), Error);
    CHECK_THROWS_AS(paillier::encrypt(kp.pub, kp.pub.n + 1, rng), Error);
    CHECK_THROWS_AS(paillier::encrypt(kp.pub, -1, rng), Error);
    CHECK_NOTHROW(paillier::encrypt(kp.pub, kp.pub.n - 1, rng));
    CHECK_NOTHROW(paillier::encrypt(kp.pub, 0, rng));
}

TEST_CASE("modulus meets the configured minimum") {
    auto kp = test_keypair();
    CHECK(mpz_sizeinbase(kp.pub.n.get_mpz_t(), 2) >= paillier::kMinModulusBits - 1);
    CHECK(kp.pub.n_squared == kp.pub.n * kp.pub.n);
    DeterministicRng rng(8, "paillier-small");
    CHECK_THROWS_AS(paillier::generate_keypair(rng, 512), Error);
}
