#include <doctest.h>

#include "lngate/ec.hpp"
#include "oracles.hpp"

using namespace lngate;

TEST_CASE("generator multiples match frozen vectors") {
    // Frozen from an independent affine implementation.
    CHECK(to_hex(ec::mul_generator(2).serialize()) ==
          "02c6047f9441ed7d6d3045406e95c07cd85c778e4b8cef3ca7abac09b95c709ee5");
    CHECK(to_hex(ec::mul_generator(3).serialize()) ==
          "02f9308a019258c31049344f85f89d5229b531c845836f99b08601f113bce036f9");
    CHECK(to_hex(ec::mul_generator(5).serialize()) ==
          "022f8bde4d1a07209355b4a7250a5c5128e88b84bddc619ab7cba8d569b240efe4");
    CHECK(to_hex(ec::mul_generator(6).serialize()) ==
          "03fff97bd5755eeea420453a14355235d382f6472f8568a18b2f057a1460297556");
}

TEST_CASE("group law sanity") {
    ec::Point g = ec::Point::generator();
    CHECK(g.add(g) == g.dbl());
    CHECK(g.dbl().add(g) == ec::mul_generator(3));
    CHECK(g.add(g.negate()).is_infinity());
    CHECK(ec::mul_generator(ec::GroupParams::secp256k1().n).is_infinity());
    // order-n generator: (n-1)G + G = infinity
    CHECK(ec::mul_generator(ec::GroupParams::secp256k1().n - 1).add(g).is_infinity());
}

TEST_CASE("scalar multiplication agrees with the affine oracle") {
    DeterministicRng rng(1234, "ec-mul-oracle");
    for (int i = 0; i < 25; ++i) {
        mpz_class k = ec::random_scalar(rng);
        ec::Point lib = ec::mul_generator(k);
        oracle::Pt ref = oracle::pmul(k, oracle::gen());
        REQUIRE(ref.has_value());
        CHECK(lib.x() == ref->first);
        CHECK(lib.y() == ref->second);
    }
}

TEST_CASE("point serialization round-trips") {
    DeterministicRng rng(99, "ec-serialize");
    for (int i = 0; i < 50; ++i) {
        ec::Point p = ec::mul_generator(ec::random_scalar(rng));
        ec::Point q = ec::Point::parse(p.serialize());
        CHECK(p == q);
    }
}

TEST_CASE("parse rejects malformed encodings") {
    auto good = ec::mul_generator(7).serialize();

    Bytes bad_prefix(good.begin(), good.end());
    bad_prefix[0] = 0x04;
    CHECK_THROWS_AS(ec::Point::parse(bad_prefix), Error);

    Bytes short_buf(good.begin(), good.end() - 1);
    CHECK_THROWS_AS(ec::Point::parse(short_buf), Error);

    // x = p is out of the field
    Bytes oob(33, 0);
    oob[0] = 0x02;
    Bytes pbytes = bigint_to_bytes(ec::GroupParams::secp256k1().p, 32);
    std::copy(pbytes.begin(), pbytes.end(), oob.begin() + 1);
    CHECK_THROWS_AS(ec::Point::parse(oob), Error);

    // x with no curve point: x = 5 has no square root of x^3+7 on secp256k1
    Bytes nores(33, 0);
    nores[0] = 0x02;
    nores[32] = 0x05;
    CHECK_THROWS_AS(ec::Point::parse(nores), Error);
}

TEST_CASE("group params invariants") {
    const auto& g = ec::GroupParams::secp256k1();
    CHECK(mpz_probab_prime_p(g.n.get_mpz_t(), 30) > 0);
    CHECK(mpz_probab_prime_p(g.p.get_mpz_t(), 30) > 0);
    CHECK(ec::Point::generator() == ec::Point::from_affine(g.gx, g.gy));
}
