#include <doctest.h>

#include "lngate/threshold_ecdsa.hpp"
#include "oracles.hpp"

using namespace lngate;

namespace {

const tecdsa::KeygenOptions kFastKeygen{paillier::kMinModulusBits};

tecdsa::KeygenResult fast_keygen(std::uint64_t sseed, std::uint64_t cseed) {
    DeterministicRng srng(sseed, "tecdsa-test-server");
    DeterministicRng crng(cseed, "tecdsa-test-client");
    return tecdsa::keygen(srng, crng, kFastKeygen);
}

Bytes msg(const std::string& s) { return Bytes(s.begin(), s.end()); }

}  // namespace

// ---------------------------------------------------------------------------
// dlog proofs
// ---------------------------------------------------------------------------

TEST_CASE("honest dlog proof verifies; tampered transcripts reject") {
    DeterministicRng rng(11, "dlog");
    mpz_class x = 5;
    ec::Point q = ec::mul_generator(x);
    auto proof = tecdsa::prove_dlog(x, q, rng);
    CHECK(tecdsa::verify_dlog(q, proof));

    SUBCASE("response + 1 breaks the verification equation") {
        auto bad = proof;
        bad.response = bad.response + 1;
        CHECK_FALSE(tecdsa::verify_dlog(q, bad));
    }
    SUBCASE("same proof against Q + G fails") {
        CHECK_FALSE(tecdsa::verify_dlog(q.add(ec::Point::generator()), proof));
    }
    SUBCASE("100 random tamperings all reject") {
        for (int i = 0; i < 100; ++i) {
            auto bad = proof;
            switch (rng.below(3)) {
                case 0: bad.response = (bad.response + 1 + rng.below(1000)) %
                                       ec::GroupParams::secp256k1().n; break;
                case 1: bad.challenge = (bad.challenge + 1 + rng.below(1000)) %
                                        ec::GroupParams::secp256k1().n; break;
                default: bad.commitment = bad.commitment.add(ec::Point::generator()); break;
            }
            CHECK_FALSE(tecdsa::verify_dlog(q, bad));
        }
    }
}

// ---------------------------------------------------------------------------
// keygen
// ---------------------------------------------------------------------------

TEST_CASE("identity shares give Q = G") {
    DeterministicRng srng(1, "kg-s"), crng(2, "kg-c");
    auto kg = tecdsa::keygen_with_shares(1, 1, srng, crng, kFastKeygen);
    CHECK(kg.server_view.joint_pubkey == ec::Point::generator());
    CHECK(kg.client_view.joint_pubkey == ec::Point::generator());
}

TEST_CASE("multiplicative sharing forces Q = (x1*x2)*G") {
    DeterministicRng srng(3, "kg-s"), crng(4, "kg-c");
    auto kg = tecdsa::keygen_with_shares(2, 3, srng, crng, kFastKeygen);
    CHECK(kg.server_view.joint_pubkey == ec::mul_generator(6));
}

TEST_CASE("seeded keygen agrees with the scalar-mult + decrypt oracle") {
    auto kg = fast_keygen(42, 43);
    const mpz_class& x1 = kg.server_view.local_share.secret;
    const mpz_class& x2 = kg.client_view.local_share.secret;

    // both views agree on Q
    CHECK(kg.server_view.joint_pubkey == kg.client_view.joint_pubkey);

    // independent affine oracle: Q == (x1*x2) * G
    oracle::Pt expected = oracle::pmul(oracle::fmod_n(x1 * x2), oracle::gen());
    REQUIRE(expected.has_value());
    CHECK(kg.server_view.joint_pubkey.x() == expected->first);
    CHECK(kg.server_view.joint_pubkey.y() == expected->second);

    // c_key decrypts (server side) to x1
    REQUIRE(kg.server_view.paillier_sk.has_value());
    CHECK(paillier::decrypt(*kg.server_view.paillier_sk, kg.client_view.encrypted_server_share) ==
          x1);

    // view hygiene: the client never holds the Paillier private key
    CHECK_FALSE(kg.client_view.paillier_sk.has_value());
    CHECK(kg.client_view.local_share.party == tecdsa::Party::Client);
    CHECK(kg.server_view.local_share.party == tecdsa::Party::Server);

    // the keygen log records the placeholder attestations for the proofs
    // that are intentionally not reproduced here
    CHECK(kg.log.modulus_attestation == tecdsa::kModulusAttestationTag);
    CHECK(kg.log.share_range_attestation == tecdsa::kShareRangeAttestationTag);
}

TEST_CASE("share range is enforced") {
    DeterministicRng srng(5, "kg-s"), crng(6, "kg-c");
    const mpz_class& n = ec::GroupParams::secp256k1().n;
    CHECK_THROWS_AS(tecdsa::keygen_with_shares(0, 1, srng, crng, kFastKeygen), Error);
    CHECK_THROWS_AS(tecdsa::keygen_with_shares(1, n, srng, crng, kFastKeygen), Error);
}

TEST_CASE("keygen aborts on a rejected proof") {
    DeterministicRng srng(7, "kg-s"), crng(8, "kg-c");
    tecdsa::KeygenServer server(srng, kFastKeygen);
    tecdsa::KeygenClient client(crng);

    auto r1 = server.round1();
    r1.server_proof.response = r1.server_proof.response + 1;
    CHECK_THROWS_WITH_AS(client.respond(r1, crng), doctest::Contains("ProofRejected"), Error);

    tecdsa::KeygenClient client2(crng);
    auto r2 = client2.respond(server.round1(), crng);
    r2.client_proof.response = r2.client_proof.response + 1;
    CHECK_THROWS_WITH_AS(server.finish(r2), doctest::Contains("ProofRejected"), Error);
}

TEST_CASE("keygen round payloads round-trip") {
    DeterministicRng srng(9, "kg-s"), crng(10, "kg-c");
    tecdsa::KeygenServer server(srng, kFastKeygen);
    tecdsa::KeygenClient client(crng);
    auto r1 = server.round1();
    auto r1b = tecdsa::KeygenRound1::from_bytes(r1.to_bytes());
    CHECK(r1b.server_point == r1.server_point);
    CHECK(r1b.paillier_modulus == r1.paillier_modulus);
    CHECK(r1b.encrypted_share == r1.encrypted_share);
    auto r2 = client.respond(r1b, crng);
    auto r2b = tecdsa::KeygenRound2::from_bytes(r2.to_bytes());
    CHECK(r2b.client_point == r2.client_point);
    CHECK_NOTHROW(server.finish(r2b));
}

// ---------------------------------------------------------------------------
// signing
// ---------------------------------------------------------------------------

TEST_CASE("deterministic nonces k1 = k2 = 1 give r = G.x mod n") {
    auto kg = fast_keygen(20, 21);
    DeterministicRng crng(22, "sign-rho");
    auto sig = tecdsa::sign_with_nonces(msg("unit nonce"), kg.server_view, kg.client_view, 1, 1,
                                        crng);
    CHECK(sig.r == oracle::fmod_n(ec::GroupParams::secp256k1().gx));
    CHECK(ecdsa::verify_standard(kg.server_view.joint_pubkey, msg("unit nonce"), sig));
}

TEST_CASE("seeded signing verifies and matches the single-party oracle bit-for-bit") {
    auto kg = fast_keygen(30, 31);
    const mpz_class x = oracle::fmod_n(kg.server_view.local_share.secret *
                                       kg.client_view.local_share.secret);
    oracle::Pt pub = oracle::pmul(x, oracle::gen());
    DeterministicRng nonce_rng(33, "sign-nonces");
    DeterministicRng crng(34, "sign-rho");

    for (int i = 0; i < 10; ++i) {
        Bytes m = msg("payment digest " + std::to_string(i));
        mpz_class k1 = ec::random_scalar(nonce_rng);
        mpz_class k2 = ec::random_scalar(nonce_rng);
        auto sig = tecdsa::sign_with_nonces(m, kg.server_view, kg.client_view, k1, k2, crng);

        CHECK(ecdsa::verify_standard(kg.server_view.joint_pubkey, m, sig));
        CHECK(oracle::ecdsa_verify(pub, m, sig.r, sig.s));

        auto [er, es] = oracle::ecdsa_sign_forced(x, oracle::fmod_n(k1 * k2), m);
        CHECK(sig.r == er);
        CHECK(sig.s == es);
        CHECK(ecdsa::is_low_s(sig.s));
    }
}

TEST_CASE("high s is folded to q - s") {
    auto kg = fast_keygen(40, 41);
    DeterministicRng nonce_rng(42, "sign-nonces");
    DeterministicRng crng(43, "sign-rho");
    const mpz_class& n = ec::GroupParams::secp256k1().n;
    const mpz_class x = oracle::fmod_n(kg.server_view.local_share.secret *
                                       kg.client_view.local_share.secret);

    // Hunt for a nonce pair whose raw s lands in the upper half, then check
    // the emitted signature is exactly n - s_raw.
    bool exercised = false;
    for (int i = 0; i < 20 && !exercised; ++i) {
        Bytes m = msg("normalization probe " + std::to_string(i));
        mpz_class k1 = ec::random_scalar(nonce_rng);
        mpz_class k2 = ec::random_scalar(nonce_rng);
        mpz_class k = oracle::fmod_n(k1 * k2);
        mpz_class h = oracle::msg_scalar(m);
        oracle::Pt R = oracle::pmul(k, oracle::gen());
        mpz_class r = oracle::fmod_n(R->first);
        mpz_class s_raw = oracle::fmod_n(oracle::finv(k, n) * (h + r * x));
        if (s_raw <= (n - 1) / 2) continue;
        exercised = true;
        auto sig = tecdsa::sign_with_nonces(m, kg.server_view, kg.client_view, k1, k2, crng);
        CHECK(sig.s == n - s_raw);
    }
    CHECK(exercised);
}

TEST_CASE("signing requires both private views") {
    auto kg = fast_keygen(50, 51);
    DeterministicRng rng(52, "sign-structural");

    // server session rejects a client view (no Paillier private key)
    CHECK_THROWS_AS(tecdsa::SignServerSession(kg.client_view, {msg("m")}, rng), Error);
    // client response rejects a server view
    tecdsa::SignServerSession server(kg.server_view, {msg("m")}, rng);
    CHECK_THROWS_AS(tecdsa::SignClientSession::respond(kg.server_view, server.round1(), rng),
                    Error);
    CHECK_FALSE(kg.client_view.paillier_sk.has_value());
}

TEST_CASE("tampered ephemeral proofs abort the signing session") {
    auto kg = fast_keygen(60, 61);
    DeterministicRng srng(62, "sign-s"), crng(63, "sign-c");
    tecdsa::SignServerSession server(kg.server_view, {msg("m")}, srng);

    auto r1 = server.round1();
    r1.entries[0].server_nonce_proof.response = r1.entries[0].server_nonce_proof.response + 1;
    CHECK_THROWS_WITH_AS(tecdsa::SignClientSession::respond(kg.client_view, r1, crng),
                         doctest::Contains("ProofRejected"), Error);

    auto r2 = tecdsa::SignClientSession::respond(kg.client_view, server.round1(), crng);
    auto bad = r2;
    bad.entries[0].client_nonce_proof.response = bad.entries[0].client_nonce_proof.response + 1;
    CHECK_THROWS_WITH_AS(server.finish(bad), doctest::Contains("ProofRejected"), Error);

    // corrupted ciphertext still yields a well-formed s', but the final
    // verification rejects it (the malicious-client signal)
    auto corrupt = r2;
    corrupt.entries[0].masked_share.value += 1;
    CHECK_THROWS_WITH_AS(server.finish(corrupt), doctest::Contains("InvalidSignature"), Error);
}

TEST_CASE("batched signing returns one valid signature per message") {
    auto kg = fast_keygen(70, 71);
    DeterministicRng srng(72, "sign-s"), crng(73, "sign-c");
    std::vector<Bytes> messages{msg("commitment"), msg("htlc"), msg("own commitment")};
    auto sigs = tecdsa::sign_batch(messages, kg.server_view, kg.client_view, srng, crng);
    REQUIRE(sigs.size() == 3);
    for (std::size_t i = 0; i < sigs.size(); ++i)
        CHECK(ecdsa::verify_standard(kg.server_view.joint_pubkey, messages[i], sigs[i]));
    // round payload serialization round-trips
    tecdsa::SignServerSession server(kg.server_view, messages, srng);
    auto r1 = tecdsa::SignRound1::from_bytes(server.round1().to_bytes());
    auto r2 = tecdsa::SignClientSession::respond(kg.client_view, r1, crng);
    auto r2b = tecdsa::SignRound2::from_bytes(r2.to_bytes());
    CHECK(server.finish(r2b).size() == 3);
}

// ---------------------------------------------------------------------------
// child derivation
// ---------------------------------------------------------------------------

TEST_CASE("derive then sign verifies under the child key") {
    auto kg = fast_keygen(80, 81);
    tecdsa::ChildIndex idx{3, tecdsa::KeyPurpose::CommitmentPoint};
    auto server_child = tecdsa::derive_child(kg.server_view, idx);
    auto client_child = tecdsa::derive_child(kg.client_view, idx);

    // both parties derive the same child public key
    CHECK(server_child.joint_pubkey == client_child.joint_pubkey);

    DeterministicRng srng(82, "derive-s"), crng(83, "derive-c");
    auto sig = tecdsa::sign(msg("child signing"), server_child, client_child, srng, crng);
    CHECK(ecdsa::verify_standard(server_child.joint_pubkey, msg("child signing"), sig));
    // and not under the parent
    CHECK_FALSE(ecdsa::verify_standard(kg.server_view.joint_pubkey, msg("child signing"), sig));
}

TEST_CASE("distinct indices and purposes give distinct children") {
    auto kg = fast_keygen(90, 91);
    auto q0 = tecdsa::derive_child_point(kg.server_view.joint_pubkey,
                                         {0, tecdsa::KeyPurpose::CommitmentPoint});
    auto q1 = tecdsa::derive_child_point(kg.server_view.joint_pubkey,
                                         {1, tecdsa::KeyPurpose::CommitmentPoint});
    auto f0 = tecdsa::derive_child_point(kg.server_view.joint_pubkey,
                                         {0, tecdsa::KeyPurpose::FundingKey});
    CHECK_FALSE(q0 == q1);
    CHECK_FALSE(q0 == f0);
}

TEST_CASE("derive_child homomorphism Q_idx = t*Q over 100 random indices") {
    auto kg = fast_keygen(100, 101);
    const ec::Point& q = kg.server_view.joint_pubkey;
    DeterministicRng rng(102, "derive-indices");
    for (int i = 0; i < 100; ++i) {
        tecdsa::ChildIndex idx{static_cast<std::uint32_t>(rng.below(1u << 31)),
                               rng.below(2) ? tecdsa::KeyPurpose::CommitmentPoint
                                            : tecdsa::KeyPurpose::FundingKey};
        // recompute the tweak independently: H(ser(Q) || purpose || index) mod n
        Bytes transcript;
        auto qs = q.serialize();
        transcript.insert(transcript.end(), qs.begin(), qs.end());
        transcript.push_back(static_cast<std::uint8_t>(idx.purpose));
        put_u32_be(transcript, idx.index);
        mpz_class t = oracle::fmod_n(bigint_from_bytes(sha256(transcript)));
        oracle::Pt expected = oracle::pmul(t, std::make_pair(q.x(), q.y()));

        ec::Point derived = tecdsa::derive_child_point(q, idx);
        REQUIRE(expected.has_value());
        CHECK(derived.x() == expected->first);
        CHECK(derived.y() == expected->second);
    }
}
