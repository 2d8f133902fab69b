#ifndef LNGATE_THRESHOLD_ECDSA_HPP_INCLUDED
#define LNGATE_THRESHOLD_ECDSA_HPP_INCLUDED

#include <optional>
#include <string>
#include <vector>

#include "lngate/ecdsa.hpp"
#include "lngate/paillier.hpp"

namespace lngate::tecdsa {

enum class Party : std::uint8_t { Server = 1, Client = 2 };

/// Non-interactive Schnorr proof of knowledge of the discrete log of Q.
struct DlogProof {
    ec::Point commitment;  // A = a*G
    mpz_class challenge;   // e = H(ser(G) || ser(Q) || ser(A)) mod n
    mpz_class response;    // z = a + e*x mod n

    Bytes to_bytes() const;
    static DlogProof from_bytes(std::span<const std::uint8_t> in, std::size_t& off);
};

DlogProof prove_dlog(const mpz_class& secret, const ec::Point& public_point, Rng& rng);
/// Stateless: checks z*G == A + e*Q and that e matches the transcript hash.
bool verify_dlog(const ec::Point& public_point, const DlogProof& proof);

struct PartyShare {
    Party party;
    mpz_class secret;        // x_i in [1, n-1]; never serialized into wire frames
    ec::Point public_point;  // Q_i = x_i * G
};

/// One party's view of the joint key after keygen. The server view carries the
/// Paillier private key; the client view carries none.
struct JointKey {
    ec::Point joint_pubkey;                        // Q = x1*x2*G
    paillier::Ciphertext encrypted_server_share;   // c_key = Enc_pk(x1)
    paillier::PublicKey paillier_pk;
    PartyShare local_share;
    std::optional<paillier::PrivateKey> paillier_sk;

    bool is_server() const { return local_share.party == Party::Server; }
};

// ---------------------------------------------------------------------------
// Distributed key generation (server speaks first, client answers).
// ---------------------------------------------------------------------------

struct KeygenOptions {
    unsigned paillier_bits = paillier::kDefaultModulusBits;
};

/// Placeholder transcript tags standing in for the Paillier well-formedness
/// and share range proofs, which are intentionally not reproduced here. The
/// tags keep the seam visible so real proofs can be slotted in.
extern const char* const kModulusAttestationTag;
extern const char* const kShareRangeAttestationTag;

struct KeygenRound1 {  // server -> client
    ec::Point server_point;  // Q1
    DlogProof server_proof;
    mpz_class paillier_modulus;
    paillier::Ciphertext encrypted_share;  // c_key
    std::string modulus_attestation;
    std::string share_range_attestation;

    Bytes to_bytes() const;
    static KeygenRound1 from_bytes(std::span<const std::uint8_t> in);
};

struct KeygenRound2 {  // client -> server
    ec::Point client_point;  // Q2
    DlogProof client_proof;

    Bytes to_bytes() const;
    static KeygenRound2 from_bytes(std::span<const std::uint8_t> in);
};

struct KeygenLog {
    DlogProof server_proof;
    DlogProof client_proof;
    std::string modulus_attestation;
    std::string share_range_attestation;
};

class KeygenServer {
public:
    KeygenServer(Rng& rng, const KeygenOptions& opts = {});
    /// Injected share, for tests; throws Error(ShareOutOfRange).
    KeygenServer(const mpz_class& share, Rng& rng, const KeygenOptions& opts = {});

    const KeygenRound1& round1() const { return round1_; }
    /// Verifies the client's proof; throws Error(ProofRejected).
    JointKey finish(const KeygenRound2& r2) const;

private:
    mpz_class share_;
    ec::Point public_point_;
    paillier::Keypair paillier_;
    KeygenRound1 round1_;
};

class KeygenClient {
public:
    explicit KeygenClient(Rng& rng);
    KeygenClient(const mpz_class& share, Rng& rng);

    /// Verifies the server's proof for Q1; throws Error(ProofRejected).
    KeygenRound2 respond(const KeygenRound1& r1, Rng& rng);
    /// Valid after respond().
    const JointKey& view() const;

private:
    mpz_class share_;
    std::optional<JointKey> view_;
    std::optional<KeygenRound2> round2_;
};

struct KeygenResult {
    JointKey server_view;
    JointKey client_view;
    KeygenLog log;
};

KeygenResult keygen(Rng& server_rng, Rng& client_rng, const KeygenOptions& opts = {});
KeygenResult keygen_with_shares(const mpz_class& x1, const mpz_class& x2, Rng& server_rng,
                                Rng& client_rng, const KeygenOptions& opts = {});
/// Deterministic test entry point: both parties driven by seeded generators.
KeygenResult keygen_seeded(std::uint64_t server_seed, std::uint64_t client_seed,
                           const KeygenOptions& opts = {});

// ---------------------------------------------------------------------------
// Child key derivation (public multiplicative tweak, non-hardened).
// ---------------------------------------------------------------------------

enum class KeyPurpose : std::uint8_t { FundingKey = 0, CommitmentPoint = 1 };

struct ChildIndex {
    std::uint32_t index = 0;
    KeyPurpose purpose = KeyPurpose::FundingKey;
};

/// t = H(ser(Q) || purpose || index) mod n; throws Error(TweakZero) on t == 0.
mpz_class child_tweak(const ec::Point& parent_joint_pubkey, ChildIndex idx);

/// Child public key t*Q, derivable offline from public data alone.
ec::Point derive_child_point(const ec::Point& parent_joint_pubkey, ChildIndex idx);

/// Per-view derivation: the client's effective share becomes t*x2, the server
/// share and c_key are unchanged, so signing under the child reuses the parent
/// Paillier material.
JointKey derive_child(const JointKey& parent, ChildIndex idx);

// ---------------------------------------------------------------------------
// Cooperative signing. The server opens a session over a batch of messages;
// the client answers once; the server completes standard ECDSA signatures.
// ---------------------------------------------------------------------------

struct SignRequestEntry {
    Bytes message;                // full message bytes; digest is SHA-256(message)
    ec::Point server_nonce_point;  // R1 = k1*G
    DlogProof server_nonce_proof;
};

struct SignRound1 {  // server -> client
    std::vector<SignRequestEntry> entries;

    Bytes to_bytes() const;
    static SignRound1 from_bytes(std::span<const std::uint8_t> in);
};

struct SignResponseEntry {
    ec::Point client_nonce_point;  // R2 = k2*G
    DlogProof client_nonce_proof;
    paillier::Ciphertext masked_share;  // c3 = Enc(k2^-1 H(m) + rho*n) (+) c_key^(x2 r k2^-1)
};

struct SignRound2 {  // client -> server
    std::vector<SignResponseEntry> entries;

    Bytes to_bytes() const;
    static SignRound2 from_bytes(std::span<const std::uint8_t> in);
};

class SignServerSession {
public:
    SignServerSession(const JointKey& server_view, std::vector<Bytes> messages, Rng& rng);
    /// Forced nonces, for deterministic tests.
    SignServerSession(const JointKey& server_view, std::vector<Bytes> messages,
                      std::vector<mpz_class> nonces);

    const SignRound1& round1() const { return round1_; }
    /// Completes the signatures. Throws Error(ProofRejected) on a bad client
    /// nonce proof and Error(InvalidSignature) when the assembled signature
    /// fails verification (the malicious-client signal).
    std::vector<ecdsa::EcdsaSignature> finish(const SignRound2& r2) const;

private:
    void build_round1(Rng& rng);

    JointKey view_;
    std::vector<Bytes> messages_;
    std::vector<mpz_class> nonces_;
    SignRound1 round1_;
};

class SignClientSession {
public:
    /// Verifies every server nonce proof, then produces the response.
    /// Throws Error(ProofRejected).
    static SignRound2 respond(const JointKey& client_view, const SignRound1& r1, Rng& rng);
    /// Forced client nonces, for deterministic tests (rho still drawn from rng).
    static SignRound2 respond_with_nonces(const JointKey& client_view, const SignRound1& r1,
                                          const std::vector<mpz_class>& nonces, Rng& rng);
};

ecdsa::EcdsaSignature sign(std::span<const std::uint8_t> message, const JointKey& server_view,
                           const JointKey& client_view, Rng& server_rng, Rng& client_rng);
std::vector<ecdsa::EcdsaSignature> sign_batch(const std::vector<Bytes>& messages,
                                              const JointKey& server_view,
                                              const JointKey& client_view, Rng& server_rng,
                                              Rng& client_rng);
ecdsa::EcdsaSignature sign_with_nonces(std::span<const std::uint8_t> message,
                                       const JointKey& server_view, const JointKey& client_view,
                                       const mpz_class& server_nonce, const mpz_class& client_nonce,
                                       Rng& client_rng);

}  // namespace lngate::tecdsa

#endif
