#include "lngate/threshold_ecdsa.hpp"

#include "lngate/hash.hpp"

namespace lngate::tecdsa {

namespace {

const mpz_class& order() { return ec::GroupParams::secp256k1().n; }

mpz_class mod_n(const mpz_class& v) {
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), order().get_mpz_t());
    return out;
}

mpz_class message_scalar(std::span<const std::uint8_t> message) {
    return mod_n(bigint_from_bytes(sha256(message)));
}

void check_share_range(const mpz_class& x) {
    if (x < 1 || x >= order()) throw Error(Errc::ShareOutOfRange, "share outside [1, n-1]");
}

void put_point(Bytes& out, const ec::Point& p) {
    auto ser = p.serialize();
    out.insert(out.end(), ser.begin(), ser.end());
}

ec::Point get_point(std::span<const std::uint8_t> in, std::size_t& off) {
    if (off + ec::kCompressedPointSize > in.size())
        throw Error(Errc::BadEncoding, "truncated point");
    ec::Point p = ec::Point::parse(in.subspan(off, ec::kCompressedPointSize));
    off += ec::kCompressedPointSize;
    return p;
}

void put_scalar(Bytes& out, const mpz_class& v) {
    Bytes b = bigint_to_bytes(v, ec::kScalarSize);
    out.insert(out.end(), b.begin(), b.end());
}

mpz_class get_scalar(std::span<const std::uint8_t> in, std::size_t& off) {
    if (off + ec::kScalarSize > in.size()) throw Error(Errc::BadEncoding, "truncated scalar");
    mpz_class v = bigint_from_bytes(in.subspan(off, ec::kScalarSize));
    off += ec::kScalarSize;
    return v;
}

void put_string(Bytes& out, const std::string& s) {
    put_u32_be(out, static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

std::string get_string(std::span<const std::uint8_t> in, std::size_t& off) {
    std::uint32_t len = get_u32_be(in, off);
    if (off + len > in.size()) throw Error(Errc::BadEncoding, "truncated string");
    std::string s(in.begin() + off, in.begin() + off + len);
    off += len;
    return s;
}

void put_bytes_field(Bytes& out, const Bytes& b) {
    put_u32_be(out, static_cast<std::uint32_t>(b.size()));
    out.insert(out.end(), b.begin(), b.end());
}

Bytes get_bytes_field(std::span<const std::uint8_t> in, std::size_t& off) {
    std::uint32_t len = get_u32_be(in, off);
    if (off + len > in.size()) throw Error(Errc::BadEncoding, "truncated bytes field");
    Bytes b(in.begin() + off, in.begin() + off + len);
    off += len;
    return b;
}

mpz_class dlog_challenge(const ec::Point& public_point, const ec::Point& commitment) {
    auto g = ec::Point::generator().serialize();
    auto q = public_point.serialize();
    auto a = commitment.serialize();
    Bytes transcript;
    transcript.insert(transcript.end(), g.begin(), g.end());
    transcript.insert(transcript.end(), q.begin(), q.end());
    transcript.insert(transcript.end(), a.begin(), a.end());
    return ec::hash_to_scalar(transcript);
}

}  // namespace

const char* const kModulusAttestationTag = "paillier-modulus-attestation/placeholder-v1";
const char* const kShareRangeAttestationTag = "share-range-attestation/placeholder-v1";

// ---------------------------------------------------------------------------
// Dlog proofs
// ---------------------------------------------------------------------------

DlogProof prove_dlog(const mpz_class& secret, const ec::Point& public_point, Rng& rng) {
    mpz_class nonce = ec::random_scalar(rng);
    ec::Point commitment = ec::mul_generator(nonce);
    mpz_class e = dlog_challenge(public_point, commitment);
    mpz_class z = mod_n(nonce + e * secret);
    return {commitment, e, z};
}

bool verify_dlog(const ec::Point& public_point, const DlogProof& proof) {
    if (public_point.is_infinity() || proof.commitment.is_infinity()) return false;
    if (proof.challenge < 0 || proof.challenge >= order()) return false;
    if (proof.response < 0 || proof.response >= order()) return false;
    if (proof.challenge != dlog_challenge(public_point, proof.commitment)) return false;
    ec::Point lhs = ec::mul_generator(proof.response);
    ec::Point rhs = proof.commitment.add(public_point.mul(proof.challenge));
    return lhs == rhs;
}

Bytes DlogProof::to_bytes() const {
    Bytes out;
    put_point(out, commitment);
    put_scalar(out, challenge);
    put_scalar(out, response);
    return out;
}

DlogProof DlogProof::from_bytes(std::span<const std::uint8_t> in, std::size_t& off) {
    DlogProof p;
    p.commitment = get_point(in, off);
    p.challenge = get_scalar(in, off);
    p.response = get_scalar(in, off);
    return p;
}

// ---------------------------------------------------------------------------
// Keygen
// ---------------------------------------------------------------------------

Bytes KeygenRound1::to_bytes() const {
    Bytes out;
    put_point(out, server_point);
    Bytes proof = server_proof.to_bytes();
    out.insert(out.end(), proof.begin(), proof.end());
    put_bigint(out, paillier_modulus);
    put_bigint(out, encrypted_share.value);
    put_string(out, modulus_attestation);
    put_string(out, share_range_attestation);
    return out;
}

KeygenRound1 KeygenRound1::from_bytes(std::span<const std::uint8_t> in) {
    std::size_t off = 0;
    KeygenRound1 r;
    r.server_point = get_point(in, off);
    r.server_proof = DlogProof::from_bytes(in, off);
    r.paillier_modulus = get_bigint(in, off);
    r.encrypted_share = paillier::Ciphertext{get_bigint(in, off)};
    r.modulus_attestation = get_string(in, off);
    r.share_range_attestation = get_string(in, off);
    if (off != in.size()) throw Error(Errc::BadEncoding, "trailing keygen bytes");
    return r;
}

Bytes KeygenRound2::to_bytes() const {
    Bytes out;
    put_point(out, client_point);
    Bytes proof = client_proof.to_bytes();
    out.insert(out.end(), proof.begin(), proof.end());
    return out;
}

KeygenRound2 KeygenRound2::from_bytes(std::span<const std::uint8_t> in) {
    std::size_t off = 0;
    KeygenRound2 r;
    r.client_point = get_point(in, off);
    r.client_proof = DlogProof::from_bytes(in, off);
    if (off != in.size()) throw Error(Errc::BadEncoding, "trailing keygen bytes");
    return r;
}

KeygenServer::KeygenServer(Rng& rng, const KeygenOptions& opts)
    : KeygenServer(ec::random_scalar(rng), rng, opts) {}

KeygenServer::KeygenServer(const mpz_class& share, Rng& rng, const KeygenOptions& opts)
    : share_(share) {
    check_share_range(share_);
    public_point_ = ec::mul_generator(share_);
    paillier_ = paillier::generate_keypair(rng, opts.paillier_bits);
    round1_.server_point = public_point_;
    round1_.server_proof = prove_dlog(share_, public_point_, rng);
    round1_.paillier_modulus = paillier_.pub.n;
    round1_.encrypted_share = paillier::encrypt(paillier_.pub, share_, rng);
    round1_.modulus_attestation = kModulusAttestationTag;
    round1_.share_range_attestation = kShareRangeAttestationTag;
}

JointKey KeygenServer::finish(const KeygenRound2& r2) const {
    if (!verify_dlog(r2.client_point, r2.client_proof))
        throw Error(Errc::ProofRejected, "client dlog proof failed");
    JointKey view;
    view.joint_pubkey = r2.client_point.mul(share_);  // Q = x1 * Q2
    view.encrypted_server_share = round1_.encrypted_share;
    view.paillier_pk = paillier_.pub;
    view.local_share = {Party::Server, share_, public_point_};
    view.paillier_sk = paillier_.priv;
    return view;
}

KeygenClient::KeygenClient(Rng& rng) : share_(ec::random_scalar(rng)) {}

KeygenClient::KeygenClient(const mpz_class& share, Rng& rng) : share_(share) {
    (void)rng;
    check_share_range(share_);
}

KeygenRound2 KeygenClient::respond(const KeygenRound1& r1, Rng& rng) {
    if (!verify_dlog(r1.server_point, r1.server_proof))
        throw Error(Errc::ProofRejected, "server dlog proof for Q1 failed");
    ec::Point public_point = ec::mul_generator(share_);
    KeygenRound2 r2;
    r2.client_point = public_point;
    r2.client_proof = prove_dlog(share_, public_point, rng);
    round2_ = r2;

    JointKey view;
    view.joint_pubkey = r1.server_point.mul(share_);  // Q = x2 * Q1
    view.encrypted_server_share = r1.encrypted_share;
    view.paillier_pk = paillier::PublicKey{r1.paillier_modulus,
                                           r1.paillier_modulus * r1.paillier_modulus};
    view.local_share = {Party::Client, share_, public_point};
    view_ = view;
    return r2;
}

const JointKey& KeygenClient::view() const {
    if (!view_) throw Error(Errc::Internal, "keygen client not finished");
    return *view_;
}

KeygenResult keygen(Rng& server_rng, Rng& client_rng, const KeygenOptions& opts) {
    KeygenServer server(server_rng, opts);
    KeygenClient client(client_rng);
    KeygenRound2 r2 = client.respond(server.round1(), client_rng);
    KeygenResult result;
    result.server_view = server.finish(r2);
    result.client_view = client.view();
    result.log = {server.round1().server_proof, r2.client_proof,
                  server.round1().modulus_attestation, server.round1().share_range_attestation};
    return result;
}

KeygenResult keygen_with_shares(const mpz_class& x1, const mpz_class& x2, Rng& server_rng,
                                Rng& client_rng, const KeygenOptions& opts) {
    KeygenServer server(x1, server_rng, opts);
    KeygenClient client(x2, client_rng);
    KeygenRound2 r2 = client.respond(server.round1(), client_rng);
    KeygenResult result;
    result.server_view = server.finish(r2);
    result.client_view = client.view();
    result.log = {server.round1().server_proof, r2.client_proof,
                  server.round1().modulus_attestation, server.round1().share_range_attestation};
    return result;
}

KeygenResult keygen_seeded(std::uint64_t server_seed, std::uint64_t client_seed,
                           const KeygenOptions& opts) {
    DeterministicRng server_rng(server_seed, "tecdsa-keygen-server");
    DeterministicRng client_rng(client_seed, "tecdsa-keygen-client");
    return keygen(server_rng, client_rng, opts);
}

// ---------------------------------------------------------------------------
// Child derivation
// ---------------------------------------------------------------------------

mpz_class child_tweak(const ec::Point& parent_joint_pubkey, ChildIndex idx) {
    Bytes transcript;
    put_point(transcript, parent_joint_pubkey);
    transcript.push_back(static_cast<std::uint8_t>(idx.purpose));
    put_u32_be(transcript, idx.index);
    mpz_class t = ec::hash_to_scalar(transcript);
    if (t == 0) throw Error(Errc::TweakZero, "child tweak is zero; reject index");
    return t;
}

ec::Point derive_child_point(const ec::Point& parent_joint_pubkey, ChildIndex idx) {
    return parent_joint_pubkey.mul(child_tweak(parent_joint_pubkey, idx));
}

JointKey derive_child(const JointKey& parent, ChildIndex idx) {
    mpz_class t = child_tweak(parent.joint_pubkey, idx);
    JointKey child = parent;
    child.joint_pubkey = parent.joint_pubkey.mul(t);
    if (parent.local_share.party == Party::Client) {
        child.local_share.secret = mod_n(t * parent.local_share.secret);
        child.local_share.public_point = ec::mul_generator(child.local_share.secret);
    }
    return child;
}

// ---------------------------------------------------------------------------
// Signing
// ---------------------------------------------------------------------------

Bytes SignRound1::to_bytes() const {
    Bytes out;
    put_u32_be(out, static_cast<std::uint32_t>(entries.size()));
    for (const auto& e : entries) {
        put_bytes_field(out, e.message);
        put_point(out, e.server_nonce_point);
        Bytes proof = e.server_nonce_proof.to_bytes();
        out.insert(out.end(), proof.begin(), proof.end());
    }
    return out;
}

SignRound1 SignRound1::from_bytes(std::span<const std::uint8_t> in) {
    std::size_t off = 0;
    SignRound1 r;
    std::uint32_t count = get_u32_be(in, off);
    for (std::uint32_t i = 0; i < count; ++i) {
        SignRequestEntry e;
        e.message = get_bytes_field(in, off);
        e.server_nonce_point = get_point(in, off);
        e.server_nonce_proof = DlogProof::from_bytes(in, off);
        r.entries.push_back(std::move(e));
    }
    if (off != in.size()) throw Error(Errc::BadEncoding, "trailing sign bytes");
    return r;
}

Bytes SignRound2::to_bytes() const {
    Bytes out;
    put_u32_be(out, static_cast<std::uint32_t>(entries.size()));
    for (const auto& e : entries) {
        put_point(out, e.client_nonce_point);
        Bytes proof = e.client_nonce_proof.to_bytes();
        out.insert(out.end(), proof.begin(), proof.end());
        put_bigint(out, e.masked_share.value);
    }
    return out;
}

SignRound2 SignRound2::from_bytes(std::span<const std::uint8_t> in) {
    std::size_t off = 0;
    SignRound2 r;
    std::uint32_t count = get_u32_be(in, off);
    for (std::uint32_t i = 0; i < count; ++i) {
        SignResponseEntry e;
        e.client_nonce_point = get_point(in, off);
        e.client_nonce_proof = DlogProof::from_bytes(in, off);
        e.masked_share = paillier::Ciphertext{get_bigint(in, off)};
        r.entries.push_back(std::move(e));
    }
    if (off != in.size()) throw Error(Errc::BadEncoding, "trailing sign bytes");
    return r;
}

SignServerSession::SignServerSession(const JointKey& server_view, std::vector<Bytes> messages,
                                     Rng& rng)
    : view_(server_view), messages_(std::move(messages)) {
    if (!view_.is_server() || !view_.paillier_sk)
        throw Error(Errc::Internal, "signing requires the server view");
    for (std::size_t i = 0; i < messages_.size(); ++i) nonces_.push_back(ec::random_scalar(rng));
    build_round1(rng);
}

SignServerSession::SignServerSession(const JointKey& server_view, std::vector<Bytes> messages,
                                     std::vector<mpz_class> nonces)
    : view_(server_view), messages_(std::move(messages)), nonces_(std::move(nonces)) {
    if (!view_.is_server() || !view_.paillier_sk)
        throw Error(Errc::Internal, "signing requires the server view");
    if (nonces_.size() != messages_.size())
        throw Error(Errc::Internal, "nonce count mismatch");
    DeterministicRng rng(0xC0FFEE, "sign-server-forced-nonce-proofs");
    build_round1(rng);
}

void SignServerSession::build_round1(Rng& rng) {
    round1_.entries.clear();
    for (std::size_t i = 0; i < messages_.size(); ++i) {
        check_share_range(nonces_[i]);
        SignRequestEntry e;
        e.message = messages_[i];
        e.server_nonce_point = ec::mul_generator(nonces_[i]);
        e.server_nonce_proof = prove_dlog(nonces_[i], e.server_nonce_point, rng);
        round1_.entries.push_back(std::move(e));
    }
}

std::vector<ecdsa::EcdsaSignature> SignServerSession::finish(const SignRound2& r2) const {
    if (r2.entries.size() != round1_.entries.size())
        throw Error(Errc::BadEncoding, "sign response count mismatch");
    const mpz_class& n = order();
    std::vector<ecdsa::EcdsaSignature> sigs;
    for (std::size_t i = 0; i < r2.entries.size(); ++i) {
        const auto& resp = r2.entries[i];
        if (!verify_dlog(resp.client_nonce_point, resp.client_nonce_proof))
            throw Error(Errc::ProofRejected, "client ephemeral dlog proof failed");
        ec::Point R = resp.client_nonce_point.mul(nonces_[i]);  // R = k1 * R2
        if (R.is_infinity()) throw Error(Errc::InvalidSignature, "degenerate nonce point");
        mpz_class r = mod_n(R.x());
        if (r == 0) throw Error(Errc::InvalidSignature, "r == 0");
        mpz_class s_prime = paillier::decrypt(*view_.paillier_sk, resp.masked_share);
        mpz_class s = mod_n(mod_inverse(nonces_[i], n) * mod_n(s_prime));
        if (s == 0) throw Error(Errc::InvalidSignature, "s == 0");
        ecdsa::EcdsaSignature sig{r, ecdsa::normalize_low_s(s)};
        // Final check before release: a failure here signals a misbehaving client.
        if (!ecdsa::verify_standard(view_.joint_pubkey, round1_.entries[i].message, sig))
            throw Error(Errc::InvalidSignature, "assembled signature does not verify");
        sigs.push_back(sig);
    }
    return sigs;
}

namespace {

SignRound2 client_respond_impl(const JointKey& client_view, const SignRound1& r1,
                               const std::vector<mpz_class>* forced_nonces, Rng& rng) {
    if (client_view.is_server())
        throw Error(Errc::Internal, "signing response requires the client view");
    const mpz_class& n = order();
    SignRound2 r2;
    for (std::size_t i = 0; i < r1.entries.size(); ++i) {
        const auto& req = r1.entries[i];
        if (!verify_dlog(req.server_nonce_point, req.server_nonce_proof))
            throw Error(Errc::ProofRejected, "server ephemeral dlog proof failed");
        mpz_class h = message_scalar(req.message);
        for (;;) {
            mpz_class k2 = forced_nonces ? (*forced_nonces)[i] : ec::random_scalar(rng);
            check_share_range(k2);
            ec::Point R = req.server_nonce_point.mul(k2);  // R = k2 * R1
            if (R.is_infinity()) continue;
            mpz_class r = mod_n(R.x());
            if (r == 0) {
                if (forced_nonces) throw Error(Errc::InvalidSignature, "forced nonce gives r == 0");
                continue;
            }
            mpz_class k2_inv = mod_inverse(k2, n);
            // rho masks the share term; uniform over [0, n^2) as in Lindell's scheme.
            mpz_class rho = random_below(rng, n * n);
            mpz_class c1_plain = k2_inv * h % n + rho * n;
            paillier::Ciphertext c1 = paillier::encrypt(client_view.paillier_pk, c1_plain, rng);
            mpz_class exponent = k2_inv * mod_n(client_view.local_share.secret * r) % n;
            paillier::Ciphertext c2 = paillier::homomorphic_scalar_mul(
                client_view.paillier_pk, client_view.encrypted_server_share, exponent);
            SignResponseEntry resp;
            resp.client_nonce_point = ec::mul_generator(k2);
            resp.client_nonce_proof = prove_dlog(k2, resp.client_nonce_point, rng);
            resp.masked_share =
                paillier::homomorphic_add(client_view.paillier_pk, c1, c2);
            r2.entries.push_back(std::move(resp));
            break;
        }
    }
    return r2;
}

}  // namespace

SignRound2 SignClientSession::respond(const JointKey& client_view, const SignRound1& r1,
                                      Rng& rng) {
    return client_respond_impl(client_view, r1, nullptr, rng);
}

SignRound2 SignClientSession::respond_with_nonces(const JointKey& client_view,
                                                  const SignRound1& r1,
                                                  const std::vector<mpz_class>& nonces, Rng& rng) {
    if (nonces.size() != r1.entries.size()) throw Error(Errc::Internal, "nonce count mismatch");
    return client_respond_impl(client_view, r1, &nonces, rng);
}

std::vector<ecdsa::EcdsaSignature> sign_batch(const std::vector<Bytes>& messages,
                                              const JointKey& server_view,
                                              const JointKey& client_view, Rng& server_rng,
                                              Rng& client_rng) {
    SignServerSession server(server_view, messages, server_rng);
    SignRound2 r2 = SignClientSession::respond(client_view, server.round1(), client_rng);
    return server.finish(r2);
}

ecdsa::EcdsaSignature sign(std::span<const std::uint8_t> message, const JointKey& server_view,
                           const JointKey& client_view, Rng& server_rng, Rng& client_rng) {
    std::vector<Bytes> messages{Bytes(message.begin(), message.end())};
    return sign_batch(messages, server_view, client_view, server_rng, client_rng).front();
}

ecdsa::EcdsaSignature sign_with_nonces(std::span<const std::uint8_t> message,
                                       const JointKey& server_view, const JointKey& client_view,
                                       const mpz_class& server_nonce, const mpz_class& client_nonce,
                                       Rng& client_rng) {
    std::vector<Bytes> messages{Bytes(message.begin(), message.end())};
    SignServerSession server(server_view, messages, std::vector<mpz_class>{server_nonce});
    SignRound2 r2 = SignClientSession::respond_with_nonces(client_view, server.round1(),
                                                           {client_nonce}, client_rng);
    return server.finish(r2).front();
}

}  // namespace lngate::tecdsa
