#include "lngate/ecdsa.hpp"

#include "lngate/hash.hpp"

namespace lngate::ecdsa {

namespace {
const mpz_class& order() { return ec::GroupParams::secp256k1().n; }

mpz_class message_scalar(std::span<const std::uint8_t> message) {
    Hash32 h = sha256(message);
    mpz_class v = bigint_from_bytes(h);
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), order().get_mpz_t());
    return out;
}
}  // namespace

std::array<std::uint8_t, 64> EcdsaSignature::serialize() const {
    std::array<std::uint8_t, 64> out{};
    Bytes rb = bigint_to_bytes(r, 32);
    Bytes sb = bigint_to_bytes(s, 32);
    std::copy(rb.begin(), rb.end(), out.begin());
    std::copy(sb.begin(), sb.end(), out.begin() + 32);
    return out;
}

EcdsaSignature EcdsaSignature::parse(std::span<const std::uint8_t> in) {
    if (in.size() != 64) throw Error(Errc::BadEncoding, "bad signature length");
    return {bigint_from_bytes(in.subspan(0, 32)), bigint_from_bytes(in.subspan(32, 32))};
}

bool is_low_s(const mpz_class& s) { return s <= (order() - 1) / 2; }

mpz_class normalize_low_s(const mpz_class& s) { return is_low_s(s) ? s : order() - s; }

EcdsaSignature sign_single(const mpz_class& secret_key, std::span<const std::uint8_t> message,
                           Rng& rng) {
    const mpz_class& n = order();
    mpz_class h = message_scalar(message);
    for (;;) {
        mpz_class k = random_nonzero_below(rng, n);
        ec::Point R = ec::mul_generator(k);
        mpz_class r;
        mpz_mod(r.get_mpz_t(), R.x().get_mpz_t(), n.get_mpz_t());
        if (r == 0) continue;
        mpz_class s = mod_inverse(k, n) * (h + r * secret_key) % n;
        if (s == 0) continue;
        return {r, normalize_low_s(s)};
    }
}

bool verify_standard(const ec::Point& pubkey, std::span<const std::uint8_t> message,
                     const EcdsaSignature& sig) {
    const mpz_class& n = order();
    if (pubkey.is_infinity()) return false;
    if (sig.r <= 0 || sig.r >= n || sig.s <= 0 || sig.s >= n) return false;
    mpz_class h = message_scalar(message);
    mpz_class w = mod_inverse(sig.s, n);
    mpz_class u1 = h * w % n;
    mpz_class u2 = sig.r * w % n;
    ec::Point R = ec::mul_generator(u1).add(pubkey.mul(u2));
    if (R.is_infinity()) return false;
    mpz_class rx;
    mpz_mod(rx.get_mpz_t(), R.x().get_mpz_t(), n.get_mpz_t());
    return rx == sig.r;
}

}  // namespace lngate::ecdsa
