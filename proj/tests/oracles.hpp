#ifndef LNGATE_TESTS_ORACLES_HPP_INCLUDED
#define LNGATE_TESTS_ORACLES_HPP_INCLUDED

// Independent reference implementations used as test oracles. These stay
// deliberately separate from the library code paths they check: affine
// arithmetic with per-step inversions, no shared point type, no shared
// signer. Keep them dumb.

#include <gmpxx.h>

#include <optional>
#include <span>
#include <utility>

#include "lngate/hash.hpp"

namespace oracle {

struct Curve {
    mpz_class p, n, gx, gy;
};

inline const Curve& secp256k1() {
    static const Curve c{
        mpz_class("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F"),
        mpz_class("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141"),
        mpz_class("0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798"),
        mpz_class("0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8")};
    return c;
}

// Affine point; nullopt is the point at infinity.
using Pt = std::optional<std::pair<mpz_class, mpz_class>>;

inline mpz_class fmod_p(const mpz_class& v) {
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), secp256k1().p.get_mpz_t());
    return out;
}

inline mpz_class fmod_n(const mpz_class& v) {
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), secp256k1().n.get_mpz_t());
    return out;
}

inline mpz_class finv(const mpz_class& a, const mpz_class& m) {
    mpz_class out;
    mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return out;
}

inline Pt padd(const Pt& a, const Pt& b) {
    const mpz_class& p = secp256k1().p;
    if (!a) return b;
    if (!b) return a;
    const auto& [x1, y1] = *a;
    const auto& [x2, y2] = *b;
    if (x1 == x2 && fmod_p(y1 + y2) == 0) return std::nullopt;
    mpz_class lam;
    if (x1 == x2 && y1 == y2) {
        lam = fmod_p(3 * x1 * x1 * finv(fmod_p(2 * y1), p));
    } else {
        lam = fmod_p((y2 - y1) * finv(fmod_p(x2 - x1), p));
    }
    mpz_class x3 = fmod_p(lam * lam - x1 - x2);
    mpz_class y3 = fmod_p(lam * (x1 - x3) - y1);
    return std::make_pair(x3, y3);
}

inline Pt pmul(mpz_class k, Pt base) {
    k = fmod_n(k);
    Pt r = std::nullopt;
    while (k > 0) {
        if (mpz_tstbit(k.get_mpz_t(), 0)) r = padd(r, base);
        base = padd(base, base);
        k >>= 1;
    }
    return r;
}

inline Pt gen() { return std::make_pair(secp256k1().gx, secp256k1().gy); }

inline mpz_class msg_scalar(std::span<const std::uint8_t> message) {
    auto h = lngate::sha256(message);
    mpz_class v;
    mpz_import(v.get_mpz_t(), h.size(), 1, 1, 1, 0, h.data());
    return fmod_n(v);
}

// Textbook ECDSA with a forced nonce, low-s normalized the same way every
// signer in the project is expected to normalize.
inline std::pair<mpz_class, mpz_class> ecdsa_sign_forced(const mpz_class& x, const mpz_class& k,
                                                         std::span<const std::uint8_t> message) {
    const mpz_class& n = secp256k1().n;
    mpz_class h = msg_scalar(message);
    Pt R = pmul(k, gen());
    mpz_class r = fmod_n(R->first);
    mpz_class s = fmod_n(finv(k, n) * (h + r * x));
    if (s > (n - 1) / 2) s = n - s;
    return {r, s};
}

inline bool ecdsa_verify(const Pt& pub, std::span<const std::uint8_t> message, const mpz_class& r,
                         const mpz_class& s) {
    const mpz_class& n = secp256k1().n;
    if (r <= 0 || r >= n || s <= 0 || s >= n) return false;
    mpz_class h = msg_scalar(message);
    mpz_class w = finv(s, n);
    Pt R = padd(pmul(fmod_n(h * w), gen()), pmul(fmod_n(r * w), pub));
    return R && fmod_n(R->first) == r;
}

}  // namespace oracle

#endif
