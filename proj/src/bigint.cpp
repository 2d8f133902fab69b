#include "lngate/bigint.hpp"

namespace lngate {

Bytes bigint_to_bytes(const mpz_class& v, std::size_t width) {
    if (v < 0) throw Error(Errc::BadEncoding, "negative bigint");
    std::size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    if (v == 0) need = 0;
    if (need > width) throw Error(Errc::BadEncoding, "bigint wider than field");
    Bytes out(width, 0);
    if (need > 0) {
        std::size_t written = 0;
        mpz_export(out.data() + (width - need), &written, 1, 1, 1, 0, v.get_mpz_t());
    }
    return out;
}

mpz_class bigint_from_bytes(std::span<const std::uint8_t> bytes) {
    mpz_class v;
    if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return v;
}

void put_bigint(Bytes& out, const mpz_class& v) {
    std::size_t width = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    if (v == 0) width = 0;
    Bytes body = bigint_to_bytes(v, width);
    put_u32_be(out, static_cast<std::uint32_t>(body.size()));
    out.insert(out.end(), body.begin(), body.end());
}

mpz_class get_bigint(std::span<const std::uint8_t> in, std::size_t& off) {
    std::uint32_t len = get_u32_be(in, off);
    if (off + len > in.size()) throw Error(Errc::BadEncoding, "truncated bigint");
    mpz_class v = bigint_from_bytes(in.subspan(off, len));
    off += len;
    return v;
}

mpz_class random_below(Rng& rng, const mpz_class& bound) {
    if (bound <= 0) throw Error(Errc::Internal, "random_below: bound <= 0");
    std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    std::size_t width = (bits + 7) / 8;
    unsigned excess = static_cast<unsigned>(width * 8 - bits);
    for (;;) {
        Bytes buf = rng.bytes(width);
        buf[0] &= static_cast<std::uint8_t>(0xFF >> excess);
        mpz_class v = bigint_from_bytes(buf);
        if (v < bound) return v;
    }
}

mpz_class random_nonzero_below(Rng& rng, const mpz_class& bound) {
    for (;;) {
        mpz_class v = random_below(rng, bound);
        if (v != 0) return v;
    }
}

mpz_class random_prime(Rng& rng, unsigned bits) {
    if (bits < 8) throw Error(Errc::Internal, "prime too small");
    for (;;) {
        mpz_class candidate = random_below(rng, mpz_class(1) << bits);
        mpz_setbit(candidate.get_mpz_t(), bits - 1);
        mpz_setbit(candidate.get_mpz_t(), 0);
        if (mpz_probab_prime_p(candidate.get_mpz_t(), 30) > 0) return candidate;
    }
}

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
    mpz_class out;
    if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error(Errc::Internal, "non-invertible element");
    return out;
}

mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return out;
}

}  // namespace lngate
