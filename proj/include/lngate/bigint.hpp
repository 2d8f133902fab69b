#ifndef LNGATE_BIGINT_HPP_INCLUDED
#define LNGATE_BIGINT_HPP_INCLUDED

#include <gmpxx.h>

#include <span>

#include "lngate/common.hpp"
#include "lngate/rng.hpp"

namespace lngate {

/// Big-endian, fixed-width serialization; throws if the value does not fit.
Bytes bigint_to_bytes(const mpz_class& v, std::size_t width);
mpz_class bigint_from_bytes(std::span<const std::uint8_t> bytes);

/// Variable-width big-endian with a u32 length prefix (wire format for
/// Paillier values).
void put_bigint(Bytes& out, const mpz_class& v);
mpz_class get_bigint(std::span<const std::uint8_t> in, std::size_t& off);

/// Uniform value in [0, bound).
mpz_class random_below(Rng& rng, const mpz_class& bound);

/// Uniform value in [1, bound-1].
mpz_class random_nonzero_below(Rng& rng, const mpz_class& bound);

/// Random probable prime with exactly `bits` bits (top bit set).
mpz_class random_prime(Rng& rng, unsigned bits);

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m);  // throws on non-invertible
mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);

}  // namespace lngate

#endif
