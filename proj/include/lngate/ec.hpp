#ifndef LNGATE_EC_HPP_INCLUDED
#define LNGATE_EC_HPP_INCLUDED

#include <optional>

#include "lngate/bigint.hpp"
#include "lngate/common.hpp"

namespace lngate::ec {

/// Short-Weierstrass y^2 = x^3 + a x + b over F_p, prime group order n.
/// The default parameterization is secp256k1.
struct GroupParams {
    mpz_class p;   // field prime
    mpz_class a;
    mpz_class b;
    mpz_class n;   // group order (prime)
    mpz_class gx;  // generator
    mpz_class gy;

    static const GroupParams& secp256k1();
};

constexpr std::size_t kCompressedPointSize = 33;
constexpr std::size_t kScalarSize = 32;

using PointBytes = std::array<std::uint8_t, kCompressedPointSize>;

class Point {
public:
    Point() = default;  // point at infinity

    static Point generator();
    static Point from_affine(const mpz_class& x, const mpz_class& y);  // validates on-curve

    bool is_infinity() const { return infinity_; }
    const mpz_class& x() const;
    const mpz_class& y() const;

    Point add(const Point& other) const;
    Point dbl() const;
    /// Scalar multiplication; k is reduced mod n. Not constant time — this
    /// library drives a simulator, not a production signer.
    Point mul(const mpz_class& k) const;
    Point negate() const;

    bool operator==(const Point& other) const;

    PointBytes serialize() const;  // 33-byte compressed, throws on infinity
    static Point parse(std::span<const std::uint8_t> in);  // throws Error(BadEncoding)

private:
    bool infinity_ = true;
    mpz_class x_;
    mpz_class y_;
};

/// k * G for the default generator.
Point mul_generator(const mpz_class& k);

/// SHA-256(data) reduced into [0, n).
mpz_class hash_to_scalar(std::span<const std::uint8_t> data);

/// Uniform scalar in [1, n-1].
mpz_class random_scalar(Rng& rng);

}  // namespace lngate::ec

#endif
