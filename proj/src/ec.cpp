#include "lngate/ec.hpp"

#include "lngate/hash.hpp"

namespace lngate::ec {

const GroupParams& GroupParams::secp256k1() {
    static const GroupParams params = [] {
        GroupParams g;
        g.p = mpz_class("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F");
        g.a = 0;
        g.b = 7;
        g.n = mpz_class("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141");
        g.gx = mpz_class("0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798");
        g.gy = mpz_class("0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8");
        return g;
    }();
    return params;
}

namespace {

const GroupParams& G() { return GroupParams::secp256k1(); }

mpz_class mod_p(const mpz_class& v) {
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), G().p.get_mpz_t());
    return out;
}

bool on_curve(const mpz_class& x, const mpz_class& y) {
    return mod_p(y * y - (x * x * x + G().a * x + G().b)) == 0;
}

// Jacobian coordinates: (X, Y, Z) represents affine (X/Z^2, Y/Z^3).
struct Jac {
    mpz_class X, Y, Z;  // Z == 0 encodes the point at infinity
};

Jac jac_from_affine(const Point& p) {
    if (p.is_infinity()) return {1, 1, 0};
    return {p.x(), p.y(), 1};
}

Jac jac_double(const Jac& p) {
    if (p.Z == 0 || p.Y == 0) return {1, 1, 0};
    mpz_class XX = mod_p(p.X * p.X);
    mpz_class YY = mod_p(p.Y * p.Y);
    mpz_class YYYY = mod_p(YY * YY);
    mpz_class ZZ = mod_p(p.Z * p.Z);
    mpz_class t = p.X + YY;
    mpz_class S = mod_p(2 * (t * t - XX - YYYY));
    mpz_class M = mod_p(3 * XX + G().a * ZZ * ZZ);
    mpz_class X3 = mod_p(M * M - 2 * S);
    mpz_class Y3 = mod_p(M * (S - X3) - 8 * YYYY);
    mpz_class u = p.Y + p.Z;
    mpz_class Z3 = mod_p(u * u - YY - ZZ);
    return {X3, Y3, Z3};
}

// Mixed addition with an affine (non-infinity) point.
Jac jac_add_affine(const Jac& p, const mpz_class& x2, const mpz_class& y2) {
    if (p.Z == 0) return {x2, y2, 1};
    mpz_class Z1Z1 = mod_p(p.Z * p.Z);
    mpz_class U2 = mod_p(x2 * Z1Z1);
    mpz_class S2 = mod_p(y2 * p.Z * Z1Z1);
    mpz_class H = mod_p(U2 - p.X);
    mpz_class r = mod_p(2 * (S2 - p.Y));
    if (H == 0) {
        if (r == 0) return jac_double(p);
        return {1, 1, 0};
    }
    mpz_class HH = mod_p(H * H);
    mpz_class I = mod_p(4 * HH);
    mpz_class J = mod_p(H * I);
    mpz_class V = mod_p(p.X * I);
    mpz_class X3 = mod_p(r * r - J - 2 * V);
    mpz_class Y3 = mod_p(r * (V - X3) - 2 * p.Y * J);
    mpz_class u = p.Z + H;
    mpz_class Z3 = mod_p(u * u - Z1Z1 - HH);
    return {X3, Y3, Z3};
}

Point jac_to_point(const Jac& p) {
    if (p.Z == 0) return Point{};
    mpz_class zinv = mod_inverse(p.Z, G().p);
    mpz_class zinv2 = mod_p(zinv * zinv);
    mpz_class x = mod_p(p.X * zinv2);
    mpz_class y = mod_p(p.Y * zinv2 * zinv);
    return Point::from_affine(x, y);
}

}  // namespace

Point Point::generator() { return from_affine(G().gx, G().gy); }

Point Point::from_affine(const mpz_class& x, const mpz_class& y) {
    if (!on_curve(x, y)) throw Error(Errc::BadEncoding, "point not on curve");
    Point p;
    p.infinity_ = false;
    p.x_ = x;
    p.y_ = y;
    return p;
}

const mpz_class& Point::x() const {
    if (infinity_) throw Error(Errc::Internal, "x() of infinity");
    return x_;
}

const mpz_class& Point::y() const {
    if (infinity_) throw Error(Errc::Internal, "y() of infinity");
    return y_;
}

Point Point::add(const Point& other) const {
    if (infinity_) return other;
    if (other.infinity_) return *this;
    if (x_ == other.x_) {
        if (mod_p(y_ + other.y_) == 0) return Point{};
        return dbl();
    }
    mpz_class lam = mod_p((other.y_ - y_) * mod_inverse(mod_p(other.x_ - x_), G().p));
    mpz_class x3 = mod_p(lam * lam - x_ - other.x_);
    mpz_class y3 = mod_p(lam * (x_ - x3) - y_);
    return from_affine(x3, y3);
}

Point Point::dbl() const {
    if (infinity_) return *this;
    if (y_ == 0) return Point{};
    mpz_class lam = mod_p((3 * x_ * x_ + G().a) * mod_inverse(mod_p(2 * y_), G().p));
    mpz_class x3 = mod_p(lam * lam - 2 * x_);
    mpz_class y3 = mod_p(lam * (x_ - x3) - y_);
    return from_affine(x3, y3);
}

Point Point::mul(const mpz_class& k) const {
    mpz_class e;
    mpz_mod(e.get_mpz_t(), k.get_mpz_t(), G().n.get_mpz_t());
    if (e == 0 || infinity_) return Point{};
    Jac acc{1, 1, 0};
    for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
        acc = jac_double(acc);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            acc = jac_add_affine(acc, x_, y_);
        }
    }
    return jac_to_point(acc);
}

Point Point::negate() const {
    if (infinity_) return *this;
    return from_affine(x_, mod_p(-y_));
}

bool Point::operator==(const Point& other) const {
    if (infinity_ || other.infinity_) return infinity_ == other.infinity_;
    return x_ == other.x_ && y_ == other.y_;
}

PointBytes Point::serialize() const {
    if (infinity_) throw Error(Errc::BadEncoding, "cannot serialize infinity");
    PointBytes out{};
    out[0] = mpz_tstbit(y_.get_mpz_t(), 0) ? 0x03 : 0x02;
    Bytes xb = bigint_to_bytes(x_, 32);
    std::copy(xb.begin(), xb.end(), out.begin() + 1);
    return out;
}

Point Point::parse(std::span<const std::uint8_t> in) {
    if (in.size() != kCompressedPointSize) throw Error(Errc::BadEncoding, "bad point length");
    if (in[0] != 0x02 && in[0] != 0x03) throw Error(Errc::BadEncoding, "bad point prefix");
    mpz_class x = bigint_from_bytes(in.subspan(1));
    if (x >= G().p) throw Error(Errc::BadEncoding, "x out of field");
    // p = 3 mod 4, so sqrt(v) = v^((p+1)/4) when v is a QR.
    mpz_class rhs = mod_p(x * x * x + G().a * x + G().b);
    mpz_class y = mod_pow(rhs, (G().p + 1) / 4, G().p);
    if (mod_p(y * y) != rhs) throw Error(Errc::BadEncoding, "x has no curve point");
    bool want_odd = in[0] == 0x03;
    if ((mpz_tstbit(y.get_mpz_t(), 0) != 0) != want_odd) y = mod_p(-y);
    return from_affine(x, y);
}

Point mul_generator(const mpz_class& k) { return Point::generator().mul(k); }

mpz_class hash_to_scalar(std::span<const std::uint8_t> data) {
    Hash32 h = sha256(data);
    mpz_class v = bigint_from_bytes(h);
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), G().n.get_mpz_t());
    return out;
}

mpz_class random_scalar(Rng& rng) { return random_nonzero_below(rng, G().n); }

}  // namespace lngate::ec
