#include "lngate/rng.hpp"

#include <openssl/rand.h>

#include "lngate/hash.hpp"

namespace lngate {

Bytes Rng::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

Hash32 Rng::hash32() {
    Hash32 out{};
    fill(out);
    return out;
}

std::uint64_t Rng::next_u64() {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling over the smallest power-of-two range covering bound.
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        std::uint64_t v = next_u64() & mask;
        if (v < bound) return v;
    }
}

DeterministicRng::DeterministicRng(std::uint64_t seed, const std::string& domain) {
    Bytes material;
    put_u64_be(material, seed);
    material.insert(material.end(), domain.begin(), domain.end());
    key_ = sha256(material);
}

void DeterministicRng::fill(std::span<std::uint8_t> out) {
    for (std::uint8_t& b : out) {
        if (block_used_ == 32) {
            Bytes input(key_.begin(), key_.end());
            put_u64_be(input, counter_++);
            block_ = sha256(input);
            block_used_ = 0;
        }
        b = block_[block_used_++];
    }
}

DeterministicRng DeterministicRng::fork(const std::string& domain) const {
    DeterministicRng child(0, domain);
    Bytes material(key_.begin(), key_.end());
    material.insert(material.end(), domain.begin(), domain.end());
    child.key_ = sha256(material);
    child.counter_ = 0;
    child.block_used_ = 32;
    return child;
}

void SystemRng::fill(std::span<std::uint8_t> out) {
    if (!out.empty() && RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        throw Error(Errc::Internal, "system rng failure");
}

}  // namespace lngate
