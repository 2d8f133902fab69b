#ifndef LNGATE_RNG_HPP_INCLUDED
#define LNGATE_RNG_HPP_INCLUDED

#include <cstdint>
#include <span>

#include "lngate/common.hpp"

namespace lngate {

class Rng {
public:
    virtual ~Rng() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    Bytes bytes(std::size_t n);
    Hash32 hash32();
    std::uint64_t next_u64();
    /// Uniform in [0, bound) via rejection sampling; bound > 0.
    std::uint64_t below(std::uint64_t bound);
};

/// SHA-256 counter stream seeded from a 64-bit value (optionally domain
/// separated). Identical seeds replay identical byte streams on every
/// platform, which is what scenario determinism rests on.
class DeterministicRng : public Rng {
public:
    explicit DeterministicRng(std::uint64_t seed, const std::string& domain = "");
    void fill(std::span<std::uint8_t> out) override;

    /// Stable child generator for per-actor streams.
    DeterministicRng fork(const std::string& domain) const;

private:
    Hash32 key_{};
    std::uint64_t counter_ = 0;
    Hash32 block_{};
    std::size_t block_used_ = 32;  // force refill on first use
};

/// Process CSPRNG (OpenSSL RAND_bytes).
class SystemRng : public Rng {
public:
    void fill(std::span<std::uint8_t> out) override;
};

}  // namespace lngate

#endif
