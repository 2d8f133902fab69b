#ifndef LNGATE_COMMON_HPP_INCLUDED
#define LNGATE_COMMON_HPP_INCLUDED

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lngate {

using Bytes = std::vector<std::uint8_t>;
using Hash32 = std::array<std::uint8_t, 32>;

/// LN node identifiers are pubkey-shaped 33-byte values.
using NodeId = std::array<std::uint8_t, 33>;

/// All balances and fees are integer satoshi.
using Amount = std::int64_t;

constexpr Amount kSatPerBtc = 100'000'000;

/// Dust threshold: outputs below this are folded into the transaction fee.
constexpr Amount kDustLimit = 546;

enum class Errc {
    Ok = 0,
    // threshold / crypto
    ProofRejected,
    ShareOutOfRange,
    InvalidSignature,
    PlaintextTooLarge,
    TweakZero,
    // chain
    BadWitness,
    UnknownOutpoint,
    DoubleSpend,
    PrematureSpend,
    ValueOverflow,
    // channel
    InsufficientFunds,
    WrongPreimage,
    TimeoutNotReached,
    NotYetSuperseded,
    NotRevoked,
    PendingHtlcs,
    InsufficientFeeBalance,
    // wire
    AuthFailure,
    BadMagic,
    UnknownType,
    NonceReplay,
    BadEncoding,
    // flows
    KeygenFailed,
    BridgeRejected,
    FundingTimeout,
    RouteFailure,
    // runner
    ScenarioParseError,
    AssertionFailed,
    Internal,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    explicit Error(Errc code) : Error(code, "") {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(const std::string& hex);  // throws Error(BadEncoding)

// Big-endian integer helpers used by every fixed-layout encoding in the project.
void put_u32_be(Bytes& out, std::uint32_t v);
void put_u64_be(Bytes& out, std::uint64_t v);
std::uint32_t get_u32_be(std::span<const std::uint8_t> in, std::size_t& off);
std::uint64_t get_u64_be(std::span<const std::uint8_t> in, std::size_t& off);

}  // namespace lngate

#endif
