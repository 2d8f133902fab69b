#include "lngate/common.hpp"

namespace lngate {

const char* errc_name(Errc e) {
    switch (e) {
        case Errc::Ok: return "Ok";
        case Errc::ProofRejected: return "ProofRejected";
        case Errc::ShareOutOfRange: return "ShareOutOfRange";
        case Errc::InvalidSignature: return "InvalidSignature";
        case Errc::PlaintextTooLarge: return "PlaintextTooLarge";
        case Errc::TweakZero: return "TweakZero";
        case Errc::BadWitness: return "BadWitness";
        case Errc::UnknownOutpoint: return "UnknownOutpoint";
        case Errc::DoubleSpend: return "DoubleSpend";
        case Errc::PrematureSpend: return "PrematureSpend";
        case Errc::ValueOverflow: return "ValueOverflow";
        case Errc::InsufficientFunds: return "InsufficientFunds";
        case Errc::WrongPreimage: return "WrongPreimage";
        case Errc::TimeoutNotReached: return "TimeoutNotReached";
        case Errc::NotYetSuperseded: return "NotYetSuperseded";
        case Errc::NotRevoked: return "NotRevoked";
        case Errc::PendingHtlcs: return "PendingHtlcs";
        case Errc::InsufficientFeeBalance: return "InsufficientFeeBalance";
        case Errc::AuthFailure: return "AuthFailure";
        case Errc::BadMagic: return "BadMagic";
        case Errc::UnknownType: return "UnknownType";
        case Errc::NonceReplay: return "NonceReplay";
        case Errc::BadEncoding: return "BadEncoding";
        case Errc::KeygenFailed: return "KeygenFailed";
        case Errc::BridgeRejected: return "BridgeRejected";
        case Errc::FundingTimeout: return "FundingTimeout";
        case Errc::RouteFailure: return "RouteFailure";
        case Errc::ScenarioParseError: return "ScenarioParseError";
        case Errc::AssertionFailed: return "AssertionFailed";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

std::string to_hex(std::span<const std::uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw Error(Errc::BadEncoding, "odd hex length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::BadEncoding, "bad hex digit");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

void put_u32_be(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64_be(Bytes& out, std::uint64_t v) {
    put_u32_be(out, static_cast<std::uint32_t>(v >> 32));
    put_u32_be(out, static_cast<std::uint32_t>(v));
}

std::uint32_t get_u32_be(std::span<const std::uint8_t> in, std::size_t& off) {
    if (off + 4 > in.size()) throw Error(Errc::BadEncoding, "truncated u32");
    std::uint32_t v = (std::uint32_t(in[off]) << 24) | (std::uint32_t(in[off + 1]) << 16) |
                      (std::uint32_t(in[off + 2]) << 8) | std::uint32_t(in[off + 3]);
    off += 4;
    return v;
}

std::uint64_t get_u64_be(std::span<const std::uint8_t> in, std::size_t& off) {
    std::uint64_t hi = get_u32_be(in, off);
    std::uint64_t lo = get_u32_be(in, off);
    return (hi << 32) | lo;
}

}  // namespace lngate
