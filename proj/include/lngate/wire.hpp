#ifndef LNGATE_WIRE_HPP_INCLUDED
#define LNGATE_WIRE_HPP_INCLUDED

#include <optional>
#include <variant>

#include "lngate/chain_sim.hpp"

namespace lngate::wire {

using Signature64 = std::array<std::uint8_t, 64>;

// ---------------------------------------------------------------------------
// Message union: LNGate control messages, the BOLT #2 subset, and the
// threshold transport. Payload bodies are fixed-layout binary: amounts are
// 8-byte BE satoshi, points 33-byte compressed, hashes 32 bytes.
// ---------------------------------------------------------------------------

enum class CloseReason : std::uint8_t {
    Mutual = 1,
    UnilateralGateway = 2,
    UnilateralBridge = 3,
};

// LNGate control (IoT <-> gateway)
struct OpenChannelRequest {
    Amount capacity = 0;
};
struct SendPayment {
    Amount amount = 0;
    NodeId destination_node_id{};
};
struct PaymentSuccess {
    Hash32 payment_hash{};
};
struct ChannelClosingRequest {};
struct ChannelClosed {
    CloseReason reason = CloseReason::Mutual;
};

// BOLT #2 subset (gateway <-> bridge)
struct OpenChannel {
    ec::PointBytes funding_pubkey{};  // the joint threshold key Q
    Amount capacity = 0;
};
struct AcceptChannel {};
struct FundingCreated {
    chain::Outpoint funding_outpoint;
    Signature64 commitment_signature{};
};
struct FundingSigned {
    Signature64 commitment_signature{};
};
struct FundingLocked {};
struct UpdateAddHtlc {
    Amount amount = 0;
    Hash32 payment_hash{};
    std::uint32_t timeout_height = 0;
    NodeId route{};  // cleartext one-hop route: the destination node
};
struct CommitmentSigned {
    Signature64 commit_sig{};
    std::optional<Signature64> htlc_sig;
};
struct RevokeAndAck {
    Hash32 commitment_secret{};
    ec::PointBytes next_commitment_point{};
};
struct Shutdown {};
struct ClosingSigned {
    Amount fee = 0;
    Signature64 sig{};
};

// Threshold transport (IoT <-> gateway)
struct ThresholdKeygen {
    std::uint8_t round = 0;
    Bytes payload;
};
struct ThresholdSign {
    std::uint8_t round = 0;
    Bytes payload;
};
struct ThresholdDerive {
    std::uint32_t index = 0;
    std::uint8_t tag = 0;  // KeyPurpose
};

using Message = std::variant<OpenChannelRequest, SendPayment, PaymentSuccess,
                             ChannelClosingRequest, ChannelClosed, OpenChannel, AcceptChannel,
                             FundingCreated, FundingSigned, FundingLocked, UpdateAddHtlc,
                             CommitmentSigned, RevokeAndAck, Shutdown, ClosingSigned,
                             ThresholdKeygen, ThresholdSign, ThresholdDerive>;

enum class MsgType : std::uint8_t {
    OpenChannelRequest = 0x01,
    SendPayment = 0x02,
    PaymentSuccess = 0x03,
    ChannelClosingRequest = 0x04,
    ChannelClosed = 0x05,
    OpenChannel = 0x10,
    AcceptChannel = 0x11,
    FundingCreated = 0x12,
    FundingSigned = 0x13,
    FundingLocked = 0x14,
    UpdateAddHtlc = 0x15,
    CommitmentSigned = 0x16,
    RevokeAndAck = 0x17,
    Shutdown = 0x18,
    ClosingSigned = 0x19,
    ThresholdKeygen = 0x20,
    ThresholdSign = 0x21,
    ThresholdDerive = 0x22,
};

MsgType message_type(const Message& msg);
const char* message_name(const Message& msg);
Bytes encode_payload(const Message& msg);
Message decode_payload(MsgType type, std::span<const std::uint8_t> payload);

// ---------------------------------------------------------------------------
// Frame layer: encrypt-then-MAC with AES-256-CTR + HMAC-SHA256.
//
//   magic(2) = 0x4C47 | version(1) = 0x01 | msg_type(1) | payload_len(4 BE)
//   | nonce(16) | ciphertext | tag(32)
//
// nonce = frame counter (8 BE) || session id (8 BE); the tag authenticates
// every preceding frame byte.
// ---------------------------------------------------------------------------

constexpr std::uint8_t kFrameMagic0 = 0x4C;  // 'L'
constexpr std::uint8_t kFrameMagic1 = 0x47;  // 'G'
constexpr std::uint8_t kFrameVersion = 0x01;
constexpr std::size_t kFrameOverhead = 2 + 1 + 1 + 4 + 16 + 32;

struct FrameKeys {
    std::array<std::uint8_t, 32> enc_key{};
    std::array<std::uint8_t, 32> mac_key{};

    /// Splits a pre-shared 64-byte secret: first half encrypts, second half
    /// authenticates.
    static FrameKeys from_shared_secret(std::span<const std::uint8_t> secret);
};

Bytes encode_frame(const Message& msg, const FrameKeys& keys, std::uint64_t counter,
                   std::uint64_t session_id);

struct DecodedFrame {
    Message message;
    std::uint64_t counter = 0;
    std::uint64_t session_id = 0;
};

/// Rejects on MAC mismatch before any payload parsing.
/// Throws Error(AuthFailure | BadMagic | UnknownType | BadEncoding).
DecodedFrame decode_frame(std::span<const std::uint8_t> frame, const FrameKeys& keys);

struct SessionMetrics {
    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_received = 0;
    std::uint64_t frame_count = 0;  // both directions
};

/// One endpoint of the encrypted IoT<->gateway link. Each direction has its
/// own session id and a strictly monotone frame counter; receive() enforces
/// the peer's counter monotonicity (NonceReplay otherwise).
class SecureLink {
public:
    SecureLink(const FrameKeys& keys, std::uint64_t send_session_id,
               std::uint64_t recv_session_id)
        : keys_(keys), send_session_id_(send_session_id), recv_session_id_(recv_session_id) {}

    Bytes send(const Message& msg);
    Message receive(std::span<const std::uint8_t> frame);

    const SessionMetrics& metrics() const { return metrics_; }
    void reset_metrics() { metrics_ = {}; }

private:
    FrameKeys keys_;
    std::uint64_t send_session_id_;
    std::uint64_t recv_session_id_;
    std::uint64_t send_counter_ = 0;
    std::optional<std::uint64_t> last_recv_counter_;
    SessionMetrics metrics_;
};

}  // namespace lngate::wire

#endif
