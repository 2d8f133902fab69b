#include "lngate/wire.hpp"

#include "lngate/hash.hpp"

namespace lngate::wire {

namespace {

template <class T>
struct always_false : std::false_type {};

void put_array(Bytes& out, std::span<const std::uint8_t> a) {
    out.insert(out.end(), a.begin(), a.end());
}

template <std::size_t N>
std::array<std::uint8_t, N> get_array(std::span<const std::uint8_t> in, std::size_t& off) {
    if (off + N > in.size()) throw Error(Errc::BadEncoding, "truncated field");
    std::array<std::uint8_t, N> a{};
    std::copy(in.begin() + off, in.begin() + off + N, a.begin());
    off += N;
    return a;
}

std::uint8_t get_u8(std::span<const std::uint8_t> in, std::size_t& off) {
    if (off + 1 > in.size()) throw Error(Errc::BadEncoding, "truncated u8");
    return in[off++];
}

void put_var_bytes(Bytes& out, const Bytes& b) {
    put_u32_be(out, static_cast<std::uint32_t>(b.size()));
    put_array(out, b);
}

Bytes get_var_bytes(std::span<const std::uint8_t> in, std::size_t& off) {
    std::uint32_t len = get_u32_be(in, off);
    if (off + len > in.size()) throw Error(Errc::BadEncoding, "truncated bytes");
    Bytes b(in.begin() + off, in.begin() + off + len);
    off += len;
    return b;
}

void expect_consumed(std::span<const std::uint8_t> in, std::size_t off) {
    if (off != in.size()) throw Error(Errc::BadEncoding, "trailing payload bytes");
}

}  // namespace

MsgType message_type(const Message& msg) {
    return std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, OpenChannelRequest>) return MsgType::OpenChannelRequest;
            else if constexpr (std::is_same_v<T, SendPayment>) return MsgType::SendPayment;
            else if constexpr (std::is_same_v<T, PaymentSuccess>) return MsgType::PaymentSuccess;
            else if constexpr (std::is_same_v<T, ChannelClosingRequest>)
                return MsgType::ChannelClosingRequest;
            else if constexpr (std::is_same_v<T, ChannelClosed>) return MsgType::ChannelClosed;
            else if constexpr (std::is_same_v<T, OpenChannel>) return MsgType::OpenChannel;
            else if constexpr (std::is_same_v<T, AcceptChannel>) return MsgType::AcceptChannel;
            else if constexpr (std::is_same_v<T, FundingCreated>) return MsgType::FundingCreated;
            else if constexpr (std::is_same_v<T, FundingSigned>) return MsgType::FundingSigned;
            else if constexpr (std::is_same_v<T, FundingLocked>) return MsgType::FundingLocked;
            else if constexpr (std::is_same_v<T, UpdateAddHtlc>) return MsgType::UpdateAddHtlc;
            else if constexpr (std::is_same_v<T, CommitmentSigned>)
                return MsgType::CommitmentSigned;
            else if constexpr (std::is_same_v<T, RevokeAndAck>) return MsgType::RevokeAndAck;
            else if constexpr (std::is_same_v<T, Shutdown>) return MsgType::Shutdown;
            else if constexpr (std::is_same_v<T, ClosingSigned>) return MsgType::ClosingSigned;
            else if constexpr (std::is_same_v<T, ThresholdKeygen>) return MsgType::ThresholdKeygen;
            else if constexpr (std::is_same_v<T, ThresholdSign>) return MsgType::ThresholdSign;
            else if constexpr (std::is_same_v<T, ThresholdDerive>) return MsgType::ThresholdDerive;
            else static_assert(always_false<T>::value);
        },
        msg);
}

const char* message_name(const Message& msg) {
    switch (message_type(msg)) {
        case MsgType::OpenChannelRequest: return "OpenChannelRequest";
        case MsgType::SendPayment: return "SendPayment";
        case MsgType::PaymentSuccess: return "PaymentSuccess";
        case MsgType::ChannelClosingRequest: return "ChannelClosingRequest";
        case MsgType::ChannelClosed: return "ChannelClosed";
        case MsgType::OpenChannel: return "open_channel";
        case MsgType::AcceptChannel: return "accept_channel";
        case MsgType::FundingCreated: return "funding_created";
        case MsgType::FundingSigned: return "funding_signed";
        case MsgType::FundingLocked: return "funding_locked";
        case MsgType::UpdateAddHtlc: return "update_add_htlc";
        case MsgType::CommitmentSigned: return "commitment_signed";
        case MsgType::RevokeAndAck: return "revoke_and_ack";
        case MsgType::Shutdown: return "shutdown";
        case MsgType::ClosingSigned: return "closing_signed";
        case MsgType::ThresholdKeygen: return "threshold_keygen";
        case MsgType::ThresholdSign: return "threshold_sign";
        case MsgType::ThresholdDerive: return "threshold_derive";
    }
    return "unknown";
}

Bytes encode_payload(const Message& msg) {
    Bytes out;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, OpenChannelRequest>) {
                put_u64_be(out, static_cast<std::uint64_t>(m.capacity));
            } else if constexpr (std::is_same_v<T, SendPayment>) {
                put_u64_be(out, static_cast<std::uint64_t>(m.amount));
                put_array(out, m.destination_node_id);
            } else if constexpr (std::is_same_v<T, PaymentSuccess>) {
                put_array(out, m.payment_hash);
            } else if constexpr (std::is_same_v<T, ChannelClosingRequest>) {
                // empty body
            } else if constexpr (std::is_same_v<T, ChannelClosed>) {
                out.push_back(static_cast<std::uint8_t>(m.reason));
            } else if constexpr (std::is_same_v<T, OpenChannel>) {
                put_array(out, m.funding_pubkey);
                put_u64_be(out, static_cast<std::uint64_t>(m.capacity));
            } else if constexpr (std::is_same_v<T, AcceptChannel>) {
            } else if constexpr (std::is_same_v<T, FundingCreated>) {
                put_array(out, m.funding_outpoint.txid);
                put_u32_be(out, m.funding_outpoint.vout);
                put_array(out, m.commitment_signature);
            } else if constexpr (std::is_same_v<T, FundingSigned>) {
                put_array(out, m.commitment_signature);
            } else if constexpr (std::is_same_v<T, FundingLocked>) {
            } else if constexpr (std::is_same_v<T, UpdateAddHtlc>) {
                put_u64_be(out, static_cast<std::uint64_t>(m.amount));
                put_array(out, m.payment_hash);
                put_u32_be(out, m.timeout_height);
                put_array(out, m.route);
            } else if constexpr (std::is_same_v<T, CommitmentSigned>) {
                put_array(out, m.commit_sig);
                out.push_back(m.htlc_sig ? 1 : 0);
                if (m.htlc_sig) put_array(out, *m.htlc_sig);
            } else if constexpr (std::is_same_v<T, RevokeAndAck>) {
                put_array(out, m.commitment_secret);
                put_array(out, m.next_commitment_point);
            } else if constexpr (std::is_same_v<T, Shutdown>) {
            } else if constexpr (std::is_same_v<T, ClosingSigned>) {
                put_u64_be(out, static_cast<std::uint64_t>(m.fee));
                put_array(out, m.sig);
            } else if constexpr (std::is_same_v<T, ThresholdKeygen> ||
                                 std::is_same_v<T, ThresholdSign>) {
                out.push_back(m.round);
                put_var_bytes(out, m.payload);
            } else if constexpr (std::is_same_v<T, ThresholdDerive>) {
                put_u32_be(out, m.index);
                out.push_back(m.tag);
            } else {
                static_assert(always_false<T>::value);
            }
        },
        msg);
    return out;
}

Message decode_payload(MsgType type, std::span<const std::uint8_t> in) {
    std::size_t off = 0;
    switch (type) {
        case MsgType::OpenChannelRequest: {
            OpenChannelRequest m{static_cast<Amount>(get_u64_be(in, off))};
            expect_consumed(in, off);
            return m;
        }
        case MsgType::SendPayment: {
            SendPayment m;
            m.amount = static_cast<Amount>(get_u64_be(in, off));
            m.destination_node_id = get_array<33>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::PaymentSuccess: {
            PaymentSuccess m;
            m.payment_hash = get_array<32>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::ChannelClosingRequest: {
            expect_consumed(in, off);
            return ChannelClosingRequest{};
        }
        case MsgType::ChannelClosed: {
            ChannelClosed m{static_cast<CloseReason>(get_u8(in, off))};
            expect_consumed(in, off);
            return m;
        }
        case MsgType::OpenChannel: {
            OpenChannel m;
            m.funding_pubkey = get_array<33>(in, off);
            m.capacity = static_cast<Amount>(get_u64_be(in, off));
            expect_consumed(in, off);
            return m;
        }
        case MsgType::AcceptChannel: {
            expect_consumed(in, off);
            return AcceptChannel{};
        }
        case MsgType::FundingCreated: {
            FundingCreated m;
            m.funding_outpoint.txid = get_array<32>(in, off);
            m.funding_outpoint.vout = get_u32_be(in, off);
            m.commitment_signature = get_array<64>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::FundingSigned: {
            FundingSigned m;
            m.commitment_signature = get_array<64>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::FundingLocked: {
            expect_consumed(in, off);
            return FundingLocked{};
        }
        case MsgType::UpdateAddHtlc: {
            UpdateAddHtlc m;
            m.amount = static_cast<Amount>(get_u64_be(in, off));
            m.payment_hash = get_array<32>(in, off);
            m.timeout_height = get_u32_be(in, off);
            m.route = get_array<33>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::CommitmentSigned: {
            CommitmentSigned m;
            m.commit_sig = get_array<64>(in, off);
            if (get_u8(in, off)) m.htlc_sig = get_array<64>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::RevokeAndAck: {
            RevokeAndAck m;
            m.commitment_secret = get_array<32>(in, off);
            m.next_commitment_point = get_array<33>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::Shutdown: {
            expect_consumed(in, off);
            return Shutdown{};
        }
        case MsgType::ClosingSigned: {
            ClosingSigned m;
            m.fee = static_cast<Amount>(get_u64_be(in, off));
            m.sig = get_array<64>(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::ThresholdKeygen: {
            ThresholdKeygen m;
            m.round = get_u8(in, off);
            m.payload = get_var_bytes(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::ThresholdSign: {
            ThresholdSign m;
            m.round = get_u8(in, off);
            m.payload = get_var_bytes(in, off);
            expect_consumed(in, off);
            return m;
        }
        case MsgType::ThresholdDerive: {
            ThresholdDerive m;
            m.index = get_u32_be(in, off);
            m.tag = get_u8(in, off);
            expect_consumed(in, off);
            return m;
        }
    }
    throw Error(Errc::UnknownType, "unrecognized message type byte");
}

FrameKeys FrameKeys::from_shared_secret(std::span<const std::uint8_t> secret) {
    if (secret.size() != 64) throw Error(Errc::BadEncoding, "shared secret must be 64 bytes");
    FrameKeys keys;
    std::copy(secret.begin(), secret.begin() + 32, keys.enc_key.begin());
    std::copy(secret.begin() + 32, secret.end(), keys.mac_key.begin());
    return keys;
}

Bytes encode_frame(const Message& msg, const FrameKeys& keys, std::uint64_t counter,
                   std::uint64_t session_id) {
    Bytes payload = encode_payload(msg);
    std::array<std::uint8_t, 16> nonce{};
    Bytes nonce_bytes;
    put_u64_be(nonce_bytes, counter);
    put_u64_be(nonce_bytes, session_id);
    std::copy(nonce_bytes.begin(), nonce_bytes.end(), nonce.begin());

    Bytes ciphertext = aes256_ctr(keys.enc_key, nonce, payload);

    Bytes frame;
    frame.push_back(kFrameMagic0);
    frame.push_back(kFrameMagic1);
    frame.push_back(kFrameVersion);
    frame.push_back(static_cast<std::uint8_t>(message_type(msg)));
    put_u32_be(frame, static_cast<std::uint32_t>(ciphertext.size()));
    frame.insert(frame.end(), nonce.begin(), nonce.end());
    frame.insert(frame.end(), ciphertext.begin(), ciphertext.end());
    Hash32 tag = hmac_sha256(keys.mac_key, frame);
    frame.insert(frame.end(), tag.begin(), tag.end());
    return frame;
}

DecodedFrame decode_frame(std::span<const std::uint8_t> frame, const FrameKeys& keys) {
    if (frame.size() < kFrameOverhead) throw Error(Errc::AuthFailure, "frame too short");
    if (frame[0] != kFrameMagic0 || frame[1] != kFrameMagic1)
        throw Error(Errc::BadMagic, "bad frame magic");
    if (frame[2] != kFrameVersion) throw Error(Errc::BadMagic, "unsupported frame version");
    std::size_t off = 4;
    std::uint32_t payload_len = get_u32_be(frame, off);
    if (frame.size() != kFrameOverhead + payload_len)
        throw Error(Errc::AuthFailure, "frame length mismatch");

    // MAC check comes before any payload parsing.
    std::span<const std::uint8_t> macd = frame.subspan(0, frame.size() - 32);
    Hash32 expected = hmac_sha256(keys.mac_key, macd);
    std::span<const std::uint8_t> tag = frame.subspan(frame.size() - 32);
    if (!std::equal(expected.begin(), expected.end(), tag.begin()))
        throw Error(Errc::AuthFailure, "frame tag mismatch");

    std::array<std::uint8_t, 16> nonce{};
    std::copy(frame.begin() + 8, frame.begin() + 24, nonce.begin());
    std::size_t noff = 0;
    std::uint64_t counter = get_u64_be(nonce, noff);
    std::uint64_t session_id = get_u64_be(nonce, noff);

    Bytes payload = aes256_ctr(keys.enc_key, nonce, frame.subspan(24, payload_len));

    std::uint8_t type_byte = frame[3];
    switch (type_byte) {
        case 0x01: case 0x02: case 0x03: case 0x04: case 0x05:
        case 0x10: case 0x11: case 0x12: case 0x13: case 0x14:
        case 0x15: case 0x16: case 0x17: case 0x18: case 0x19:
        case 0x20: case 0x21: case 0x22:
            break;
        default:
            throw Error(Errc::UnknownType, "unrecognized message type byte");
    }
    Message msg = decode_payload(static_cast<MsgType>(type_byte), payload);
    return {std::move(msg), counter, session_id};
}

Bytes SecureLink::send(const Message& msg) {
    Bytes frame = encode_frame(msg, keys_, send_counter_++, send_session_id_);
    metrics_.bytes_sent += frame.size();
    metrics_.frame_count += 1;
    return frame;
}

Message SecureLink::receive(std::span<const std::uint8_t> frame) {
    DecodedFrame decoded = decode_frame(frame, keys_);
    if (decoded.session_id != recv_session_id_)
        throw Error(Errc::NonceReplay, "frame from a different session");
    if (last_recv_counter_ && decoded.counter <= *last_recv_counter_)
        throw Error(Errc::NonceReplay, "frame counter not monotone");
    last_recv_counter_ = decoded.counter;
    metrics_.bytes_received += frame.size();
    metrics_.frame_count += 1;
    return std::move(decoded.message);
}

}  // namespace lngate::wire
