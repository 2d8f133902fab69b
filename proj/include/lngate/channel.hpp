#ifndef LNGATE_CHANNEL_HPP_INCLUDED
#define LNGATE_CHANNEL_HPP_INCLUDED

#include <map>
#include <optional>

#include "lngate/chain_sim.hpp"

namespace lngate::channel {

struct ChannelParams {
    Amount capacity = 0;
    std::uint32_t to_self_delay = 144;      // blocks a unilateral closer must wait
    std::uint32_t htlc_timeout_delta = 40;  // blocks until an offered HTLC refunds
    std::uint32_t confirmation_depth = 3;
    std::uint64_t service_fee_ppm = 0;  // gateway per-payment fee, parts-per-million
    Amount forwarding_base_fee = 2;     // bridge fee per routed payment
};

struct ChannelKeys {
    ec::Point iot_key;
    ec::Point gateway_key;
    ec::Point bridge_key;
    ec::Point funding_key;  // joint threshold pubkey Q
};

struct Htlc {
    Amount amount = 0;  // payment amount minus the gateway service fee
    Hash32 payment_hash{};
    std::uint32_t timeout_height = 0;  // absolute
    NodeId destination{};
    Amount fee_charged = 0;  // service fee taken when this HTLC was added
};

struct ChannelState {
    std::uint64_t state_num = 0;
    Amount iot_balance = 0;
    Amount bridge_balance = 0;
    Amount gateway_fee_balance = 0;
    std::vector<Htlc> pending_htlcs;
    // Per-state commitment points. The gateway side is a threshold child key
    // (set by the gateway after the joint derivation); the bridge side is the
    // bridge's own secret * G.
    std::optional<ec::Point> gateway_commitment_point;
    std::optional<ec::Point> bridge_commitment_point;

    Amount htlc_total() const;
};

/// round(amount * ppm / 1e6), half away from zero.
Amount service_fee(Amount amount, std::uint64_t ppm);

nlohmann::json state_to_json(const ChannelState& st);

// ---------------------------------------------------------------------------
// Per-state commitment secrets and the simplified revocation keys:
// revocation pubkey for state n = H(secret_n || "rev") * G.
// ---------------------------------------------------------------------------

class CommitmentSecretChain {
public:
    explicit CommitmentSecretChain(const Hash32& seed) : seed_(seed) {}

    Hash32 secret(std::uint64_t n) const;
    ec::Point commitment_point(std::uint64_t n) const;  // secret_n * G

    static mpz_class revocation_privkey(const Hash32& secret);
    static ec::Point revocation_pubkey(const Hash32& secret);
    ec::Point revocation_pubkey(std::uint64_t n) const;

private:
    Hash32 seed_;
};

/// Revealed peer secrets, indexed by state number.
class RevocationStore {
public:
    void store(std::uint64_t n, const Hash32& secret) { secrets_[n] = secret; }
    bool has(std::uint64_t n) const { return secrets_.contains(n); }
    const Hash32& get(std::uint64_t n) const;  // throws Error(NotRevoked)
    std::size_t size() const { return secrets_.size(); }

private:
    std::map<std::uint64_t, Hash32> secrets_;
};

// ---------------------------------------------------------------------------
// Transaction builders
// ---------------------------------------------------------------------------

/// Funding tx: one output of `capacity` under ThresholdFunding(Q), change back
/// to the IoT key, 222 sat open fee paid from the IoT utxo.
/// Throws Error(InsufficientFunds).
chain::SimTx build_funding_tx(const chain::Outpoint& iot_utxo, Amount utxo_amount,
                              Amount capacity, const ec::Point& joint_funding_key,
                              const ec::Point& iot_change_key);

struct CommitmentTx {
    chain::SimTx tx;
    std::optional<std::uint32_t> iot_vout;
    std::optional<std::uint32_t> bridge_vout;
    std::optional<std::uint32_t> fee_vout;       // the revocable output (gateway version)
    std::optional<std::uint32_t> to_self_vout;   // the revocable output (bridge version)
    std::vector<std::uint32_t> htlc_vouts;
};

enum class CloseFeePayer { None, Iot, GatewayFees };

struct CommitmentContext {
    ChannelParams params;
    ChannelKeys keys;
    chain::Outpoint funding_outpoint;
    ec::Point revocation_pubkey;  // for this version's revocable output at this state
    // Pre-signed update commitments carry no on-chain fee; a unilateral close
    // rebuilds the latest commitment with the 183 sat fee docked from the
    // initiator's side.
    Amount close_fee = 0;
    CloseFeePayer fee_payer = CloseFeePayer::None;
};

/// The modified 4-output gateway commitment (Output 1 IoT-only, Output 4
/// revocable fees). Zero-value outputs are omitted; dust folds into the fee.
CommitmentTx build_gateway_commitment(const ChannelState& st, const CommitmentContext& ctx);

/// The bridge's commitment: its to_self output is revocable-delayed, the
/// remote side pays the IoT and gateway keys directly.
CommitmentTx build_bridge_commitment(const ChannelState& st, const CommitmentContext& ctx);

enum class Initiator { Iot, Gateway };

/// Mutual close: unconditional payouts, 183 sat fee docked from the initiator.
/// Throws Error(PendingHtlcs) / Error(InsufficientFeeBalance).
chain::SimTx build_closing_tx(const ChannelState& st, const ChannelKeys& keys,
                              Initiator initiator, const chain::Outpoint& funding_outpoint);

/// Sweep of the revocable output of a confirmed revoked commitment to the
/// punisher's key. Returns nullopt when the commitment has no revocable output
/// (e.g. a state-0 gateway commitment with no fees yet). Throws
/// Error(NotRevoked) when the secret does not open the output's revocation key.
std::optional<chain::SimTx> build_penalty_tx(const CommitmentTx& revoked,
                                             const Hash32& revocation_secret,
                                             const ec::Point& punisher_key, Rng& rng);

// ---------------------------------------------------------------------------
// ChannelLedger: the negotiated channel state shared by the simulator's
// actors. Honest message delivery keeps both peers' views identical, so the
// simulator keeps one ledger per channel; divergence handling is out of scope.
// ---------------------------------------------------------------------------

enum class ChannelPhase { Opening, Active, Closed };

class ChannelLedger {
public:
    ChannelLedger(const ChannelParams& params, const ChannelKeys& keys,
                  const chain::Outpoint& funding_outpoint);

    const ChannelParams& params() const { return params_; }
    const ChannelKeys& keys() const { return keys_; }
    const chain::Outpoint& funding_outpoint() const { return funding_outpoint_; }

    ChannelState& state() { return state_; }
    const ChannelState& state() const { return state_; }
    ChannelPhase phase() const { return phase_; }
    void set_phase(ChannelPhase p) { phase_ = p; }

    /// Final version of a superseded state; throws on n >= state_num.
    const ChannelState& history(std::uint64_t n) const;
    std::uint64_t current_state_num() const { return state_.state_num; }

    /// Deducts the service fee, adds the HTLC, advances to state n+1.
    /// Throws Error(InsufficientFunds).
    Htlc apply_payment(Amount amount, const NodeId& destination, const Hash32& payment_hash,
                       std::uint32_t current_height);
    /// Moves the matching HTLC amount to the bridge balance.
    /// Throws Error(WrongPreimage).
    void settle_htlc(const Hash32& preimage);
    /// Refunds the oldest expired HTLC to the IoT balance and reverses its
    /// fee. Throws Error(TimeoutNotReached).
    void fail_htlc(std::uint32_t current_height);

    void assert_conservation() const;  // throws Error(Internal) on violation

    /// Signed commitment pair for a state (gateway version, bridge version).
    void store_commitments(std::uint64_t n, CommitmentTx gateway_version,
                           CommitmentTx bridge_version);
    const CommitmentTx& gateway_commitment(std::uint64_t n) const;
    const CommitmentTx& bridge_commitment(std::uint64_t n) const;
    bool has_commitments(std::uint64_t n) const;

    /// Owner-side reveal guard: a state's secret may only leave the owner once
    /// the next state is fully signed. Throws Error(NotYetSuperseded).
    void check_revealable(std::uint64_t n) const;

    RevocationStore& gateway_revocations() { return gateway_revocations_; }  // secrets FROM gateway
    RevocationStore& bridge_revocations() { return bridge_revocations_; }    // secrets FROM bridge
    const RevocationStore& gateway_revocations() const { return gateway_revocations_; }
    const RevocationStore& bridge_revocations() const { return bridge_revocations_; }

private:
    void snapshot_current();

    ChannelParams params_;
    ChannelKeys keys_;
    chain::Outpoint funding_outpoint_;
    ChannelState state_;
    ChannelPhase phase_ = ChannelPhase::Opening;
    std::vector<ChannelState> history_;
    std::map<std::uint64_t, std::pair<CommitmentTx, CommitmentTx>> commitments_;
    RevocationStore gateway_revocations_;
    RevocationStore bridge_revocations_;
};

}  // namespace lngate::channel

#endif
