#ifndef LNGATE_CHAIN_SIM_HPP_INCLUDED
#define LNGATE_CHAIN_SIM_HPP_INCLUDED

#include <json.hpp>

#include <compare>
#include <deque>
#include <map>
#include <variant>

#include "lngate/ecdsa.hpp"

namespace lngate::chain {

struct Outpoint {
    Hash32 txid{};
    std::uint32_t vout = 0;

    auto operator<=>(const Outpoint&) const = default;
};

// ---------------------------------------------------------------------------
// Spend conditions: the closed predicate set standing in for Bitcoin Script.
// ---------------------------------------------------------------------------

struct KeySpend {
    ec::Point owner;
};

struct DelayedKeySpend {
    ec::Point owner;
    std::uint32_t delay = 0;  // confirmations the output must age before spend
};

struct RevocableDelayed {
    ec::Point owner;
    std::uint32_t delay = 0;
    ec::Point revocation;  // revocation path, valid at any height
};

struct HtlcOffered {
    Hash32 payment_hash{};
    ec::Point recipient;  // preimage path
    ec::Point refund;     // timeout path
    std::uint32_t timeout_height = 0;
};

struct ThresholdFunding {
    ec::Point joint_pubkey;  // one signature under the joint key spends it
};

using SpendCondition =
    std::variant<KeySpend, DelayedKeySpend, RevocableDelayed, HtlcOffered, ThresholdFunding>;

// ---------------------------------------------------------------------------
// Witnesses: each arm satisfies exactly one spend-condition path.
// ---------------------------------------------------------------------------

struct SigWitness {
    ec::Point pubkey;
    ecdsa::EcdsaSignature sig;
};

struct RevocationWitness {
    ec::Point revocation_pubkey;
    ecdsa::EcdsaSignature sig;
};

struct PreimageWitness {
    Hash32 preimage{};
    ec::Point pubkey;
    ecdsa::EcdsaSignature sig;
};

struct TimeoutWitness {
    ec::Point pubkey;
    ecdsa::EcdsaSignature sig;
};

using Witness =
    std::variant<std::monostate, SigWitness, RevocationWitness, PreimageWitness, TimeoutWitness>;

struct TxInput {
    Outpoint outpoint;
    Witness witness;
};

struct TxOutput {
    Amount amount = 0;
    SpendCondition condition;
};

struct SimTx {
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    Amount fee = 0;  // declared fee; validation requires sum(in) >= sum(out) + fee

    /// Canonical serialization with witnesses zeroed: both the signing message
    /// and the preimage of txid(), so ids are stable across signing.
    Bytes signing_message() const;
    Hash32 txid() const;
    /// Full serialization including witnesses (chain dumps).
    Bytes serialize() const;
};

struct SpendContext {
    std::uint32_t chain_height = 0;
    std::uint32_t output_confirmations = 0;
    std::span<const std::uint8_t> signing_message;
};

/// Pure predicate evaluation; signature checks use the standard ECDSA verifier
/// over the spending transaction's digest.
bool verify_witness(const SpendCondition& cond, const Witness& wit, const SpendContext& ctx);
/// Reason-returning variant backing broadcast() error reporting.
Errc check_witness(const SpendCondition& cond, const Witness& wit, const SpendContext& ctx);

struct BroadcastResult {
    bool accepted = false;
    Errc reason = Errc::Ok;
    std::string detail;
};

struct UtxoEntry {
    Amount amount = 0;
    SpendCondition condition;
    std::uint32_t created_height = 0;  // height of the including block
};

struct Block {
    std::uint32_t height = 0;
    std::vector<SimTx> txs;
};

// Fixed on-chain fee table (satoshi).
constexpr Amount kChannelOpenFee = 222;
constexpr Amount kUnilateralCloseFee = 183;
constexpr Amount kDefaultTxFee = 150;

/// Deterministic in-memory blockchain. Mining is instant and manual; mempool
/// inclusion is FIFO; no reorgs.
class SimChain {
public:
    /// Scenario faucet: credits a fresh coinbase-style output, mined with the
    /// next block.
    Outpoint mint(Amount amount, const SpendCondition& condition);

    BroadcastResult broadcast(const SimTx& tx);
    /// Includes every mempool tx, FIFO; returns the new height.
    std::uint32_t mine_block();

    std::uint32_t height() const { return static_cast<std::uint32_t>(blocks_.size()); }
    /// height - inclusion height + 1; 0 while unmined.
    std::uint32_t confirmations(const Hash32& txid) const;
    bool is_unspent(const Outpoint& op) const { return utxos_.contains(op); }
    const UtxoEntry* find_utxo(const Outpoint& op) const;
    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t mempool_size() const { return mempool_.size(); }

    /// Sum of KeySpend utxos owned by `key` (wallet-style balance).
    Amount balance_of(const ec::Point& key) const;
    const std::map<Outpoint, UtxoEntry>& utxos() const { return utxos_; }

    Amount total_minted() const { return total_minted_; }
    /// Cumulative sum over mined txs of (inputs - outputs).
    Amount total_fees() const { return total_fees_; }
    Amount utxo_total() const;

    nlohmann::json dump_json() const;

private:
    Errc validate(const SimTx& tx, std::string& detail) const;
    static bool is_coinbase(const SimTx& tx);

    std::vector<Block> blocks_;
    std::deque<SimTx> mempool_;
    std::map<Outpoint, UtxoEntry> utxos_;
    std::map<Outpoint, Hash32> spent_by_;          // spend history, for DoubleSpend reporting
    std::map<Outpoint, Hash32> mempool_claims_;    // outpoints claimed by pending txs
    std::map<Hash32, std::uint32_t> inclusion_height_;
    Amount total_minted_ = 0;
    Amount total_fees_ = 0;
    std::uint32_t mint_counter_ = 0;
};

}  // namespace lngate::chain

#endif
