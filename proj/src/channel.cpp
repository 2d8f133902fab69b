#include "lngate/channel.hpp"

#include "lngate/hash.hpp"

namespace lngate::channel {

Amount ChannelState::htlc_total() const {
    Amount total = 0;
    for (const auto& h : pending_htlcs) total += h.amount;
    return total;
}

Amount service_fee(Amount amount, std::uint64_t ppm) {
    if (amount < 0) throw Error(Errc::Internal, "negative amount");
    unsigned __int128 scaled =
        static_cast<unsigned __int128>(amount) * ppm + 500'000;
    return static_cast<Amount>(scaled / 1'000'000);
}

nlohmann::json state_to_json(const ChannelState& st) {
    nlohmann::json j;
    j["state_num"] = st.state_num;
    j["iot_balance"] = st.iot_balance;
    j["bridge_balance"] = st.bridge_balance;
    j["gateway_fee_balance"] = st.gateway_fee_balance;
    nlohmann::json htlcs = nlohmann::json::array();
    for (const auto& h : st.pending_htlcs) {
        nlohmann::json jh;
        jh["amount"] = h.amount;
        jh["payment_hash"] = to_hex(h.payment_hash);
        jh["timeout_height"] = h.timeout_height;
        jh["destination"] = to_hex(h.destination);
        htlcs.push_back(jh);
    }
    j["pending_htlcs"] = htlcs;
    return j;
}

// ---------------------------------------------------------------------------
// Commitment secrets / revocation keys
// ---------------------------------------------------------------------------

Hash32 CommitmentSecretChain::secret(std::uint64_t n) const {
    Bytes material(seed_.begin(), seed_.end());
    put_u64_be(material, n);
    const char* tag = "commitment-secret";
    material.insert(material.end(), tag, tag + 17);
    return sha256(material);
}

ec::Point CommitmentSecretChain::commitment_point(std::uint64_t n) const {
    Hash32 s = secret(n);
    return ec::mul_generator(bigint_from_bytes(s) % ec::GroupParams::secp256k1().n);
}

mpz_class CommitmentSecretChain::revocation_privkey(const Hash32& secret) {
    Bytes material(secret.begin(), secret.end());
    material.push_back('r');
    material.push_back('e');
    material.push_back('v');
    mpz_class k = bigint_from_bytes(sha256(material)) % ec::GroupParams::secp256k1().n;
    if (k == 0) throw Error(Errc::Internal, "degenerate revocation key");
    return k;
}

ec::Point CommitmentSecretChain::revocation_pubkey(const Hash32& secret) {
    return ec::mul_generator(revocation_privkey(secret));
}

ec::Point CommitmentSecretChain::revocation_pubkey(std::uint64_t n) const {
    return revocation_pubkey(secret(n));
}

const Hash32& RevocationStore::get(std::uint64_t n) const {
    auto it = secrets_.find(n);
    if (it == secrets_.end())
        throw Error(Errc::NotRevoked, "no stored secret for state " + std::to_string(n));
    return it->second;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

chain::SimTx build_funding_tx(const chain::Outpoint& iot_utxo, Amount utxo_amount,
                              Amount capacity, const ec::Point& joint_funding_key,
                              const ec::Point& iot_change_key) {
    if (capacity <= 0) throw Error(Errc::InsufficientFunds, "capacity must be positive");
    if (utxo_amount < capacity + chain::kChannelOpenFee)
        throw Error(Errc::InsufficientFunds, "utxo cannot cover capacity plus the open fee");
    chain::SimTx tx;
    tx.inputs.push_back({iot_utxo, std::monostate{}});
    tx.outputs.push_back({capacity, chain::ThresholdFunding{joint_funding_key}});
    tx.fee = chain::kChannelOpenFee;
    Amount change = utxo_amount - capacity - chain::kChannelOpenFee;
    if (change >= kDustLimit) {
        tx.outputs.push_back({change, chain::KeySpend{iot_change_key}});
    } else {
        tx.fee += change;  // dust folds into the fee
    }
    return tx;
}

namespace {

struct OutputPlan {
    Amount amount;
    chain::SpendCondition condition;
    enum class Role { Iot, Bridge, Fee, ToSelf, Htlc } role;
};

CommitmentTx assemble_commitment(const std::vector<OutputPlan>& plan,
                                 const CommitmentContext& ctx, Amount input_amount) {
    CommitmentTx out;
    out.tx.inputs.push_back({ctx.funding_outpoint, std::monostate{}});
    Amount fee = ctx.close_fee;
    for (const auto& o : plan) {
        if (o.amount == 0) continue;
        if (o.amount < kDustLimit) {
            fee += o.amount;
            continue;
        }
        std::uint32_t vout = static_cast<std::uint32_t>(out.tx.outputs.size());
        out.tx.outputs.push_back({o.amount, o.condition});
        switch (o.role) {
            case OutputPlan::Role::Iot: out.iot_vout = vout; break;
            case OutputPlan::Role::Bridge: out.bridge_vout = vout; break;
            case OutputPlan::Role::Fee: out.fee_vout = vout; break;
            case OutputPlan::Role::ToSelf: out.to_self_vout = vout; break;
            case OutputPlan::Role::Htlc: out.htlc_vouts.push_back(vout); break;
        }
    }
    out.tx.fee = fee;
    Amount out_total = 0;
    for (const auto& o : out.tx.outputs) out_total += o.amount;
    if (out_total + out.tx.fee != input_amount)
        throw Error(Errc::Internal, "commitment does not balance against the funding amount");
    return out;
}

Amount docked(Amount balance, Amount fee, bool pays) {
    if (!pays) return balance;
    if (balance < fee) throw Error(Errc::InsufficientFeeBalance, "cannot cover the close fee");
    return balance - fee;
}

}  // namespace

CommitmentTx build_gateway_commitment(const ChannelState& st, const CommitmentContext& ctx) {
    std::vector<OutputPlan> plan;
    Amount iot = docked(st.iot_balance, ctx.close_fee, ctx.fee_payer == CloseFeePayer::Iot);
    Amount fees = docked(st.gateway_fee_balance, ctx.close_fee,
                         ctx.fee_payer == CloseFeePayer::GatewayFees);
    // Output 1: IoT balance, spendable by the IoT key alone in every state.
    plan.push_back({iot, chain::KeySpend{ctx.keys.iot_key}, OutputPlan::Role::Iot});
    // Output 2: bridge balance, immediately spendable.
    plan.push_back({st.bridge_balance, chain::KeySpend{ctx.keys.bridge_key},
                    OutputPlan::Role::Bridge});
    // Output 3: pending HTLCs.
    for (const auto& h : st.pending_htlcs) {
        plan.push_back({h.amount,
                        chain::HtlcOffered{h.payment_hash, ctx.keys.bridge_key,
                                           ctx.keys.iot_key, h.timeout_height},
                        OutputPlan::Role::Htlc});
    }
    // Output 4: accumulated gateway fees; the bridge claims these via the
    // revocation path if this state is ever broadcast after being revoked.
    plan.push_back({fees,
                    chain::RevocableDelayed{ctx.keys.gateway_key, ctx.params.to_self_delay,
                                            ctx.revocation_pubkey},
                    OutputPlan::Role::Fee});
    return assemble_commitment(plan, ctx, ctx.params.capacity);
}

CommitmentTx build_bridge_commitment(const ChannelState& st, const CommitmentContext& ctx) {
    std::vector<OutputPlan> plan;
    // Bridge's to_self output carries the revocation arm.
    plan.push_back({st.bridge_balance,
                    chain::RevocableDelayed{ctx.keys.bridge_key, ctx.params.to_self_delay,
                                            ctx.revocation_pubkey},
                    OutputPlan::Role::ToSelf});
    // Remote side pays the IoT and the gateway fee key directly, so a bridge
    // close never puts IoT funds behind anyone else's key.
    plan.push_back({st.iot_balance, chain::KeySpend{ctx.keys.iot_key}, OutputPlan::Role::Iot});
    plan.push_back({st.gateway_fee_balance, chain::KeySpend{ctx.keys.gateway_key},
                    OutputPlan::Role::Fee});
    for (const auto& h : st.pending_htlcs) {
        plan.push_back({h.amount,
                        chain::HtlcOffered{h.payment_hash, ctx.keys.bridge_key,
                                           ctx.keys.iot_key, h.timeout_height},
                        OutputPlan::Role::Htlc});
    }
    return assemble_commitment(plan, ctx, ctx.params.capacity);
}

chain::SimTx build_closing_tx(const ChannelState& st, const ChannelKeys& keys,
                              Initiator initiator, const chain::Outpoint& funding_outpoint) {
    if (!st.pending_htlcs.empty())
        throw Error(Errc::PendingHtlcs, "close with pending HTLCs");
    Amount fee = chain::kUnilateralCloseFee;
    Amount iot = st.iot_balance;
    Amount fees = st.gateway_fee_balance;
    if (initiator == Initiator::Iot) {
        if (iot < fee) throw Error(Errc::InsufficientFeeBalance, "IoT balance below close fee");
        iot -= fee;
    } else {
        if (fees < fee)
            throw Error(Errc::InsufficientFeeBalance,
                        "gateway fee balance below close fee; wait for more fees");
        fees -= fee;
    }
    chain::SimTx tx;
    tx.inputs.push_back({funding_outpoint, std::monostate{}});
    tx.fee = fee;
    auto add = [&](Amount amount, const ec::Point& key) {
        if (amount == 0) return;
        if (amount < kDustLimit) {
            tx.fee += amount;
            return;
        }
        tx.outputs.push_back({amount, chain::KeySpend{key}});
    };
    add(iot, keys.iot_key);
    add(st.bridge_balance, keys.bridge_key);
    add(fees, keys.gateway_key);
    return tx;
}

std::optional<chain::SimTx> build_penalty_tx(const CommitmentTx& revoked,
                                             const Hash32& revocation_secret,
                                             const ec::Point& punisher_key, Rng& rng) {
    std::optional<std::uint32_t> vout = revoked.fee_vout ? revoked.fee_vout
                                                         : revoked.to_self_vout;
    if (!vout) return std::nullopt;  // nothing revocable in this state
    const chain::TxOutput& target = revoked.tx.outputs.at(*vout);
    const auto* cond = std::get_if<chain::RevocableDelayed>(&target.condition);
    if (!cond) throw Error(Errc::Internal, "revocable vout is not RevocableDelayed");
    if (!(CommitmentSecretChain::revocation_pubkey(revocation_secret) == cond->revocation))
        throw Error(Errc::NotRevoked, "secret does not open this output's revocation key");

    chain::SimTx tx;
    tx.inputs.push_back({chain::Outpoint{revoked.tx.txid(), *vout}, std::monostate{}});
    if (target.amount > chain::kDefaultTxFee + kDustLimit) {
        tx.fee = chain::kDefaultTxFee;
        tx.outputs.push_back({target.amount - chain::kDefaultTxFee,
                              chain::KeySpend{punisher_key}});
    } else {
        tx.fee = target.amount;  // too small to be worth an output
    }
    mpz_class priv = CommitmentSecretChain::revocation_privkey(revocation_secret);
    auto sig = ecdsa::sign_single(priv, tx.signing_message(), rng);
    tx.inputs[0].witness = chain::RevocationWitness{cond->revocation, sig};
    return tx;
}

// ---------------------------------------------------------------------------
// ChannelLedger
// ---------------------------------------------------------------------------

ChannelLedger::ChannelLedger(const ChannelParams& params, const ChannelKeys& keys,
                             const chain::Outpoint& funding_outpoint)
    : params_(params), keys_(keys), funding_outpoint_(funding_outpoint) {
    state_.state_num = 0;
    state_.iot_balance = params.capacity;
}

const ChannelState& ChannelLedger::history(std::uint64_t n) const {
    if (n >= history_.size())
        throw Error(Errc::Internal, "no superseded state " + std::to_string(n));
    return history_[n];
}

void ChannelLedger::snapshot_current() {
    if (history_.size() != state_.state_num)
        throw Error(Errc::Internal, "history out of step with state_num");
    history_.push_back(state_);
}

Htlc ChannelLedger::apply_payment(Amount amount, const NodeId& destination,
                                  const Hash32& payment_hash, std::uint32_t current_height) {
    if (amount <= 0) throw Error(Errc::InsufficientFunds, "payment must be positive");
    if (state_.iot_balance < amount)
        throw Error(Errc::InsufficientFunds, "IoT channel balance below payment amount");
    Amount fee = service_fee(amount, params_.service_fee_ppm);
    Htlc htlc;
    htlc.amount = amount - fee;
    htlc.fee_charged = fee;
    htlc.timeout_height = current_height + params_.htlc_timeout_delta;
    htlc.destination = destination;
    htlc.payment_hash = payment_hash;
    snapshot_current();
    state_.state_num += 1;
    state_.iot_balance -= amount;
    state_.gateway_fee_balance += fee;
    state_.gateway_commitment_point.reset();
    state_.bridge_commitment_point.reset();
    state_.pending_htlcs.push_back(htlc);
    assert_conservation();
    return htlc;
}

void ChannelLedger::settle_htlc(const Hash32& preimage) {
    Hash32 hash = sha256(preimage);
    for (auto it = state_.pending_htlcs.begin(); it != state_.pending_htlcs.end(); ++it) {
        if (it->payment_hash == hash) {
            state_.bridge_balance += it->amount;
            state_.pending_htlcs.erase(it);
            assert_conservation();
            return;
        }
    }
    throw Error(Errc::WrongPreimage, "preimage matches no pending HTLC");
}

void ChannelLedger::fail_htlc(std::uint32_t current_height) {
    for (auto it = state_.pending_htlcs.begin(); it != state_.pending_htlcs.end(); ++it) {
        if (current_height >= it->timeout_height) {
            // the service was not rendered: refund the amount and the fee
            state_.iot_balance += it->amount + it->fee_charged;
            state_.gateway_fee_balance -= it->fee_charged;
            state_.pending_htlcs.erase(it);
            assert_conservation();
            return;
        }
    }
    throw Error(Errc::TimeoutNotReached, "no pending HTLC has reached its timeout");
}

void ChannelLedger::assert_conservation() const {
    Amount sum = state_.iot_balance + state_.bridge_balance + state_.gateway_fee_balance +
                 state_.htlc_total();
    if (sum != params_.capacity)
        throw Error(Errc::Internal, "channel balances violate conservation");
    if (state_.iot_balance < 0 || state_.bridge_balance < 0 || state_.gateway_fee_balance < 0)
        throw Error(Errc::Internal, "negative channel balance");
}

void ChannelLedger::store_commitments(std::uint64_t n, CommitmentTx gateway_version,
                                      CommitmentTx bridge_version) {
    commitments_[n] = {std::move(gateway_version), std::move(bridge_version)};
}

const CommitmentTx& ChannelLedger::gateway_commitment(std::uint64_t n) const {
    auto it = commitments_.find(n);
    if (it == commitments_.end())
        throw Error(Errc::Internal, "no stored commitment for state " + std::to_string(n));
    return it->second.first;
}

const CommitmentTx& ChannelLedger::bridge_commitment(std::uint64_t n) const {
    auto it = commitments_.find(n);
    if (it == commitments_.end())
        throw Error(Errc::Internal, "no stored commitment for state " + std::to_string(n));
    return it->second.second;
}

bool ChannelLedger::has_commitments(std::uint64_t n) const { return commitments_.contains(n); }

void ChannelLedger::check_revealable(std::uint64_t n) const {
    if (n >= state_.state_num)
        throw Error(Errc::NotYetSuperseded,
                    "state " + std::to_string(n) + " has not been superseded");
    if (!has_commitments(n + 1))
        throw Error(Errc::NotYetSuperseded, "next state is not fully signed");
}

}  // namespace lngate::channel
