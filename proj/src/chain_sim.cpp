#include "lngate/chain_sim.hpp"

#include "lngate/hash.hpp"

namespace lngate::chain {

namespace {

void put_point(Bytes& out, const ec::Point& p) {
    auto ser = p.serialize();
    out.insert(out.end(), ser.begin(), ser.end());
}

void put_hash(Bytes& out, const Hash32& h) { out.insert(out.end(), h.begin(), h.end()); }

void put_sig(Bytes& out, const ecdsa::EcdsaSignature& sig) {
    auto ser = sig.serialize();
    out.insert(out.end(), ser.begin(), ser.end());
}

void serialize_condition(Bytes& out, const SpendCondition& cond) {
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, KeySpend>) {
                out.push_back(0x01);
                put_point(out, c.owner);
            } else if constexpr (std::is_same_v<T, DelayedKeySpend>) {
                out.push_back(0x02);
                put_point(out, c.owner);
                put_u32_be(out, c.delay);
            } else if constexpr (std::is_same_v<T, RevocableDelayed>) {
                out.push_back(0x03);
                put_point(out, c.owner);
                put_u32_be(out, c.delay);
                put_point(out, c.revocation);
            } else if constexpr (std::is_same_v<T, HtlcOffered>) {
                out.push_back(0x04);
                put_hash(out, c.payment_hash);
                put_point(out, c.recipient);
                put_point(out, c.refund);
                put_u32_be(out, c.timeout_height);
            } else {
                out.push_back(0x05);
                put_point(out, c.joint_pubkey);
            }
        },
        cond);
}

void serialize_witness(Bytes& out, const Witness& wit) {
    std::visit(
        [&](const auto& w) {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                out.push_back(0x00);
            } else if constexpr (std::is_same_v<T, SigWitness>) {
                out.push_back(0x01);
                put_point(out, w.pubkey);
                put_sig(out, w.sig);
            } else if constexpr (std::is_same_v<T, RevocationWitness>) {
                out.push_back(0x02);
                put_point(out, w.revocation_pubkey);
                put_sig(out, w.sig);
            } else if constexpr (std::is_same_v<T, PreimageWitness>) {
                out.push_back(0x03);
                put_hash(out, w.preimage);
                put_point(out, w.pubkey);
                put_sig(out, w.sig);
            } else {
                out.push_back(0x04);
                put_point(out, w.pubkey);
                put_sig(out, w.sig);
            }
        },
        wit);
}

Bytes serialize_tx(const SimTx& tx, bool with_witnesses) {
    Bytes out;
    const char* tag = "simtx/v1";
    out.insert(out.end(), tag, tag + 8);
    put_u32_be(out, static_cast<std::uint32_t>(tx.inputs.size()));
    for (const auto& in : tx.inputs) {
        put_hash(out, in.outpoint.txid);
        put_u32_be(out, in.outpoint.vout);
        if (with_witnesses) serialize_witness(out, in.witness);
    }
    put_u32_be(out, static_cast<std::uint32_t>(tx.outputs.size()));
    for (const auto& o : tx.outputs) {
        put_u64_be(out, static_cast<std::uint64_t>(o.amount));
        serialize_condition(out, o.condition);
    }
    put_u64_be(out, static_cast<std::uint64_t>(tx.fee));
    return out;
}

bool check_sig(const ec::Point& pubkey, const SpendContext& ctx,
               const ecdsa::EcdsaSignature& sig) {
    return ecdsa::verify_standard(pubkey, ctx.signing_message, sig);
}

}  // namespace

Bytes SimTx::signing_message() const { return serialize_tx(*this, false); }

Hash32 SimTx::txid() const { return sha256(signing_message()); }

Bytes SimTx::serialize() const { return serialize_tx(*this, true); }

Errc check_witness(const SpendCondition& cond, const Witness& wit, const SpendContext& ctx) {
    return std::visit(
        [&](const auto& c) -> Errc {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, KeySpend>) {
                const auto* w = std::get_if<SigWitness>(&wit);
                if (!w || !(w->pubkey == c.owner)) return Errc::BadWitness;
                return check_sig(c.owner, ctx, w->sig) ? Errc::Ok : Errc::BadWitness;
            } else if constexpr (std::is_same_v<C, DelayedKeySpend>) {
                const auto* w = std::get_if<SigWitness>(&wit);
                if (!w || !(w->pubkey == c.owner)) return Errc::BadWitness;
                if (ctx.output_confirmations < c.delay) return Errc::PrematureSpend;
                return check_sig(c.owner, ctx, w->sig) ? Errc::Ok : Errc::BadWitness;
            } else if constexpr (std::is_same_v<C, RevocableDelayed>) {
                if (const auto* w = std::get_if<RevocationWitness>(&wit)) {
                    // revocation path: no delay
                    if (!(w->revocation_pubkey == c.revocation)) return Errc::BadWitness;
                    return check_sig(c.revocation, ctx, w->sig) ? Errc::Ok : Errc::BadWitness;
                }
                if (const auto* w = std::get_if<SigWitness>(&wit)) {
                    if (!(w->pubkey == c.owner)) return Errc::BadWitness;
                    if (ctx.output_confirmations < c.delay) return Errc::PrematureSpend;
                    return check_sig(c.owner, ctx, w->sig) ? Errc::Ok : Errc::BadWitness;
                }
                return Errc::BadWitness;
            } else if constexpr (std::is_same_v<C, HtlcOffered>) {
                if (const auto* w = std::get_if<PreimageWitness>(&wit)) {
                    if (sha256(w->preimage) != c.payment_hash) return Errc::BadWitness;
                    if (!(w->pubkey == c.recipient)) return Errc::BadWitness;
                    return check_sig(c.recipient, ctx, w->sig) ? Errc::Ok : Errc::BadWitness;
                }
                if (const auto* w = std::get_if<TimeoutWitness>(&wit)) {
                    if (!(w->pubkey == c.refund)) return Errc::BadWitness;
                    if (ctx.chain_height < c.timeout_height) return Errc::PrematureSpend;
                    return check_sig(c.refund, ctx, w->sig) ? Errc::Ok : Errc::BadWitness;
                }
                return Errc::BadWitness;
            } else {  // ThresholdFunding
                const auto* w = std::get_if<SigWitness>(&wit);
                if (!w || !(w->pubkey == c.joint_pubkey)) return Errc::BadWitness;
                return check_sig(c.joint_pubkey, ctx, w->sig) ? Errc::Ok : Errc::BadWitness;
            }
        },
        cond);
}

bool verify_witness(const SpendCondition& cond, const Witness& wit, const SpendContext& ctx) {
    return check_witness(cond, wit, ctx) == Errc::Ok;
}

bool SimChain::is_coinbase(const SimTx& tx) {
    return tx.inputs.size() == 1 && tx.inputs[0].outpoint.txid == Hash32{};
}

Outpoint SimChain::mint(Amount amount, const SpendCondition& condition) {
    SimTx tx;
    // Unique null-input marker keeps coinbase txids distinct.
    tx.inputs.push_back({Outpoint{Hash32{}, mint_counter_++}, std::monostate{}});
    tx.outputs.push_back({amount, condition});
    mempool_.push_back(tx);
    total_minted_ += amount;
    return Outpoint{tx.txid(), 0};
}

Errc SimChain::validate(const SimTx& tx, std::string& detail) const {
    if (tx.fee < 0) {
        detail = "negative fee";
        return Errc::ValueOverflow;
    }
    Amount in_total = 0;
    Bytes msg = tx.signing_message();
    std::map<Outpoint, bool> seen;
    for (const auto& in : tx.inputs) {
        if (seen.contains(in.outpoint)) {
            detail = "outpoint used twice in one tx";
            return Errc::DoubleSpend;
        }
        seen[in.outpoint] = true;
        if (mempool_claims_.contains(in.outpoint)) {
            detail = "outpoint claimed by a pending tx";
            return Errc::DoubleSpend;
        }
        auto it = utxos_.find(in.outpoint);
        if (it == utxos_.end()) {
            if (spent_by_.contains(in.outpoint)) {
                detail = "outpoint already spent";
                return Errc::DoubleSpend;
            }
            detail = "no such outpoint";
            return Errc::UnknownOutpoint;
        }
        const UtxoEntry& entry = it->second;
        SpendContext ctx;
        ctx.chain_height = height();
        ctx.output_confirmations = height() >= entry.created_height
                                       ? height() - entry.created_height + 1
                                       : 0;
        ctx.signing_message = msg;
        Errc rc = check_witness(entry.condition, in.witness, ctx);
        if (rc != Errc::Ok) {
            detail = "input witness check failed";
            return rc;
        }
        in_total += entry.amount;
    }
    Amount out_total = 0;
    for (const auto& o : tx.outputs) {
        if (o.amount < 0) {
            detail = "negative output";
            return Errc::ValueOverflow;
        }
        out_total += o.amount;
    }
    if (in_total < out_total + tx.fee) {
        detail = "outputs + fee exceed inputs";
        return Errc::ValueOverflow;
    }
    return Errc::Ok;
}

BroadcastResult SimChain::broadcast(const SimTx& tx) {
    std::string detail;
    Errc rc = validate(tx, detail);
    if (rc != Errc::Ok) return {false, rc, detail};
    for (const auto& in : tx.inputs) mempool_claims_[in.outpoint] = tx.txid();
    mempool_.push_back(tx);
    return {true, Errc::Ok, ""};
}

std::uint32_t SimChain::mine_block() {
    Block block;
    block.height = height() + 1;
    while (!mempool_.empty()) {
        SimTx tx = std::move(mempool_.front());
        mempool_.pop_front();
        Hash32 id = tx.txid();
        Amount in_total = 0;
        if (!is_coinbase(tx)) {
            for (const auto& in : tx.inputs) {
                auto it = utxos_.find(in.outpoint);
                in_total += it->second.amount;
                spent_by_[in.outpoint] = id;
                utxos_.erase(it);
                mempool_claims_.erase(in.outpoint);
            }
        }
        Amount out_total = 0;
        for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
            const TxOutput& o = tx.outputs[v];
            utxos_[Outpoint{id, v}] = UtxoEntry{o.amount, o.condition, block.height};
            out_total += o.amount;
        }
        if (!is_coinbase(tx)) total_fees_ += in_total - out_total;
        inclusion_height_[id] = block.height;
        block.txs.push_back(std::move(tx));
    }
    blocks_.push_back(std::move(block));
    return height();
}

std::uint32_t SimChain::confirmations(const Hash32& txid) const {
    auto it = inclusion_height_.find(txid);
    if (it == inclusion_height_.end()) return 0;
    return height() - it->second + 1;
}

const UtxoEntry* SimChain::find_utxo(const Outpoint& op) const {
    auto it = utxos_.find(op);
    return it == utxos_.end() ? nullptr : &it->second;
}

Amount SimChain::balance_of(const ec::Point& key) const {
    Amount total = 0;
    for (const auto& [op, entry] : utxos_) {
        if (const auto* ks = std::get_if<KeySpend>(&entry.condition)) {
            if (ks->owner == key) total += entry.amount;
        }
    }
    return total;
}

Amount SimChain::utxo_total() const {
    Amount total = 0;
    for (const auto& [op, entry] : utxos_) total += entry.amount;
    return total;
}

nlohmann::json SimChain::dump_json() const {
    nlohmann::json j;
    j["height"] = height();
    j["total_minted"] = total_minted_;
    j["total_fees"] = total_fees_;
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : blocks_) {
        nlohmann::json jb;
        jb["height"] = b.height;
        nlohmann::json txs = nlohmann::json::array();
        for (const auto& tx : b.txs) {
            nlohmann::json jt;
            jt["txid"] = to_hex(tx.txid());
            jt["hex"] = to_hex(tx.serialize());
            txs.push_back(jt);
        }
        jb["txs"] = txs;
        blocks.push_back(jb);
    }
    j["blocks"] = blocks;
    nlohmann::json utxos = nlohmann::json::array();
    for (const auto& [op, entry] : utxos_) {
        nlohmann::json ju;
        ju["txid"] = to_hex(op.txid);
        ju["vout"] = op.vout;
        ju["amount"] = entry.amount;
        ju["height"] = entry.created_height;
        utxos.push_back(ju);
    }
    j["utxos"] = utxos;
    return j;
}

}  // namespace lngate::chain
