#include "ringledger/ledger.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ringledger/sha256.hpp"

namespace ringledger {

using ojson = nlohmann::ordered_json;

namespace {

std::string digest_hex(const Digest& d) { return to_hex(BytesView{d.data(), d.size()}); }

BytesView view(const Digest& d) { return BytesView{d.data(), d.size()}; }

std::uint8_t hint_byte(const std::optional<PolicyHint>& h) {
    if (!h) return 0xff;
    return static_cast<std::uint8_t>(*h);
}

ojson output_json(const Group& g, const OutputPrecursor& o) {
    ojson j;
    j["output_public"] = g.hex(o.output_public);
    j["nonce_public"] = g.hex(o.nonce_public);
    j["denomination"] = o.denomination;
    return j;
}

OutputPrecursor output_from_json(const Group& g, const ojson& j) {
    OutputPrecursor o;
    o.output_public = g.decode_hex(j.at("output_public").get<std::string>());
    o.nonce_public = g.decode_hex(j.at("nonce_public").get<std::string>());
    o.denomination = j.at("denomination").get<std::uint64_t>();
    return o;
}

RingSignature signature_from_hex(const Group& g, const std::string& h) {
    auto raw = from_hex(h);
    if (!raw) throw Error(Err::ParseError, "signature is not hex");
    auto sig = deserialize_signature(g, *raw);
    if (!sig) throw Error(Err::ParseError, "malformed signature");
    return *sig;
}

}  // namespace

std::string_view policy_name(Policy p) {
    switch (p) {
        case Policy::ProcessAnyway: return "process";
        case Policy::Refuse: return "refuse";
        case Policy::Delay: return "delay";
        case Policy::PerTxField: return "per-tx";
    }
    return "?";
}

std::optional<Policy> policy_from_string(std::string_view s) {
    if (s == "process") return Policy::ProcessAnyway;
    if (s == "refuse") return Policy::Refuse;
    if (s == "delay") return Policy::Delay;
    if (s == "per-tx") return Policy::PerTxField;
    return std::nullopt;
}

std::string_view policy_hint_name(PolicyHint h) {
    switch (h) {
        case PolicyHint::ProcessAnyway: return "process";
        case PolicyHint::Fail: return "fail";
        case PolicyHint::Delay: return "delay";
    }
    return "?";
}

std::optional<PolicyHint> policy_hint_from_string(std::string_view s) {
    if (s == "process") return PolicyHint::ProcessAnyway;
    if (s == "fail") return PolicyHint::Fail;
    if (s == "delay") return PolicyHint::Delay;
    return std::nullopt;
}

std::string utxo_id(const Group& g, const Element& output_public, const Element& nonce_public,
                    std::uint64_t denomination, std::uint64_t height) {
    Bytes b;
    append(b, g.encode(output_public));
    append(b, g.encode(nonce_public));
    append(b, be64(denomination));
    append(b, be64(height));
    return digest_hex(sha256(b));
}

Digest tx_digest(const Group& g, const Transaction& tx) {
    Bytes b = to_bytes("ringledger-tx-v1");
    b.push_back(static_cast<std::uint8_t>(tx.kind));
    append(b, be64(tx.ring_utxo_ids.size()));
    for (const auto& id : tx.ring_utxo_ids) {
        append(b, be64(id.size()));
        append(b, std::string_view(id));
    }
    append(b, be64(tx.outputs.size()));
    for (const auto& o : tx.outputs) {
        append(b, g.encode(o.output_public));
        append(b, g.encode(o.nonce_public));
        append(b, be64(o.denomination));
    }
    append(b, be64(tx.contract_id.size()));
    append(b, std::string_view(tx.contract_id));
    b.push_back(hint_byte(tx.policy_hint));
    if (tx.kind == TxKind::TumblerDeposit) {
        append(b, g.encode(tx.derived_public));
        append(b, g.encode(tx.refund_public));
    }
    return sha256(b);
}

Ledger::Ledger(Profile profile) : group_(&Group::get(profile)) {
    ojson j;
    j["kind"] = "genesis";
    j["version"] = 1;
    j["profile"] = std::string(profile_name(profile));
    block_lines_.push_back(j.dump());
}

const TumblerContract& Ledger::contract(const std::string& id) const {
    auto it = contracts_.find(id);
    if (it == contracts_.end()) throw Error(Err::UnknownContract, id);
    return it->second;
}

Utxo Ledger::add_utxo(const OutputPrecursor& out) {
    Utxo u;
    u.id = utxo_id(*group_, out.output_public, out.nonce_public, out.denomination, height_);
    u.output_public = out.output_public;
    u.nonce_public = out.nonce_public;
    u.denomination = out.denomination;
    u.height = height_;
    auto [it, fresh] = utxos_.emplace(u.id, u);
    if (!fresh) throw Error(Err::DuplicateUtxo, u.id);
    return u;
}

Utxo Ledger::mint(const OutputPrecursor& out) {
    if (out.denomination == 0) throw Error(Err::Usage, "mint of zero");
    if (!group_->is_member(out.output_public) || !group_->is_member(out.nonce_public))
        throw Error(Err::BadEncoding, "mint keys must be group members");
    height_ += 1;
    Utxo u = add_utxo(out);
    minted_ += out.denomination;
    ojson j;
    j["kind"] = "mint";
    j["height"] = height_;
    j["output_public"] = group_->hex(out.output_public);
    j["nonce_public"] = group_->hex(out.nonce_public);
    j["denomination"] = out.denomination;
    block_lines_.push_back(j.dump());
    return u;
}

std::vector<Utxo> Ledger::decoy_select(std::uint64_t denomination, std::size_t n, Rng& rng,
                                       const std::vector<std::string>& exclude) const {
    std::vector<const Utxo*> pool;
    for (const auto& [id, u] : utxos_) {
        if (u.denomination != denomination) continue;
        if (std::find(exclude.begin(), exclude.end(), id) != exclude.end()) continue;
        pool.push_back(&u);
    }
    if (pool.size() < n)
        throw Error(Err::InsufficientDecoys,
                    std::to_string(pool.size()) + " candidates, " + std::to_string(n) + " wanted");
    std::vector<Utxo> picked;
    picked.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform(pool.size()));
        picked.push_back(*pool[j]);
        pool[j] = pool.back();
        pool.pop_back();
    }
    return picked;
}

Ring Ledger::cn_ring(const Transaction& tx, std::uint64_t* denomination) const {
    std::vector<Element> members;
    std::uint64_t denom = 0;
    for (const auto& id : tx.ring_utxo_ids) {
        auto it = utxos_.find(id);
        if (it == utxos_.end()) throw Error(Err::UnknownRingMember, id);
        const Utxo& u = it->second;
        if (members.empty()) {
            denom = u.denomination;
        } else if (u.denomination != denom) {
            throw Error(Err::DenominationMismatch, "ring mixes denominations");
        }
        members.push_back(u.output_public);
    }
    *denomination = denom;
    return Ring::make(*group_, std::move(members));
}

std::vector<Utxo> Ledger::apply_cn_transfer(const Transaction& tx) {
    if (tx.kind != TxKind::CnTransfer) throw Error(Err::Usage, "not a transfer");
    if (tx.ring_utxo_ids.empty()) throw Error(Err::Usage, "empty ring");
    if (tx.outputs.empty()) throw Error(Err::Usage, "no outputs");
    std::uint64_t denom = 0;
    Ring ring = cn_ring(tx, &denom);
    std::uint64_t out_sum = 0;
    for (const auto& o : tx.outputs) {
        if (!group_->is_member(o.output_public) || !group_->is_member(o.nonce_public))
            throw Error(Err::BadEncoding, "output keys must be group members");
        out_sum += o.denomination;
    }
    if (out_sum != denom) throw Error(Err::DenominationMismatch, "outputs do not sum to input");

    Digest m = tx_digest(*group_, tx);
    if (!ring_verify(*group_, view(m), ring, tx.signature, TagMode::PerKey))
        throw Error(Err::InvalidSignature, "transfer signature rejected");
    if (link(*group_, tx.signature.key_image, spent_images_global_) == LinkResult::Duplicate)
        throw Error(Err::DoubleSpend, group_->hex(tx.signature.key_image.image));

    spent_images_global_.insert(group_->hex(tx.signature.key_image.image));
    registry_inserts_ += 1;
    height_ += 1;
    std::vector<Utxo> created;
    for (const auto& o : tx.outputs) created.push_back(add_utxo(o));

    ojson j;
    j["kind"] = "cn_transfer";
    j["height"] = height_;
    j["ring"] = tx.ring_utxo_ids;
    ojson outs = ojson::array();
    for (const auto& o : tx.outputs) outs.push_back(output_json(*group_, o));
    j["outputs"] = outs;
    j["signature"] = to_hex(serialize_signature(*group_, tx.signature));
    block_lines_.push_back(j.dump());
    return created;
}

std::string Ledger::tumbler_new(std::uint64_t denomination, std::size_t ring_size,
                                Policy policy) {
    if (denomination == 0 || ring_size == 0)
        throw Error(Err::Usage, "denomination and ring size must be positive");
    Bytes b = to_bytes("ringledger-tumbler-id");
    append(b, be64(height_ + 1));
    append(b, be64(denomination));
    append(b, be64(ring_size));
    b.push_back(static_cast<std::uint8_t>(policy));
    std::string id = digest_hex(sha256(b)).substr(0, 16);
    if (contracts_.count(id)) throw Error(Err::Usage, "contract id collision");

    height_ += 1;
    TumblerContract c;
    c.id = id;
    c.denomination = denomination;
    c.ring_size_n = ring_size;
    c.policy = policy;
    contracts_.emplace(id, c);

    ojson j;
    j["kind"] = "tumbler_new";
    j["height"] = height_;
    j["contract_id"] = id;
    j["denomination"] = denomination;
    j["ring_size"] = ring_size;
    j["policy"] = std::string(policy_name(policy));
    block_lines_.push_back(j.dump());
    return id;
}

void Ledger::tumbler_deposit(const std::string& contract_id, const Element& derived_public,
                             const Element& refund_public, const std::string& funding_utxo_id,
                             const Scalar& funding_secret, Rng& rng,
                             std::vector<Utxo>* released_out) {
    auto it = utxos_.find(funding_utxo_id);
    if (it == utxos_.end()) throw Error(Err::UnknownUtxo, funding_utxo_id);
    const Utxo& funding = it->second;
    if (group_->base_mul(funding_secret) != funding.output_public)
        throw Error(Err::InconsistentKnowledge, "secret does not open the funding utxo");

    Transaction tx;
    tx.kind = TxKind::TumblerDeposit;
    tx.ring_utxo_ids = {funding_utxo_id};
    tx.contract_id = contract_id;
    tx.derived_public = derived_public;
    tx.refund_public = refund_public;
    Ring ring = Ring::make(*group_, {funding.output_public});
    Digest m = tx_digest(*group_, tx);
    tx.signature = ring_sign(*group_, view(m), ring, 0, funding_secret, TagMode::PerKey, rng);
    deposit_apply(tx, released_out);
}

void Ledger::deposit_apply(const Transaction& tx, std::vector<Utxo>* released_out) {
    auto cit = contracts_.find(tx.contract_id);
    if (cit == contracts_.end()) throw Error(Err::UnknownContract, tx.contract_id);
    TumblerContract& c = cit->second;
    if (c.closed) throw Error(Err::ContractClosed, c.id);
    if (!group_->is_member(tx.derived_public) || !group_->is_member(tx.refund_public))
        throw Error(Err::BadEncoding, "deposit keys must be group members");
    for (const auto& d : c.deposits)
        if (d == tx.derived_public) throw Error(Err::DuplicateDepositKey, group_->hex(d));
    if (tx.ring_utxo_ids.size() != 1) throw Error(Err::Usage, "deposit spends one funding utxo");
    auto it = utxos_.find(tx.ring_utxo_ids[0]);
    if (it == utxos_.end()) throw Error(Err::UnknownUtxo, tx.ring_utxo_ids[0]);
    const Utxo& funding = it->second;
    if (funding.denomination != c.denomination)
        throw Error(Err::DenominationMismatch, "funding utxo has the wrong denomination");

    Ring ring = Ring::make(*group_, {funding.output_public});
    Digest m = tx_digest(*group_, tx);
    if (!ring_verify(*group_, view(m), ring, tx.signature, TagMode::PerKey))
        throw Error(Err::InvalidSignature, "deposit signature rejected");
    if (link(*group_, tx.signature.key_image, spent_images_global_) == LinkResult::Duplicate)
        throw Error(Err::DoubleSpend, group_->hex(tx.signature.key_image.image));

    spent_images_global_.insert(group_->hex(tx.signature.key_image.image));
    registry_inserts_ += 1;
    c.deposits.push_back(tx.derived_public);
    c.refund_keys.push_back(tx.refund_public);
    custody_ += c.denomination;
    height_ += 1;

    ojson j;
    j["kind"] = "tumbler_deposit";
    j["height"] = height_;
    j["contract_id"] = c.id;
    j["funding_utxo"] = tx.ring_utxo_ids[0];
    j["derived_public"] = group_->hex(tx.derived_public);
    j["refund_public"] = group_->hex(tx.refund_public);
    j["signature"] = to_hex(serialize_signature(*group_, tx.signature));
    block_lines_.push_back(j.dump());

    if (!replaying_ && !c.depleted() && !c.pending.empty()) {
        auto paid = drain_pending(c);
        if (released_out)
            released_out->insert(released_out->end(), paid.begin(), paid.end());
    }
}

WithdrawOutcome Ledger::tumbler_withdraw(const std::string& contract_id,
                                         const Scalar& recipient_secret,
                                         const DualKeyStealthAddress& payout, Rng& rng,
                                         std::optional<PolicyHint> hint) {
    const TumblerContract& c = contract(contract_id);
    if (c.closed) throw Error(Err::ContractClosed, contract_id);
    Element pub = group_->base_mul(recipient_secret);
    if (c.deposits.empty() ||
        std::find(c.deposits.begin(), c.deposits.end(), pub) == c.deposits.end())
        throw Error(Err::NotADepositor, group_->hex(pub));

    SentOutput sent = dualkey_onetime(*group_, payout, rng);
    Transaction tx;
    tx.kind = TxKind::TumblerWithdraw;
    tx.contract_id = contract_id;
    tx.outputs = {{sent.output.output_public, sent.output.nonce_public, c.denomination}};
    tx.policy_hint = hint;
    Ring ring = Ring::make(*group_, c.deposits);
    std::size_t idx = *ring.index_of(pub);
    Digest m = tx_digest(*group_, tx);
    tx.signature = ring_sign(*group_, view(m), ring, idx, recipient_secret, TagMode::PerRing, rng);
    return withdraw_apply(tx);
}

WithdrawOutcome Ledger::withdraw_apply(const Transaction& tx, const Ring* override_ring) {
    auto cit = contracts_.find(tx.contract_id);
    if (cit == contracts_.end()) throw Error(Err::UnknownContract, tx.contract_id);
    TumblerContract& c = cit->second;
    if (c.closed) throw Error(Err::ContractClosed, c.id);
    if (c.deposits.empty()) throw Error(Err::NotADepositor, "no deposits");
    if (c.policy == Policy::PerTxField && !tx.policy_hint)
        throw Error(Err::Usage, "per-tx contract needs a policy hint");
    if (c.policy != Policy::PerTxField && tx.policy_hint)
        throw Error(Err::Usage, "policy hint is only for per-tx contracts");
    if (tx.outputs.size() != 1) throw Error(Err::Usage, "withdrawal pays one output");
    const OutputPrecursor& out = tx.outputs[0];
    if (out.denomination != c.denomination)
        throw Error(Err::DenominationMismatch, "withdrawal denomination");
    if (!group_->is_member(out.output_public) || !group_->is_member(out.nonce_public))
        throw Error(Err::BadEncoding, "payout keys must be group members");

    Ring ring = override_ring ? *override_ring : Ring::make(*group_, c.deposits);
    Digest m = tx_digest(*group_, tx);
    if (!ring_verify(*group_, view(m), ring, tx.signature, TagMode::PerRing))
        throw Error(Err::InvalidSignature, "withdrawal signature rejected");

    bool queue = false;
    if (c.depleted()) {
        Policy effective = c.policy;
        if (c.policy == Policy::PerTxField) {
            switch (*tx.policy_hint) {
                case PolicyHint::ProcessAnyway: effective = Policy::ProcessAnyway; break;
                case PolicyHint::Fail: effective = Policy::Refuse; break;
                case PolicyHint::Delay: effective = Policy::Delay; break;
            }
        }
        if (effective == Policy::Refuse) {
            if (c.policy == Policy::Refuse && c.withdrawn == 0) {
                refund_apply(c.id);
                throw Error(Err::DepletedRefused,
                            "pool depleted; deposits refunded and contract closed");
            }
            throw Error(Err::DepletedRefused, "pool depleted");
        }
        queue = (effective == Policy::Delay);
    }

    std::string image_hex = group_->hex(tx.signature.key_image.image);
    if (link(*group_, tx.signature.key_image, c.used_images) == LinkResult::Duplicate)
        throw Error(Err::DoubleWithdraw, image_hex);
    if (c.withdrawn >= c.deposits.size())
        throw Error(Err::DepletedRefused, "custody exhausted");

    c.used_images.insert(image_hex);
    registry_inserts_ += 1;
    c.withdrawn += 1;
    height_ += 1;
    WithdrawOutcome outcome{WithdrawStatus::Executed, tx.signature.key_image, std::nullopt};
    if (queue) {
        outcome.status = WithdrawStatus::Queued;
        c.pending.push_back({image_hex, out});
    } else {
        custody_ -= c.denomination;
        c.released += 1;
        outcome.paid = add_utxo(out);
    }

    ojson j;
    j["kind"] = "tumbler_withdraw";
    j["height"] = height_;
    j["contract_id"] = c.id;
    j["output"] = output_json(*group_, out);
    j["signature"] = to_hex(serialize_signature(*group_, tx.signature));
    if (tx.policy_hint) j["policy_hint"] = std::string(policy_hint_name(*tx.policy_hint));
    j["status"] = queue ? "queued" : "executed";
    block_lines_.push_back(j.dump());
    return outcome;
}

void Ledger::refund_apply(const std::string& contract_id) {
    auto cit = contracts_.find(contract_id);
    if (cit == contracts_.end()) throw Error(Err::UnknownContract, contract_id);
    TumblerContract& c = cit->second;
    if (c.closed) throw Error(Err::ContractClosed, c.id);
    if (c.withdrawn != 0)
        throw Error(Err::Usage, "refund only while nothing has been withdrawn");

    height_ += 1;
    ojson outs = ojson::array();
    for (std::size_t i = 0; i < c.deposits.size(); ++i) {
        OutputPrecursor o{c.refund_keys[i], c.deposits[i], c.denomination};
        add_utxo(o);
        outs.push_back(output_json(*group_, o));
        custody_ -= c.denomination;
    }
    c.closed = true;

    ojson j;
    j["kind"] = "tumbler_refund";
    j["height"] = height_;
    j["contract_id"] = c.id;
    j["outputs"] = outs;
    block_lines_.push_back(j.dump());
}

Utxo Ledger::release_apply(const std::string& contract_id) {
    auto cit = contracts_.find(contract_id);
    if (cit == contracts_.end()) throw Error(Err::UnknownContract, contract_id);
    TumblerContract& c = cit->second;
    if (c.pending.empty()) throw Error(Err::ParseError, "release with empty queue");
    if (c.released >= c.deposits.size()) throw Error(Err::ParseError, "release exceeds custody");
    PendingWithdrawal w = c.pending.front();
    c.pending.pop_front();
    custody_ -= c.denomination;
    c.released += 1;
    height_ += 1;
    Utxo u = add_utxo(w.output);

    ojson j;
    j["kind"] = "tumbler_release";
    j["height"] = height_;
    j["contract_id"] = c.id;
    j["key_image"] = w.key_image_hex;
    j["output"] = output_json(*group_, w.output);
    block_lines_.push_back(j.dump());
    return u;
}

std::vector<Utxo> Ledger::drain_pending(TumblerContract& c) {
    std::vector<Utxo> paid;
    while (!c.pending.empty() && c.released < c.deposits.size())
        paid.push_back(release_apply(c.id));
    return paid;
}

AttackOutcome Ledger::attack_demo_permuted_ring(const std::string& contract_id,
                                                const Scalar& recipient_secret,
                                                const DualKeyStealthAddress& payout, Rng& rng,
                                                bool noncanonical, std::string* transcript) {
    Ledger scratch = *this;
    auto cit = scratch.contracts_.find(contract_id);
    if (cit == scratch.contracts_.end()) throw Error(Err::UnknownContract, contract_id);
    TumblerContract& c = cit->second;
    if (c.deposits.empty()) throw Error(Err::NotADepositor, "no deposits");
    Element pub = scratch.group_->base_mul(recipient_secret);
    if (std::find(c.deposits.begin(), c.deposits.end(), pub) == c.deposits.end())
        throw Error(Err::NotADepositor, scratch.group_->hex(pub));

    std::vector<Element> order_a = c.deposits;
    std::vector<Element> order_b(order_a.rbegin(), order_a.rend());
    Ring ring_a = noncanonical ? Ring::make_noncanonical(*scratch.group_, order_a)
                               : Ring::make(*scratch.group_, order_a);
    Ring ring_b = noncanonical ? Ring::make_noncanonical(*scratch.group_, order_b)
                               : Ring::make(*scratch.group_, order_b);

    std::ostringstream log;
    log << "contract: " << contract_id << "\n";
    log << "deposits: " << c.deposits.size() << ", custody: " << scratch.custody_ << "\n";
    log << "ring-encoding: " << (noncanonical ? "insertion-order" : "canonical") << "\n";

    auto one_withdraw = [&](const Ring& ring, int label) -> std::optional<std::string> {
        SentOutput sent = dualkey_onetime(*scratch.group_, payout, rng);
        Transaction tx;
        tx.kind = TxKind::TumblerWithdraw;
        tx.contract_id = contract_id;
        tx.outputs = {{sent.output.output_public, sent.output.nonce_public, c.denomination}};
        if (c.policy == Policy::PerTxField) tx.policy_hint = PolicyHint::ProcessAnyway;
        std::size_t idx = *ring.index_of(pub);
        Digest m = tx_digest(*scratch.group_, tx);
        tx.signature =
            ring_sign(*scratch.group_, view(m), ring, idx, recipient_secret, TagMode::PerRing, rng);
        std::string image_hex = scratch.group_->hex(tx.signature.key_image.image);
        try {
            scratch.withdraw_apply(tx, &ring);
            log << "withdrawal-" << label << ": image=" << image_hex << " executed\n";
            return image_hex;
        } catch (const Error& e) {
            log << "withdrawal-" << label << ": image=" << image_hex << " rejected ("
                << err_name(e.code()) << ")\n";
            return std::nullopt;
        }
    };

    auto first = one_withdraw(ring_a, 1);
    auto second = one_withdraw(ring_b, 2);
    AttackOutcome outcome =
        (first && second) ? AttackOutcome::AttackSucceeded : AttackOutcome::AttackBlocked;
    log << "custody-after: " << scratch.custody_ << "\n";
    log << "outcome: "
        << (outcome == AttackOutcome::AttackSucceeded ? "attack-succeeded" : "attack-blocked")
        << "\n";
    if (transcript) *transcript = log.str();
    return outcome;
}

std::string Ledger::state_hash() const {
    Bytes b = to_bytes("ringledger-state-v1");
    append(b, profile_name(profile()));
    append(b, be64(height_));
    append(b, be64(minted_));
    append(b, be64(custody_));
    append(b, be64(registry_inserts_));
    append(b, be64(utxos_.size()));
    for (const auto& [id, u] : utxos_) {
        append(b, std::string_view(id));
        append(b, group_->encode(u.output_public));
        append(b, group_->encode(u.nonce_public));
        append(b, be64(u.denomination));
        append(b, be64(u.height));
    }
    append(b, be64(spent_images_global_.size()));
    for (const auto& h : spent_images_global_) append(b, std::string_view(h));
    append(b, be64(contracts_.size()));
    for (const auto& [id, c] : contracts_) {
        append(b, std::string_view(id));
        append(b, be64(c.denomination));
        append(b, be64(c.ring_size_n));
        b.push_back(static_cast<std::uint8_t>(c.policy));
        b.push_back(c.closed ? 1 : 0);
        append(b, be64(c.deposits.size()));
        for (std::size_t i = 0; i < c.deposits.size(); ++i) {
            append(b, group_->encode(c.deposits[i]));
            append(b, group_->encode(c.refund_keys[i]));
        }
        append(b, be64(c.used_images.size()));
        for (const auto& h : c.used_images) append(b, std::string_view(h));
        append(b, be64(c.pending.size()));
        for (const auto& w : c.pending) {
            append(b, std::string_view(w.key_image_hex));
            append(b, group_->encode(w.output.output_public));
            append(b, group_->encode(w.output.nonce_public));
            append(b, be64(w.output.denomination));
        }
        append(b, be64(c.withdrawn));
        append(b, be64(c.released));
    }
    return digest_hex(sha256(b));
}

void Ledger::save(const std::string& path) const {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(Err::IoError, "cannot write " + path);
    for (const auto& line : block_lines_) f << line << "\n";
    if (!f.good()) throw Error(Err::IoError, "short write to " + path);
}

Ledger Ledger::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Err::IoError, "cannot read " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty()) lines.push_back(line);
    return replay(lines);
}

Ledger Ledger::replay(const std::vector<std::string>& lines) {
    if (lines.empty()) throw Error(Err::ParseError, "empty ledger file");
    ojson genesis;
    try {
        genesis = ojson::parse(lines[0]);
    } catch (const ojson::exception&) {
        throw Error(Err::ParseError, "genesis line is not json");
    }
    if (genesis.value("kind", "") != "genesis")
        throw Error(Err::ParseError, "first line must be the genesis block");
    auto profile = profile_from_string(genesis.value("profile", ""));
    if (!profile) throw Error(Err::ProfileMismatch, "unknown profile in genesis");

    Ledger ledger(*profile);
    if (ledger.block_lines_[0] != lines[0])
        throw Error(Err::ParseError, "genesis line does not round-trip");
    ledger.replaying_ = true;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        try {
            ledger.apply_line(lines[i]);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(Err::ParseError, "block " + std::to_string(i) + ": " + e.what());
        }
        if (ledger.block_lines_.size() != i + 1 || ledger.block_lines_[i] != lines[i])
            throw Error(Err::ParseError, "replay divergence at block " + std::to_string(i));
    }
    ledger.replaying_ = false;
    return ledger;
}

void Ledger::apply_line(const std::string& line) {
    ojson j;
    try {
        j = ojson::parse(line);
    } catch (const ojson::exception&) {
        throw Error(Err::ParseError, "block line is not json");
    }
    const std::string kind = j.value("kind", "");
    if (kind == "mint") {
        OutputPrecursor o;
        o.output_public = group_->decode_hex(j.at("output_public").get<std::string>());
        o.nonce_public = group_->decode_hex(j.at("nonce_public").get<std::string>());
        o.denomination = j.at("denomination").get<std::uint64_t>();
        mint(o);
    } else if (kind == "cn_transfer") {
        Transaction tx;
        tx.kind = TxKind::CnTransfer;
        tx.ring_utxo_ids = j.at("ring").get<std::vector<std::string>>();
        for (const auto& oj : j.at("outputs")) tx.outputs.push_back(output_from_json(*group_, oj));
        tx.signature = signature_from_hex(*group_, j.at("signature").get<std::string>());
        apply_cn_transfer(tx);
    } else if (kind == "tumbler_new") {
        auto policy = policy_from_string(j.at("policy").get<std::string>());
        if (!policy) throw Error(Err::ParseError, "unknown policy");
        tumbler_new(j.at("denomination").get<std::uint64_t>(),
                    j.at("ring_size").get<std::size_t>(), *policy);
    } else if (kind == "tumbler_deposit") {
        Transaction tx;
        tx.kind = TxKind::TumblerDeposit;
        tx.contract_id = j.at("contract_id").get<std::string>();
        tx.ring_utxo_ids = {j.at("funding_utxo").get<std::string>()};
        tx.derived_public = group_->decode_hex(j.at("derived_public").get<std::string>());
        tx.refund_public = group_->decode_hex(j.at("refund_public").get<std::string>());
        tx.signature = signature_from_hex(*group_, j.at("signature").get<std::string>());
        deposit_apply(tx, nullptr);
    } else if (kind == "tumbler_withdraw") {
        Transaction tx;
        tx.kind = TxKind::TumblerWithdraw;
        tx.contract_id = j.at("contract_id").get<std::string>();
        tx.outputs = {output_from_json(*group_, j.at("output"))};
        tx.signature = signature_from_hex(*group_, j.at("signature").get<std::string>());
        if (j.contains("policy_hint")) {
            auto hint = policy_hint_from_string(j.at("policy_hint").get<std::string>());
            if (!hint) throw Error(Err::ParseError, "unknown policy hint");
            tx.policy_hint = hint;
        }
        withdraw_apply(tx);
    } else if (kind == "tumbler_refund") {
        refund_apply(j.at("contract_id").get<std::string>());
    } else if (kind == "tumbler_release") {
        release_apply(j.at("contract_id").get<std::string>());
    } else {
        throw Error(Err::ParseError, "unknown block kind: " + kind);
    }
}

Transaction cn_build_transfer(const Ledger& ledger, const Scalar& utxo_secret,
                              const std::string& spend_utxo_id,
                              const DualKeyStealthAddress& recipient, std::size_t decoy_count,
                              Rng& rng) {
    const Group& g = ledger.group();
    auto it = ledger.utxos().find(spend_utxo_id);
    if (it == ledger.utxos().end()) throw Error(Err::UnknownUtxo, spend_utxo_id);
    const Utxo& real = it->second;
    if (g.base_mul(utxo_secret) != real.output_public)
        throw Error(Err::InconsistentKnowledge, "secret does not open the utxo");
    Ring self = Ring::make(g, {real.output_public});
    KeyImage img = key_image(g, utxo_secret, real.output_public, self, TagMode::PerKey);
    if (ledger.spent_images_global().count(g.hex(img.image)))
        throw Error(Err::SpentUtxo, spend_utxo_id);

    auto decoys = ledger.decoy_select(real.denomination, decoy_count, rng, {spend_utxo_id});
    std::vector<std::string> ids{spend_utxo_id};
    std::vector<Element> members{real.output_public};
    for (const auto& d : decoys) {
        ids.push_back(d.id);
        members.push_back(d.output_public);
    }
    std::sort(ids.begin(), ids.end());

    SentOutput sent = dualkey_onetime(g, recipient, rng);
    Transaction tx;
    tx.kind = TxKind::CnTransfer;
    tx.ring_utxo_ids = ids;
    tx.outputs = {{sent.output.output_public, sent.output.nonce_public, real.denomination}};

    Ring ring = Ring::make(g, members);
    std::size_t idx = *ring.index_of(real.output_public);
    Digest m = tx_digest(g, tx);
    tx.signature = ring_sign(g, BytesView{m.data(), m.size()}, ring, idx, utxo_secret,
                             TagMode::PerKey, rng);
    return tx;
}

}  // namespace ringledger
