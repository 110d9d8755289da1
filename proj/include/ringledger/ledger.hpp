#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringledger/ring_sig.hpp"
#include "ringledger/stealth.hpp"

namespace ringledger {

/// Deterministic single-process ledger. Strictly linear chain, one transaction
/// per block, blocks formed eagerly, no fees, no forks. Two protocol modes
/// share the chain:
///
///   CryptoNote-style transfers: the ring hides the sender among decoy UTXOs;
///   key images live in one global registry (PerKey linking), so spending the
///   same output twice is detected no matter which rings are used.
///
///   Tumbler contracts: equal-denomination deposits into a custodial pool;
///   withdrawals ring-sign over the full deposit list and link per contract
///   (PerRing). A depleted contract (fewer deposits than its target ring
///   size) reacts per policy: process with the small ring, refuse (and wind
///   down if nothing was withdrawn yet), queue until the threshold is met, or
///   let each transaction pick via its policy hint.
///
/// Verification ordering contract, every path: (1) verify the signature,
/// (2) only then consult the key-image registry, (3) only then mutate.
/// A rejected transaction leaves no trace; registry_inserts() exposes an
/// instrumentation counter so tests can prove it.
///
/// UTXOs are never visibly consumed: the map only grows, spentness exists
/// solely as a used key image. Conservation is therefore tracked by counters
/// (minted = circulating + custody) rather than by deleting entries.

enum class TxKind { CnTransfer, TumblerDeposit, TumblerWithdraw };

enum class Policy { ProcessAnyway, Refuse, Delay, PerTxField };
enum class PolicyHint { ProcessAnyway, Fail, Delay };

std::string_view policy_name(Policy p);
std::optional<Policy> policy_from_string(std::string_view s);
std::string_view policy_hint_name(PolicyHint h);
std::optional<PolicyHint> policy_hint_from_string(std::string_view s);

struct Utxo {
    std::string id;  // hex of digest(output_public, nonce_public, denomination, height)
    Element output_public;
    Element nonce_public;
    std::uint64_t denomination = 0;
    std::uint64_t height = 0;
};

std::string utxo_id(const Group& g, const Element& output_public, const Element& nonce_public,
                    std::uint64_t denomination, std::uint64_t height);

struct OutputPrecursor {
    Element output_public;
    Element nonce_public;
    std::uint64_t denomination = 0;
};

struct Transaction {
    TxKind kind = TxKind::CnTransfer;
    std::vector<std::string> ring_utxo_ids;  // CnTransfer: ring; deposit: the funding utxo
    RingSignature signature;
    std::vector<OutputPrecursor> outputs;
    std::string contract_id;
    std::optional<PolicyHint> policy_hint;
    Element derived_public;  // deposit only: the stealth DPK joining the pool
    Element refund_public;   // deposit only: where a wind-down refund goes
};

/// Signed message: digest over the canonical serialization of everything but
/// the signature.
Digest tx_digest(const Group& g, const Transaction& tx);

struct PendingWithdrawal {
    std::string key_image_hex;
    OutputPrecursor output;
};

struct TumblerContract {
    std::string id;
    std::uint64_t denomination = 0;
    std::size_t ring_size_n = 0;
    Policy policy = Policy::ProcessAnyway;
    std::vector<Element> deposits;        // DPK_i in deposit order
    std::vector<Element> refund_keys;     // parallel to deposits
    ImageRegistry used_images;            // PerRing scope
    std::deque<PendingWithdrawal> pending;
    std::uint64_t withdrawn = 0;          // executed + queued withdrawals
    std::uint64_t released = 0;           // funds actually paid out
    bool closed = false;

    bool depleted() const { return deposits.size() < ring_size_n; }
};

enum class WithdrawStatus { Executed, Queued };

struct WithdrawOutcome {
    WithdrawStatus status;
    KeyImage image;
    std::optional<Utxo> paid;  // set when Executed (and for each release)
};

enum class AttackOutcome { AttackSucceeded, AttackBlocked };

class Ledger {
public:
    explicit Ledger(Profile profile);

    const Group& group() const { return *group_; }
    Profile profile() const { return group_->profile(); }
    std::uint64_t height() const { return height_; }
    const std::map<std::string, Utxo>& utxos() const { return utxos_; }
    const ImageRegistry& spent_images_global() const { return spent_images_global_; }
    const std::map<std::string, TumblerContract>& contracts() const { return contracts_; }
    const TumblerContract& contract(const std::string& id) const;
    const std::vector<std::string>& block_lines() const { return block_lines_; }

    std::uint64_t minted() const { return minted_; }
    std::uint64_t custody() const { return custody_; }
    std::uint64_t circulating() const { return minted_ - custody_; }
    /// Total key-image registry insertions, all scopes. Rejections must not move it.
    std::uint64_t registry_inserts() const { return registry_inserts_; }

    /// Creates money from nothing; scenario plumbing.
    Utxo mint(const OutputPrecursor& out);

    /// Uniform sample without replacement among utxos of the denomination,
    /// excluding `exclude` ids. Throws InsufficientDecoys.
    std::vector<Utxo> decoy_select(std::uint64_t denomination, std::size_t n, Rng& rng,
                                   const std::vector<std::string>& exclude = {}) const;

    /// Verify -> link -> mutate. Throws InvalidSignature, DoubleSpend,
    /// UnknownUtxo, DenominationMismatch; state untouched on throw.
    std::vector<Utxo> apply_cn_transfer(const Transaction& tx);

    std::string tumbler_new(std::uint64_t denomination, std::size_t ring_size, Policy policy);

    /// Consumes the funding utxo (ring-of-1 transparent spend, global image
    /// scope), then appends derived_public to the pool. The deposit is
    /// irreversible; refund_public is only ever used by a Refuse wind-down.
    void tumbler_deposit(const std::string& contract_id, const Element& derived_public,
                         const Element& refund_public, const std::string& funding_utxo_id,
                         const Scalar& funding_secret, Rng& rng,
                         std::vector<Utxo>* released_out = nullptr);

    /// Builds and applies a withdrawal by the holder of recipient_secret.
    /// Ring = the full deposit list. Policy decides the depleted path.
    WithdrawOutcome tumbler_withdraw(const std::string& contract_id,
                                     const Scalar& recipient_secret,
                                     const DualKeyStealthAddress& payout, Rng& rng,
                                     std::optional<PolicyHint> hint = std::nullopt);

    /// Two withdrawals by one key over differently-ordered deposit lists.
    /// Canonical encoding links them (second rejected); the noncanonical
    /// encoding lets both through. Runs on a scratch copy: nothing persists.
    AttackOutcome attack_demo_permuted_ring(const std::string& contract_id,
                                            const Scalar& recipient_secret,
                                            const DualKeyStealthAddress& payout, Rng& rng,
                                            bool noncanonical, std::string* transcript = nullptr);

    /// Canonical serialization of the public state.
    std::string state_hash() const;

    void save(const std::string& path) const;
    static Ledger load(const std::string& path);
    static Ledger replay(const std::vector<std::string>& lines);

private:
    const Group* group_;
    std::uint64_t height_ = 0;
    std::map<std::string, Utxo> utxos_;
    ImageRegistry spent_images_global_;
    std::map<std::string, TumblerContract> contracts_;
    std::vector<std::string> block_lines_;
    std::uint64_t minted_ = 0;
    std::uint64_t custody_ = 0;
    std::uint64_t registry_inserts_ = 0;
    bool replaying_ = false;

    Utxo add_utxo(const OutputPrecursor& out);
    Ring cn_ring(const Transaction& tx, std::uint64_t* denomination) const;
    void deposit_apply(const Transaction& tx, std::vector<Utxo>* released_out);
    WithdrawOutcome withdraw_apply(const Transaction& tx, const Ring* override_ring = nullptr);
    void refund_apply(const std::string& contract_id);
    Utxo release_apply(const std::string& contract_id);
    std::vector<Utxo> drain_pending(TumblerContract& contract);
    void apply_line(const std::string& line);
};

/// The spender's side of a transfer: selects decoys, derives the recipient's
/// one-time output, signs over the tx digest with the PerKey image.
Transaction cn_build_transfer(const Ledger& ledger, const Scalar& utxo_secret,
                              const std::string& spend_utxo_id,
                              const DualKeyStealthAddress& recipient, std::size_t decoy_count,
                              Rng& rng);

}  // namespace ringledger
