#include "ringledger/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ringledger/analysis.hpp"
#include "ringledger/keyderive.hpp"
#include "ringledger/ledger.hpp"
#include "ringledger/ring_sig.hpp"
#include "ringledger/stealth.hpp"
#include "ringledger/wallet.hpp"

namespace ringledger::cli {
namespace {

using ojson = nlohmann::ordered_json;

Profile profile_of(const std::string& name) {
    auto p = profile_from_string(name);
    if (!p) throw Error(Err::Usage, "unknown profile: " + name);
    return *p;
}

Ledger load_ledger(const std::string& path) {
    if (path.empty()) throw Error(Err::Usage, "--ledger is required");
    return Ledger::load(path);
}

Ledger open_or_create(const std::string& path, Profile profile) {
    if (path.empty()) throw Error(Err::Usage, "--ledger is required");
    if (std::filesystem::exists(path)) return Ledger::load(path);
    Ledger led(profile);
    led.save(path);
    return led;
}

void check_ledger_profile(const Ledger& led, const std::string& explicit_profile) {
    if (!explicit_profile.empty() && led.profile() != profile_of(explicit_profile))
        throw Error(Err::ProfileMismatch,
                    "ledger is " + std::string(profile_name(led.profile())) + ", not " +
                        explicit_profile);
}

Wallet load_wallet(const std::string& path) {
    if (path.empty()) throw Error(Err::Usage, "--wallet is required");
    return Wallet::load(path);
}

// Standalone key file: one keypair, plaintext hex like the wallet format.
struct KeyFile {
    Profile profile;
    std::optional<Scalar> secret;
    Element pub;
};

void save_keyfile(const std::string& path, const Group& g, const KeyPair& kp) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(Err::IoError, "cannot write " + path);
    f << "# SECRETS IN PLAINTEXT. Toy cryptography; never store value with these keys.\n";
    f << "profile=" << profile_name(g.profile()) << "\n";
    f << "secret=" << g.hex_scalar(kp.secret) << "\n";
    f << "public=" << g.hex(kp.pub) << "\n";
}

KeyFile load_keyfile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Err::IoError, "cannot read " + path);
    std::optional<Profile> profile;
    std::string secret_hex, public_hex;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(Err::ParseError, "bad key file line: " + line);
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "profile") {
            profile = profile_from_string(value);
            if (!profile) throw Error(Err::ParseError, "unknown profile: " + value);
        } else if (key == "secret") {
            secret_hex = value;
        } else if (key == "public") {
            public_hex = value;
        } else {
            throw Error(Err::ParseError, "unknown key file field: " + key);
        }
    }
    if (!profile) throw Error(Err::ParseError, "key file lacks profile=");
    const Group& g = Group::get(*profile);
    KeyFile kf{*profile, std::nullopt, g.identity()};
    if (!secret_hex.empty()) kf.secret = g.decode_scalar_hex(secret_hex);
    if (!public_hex.empty())
        kf.pub = g.decode_hex(public_hex);
    else if (kf.secret)
        kf.pub = g.base_mul(*kf.secret);
    else
        throw Error(Err::ParseError, "key file needs secret= or public=");
    return kf;
}

// Address file: scan_public, spend_public, and a ring-of-1 signature under
// the spend key binding both, so a tampered file fails verification.
Bytes address_message(const Group& g, const DualKeyStealthAddress& a) {
    Bytes m = to_bytes("ringledger-address-v1");
    append(m, g.encode(a.scan_public));
    append(m, g.encode(a.spend_public));
    return m;
}

void write_address(const std::string& path, const Group& g, Wallet& w, Rng& rng) {
    DualKeyStealthAddress a = w.address();
    Ring ring = Ring::make(g, {a.spend_public});
    RingSignature sig =
        ring_sign(g, address_message(g, a), ring, 0, w.spend_keys().secret, TagMode::PerKey, rng);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(Err::IoError, "cannot write " + path);
    f << "scan_public=" << g.hex(a.scan_public) << "\n";
    f << "spend_public=" << g.hex(a.spend_public) << "\n";
    f << "sig=" << to_hex(serialize_signature(g, sig)) << "\n";
}

DualKeyStealthAddress read_address(const std::string& path, const Group& g) {
    std::ifstream f(path);
    if (!f) throw Error(Err::IoError, "cannot read " + path);
    std::string scan_hex, spend_hex, sig_hex, line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(Err::BadAddress, "bad address line: " + line);
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "scan_public")
            scan_hex = value;
        else if (key == "spend_public")
            spend_hex = value;
        else if (key == "sig")
            sig_hex = value;
        else
            throw Error(Err::BadAddress, "unknown address field: " + key);
    }
    if (scan_hex.empty() || spend_hex.empty() || sig_hex.empty())
        throw Error(Err::BadAddress, "address file needs scan_public, spend_public, sig");
    DualKeyStealthAddress a;
    try {
        a.scan_public = g.decode_hex(scan_hex);
        a.spend_public = g.decode_hex(spend_hex);
    } catch (const Error&) {
        throw Error(Err::BadAddress, "undecodable address key");
    }
    auto raw = from_hex(sig_hex);
    if (!raw) throw Error(Err::BadAddress, "undecodable signature");
    auto sig = deserialize_signature(g, *raw);
    if (!sig) throw Error(Err::BadAddress, "undecodable signature");
    Ring ring = Ring::make(g, {a.spend_public});
    if (!ring_verify(g, address_message(g, a), ring, *sig, TagMode::PerKey))
        throw Error(Err::InvalidSignature, "address signature does not verify");
    return a;
}

const OwnedUtxo* pick_owned(const std::vector<OwnedUtxo>& owned, const std::string& utxo_id,
                            std::int64_t utxo_index, std::optional<std::uint64_t> denom) {
    if (!utxo_id.empty()) {
        for (const auto& o : owned)
            if (o.utxo.id == utxo_id) return &o;
        throw Error(Err::UnknownUtxo, "wallet does not own " + utxo_id);
    }
    if (utxo_index >= 0) {
        if (static_cast<std::size_t>(utxo_index) >= owned.size())
            throw Error(Err::Usage, "--utxo-index out of range");
        return &owned[static_cast<std::size_t>(utxo_index)];
    }
    for (const auto& o : owned)
        if (!o.spent && (!denom || o.utxo.denomination == *denom)) return &o;
    throw Error(Err::UnknownUtxo,
                denom ? "no unspent output of denomination " + std::to_string(*denom)
                      : "no unspent output in wallet");
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

// "@last" in --contract names the most recently opened contract, so scenario
// scripts do not have to repeat digest-derived ids.
std::string resolve_contract(const Ledger& led, const std::string& id) {
    if (id != "@last") return id;
    std::string last;
    for (const auto& line : led.block_lines()) {
        ojson j = ojson::parse(line);
        if (j.value("kind", "") == "tumbler_new") last = j.at("contract_id").get<std::string>();
    }
    if (last.empty()) throw Error(Err::UnknownContract, "no contracts on this ledger");
    return last;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"privacy-ledger toolkit: stealth addresses, ring signatures, tumblers"};
    app.name("ringledger");
    app.require_subcommand(1);

    std::string profile_s;
    std::uint64_t seed = 0;
    std::string ledger_path, wallet_path;
    bool json = false;

    auto add_common = [&](CLI::App* sub, bool with_ledger, bool with_wallet) {
        sub->add_option("--profile", profile_s, "group profile: toy, toy-large, full");
        sub->add_option("--seed", seed, "seed for all randomness");
        if (with_ledger) sub->add_option("--ledger", ledger_path, "ledger file (jsonl)");
        if (with_wallet) sub->add_option("--wallet", wallet_path, "wallet file");
        sub->add_flag("--json", json, "machine-readable output");
    };
    auto default_profile = [&] { return profile_of(profile_s.empty() ? "toy-large" : profile_s); };

    // keygen
    std::string master_path;
    auto* keygen = app.add_subcommand("keygen", "generate a wallet or a standalone keypair");
    add_common(keygen, false, true);
    keygen->add_option("--master", master_path, "write a standalone keypair file instead");
    keygen->callback([&] {
        if (wallet_path.empty() == master_path.empty())
            throw Error(Err::Usage, "pass exactly one of --wallet or --master");
        Profile prof = default_profile();
        const Group& g = Group::get(prof);
        Rng rng(seed);
        if (!wallet_path.empty()) {
            Wallet w = Wallet::generate(prof, rng);
            w.save(wallet_path);
            if (json) {
                ojson j;
                j["profile"] = std::string(profile_name(prof));
                j["scan_public"] = g.hex(w.scan_keys().pub);
                j["spend_public"] = g.hex(w.spend_keys().pub);
                out << j.dump() << "\n";
            } else {
                out << "profile: " << profile_name(prof) << "\n";
                out << "scan_public: " << g.hex(w.scan_keys().pub) << "\n";
                out << "spend_public: " << g.hex(w.spend_keys().pub) << "\n";
                out << "wallet: " << wallet_path << "\n";
            }
        } else {
            KeyPair kp = g.keygen(rng);
            save_keyfile(master_path, g, kp);
            if (json) {
                ojson j;
                j["profile"] = std::string(profile_name(prof));
                j["public"] = g.hex(kp.pub);
                out << j.dump() << "\n";
            } else {
                out << "profile: " << profile_name(prof) << "\n";
                out << "public: " << g.hex(kp.pub) << "\n";
                out << "master: " << master_path << "\n";
            }
        }
    });

    // derive
    std::string method_s, path_s;
    auto* derive = app.add_subcommand("derive", "child-key derivation along a path");
    derive->add_option("--method", method_s, "add or mult")->required();
    derive->add_option("--path", path_s, "comma-separated hex indices")->required();
    derive->add_option("--master", master_path, "keypair file from keygen --master")->required();
    derive->add_flag("--json", json, "machine-readable output");
    derive->callback([&] {
        CkdMethod method;
        if (method_s == "add")
            method = CkdMethod::Add;
        else if (method_s == "mult")
            method = CkdMethod::Mult;
        else
            throw Error(Err::Usage, "--method must be add or mult");
        std::vector<DerivationIndex> path;
        std::size_t start = 0;
        while (start <= path_s.size()) {
            auto comma = path_s.find(',', start);
            std::string piece = path_s.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            auto bytes = from_hex(piece);
            if (!bytes || bytes->empty())
                throw Error(Err::Usage, "bad path index: " + piece);
            path.push_back(*bytes);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        KeyFile kf = load_keyfile(master_path);
        const Group& g = Group::get(kf.profile);
        ojson j;
        j["method"] = method_s;
        j["depth"] = path.size();
        std::string secret_hex, public_hex;
        if (kf.secret) {
            KeyPair child = derive_chain(g, method, {*kf.secret, kf.pub}, path);
            secret_hex = g.hex_scalar(child.secret);
            public_hex = g.hex(child.pub);
            j["secret"] = secret_hex;
        } else {
            public_hex = g.hex(derive_chain_public(g, method, kf.pub, path));
        }
        j["public"] = public_hex;
        if (json) {
            out << j.dump() << "\n";
        } else {
            out << "method: " << method_s << "\n";
            out << "depth: " << path.size() << "\n";
            if (!secret_hex.empty()) out << "secret: " << secret_hex << "\n";
            out << "public: " << public_hex << "\n";
        }
    });

    // stealth export|import|send|scan
    auto* stealth = app.add_subcommand("stealth", "stealth address exchange and scanning");
    stealth->require_subcommand(1);

    std::string out_path, address_path, scheme_s;
    auto* sexport = stealth->add_subcommand("export", "write this wallet's address file");
    add_common(sexport, false, true);
    sexport->add_option("--out", out_path, "address file to write")->required();
    sexport->callback([&] {
        Wallet w = load_wallet(wallet_path);
        const Group& g = Group::get(w.profile());
        Rng rng(seed);
        write_address(out_path, g, w, rng);
        out << "address: " << out_path << "\n";
        out << "scan_public: " << g.hex(w.scan_keys().pub) << "\n";
        out << "spend_public: " << g.hex(w.spend_keys().pub) << "\n";
    });

    auto* simport = stealth->add_subcommand("import", "verify and show an address file");
    add_common(simport, false, false);
    simport->add_option("--address", address_path, "address file to read")->required();
    simport->callback([&] {
        const Group& g = Group::get(default_profile());
        DualKeyStealthAddress a = read_address(address_path, g);
        if (json) {
            ojson j;
            j["scan_public"] = g.hex(a.scan_public);
            j["spend_public"] = g.hex(a.spend_public);
            j["signature"] = "valid";
            out << j.dump() << "\n";
        } else {
            out << "scan_public: " << g.hex(a.scan_public) << "\n";
            out << "spend_public: " << g.hex(a.spend_public) << "\n";
            out << "signature: valid\n";
        }
    });

    auto* ssend = stealth->add_subcommand("send", "derive a one-time output for an address");
    add_common(ssend, false, true);
    ssend->add_option("--address", address_path, "recipient address file")->required();
    ssend->add_option("--scheme", scheme_s, "basic, improved, or dualkey")->required();
    ssend->callback([&] {
        const Group& g = Group::get(default_profile());
        DualKeyStealthAddress a = read_address(address_path, g);
        Rng rng(seed);
        ojson j;
        j["scheme"] = scheme_s;
        if (scheme_s == "basic") {
            Wallet w = load_wallet(wallet_path);
            BasicPayment bp = basic_onetime(g, w.spend_keys(), a.spend_public);
            j["output_public"] = g.hex(bp.output.output_public);
            j["nonce_public"] = g.hex(bp.output.nonce_public);
        } else if (scheme_s == "improved") {
            SentOutput s = improved_onetime(g, a.spend_public, rng);
            j["output_public"] = g.hex(s.output.output_public);
            j["nonce_public"] = g.hex(s.output.nonce_public);
            j["sender_nonce"] = g.hex_scalar(s.sender_nonce);
        } else if (scheme_s == "dualkey") {
            SentOutput s = dualkey_onetime(g, a, rng);
            j["output_public"] = g.hex(s.output.output_public);
            j["nonce_public"] = g.hex(s.output.nonce_public);
            j["sender_nonce"] = g.hex_scalar(s.sender_nonce);
        } else {
            throw Error(Err::Usage, "--scheme must be basic, improved, or dualkey");
        }
        if (json) {
            out << j.dump() << "\n";
        } else {
            out << "scheme: " << scheme_s << "\n";
            out << "output_public: " << j["output_public"].get<std::string>() << "\n";
            out << "nonce_public: " << j["nonce_public"].get<std::string>() << "\n";
            if (j.contains("sender_nonce"))
                out << "sender_nonce: " << j["sender_nonce"].get<std::string>()
                    << " (sender keeps this private)\n";
        }
    });

    auto* sscan = stealth->add_subcommand("scan", "find this wallet's outputs on a ledger");
    add_common(sscan, true, true);
    sscan->callback([&] {
        Ledger led = load_ledger(ledger_path);
        check_ledger_profile(led, profile_s);
        Wallet w = load_wallet(wallet_path);
        auto owned = w.scan(led);
        if (json) {
            ojson j;
            j["owned"] = ojson::array();
            for (const auto& o : owned) {
                ojson e;
                e["utxo"] = o.utxo.id;
                e["denomination"] = o.utxo.denomination;
                e["height"] = o.utxo.height;
                e["spent"] = o.spent;
                j["owned"].push_back(e);
            }
            out << j.dump() << "\n";
        } else {
            out << "owned: " << owned.size() << "\n";
            for (const auto& o : owned)
                out << o.utxo.id << " denom=" << o.utxo.denomination
                    << " height=" << o.utxo.height << (o.spent ? " spent" : " unspent") << "\n";
        }
    });

    // mint
    std::uint64_t denom = 0, count = 1, ring_size = 0;
    auto* mint = app.add_subcommand("mint", "mint fresh outputs to this wallet");
    add_common(mint, true, true);
    mint->add_option("--denom", denom, "denomination")->required();
    mint->add_option("--count", count, "number of outputs");
    mint->callback([&] {
        Ledger led = open_or_create(ledger_path, default_profile());
        check_ledger_profile(led, profile_s);
        Wallet w = load_wallet(wallet_path);
        if (w.profile() != led.profile())
            throw Error(Err::ProfileMismatch, "wallet profile differs from ledger");
        Rng rng(seed);
        std::vector<std::string> ids;
        for (std::uint64_t i = 0; i < count; ++i) {
            SentOutput s = dualkey_onetime(led.group(), w.address(), rng);
            Utxo u = led.mint({s.output.output_public, s.output.nonce_public, denom});
            ids.push_back(u.id);
        }
        led.save(ledger_path);
        if (json) {
            ojson j;
            j["minted"] = ids;
            j["denomination"] = denom;
            out << j.dump() << "\n";
        } else {
            for (const auto& id : ids) out << "minted: " << id << " denom=" << denom << "\n";
        }
    });

    // cn-transfer
    std::string utxo_id, to_path, hint_s;
    std::int64_t utxo_index = -1;
    std::uint64_t decoys = 0;
    auto* transfer = app.add_subcommand("cn-transfer", "ring-signed transfer of one utxo");
    add_common(transfer, true, true);
    transfer->add_option("--to", to_path, "recipient address file")->required();
    transfer->add_option("--utxo", utxo_id, "source utxo id (default: first unspent)");
    transfer->add_option("--utxo-index", utxo_index, "source by index into owned list");
    transfer->add_option("--decoys", decoys, "decoy count (ring size - 1)");
    transfer->callback([&] {
        Ledger led = load_ledger(ledger_path);
        check_ledger_profile(led, profile_s);
        Wallet w = load_wallet(wallet_path);
        if (w.profile() != led.profile())
            throw Error(Err::ProfileMismatch, "wallet profile differs from ledger");
        DualKeyStealthAddress to = read_address(to_path, led.group());
        Rng rng(seed);
        auto owned = w.scan(led);
        const OwnedUtxo* src = pick_owned(owned, utxo_id, utxo_index, std::nullopt);
        Transaction tx = cn_build_transfer(led, src->secret, src->utxo.id, to, decoys, rng);
        auto outputs = led.apply_cn_transfer(tx);
        led.save(ledger_path);
        if (json) {
            ojson j;
            j["spent"] = src->utxo.id;
            j["ring"] = tx.ring_utxo_ids;
            j["key_image"] = led.group().hex(tx.signature.key_image.image);
            ojson outs = ojson::array();
            for (const auto& u : outputs) outs.push_back(u.id);
            j["outputs"] = outs;
            out << j.dump() << "\n";
        } else {
            out << "spent: " << src->utxo.id << "\n";
            for (const auto& id : tx.ring_utxo_ids) out << "ring-member: " << id << "\n";
            out << "key_image: " << led.group().hex(tx.signature.key_image.image) << "\n";
            for (const auto& u : outputs)
                out << "output: " << u.id << " denom=" << u.denomination << "\n";
        }
    });

    // tumbler new|deposit|withdraw
    auto* tumbler = app.add_subcommand("tumbler", "custodial mixer contracts");
    tumbler->require_subcommand(1);

    std::string policy_s, contract_id, from_path;
    auto* tnew = tumbler->add_subcommand("new", "open a tumbler contract");
    add_common(tnew, true, false);
    tnew->add_option("--denom", denom, "denomination")->required();
    tnew->add_option("--ring-size", ring_size, "target anonymity-set size")->required();
    tnew->add_option("--policy", policy_s, "process, refuse, delay, or per-tx")->required();
    tnew->callback([&] {
        auto policy = policy_from_string(policy_s);
        if (!policy) throw Error(Err::Usage, "unknown policy: " + policy_s);
        Ledger led = open_or_create(ledger_path, default_profile());
        check_ledger_profile(led, profile_s);
        std::string id = led.tumbler_new(denom, ring_size, *policy);
        led.save(ledger_path);
        if (json) {
            ojson j;
            j["contract"] = id;
            j["denomination"] = denom;
            j["ring_size"] = ring_size;
            j["policy"] = policy_s;
            out << j.dump() << "\n";
        } else {
            out << "contract: " << id << "\n";
            out << "denomination: " << denom << "\n";
            out << "ring_size: " << ring_size << "\n";
            out << "policy: " << policy_s << "\n";
        }
    });

    auto* tdeposit = tumbler->add_subcommand("deposit", "fund a deposit for a recipient");
    add_common(tdeposit, true, true);
    tdeposit->add_option("--contract", contract_id, "contract id")->required();
    tdeposit->add_option("--to", to_path, "recipient address file")->required();
    tdeposit->add_option("--utxo", utxo_id, "funding utxo id (default: first unspent match)");
    tdeposit->callback([&] {
        Ledger led = load_ledger(ledger_path);
        check_ledger_profile(led, profile_s);
        contract_id = resolve_contract(led, contract_id);
        Wallet w = load_wallet(wallet_path);
        if (w.profile() != led.profile())
            throw Error(Err::ProfileMismatch, "wallet profile differs from ledger");
        const Group& g = led.group();
        DualKeyStealthAddress to = read_address(to_path, g);
        Rng rng(seed);
        std::uint64_t want = led.contract(contract_id).denomination;
        auto owned = w.scan(led);
        const OwnedUtxo* funding = pick_owned(owned, utxo_id, -1, want);
        auto [counter, derived] = next_tumbler_key(g, w.spend_keys().secret, to.spend_public,
                                                   led.contract(contract_id).deposits);
        KeyPair refund = w.fresh_key(rng);
        std::vector<Utxo> released;
        led.tumbler_deposit(contract_id, derived, refund.pub, funding->utxo.id, funding->secret,
                            rng, &released);
        led.save(ledger_path);
        w.save(wallet_path);
        std::size_t index = led.contract(contract_id).deposits.size() - 1;
        if (json) {
            ojson j;
            j["contract"] = contract_id;
            j["deposit_index"] = index;
            j["counter"] = counter;
            j["derived_public"] = g.hex(derived);
            j["funding"] = funding->utxo.id;
            ojson rel = ojson::array();
            for (const auto& u : released) rel.push_back(u.id);
            j["released"] = rel;
            out << j.dump() << "\n";
        } else {
            out << "contract: " << contract_id << "\n";
            out << "deposit_index: " << index << "\n";
            out << "counter: " << counter << "\n";
            out << "derived_public: " << g.hex(derived) << "\n";
            out << "funding: " << funding->utxo.id << "\n";
            for (const auto& u : released) out << "released-output: " << u.id << "\n";
        }
    });

    auto* twithdraw = tumbler->add_subcommand("withdraw", "claim a deposit made for this wallet");
    add_common(twithdraw, true, true);
    twithdraw->add_option("--contract", contract_id, "contract id")->required();
    twithdraw->add_option("--from", from_path, "sender address file")->required();
    twithdraw->add_option("--hint", hint_s, "per-tx policy hint: process, fail, or delay");
    twithdraw->callback([&] {
        Ledger led = load_ledger(ledger_path);
        check_ledger_profile(led, profile_s);
        contract_id = resolve_contract(led, contract_id);
        Wallet w = load_wallet(wallet_path);
        if (w.profile() != led.profile())
            throw Error(Err::ProfileMismatch, "wallet profile differs from ledger");
        const Group& g = led.group();
        DualKeyStealthAddress from = read_address(from_path, g);
        Rng rng(seed);
        std::optional<PolicyHint> hint;
        if (!hint_s.empty()) {
            hint = policy_hint_from_string(hint_s);
            if (!hint) throw Error(Err::Usage, "unknown hint: " + hint_s);
        }
        auto claim = find_tumbler_claim(g, w.spend_keys().secret, from.spend_public,
                                        led.contract(contract_id).deposits);
        if (!claim)
            throw Error(Err::NotADepositor, "no claimable deposit for this wallet");
        WithdrawOutcome o;
        try {
            o = led.tumbler_withdraw(contract_id, claim->second, w.address(), rng, hint);
        } catch (const Error&) {
            led.save(ledger_path);
            throw;
        }
        led.save(ledger_path);
        const char* status = o.status == WithdrawStatus::Executed ? "executed" : "queued";
        if (json) {
            ojson j;
            j["contract"] = contract_id;
            j["status"] = status;
            j["key_image"] = g.hex(o.image.image);
            if (o.paid) j["output"] = o.paid->id;
            out << j.dump() << "\n";
        } else {
            out << "contract: " << contract_id << "\n";
            out << "status: " << status << "\n";
            out << "key_image: " << g.hex(o.image.image) << "\n";
            if (o.paid) out << "output: " << o.paid->id << " denom=" << o.paid->denomination
                            << "\n";
        }
    });

    // analyze
    std::string knowledge_path;
    auto* analyze = app.add_subcommand("analyze", "chain-reaction anonymity analysis");
    add_common(analyze, true, false);
    analyze->add_option("--knowledge", knowledge_path,
                        "file of lines: spent <utxo-id> | unspent <utxo-id>");
    analyze->callback([&] {
        Ledger led = load_ledger(ledger_path);
        check_ledger_profile(led, profile_s);
        ObserverView view = observe(led);
        if (!knowledge_path.empty()) {
            std::ifstream f(knowledge_path);
            if (!f) throw Error(Err::IoError, "cannot read " + knowledge_path);
            std::string line;
            while (std::getline(f, line)) {
                if (line.empty() || line[0] == '#') continue;
                auto tokens = tokenize(line);
                if (tokens.size() != 2 || (tokens[0] != "spent" && tokens[0] != "unspent"))
                    throw Error(Err::ParseError, "bad knowledge line: " + line);
                view.external_knowledge.emplace(tokens[1], tokens[0] == "spent"
                                                               ? Knowledge::KnownSpent
                                                               : Knowledge::KnownUnspent);
            }
        }
        AnonymityReport report = chain_reaction_deanon(view);
        if (json) {
            ojson j;
            j["transactions"] = ojson::array();
            for (std::size_t i = 0; i < view.transactions.size(); ++i) {
                ojson e;
                e["key_image"] = view.transactions[i].key_image_hex;
                e["ring"] = view.transactions[i].ring;
                e["candidates"] = report.candidates[i];
                e["effective_set_size"] = report.effective_set_sizes[i];
                auto it = report.resolved.find(i);
                if (it != report.resolved.end()) e["resolved"] = it->second;
                j["transactions"].push_back(e);
            }
            out << j.dump() << "\n";
        } else {
            out << "transactions: " << view.transactions.size() << "\n";
            for (std::size_t i = 0; i < view.transactions.size(); ++i) {
                out << "tx " << i << ": image=" << view.transactions[i].key_image_hex
                    << " ring=" << view.transactions[i].ring.size()
                    << " effective=" << report.effective_set_sizes[i];
                auto it = report.resolved.find(i);
                if (it != report.resolved.end()) out << " resolved=" << it->second;
                out << "\n";
                out << "  candidates:";
                for (const auto& c : report.candidates[i]) out << " " << c;
                out << "\n";
            }
        }
    });

    // metrics
    auto* metrics = app.add_subcommand("metrics", "signature storage costs");
    add_common(metrics, true, false);
    metrics->callback([&] {
        Ledger led = load_ledger(ledger_path);
        check_ledger_profile(led, profile_s);
        StorageMetrics m = storage_metrics(led);
        if (json) {
            ojson j;
            j["per_tx"] = ojson::array();
            for (const auto& t : m.per_tx) {
                ojson e;
                e["ring_size"] = t.ring_size;
                e["bytes"] = t.bytes;
                j["per_tx"].push_back(e);
            }
            j["fitted_a"] = m.fitted_a;
            j["fitted_b"] = m.fitted_b;
            j["residual"] = m.residual;
            j["tumbler_total_bytes"] = m.tumbler_total_bytes;
            out << j.dump() << "\n";
        } else {
            out << "signatures: " << m.per_tx.size() << "\n";
            for (std::size_t i = 0; i < m.per_tx.size(); ++i)
                out << "sig " << i << ": ring=" << m.per_tx[i].ring_size
                    << " bytes=" << m.per_tx[i].bytes << "\n";
            out << "fit: bytes = " << m.fitted_a << " + " << m.fitted_b << " * N\n";
            out << "residual: " << m.residual << "\n";
            out << "tumbler_withdraw_bytes: " << m.tumbler_total_bytes << "\n";
        }
    });

    // demo sender-spend-attack|permuted-ring|ordering
    auto* demo = app.add_subcommand("demo", "scripted pitfall demonstrations");
    demo->require_subcommand(1);

    auto* dspend = demo->add_subcommand("sender-spend-attack",
                                        "can the sender rebuild the spend key?");
    add_common(dspend, false, false);
    dspend->callback([&] {
        const Group& g = Group::get(default_profile());
        Rng rng(seed);
        KeyPair recipient_scan = g.keygen(rng);
        KeyPair recipient_spend = g.keygen(rng);
        KeyPair sender = g.keygen(rng);

        BasicPayment bp = basic_onetime(g, sender, recipient_spend.pub);
        SenderView vb{StealthScheme::Basic, sender.secret, recipient_spend.pub, std::nullopt};
        auto got = demo_sender_spend(g, bp.output, vb);
        out << "scheme basic: " << (got ? "AttackSucceeded" : "AttackBlocked");
        if (got) out << " (sender holds a scalar with sk*G = P)";
        out << "\n";

        SentOutput si = improved_onetime(g, recipient_spend.pub, rng);
        SenderView vi{StealthScheme::Improved, si.sender_nonce, recipient_spend.pub,
                      std::nullopt};
        out << "scheme improved: "
            << (demo_sender_spend(g, si.output, vi) ? "AttackSucceeded" : "AttackBlocked")
            << "\n";

        DualKeyStealthAddress addr{recipient_scan.pub, recipient_spend.pub};
        SentOutput sd = dualkey_onetime(g, addr, rng);
        SenderView vd{StealthScheme::DualKey, sd.sender_nonce, recipient_spend.pub,
                      recipient_scan.pub};
        out << "scheme dualkey: "
            << (demo_sender_spend(g, sd.output, vd) ? "AttackSucceeded" : "AttackBlocked")
            << "\n";
    });

    auto* dring = demo->add_subcommand("permuted-ring",
                                       "double withdrawal via permuted ring encoding");
    add_common(dring, false, false);
    dring->callback([&] {
        Profile prof = default_profile();
        const Group& g = Group::get(prof);
        Rng rng(seed);
        Ledger led(prof);
        Wallet sender = Wallet::generate(prof, rng);
        Wallet r1 = Wallet::generate(prof, rng);
        Wallet r2 = Wallet::generate(prof, rng);
        std::string cid = led.tumbler_new(5, 2, Policy::ProcessAnyway);
        for (Wallet* r : {&r1, &r2}) {
            SentOutput s = dualkey_onetime(g, sender.address(), rng);
            Utxo funding = led.mint({s.output.output_public, s.output.nonce_public, 5});
            Scalar fsk = dualkey_recover(g, sender.scan_keys().secret,
                                         sender.spend_keys().secret, funding.nonce_public);
            auto [counter, derived] = next_tumbler_key(g, sender.spend_keys().secret,
                                                       r->spend_keys().pub,
                                                       led.contract(cid).deposits);
            led.tumbler_deposit(cid, derived, sender.fresh_key(rng).pub, funding.id, fsk, rng);
        }
        auto claim = find_tumbler_claim(g, r1.spend_keys().secret, sender.spend_keys().pub,
                                        led.contract(cid).deposits);
        if (!claim) throw Error(Err::NotADepositor, "derivation failed");
        std::string transcript;
        led.attack_demo_permuted_ring(cid, claim->second, r1.address(), rng, false, &transcript);
        out << "== canonical ==\n" << transcript;
        led.attack_demo_permuted_ring(cid, claim->second, r1.address(), rng, true, &transcript);
        out << "== insertion-order ==\n" << transcript;
    });

    std::uint64_t invalid_count = 100;
    auto* dorder = demo->add_subcommand("ordering",
                                        "rejected transactions must not touch the registry");
    add_common(dorder, false, false);
    dorder->add_option("--count", invalid_count, "number of invalid submissions");
    dorder->callback([&] {
        Profile prof = default_profile();
        const Group& g = Group::get(prof);
        Rng rng(seed);
        Ledger led(prof);
        Wallet alice = Wallet::generate(prof, rng);
        Wallet bob = Wallet::generate(prof, rng);
        std::vector<Utxo> pool;
        for (int i = 0; i < 4; ++i) {
            SentOutput s = dualkey_onetime(g, alice.address(), rng);
            pool.push_back(led.mint({s.output.output_public, s.output.nonce_public, 5}));
        }
        auto open = [&](const Utxo& u) {
            return dualkey_recover(g, alice.scan_keys().secret, alice.spend_keys().secret,
                                   u.nonce_public);
        };
        led.apply_cn_transfer(
            cn_build_transfer(led, open(pool[0]), pool[0].id, bob.address(), 3, rng));
        Transaction good = cn_build_transfer(led, open(pool[1]), pool[1].id, bob.address(), 3,
                                             rng);
        out << "registry inserts before: " << led.registry_inserts() << "\n";
        out << "images before: " << led.spent_images_global().size() << "\n";
        std::uint64_t rejected = 0;
        for (std::uint64_t i = 0; i < invalid_count; ++i) {
            Transaction bad = good;
            std::size_t slot = i % bad.signature.responses.size();
            bad.signature.responses[slot] =
                g.scalar_add(bad.signature.responses[slot], g.scalar_from_u64(1 + i));
            try {
                led.apply_cn_transfer(bad);
            } catch (const Error& e) {
                if (e.code() == Err::InvalidSignature) ++rejected;
            }
        }
        out << "invalid submissions: " << invalid_count << "\n";
        out << "rejected: " << rejected << " (invalid-signature)\n";
        out << "registry inserts after: " << led.registry_inserts() << "\n";
        out << "images after: " << led.spent_images_global().size() << "\n";
        led.apply_cn_transfer(good);
        out << "untampered original accepted: height=" << led.height() << "\n";
    });

    // scenario
    std::string script_path;
    auto* scenario = app.add_subcommand("scenario", "run a script, print a transcript");
    add_common(scenario, true, false);
    scenario->add_option("script", script_path, "file with one command per line")->required();
    scenario->callback([&] {
        std::string led_path = ledger_path.empty() ? "scenario.jsonl" : ledger_path;
        Profile prof = default_profile();
        open_or_create(led_path, prof);
        std::ifstream f(script_path);
        if (!f) throw Error(Err::IoError, "cannot read " + script_path);
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            out << "$ " << line << "\n";
            int rc = run(tokenize(line), out, out);
            out << "[exit " << rc << "]\n";
        }
        out << "-- ledger --\n";
        Ledger led = Ledger::load(led_path);
        for (const auto& block : led.block_lines()) out << block << "\n";
    });

    std::vector<const char*> argv;
    argv.push_back("ringledger");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == Err::Usage ? 2 : 1;
    }
    return 0;
}

}  // namespace ringledger::cli
