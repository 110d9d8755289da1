#include "ringledger/wallet.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ringledger {

Wallet::Wallet(Profile profile, KeyPair scan, KeyPair spend)
    : profile_(profile), scan_(std::move(scan)), spend_(std::move(spend)) {}

Wallet Wallet::generate(Profile profile, Rng& rng) {
    const Group& g = Group::get(profile);
    KeyPair scan = g.keygen(rng);
    KeyPair spend = g.keygen(rng);
    return Wallet(profile, scan, spend);
}

KeyPair Wallet::fresh_key(Rng& rng) {
    const Group& g = Group::get(profile_);
    KeyPair kp = g.keygen(rng);
    extra_.push_back(kp);
    return kp;
}

std::vector<OwnedUtxo> Wallet::scan(const Ledger& ledger) const {
    if (ledger.profile() != profile_)
        throw Error(Err::ProfileMismatch, "wallet and ledger profiles differ");
    const Group& g = ledger.group();

    std::vector<const Utxo*> order;
    std::vector<OneTimeOutput> candidates;
    for (const auto& [id, u] : ledger.utxos()) {
        order.push_back(&u);
        candidates.push_back({u.output_public, u.nonce_public, StealthScheme::DualKey});
    }

    std::vector<OwnedUtxo> owned;
    std::set<std::string> seen;
    auto add = [&](const Utxo& u, const Scalar& sk) {
        Ring self = Ring::make(g, {u.output_public});
        KeyImage img = key_image(g, sk, u.output_public, self, TagMode::PerKey);
        bool spent = ledger.spent_images_global().count(g.hex(img.image)) > 0;
        owned.push_back({u, sk, img, spent});
        seen.insert(u.id);
    };

    for (std::size_t i : dualkey_scan(g, scan_.secret, spend_.pub, candidates)) {
        const Utxo& u = *order[i];
        add(u, dualkey_recover(g, scan_.secret, spend_.secret, u.nonce_public));
    }
    for (const auto& kp : extra_) {
        for (const Utxo* u : order) {
            if (seen.count(u->id)) continue;
            if (u->output_public == kp.pub) add(*u, kp.secret);
        }
    }
    std::sort(owned.begin(), owned.end(),
              [](const OwnedUtxo& a, const OwnedUtxo& b) { return a.utxo.id < b.utxo.id; });
    return owned;
}

void Wallet::save(const std::string& path) const {
    const Group& g = Group::get(profile_);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(Err::IoError, "cannot write " + path);
    f << "# ringledger wallet: SECRETS IN PLAINTEXT.\n";
    f << "# Toy cryptography for protocol study; never store value with this.\n";
    f << "profile=" << profile_name(profile_) << "\n";
    f << "scan_secret=" << g.hex_scalar(scan_.secret) << "\n";
    f << "spend_secret=" << g.hex_scalar(spend_.secret) << "\n";
    for (const auto& kp : extra_) f << "extra_secret=" << g.hex_scalar(kp.secret) << "\n";
    if (!f.good()) throw Error(Err::IoError, "short write to " + path);
}

Wallet Wallet::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Err::IoError, "cannot read " + path);
    std::optional<Profile> profile;
    std::optional<std::string> scan_hex, spend_hex;
    std::vector<std::string> extra_hex;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(Err::ParseError, "wallet line: " + line);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "profile") {
            profile = profile_from_string(value);
            if (!profile) throw Error(Err::ParseError, "unknown profile: " + value);
        } else if (key == "scan_secret") {
            scan_hex = value;
        } else if (key == "spend_secret") {
            spend_hex = value;
        } else if (key == "extra_secret") {
            extra_hex.push_back(value);
        } else {
            throw Error(Err::ParseError, "unknown wallet key: " + key);
        }
    }
    if (!profile || !scan_hex || !spend_hex)
        throw Error(Err::ParseError, "wallet needs profile, scan_secret, spend_secret");
    const Group& g = Group::get(*profile);
    auto pair_of = [&](const std::string& h) {
        Scalar s = g.decode_scalar_hex(h);
        return KeyPair{s, g.base_mul(s)};
    };
    Wallet w(*profile, pair_of(*scan_hex), pair_of(*spend_hex));
    for (const auto& h : extra_hex) w.extra_.push_back(pair_of(h));
    return w;
}

std::pair<std::uint64_t, Element> next_tumbler_key(const Group& g, const Scalar& sender_secret,
                                                   const Element& recipient_spend_public,
                                                   const std::vector<Element>& deposits,
                                                   std::uint64_t start) {
    SharedSecret shared = dh_shared(g, sender_secret, recipient_spend_public);
    for (std::uint64_t ctr = start; ctr < start + 4096; ++ctr) {
        Element derived;
        try {
            derived = mobius_ckd_next(g, recipient_spend_public, shared, ctr);
        } catch (const DerivedZeroError&) {
            continue;
        }
        if (std::find(deposits.begin(), deposits.end(), derived) == deposits.end())
            return {ctr, derived};
    }
    throw Error(Err::Usage, "no usable derivation counter found");
}

std::optional<std::pair<std::uint64_t, Scalar>> find_tumbler_claim(
    const Group& g, const Scalar& spend_secret, const Element& sender_public,
    const std::vector<Element>& deposits, std::uint64_t max_counter) {
    SharedSecret shared = dh_shared(g, spend_secret, sender_public);
    for (std::uint64_t ctr = 0; ctr <= max_counter; ++ctr) {
        Element derived;
        Scalar secret;
        try {
            derived = mobius_ckd_next(g, g.base_mul(spend_secret), shared, ctr);
            secret = mobius_ckd_secret(g, spend_secret, shared, ctr);
        } catch (const DerivedZeroError&) {
            continue;
        }
        if (std::find(deposits.begin(), deposits.end(), derived) != deposits.end())
            return std::make_pair(ctr, secret);
    }
    return std::nullopt;
}

}  // namespace ringledger
