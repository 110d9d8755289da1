#include "ringledger/analysis.hpp"

#include <algorithm>

#include "json.hpp"

namespace ringledger {

using ojson = nlohmann::ordered_json;

ObserverView observe(const Ledger& ledger) {
    const Group& g = ledger.group();
    const std::size_t image_hex_len = 2 * g.element_size();
    ObserverView view;
    for (const auto& line : ledger.block_lines()) {
        ojson j = ojson::parse(line);
        const std::string kind = j.value("kind", "");
        ObservedTransaction tx;
        if (kind == "cn_transfer") {
            tx.ring = j.at("ring").get<std::vector<std::string>>();
        } else if (kind == "tumbler_deposit") {
            tx.ring = {j.at("funding_utxo").get<std::string>()};
        } else {
            continue;
        }
        tx.key_image_hex = j.at("signature").get<std::string>().substr(0, image_hex_len);
        view.transactions.push_back(std::move(tx));
    }
    return view;
}

namespace {

struct MatchProblem {
    std::vector<std::vector<int>> adj;  // tx -> candidate value indices
    int values = 0;

    bool try_augment(int tx, std::vector<char>& used, std::vector<int>& owner,
                     int skip_tx, int skip_value) const {
        for (int v : adj[tx]) {
            if (v == skip_value || used[v]) continue;
            used[v] = 1;
            if (owner[v] < 0 || (owner[v] != skip_tx &&
                                 try_augment(owner[v], used, owner, skip_tx, skip_value))) {
                owner[v] = tx;
                return true;
            }
        }
        return false;
    }

    /// Can every tx except skip_tx be matched, with skip_value off limits?
    bool perfect(int skip_tx, int skip_value) const {
        std::vector<int> owner(values, -1);
        for (int t = 0; t < static_cast<int>(adj.size()); ++t) {
            if (t == skip_tx) continue;
            std::vector<char> used(values, 0);
            if (!try_augment(t, used, owner, skip_tx, skip_value)) return false;
        }
        return true;
    }
};

}  // namespace

AnonymityReport chain_reaction_deanon(const ObserverView& view) {
    const std::size_t T = view.transactions.size();
    std::set<std::string> images;
    for (const auto& t : view.transactions)
        if (!t.key_image_hex.empty() && !images.insert(t.key_image_hex).second)
            throw Error(Err::InconsistentKnowledge, "key image appears twice in the view");

    std::vector<std::set<std::string>> cand(T);
    std::map<std::string, int> value_ids;
    for (std::size_t i = 0; i < T; ++i) {
        for (const auto& id : view.transactions[i].ring) {
            if (view.external_knowledge.count(id)) continue;
            cand[i].insert(id);
            value_ids.emplace(id, 0);
        }
        if (cand[i].empty())
            throw Error(Err::InconsistentKnowledge,
                        "transaction " + std::to_string(i) + " has no possible spender");
    }
    int next = 0;
    for (auto& [id, v] : value_ids) v = next++;

    MatchProblem prob;
    prob.values = next;
    prob.adj.resize(T);
    for (std::size_t i = 0; i < T; ++i)
        for (const auto& id : cand[i]) prob.adj[i].push_back(value_ids.at(id));

    if (!prob.perfect(-1, -1))
        throw Error(Err::InconsistentKnowledge, "no consistent spender assignment exists");

    // A candidate survives iff fixing it still leaves everyone else matchable.
    AnonymityReport report;
    report.candidates.resize(T);
    for (std::size_t i = 0; i < T; ++i) {
        for (const auto& id : cand[i])
            if (prob.perfect(static_cast<int>(i), value_ids.at(id)))
                report.candidates[i].insert(id);
        report.effective_set_sizes.push_back(report.candidates[i].size());
        if (report.candidates[i].size() == 1)
            report.resolved[i] = *report.candidates[i].begin();
    }
    return report;
}

std::size_t anonymity_set_size(const AnonymityReport& report, std::size_t tx) {
    if (tx >= report.candidates.size())
        throw Error(Err::IndexOutOfRange, "no transaction " + std::to_string(tx));
    return report.candidates[tx].size();
}

StorageMetrics storage_metrics(const Ledger& ledger) {
    const Group& g = ledger.group();
    const std::size_t es = g.element_size();
    const std::size_t ss = g.scalar_size();
    StorageMetrics m;
    for (const auto& line : ledger.block_lines()) {
        ojson j = ojson::parse(line);
        const std::string kind = j.value("kind", "");
        if (kind != "cn_transfer" && kind != "tumbler_deposit" && kind != "tumbler_withdraw")
            continue;
        std::size_t bytes = j.at("signature").get<std::string>().size() / 2;
        if (bytes < es + 2 * ss) continue;
        std::size_t ring = (bytes - es) / ss - 1;
        m.per_tx.push_back({ring, bytes});
        if (kind == "tumbler_withdraw") m.tumbler_total_bytes += bytes;
    }

    std::map<std::size_t, std::size_t> by_n;
    for (const auto& t : m.per_tx) by_n.emplace(t.ring_size, t.bytes);
    if (by_n.size() >= 2) {
        auto first = *by_n.begin();
        auto last = *by_n.rbegin();
        m.fitted_b = static_cast<std::int64_t>(last.second - first.second) /
                     static_cast<std::int64_t>(last.first - first.first);
        m.fitted_a = static_cast<std::int64_t>(first.second) -
                     m.fitted_b * static_cast<std::int64_t>(first.first);
    } else if (by_n.size() == 1) {
        m.fitted_a = static_cast<std::int64_t>(by_n.begin()->second);
    }
    for (const auto& t : m.per_tx) {
        std::int64_t pred = m.fitted_a + m.fitted_b * static_cast<std::int64_t>(t.ring_size);
        std::int64_t diff = static_cast<std::int64_t>(t.bytes) - pred;
        m.residual += static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
    }
    return m;
}

}  // namespace ringledger
