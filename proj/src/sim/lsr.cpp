#include "cellgrid/sim/lsr.hpp"

namespace cellgrid::sim {

using controller::SwitchGraph;

LsrSim::LsrSim(SwitchGraph graph, std::size_t event_budget) : graph_(std::move(graph)), budget_(event_budget) {}

LsrReport LsrSim::run() { return flood({graph_.nodes().begin(), graph_.nodes().end()}, {}); }

LsrReport LsrSim::update(const SwitchGraph& graph) {
    std::vector<SwitchId> changed;
    for (SwitchId s : graph.nodes()) {
        if (!graph_.nodes().count(s) || graph.neighbors(s) != graph_.neighbors(s)) changed.push_back(s);
    }
    std::vector<std::pair<SwitchId, SwitchId>> fresh;
    for (const auto& [e, w] : graph.edges()) {
        if (!graph_.weight(e.first, e.second)) fresh.push_back(e);
    }
    for (SwitchId s : graph_.nodes()) {
        if (!graph.nodes().count(s)) lsdb_.erase(s);
    }
    graph_ = graph;
    return flood(changed, fresh);
}

LsrReport LsrSim::flood(const std::vector<SwitchId>& originators,
                        const std::vector<std::pair<SwitchId, SwitchId>>& new_adjacencies) {
    LsrReport report;
    EventQueue queue(budget_);
    Time last_install = 0;

    std::function<void(SwitchId, SwitchId, const LinkStateAd&)> receive;
    auto send = [&](SwitchId from, SwitchId to, const LinkStateAd& ad) {
        ++report.messages_sent;
        queue.after(*graph_.weight(from, to), EventKind::MessageDelivery, [&, from, to, ad] { receive(to, from, ad); });
    };
    receive = [&](SwitchId at, SwitchId from, const LinkStateAd& ad) {
        ++report.messages_delivered;
        auto& db = lsdb_[at];
        auto it = db.find(ad.origin);
        if (ad.origin == at || (it != db.end() && it->second.seq >= ad.seq)) {
            ++report.duplicates;
            return;
        }
        db[ad.origin] = ad;
        last_install = queue.now();
        for (auto [n, w] : graph_.neighbors(at)) {
            if (n != from) send(at, n, ad);
        }
    };

    for (SwitchId s : originators) {
        LinkStateAd ad{s, ++own_seq_[s], {}};
        for (auto [n, w] : graph_.neighbors(s)) ad.links[n] = w;
        lsdb_[s][s] = ad;
        for (auto [n, w] : graph_.neighbors(s)) send(s, n, ad);
    }
    // A new adjacency starts with a full database exchange.
    for (auto [a, b] : new_adjacencies) {
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            for (const auto& [origin, ad] : lsdb_[x]) {
                if (origin != x) send(x, y, ad);
            }
        }
    }
    queue.run();

    report.events = queue.processed();
    report.convergence_time = last_install;
    for (SwitchId s : graph_.nodes()) report.tables[s] = table_of(s);
    return report;
}

RoutingTable LsrSim::table_of(SwitchId s) const {
    // Only links both ends advertise with the same weight.
    SwitchGraph view;
    view.add_node(s);
    const auto& db = lsdb_.at(s);
    for (const auto& [origin, ad] : db) {
        view.add_node(origin);
        for (auto [n, w] : ad.links) {
            auto other = db.find(n);
            if (other == db.end()) continue;
            auto back = other->second.links.find(origin);
            if (back != other->second.links.end() && back->second == w) view.add_edge(origin, n, w);
        }
    }
    RoutingTable table;
    for (const auto& [pair, entry] : controller::shortest_paths(view).paths) {
        if (pair.first == s) table[pair.second] = entry.hops;
    }
    return table;
}

LsrReport run_lsr(const SwitchGraph& graph, std::size_t event_budget) {
    return LsrSim(graph, event_budget).run();
}

}  // namespace cellgrid::sim
