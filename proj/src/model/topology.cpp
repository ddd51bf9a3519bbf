#include "cellgrid/model/topology.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "cellgrid/model/rng.hpp"

namespace cellgrid::model {

namespace {

Latency draw(Rng& rng, const LatencyRange& r) { return rng.uniform(r.lo, r.hi); }

void check_range(const LatencyRange& r, const char* name) {
    if (r.lo > r.hi) throw InfeasibleConfig(std::string(name) + " range is empty");
}

std::size_t gnb_total(const TopoConfig& cfg) {
    return cfg.total_gnbs.value_or(cfg.num_switches * cfg.gnb_per_switch);
}

struct Skeleton {
    Network net;
    std::vector<NodeId> switches;
};

// Nodes in the order UPF, AMF, switches, gNBs, UEs, and every non-switch link.
Skeleton populate(const TopoConfig& cfg, Rng& rng) {
    Skeleton sk;
    Network& net = sk.net;
    const auto& lat = cfg.latency;
    NodeId next = 0;
    const NodeId upf = next++;
    const NodeId amf = next++;
    net.add_node({upf, NodeKind::Upf, draw(rng, lat.upf_processing)});
    net.add_node({amf, NodeKind::Amf, draw(rng, lat.amf_processing)});
    for (std::size_t i = 0; i < cfg.num_switches; ++i) {
        sk.switches.push_back(next);
        net.add_node({next++, NodeKind::Switch, draw(rng, lat.switch_processing)});
    }

    std::size_t remaining = gnb_total(cfg);
    struct Cell {
        NodeId gnb;
        NodeId sw;
        std::size_t ues;
    };
    std::vector<Cell> cells;
    for (NodeId sw : sk.switches) {
        const std::size_t here = std::min(cfg.gnb_per_switch, remaining);
        remaining -= here;
        for (std::size_t j = 0; j < here; ++j) {
            const NodeId gnb = next++;
            net.add_node({gnb, NodeKind::Gnb, draw(rng, lat.gnb_processing)});
            cells.push_back({gnb, sw, static_cast<std::size_t>(rng.uniform(1, cfg.max_ue_per_gnb))});
        }
    }
    std::vector<std::pair<NodeId, NodeId>> ue_links;
    for (const auto& c : cells) {
        for (std::size_t k = 0; k < c.ues; ++k) {
            net.add_node({next, NodeKind::Ue, 0});
            ue_links.push_back({c.gnb, next++});
        }
    }

    net.add_link(sk.switches.front(), upf, draw(rng, lat.link));
    net.add_link(sk.switches.size() > 1 ? sk.switches[1] : sk.switches.front(), amf, draw(rng, lat.link));
    for (const auto& c : cells) net.add_link(c.sw, c.gnb, draw(rng, lat.link));
    for (auto [g, u] : ue_links) net.add_link(g, u, 0);
    return sk;
}

}  // namespace

void check_config(const TopoConfig& cfg, std::size_t min_switches) {
    const std::size_t S = cfg.num_switches;
    if (S < min_switches) {
        throw InfeasibleConfig("need at least " + std::to_string(min_switches) + " switches, got " +
                               std::to_string(S));
    }
    if (S > 255) throw InfeasibleConfig("switch ids are 8-bit: at most 255 switches");
    if (cfg.max_ue_per_gnb < 1) throw InfeasibleConfig("max_ue_per_gnb must be at least 1");
    if (cfg.total_gnbs && *cfg.total_gnbs > S * cfg.gnb_per_switch) {
        throw InfeasibleConfig("total_gnbs exceeds num_switches * gnb_per_switch");
    }
    check_range(cfg.latency.link, "link latency");
    check_range(cfg.latency.switch_processing, "switch processing");
    check_range(cfg.latency.gnb_processing, "gNB processing");
    check_range(cfg.latency.upf_processing, "UPF processing");
    check_range(cfg.latency.amf_processing, "AMF processing");
    if (!cfg.enforce_limits) return;
    if (S > cfg.max_switches) {
        throw InfeasibleConfig(std::to_string(S) + " switches exceeds the limit of " +
                               std::to_string(cfg.max_switches));
    }
    if (gnb_total(cfg) > cfg.max_gnbs) {
        throw InfeasibleConfig(std::to_string(gnb_total(cfg)) + " gNBs exceeds the limit of " +
                               std::to_string(cfg.max_gnbs));
    }
    if (cfg.max_ue_per_gnb > cfg.max_ue_limit) {
        throw InfeasibleConfig(std::to_string(cfg.max_ue_per_gnb) + " UEs per gNB exceeds the limit of " +
                               std::to_string(cfg.max_ue_limit));
    }
}

Network generate_topology(const TopoConfig& cfg) {
    check_config(cfg, 2);
    Rng rng(cfg.seed);
    auto [net, sw] = populate(cfg, rng);
    const std::size_t S = sw.size();

    // E unique pairs out of all S(S-1)/2, by a partial Fisher-Yates shuffle.
    const std::size_t E = static_cast<std::size_t>(rng.uniform((S + 1) / 2, S - 1));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = i + 1; j < S; ++j) pairs.push_back({i, j});
    }
    for (std::size_t k = 0; k < E; ++k) {
        const auto pick = static_cast<std::size_t>(rng.uniform(k, pairs.size() - 1));
        std::swap(pairs[k], pairs[pick]);
        net.add_link(sw[pairs[k].first], sw[pairs[k].second], draw(rng, cfg.latency.link));
    }
    net.meta.seed = cfg.seed;
    net.meta.drawn_switch_edges = E;
    net.meta.generator = "random";

    // Join components in order of their smallest switch, each to a random switch already joined.
    std::vector<std::size_t> comp(S);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return comp[x] == x ? x : comp[x] = find(comp[x]);
    };
    for (std::size_t k = 0; k < E; ++k) comp[find(pairs[k].first)] = find(pairs[k].second);
    std::vector<std::size_t> joined;
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < S; ++i) members[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> groups;
    for (auto& [root, m] : members) groups.push_back(m);
    std::sort(groups.begin(), groups.end());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g > 0) {
            const std::size_t a = joined[rng.uniform(0, joined.size() - 1)];
            const std::size_t b = groups[g][rng.uniform(0, groups[g].size() - 1)];
            net.add_link(sw[a], sw[b], draw(rng, cfg.latency.link));
            net.meta.repair_edges.push_back({static_cast<SwitchId>(std::min(a, b) + 1),
                                             static_cast<SwitchId>(std::max(a, b) + 1)});
        }
        joined.insert(joined.end(), groups[g].begin(), groups[g].end());
    }
    return net;
}

Network generate_line_topology(const TopoConfig& cfg) {
    check_config(cfg, 1);
    Rng rng(cfg.seed);
    auto [net, sw] = populate(cfg, rng);
    for (std::size_t i = 1; i < sw.size(); ++i) net.add_link(sw[i - 1], sw[i], draw(rng, cfg.latency.link));
    net.meta.seed = cfg.seed;
    net.meta.drawn_switch_edges = sw.size() - 1;
    net.meta.generator = "line";
    return net;
}

Network emulation_topology(Latency gnb_processing, Latency switch_processing, Latency upf_processing,
                           Latency gnb_link, Latency upf_link) {
    Network net;
    net.add_node({0, NodeKind::Upf, upf_processing});
    net.add_node({1, NodeKind::Amf, 0});
    net.add_node({2, NodeKind::Switch, switch_processing});
    net.add_node({3, NodeKind::Gnb, gnb_processing});
    net.add_node({4, NodeKind::Gnb, gnb_processing});
    net.add_node({5, NodeKind::Ue, 0});
    net.add_node({6, NodeKind::Ue, 0});
    net.add_link(2, 0, upf_link);
    net.add_link(2, 1, upf_link);
    net.add_link(2, 3, gnb_link);
    net.add_link(2, 4, gnb_link);
    net.add_link(3, 5, 0);
    net.add_link(4, 6, 0);
    net.meta.generator = "emulation";
    return net;
}

}  // namespace cellgrid::model
