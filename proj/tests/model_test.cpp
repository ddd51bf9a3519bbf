#include <random>

#include "cellgrid/model/latency.hpp"
#include "cellgrid/model/network_io.hpp"
#include "cellgrid/model/rng.hpp"
#include "cellgrid/model/topology.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cellgrid;
using namespace cellgrid::model;

namespace {

// Structural rules re-derived from the raw node and link lists only.
std::vector<std::string> structural_check(const Network& net) {
    std::vector<std::string> errors;
    std::map<NodeId, NodeKind> kind;
    for (const auto& [id, n] : net.nodes()) kind[id] = n.kind;
    std::map<NodeId, std::vector<NodeId>> adj;
    for (const auto& l : net.links()) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
        const bool ue_link = kind[l.a] == NodeKind::Ue || kind[l.b] == NodeKind::Ue;
        if (ue_link && l.latency != 0) errors.push_back("UE link with latency");
    }
    int upfs = 0;
    std::vector<NodeId> switches;
    for (const auto& [id, k] : kind) {
        std::map<NodeKind, int> by;
        for (NodeId m : adj[id]) ++by[kind[m]];
        const int deg = static_cast<int>(adj[id].size());
        if (k == NodeKind::Upf) ++upfs;
        if (k == NodeKind::Ue && !(deg == 1 && by[NodeKind::Gnb] == 1)) errors.push_back("bad UE");
        if (k == NodeKind::Gnb && !(by[NodeKind::Switch] == 1 && by[NodeKind::Ue] == deg - 1)) errors.push_back("bad gNB");
        if ((k == NodeKind::Upf || k == NodeKind::Amf) && !(deg == 1 && by[NodeKind::Switch] == 1)) errors.push_back("bad core");
        if (k == NodeKind::Switch) {
            if (by[NodeKind::Ue]) errors.push_back("switch links UE");
            switches.push_back(id);
        }
    }
    if (upfs != 1) errors.push_back("UPF count");
    // Flood over switch-switch links.
    std::set<NodeId> seen;
    std::vector<NodeId> stack;
    if (!switches.empty()) stack.push_back(switches.front());
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        if (!seen.insert(u).second) continue;
        for (NodeId m : adj[u]) {
            if (kind[m] == NodeKind::Switch) stack.push_back(m);
        }
    }
    if (seen.size() != switches.size()) errors.push_back("switches disconnected");
    return errors;
}

struct OracleLatency {
    std::uint64_t optimized;
    std::uint64_t unoptimized;
};

// l_o and l_p from literal terms; switch paths by exhaustive search with switch processing
// counted on inner nodes.
OracleLatency oracle_latency(const Network& net, NodeId ue_i, NodeId ue_j) {
    std::map<NodeId, NodeKind> kind;
    std::map<NodeId, std::uint64_t> proc;
    for (const auto& [id, n] : net.nodes()) {
        kind[id] = n.kind;
        proc[id] = n.processing;
    }
    oracle::Graph sw;
    std::map<NodeId, std::pair<NodeId, std::uint64_t>> uplink;  // node -> (neighbor, latency)
    std::map<int, std::uint64_t> inner;
    for (const auto& l : net.links()) {
        const bool sa = kind[l.a] == NodeKind::Switch, sb = kind[l.b] == NodeKind::Switch;
        if (sa && sb) sw.add_edge(static_cast<int>(l.a), static_cast<int>(l.b), l.latency);
        if (sa && !sb) uplink[l.b] = {l.a, l.latency};
        if (sb && !sa) uplink[l.a] = {l.b, l.latency};
        if (kind[l.a] == NodeKind::Ue) uplink[l.a] = {l.b, l.latency};
        if (kind[l.b] == NodeKind::Ue) uplink[l.b] = {l.a, l.latency};
    }
    for (const auto& [id, k] : kind) {
        if (k == NodeKind::Switch) {
            sw.nodes.insert(static_cast<int>(id));
            inner[static_cast<int>(id)] = proc[id];
        }
    }
    NodeId upf = 0;
    for (const auto& [id, k] : kind) {
        if (k == NodeKind::Upf) upf = id;
    }
    auto s = [&](NodeId a, NodeId b) -> std::uint64_t {
        if (a == b) return 0;
        return oracle::brute_force_path(sw, static_cast<int>(a), static_cast<int>(b), inner)->cost;
    };
    const NodeId gi = uplink[ue_i].first, gj = uplink[ue_j].first;
    const NodeId si = uplink[gi].first, sj = uplink[gj].first, su = uplink[upf].first;
    const std::uint64_t gnb_i = proc[gi] + uplink[gi].second;
    const std::uint64_t gnb_j = proc[gj] + uplink[gj].second;
    const std::uint64_t u = proc[upf] + 2 * uplink[upf].second;

    OracleLatency r{};
    r.optimized = gnb_i + gnb_j + s(si, sj) + proc[si];
    if (sj != si) r.optimized += proc[sj];
    r.unoptimized = gnb_i + gnb_j + s(si, su) + s(su, sj) + u + proc[si];
    if (su != si) r.unoptimized += proc[su];
    if (sj != su) r.unoptimized += proc[sj];
    return r;
}

TopoConfig small_config(std::uint64_t seed, std::size_t S, std::size_t G, std::size_t U) {
    TopoConfig c;
    c.num_switches = S;
    c.gnb_per_switch = G;
    c.max_ue_per_gnb = U;
    c.seed = seed;
    return c;
}

// Switch line SW1 - SW2 - SW3, one gNB with one UE on each end switch.
Network three_switch_line(Latency w12, Latency w23, Latency mid_proc) {
    Network net;
    net.add_node({0, NodeKind::Upf, 0});
    net.add_node({1, NodeKind::Switch, 1});
    net.add_node({2, NodeKind::Switch, mid_proc});
    net.add_node({3, NodeKind::Switch, 1});
    net.add_node({4, NodeKind::Gnb, 0});
    net.add_node({5, NodeKind::Gnb, 0});
    net.add_node({6, NodeKind::Ue, 0});
    net.add_node({7, NodeKind::Ue, 0});
    net.add_link(1, 0, 0);
    net.add_link(1, 2, w12);
    net.add_link(2, 3, w23);
    net.add_link(1, 4, 0);
    net.add_link(3, 5, 0);
    net.add_link(4, 6, 0);
    net.add_link(5, 7, 0);
    return net;
}

std::vector<std::pair<NodeId, NodeId>> cross_gnb_pairs(const Network& net, std::mt19937_64& rng, int n) {
    const auto ues = net.of_kind(NodeKind::Ue);
    std::vector<std::pair<NodeId, NodeId>> out;
    for (int k = 0; k < n * 4 && static_cast<int>(out.size()) < n; ++k) {
        const NodeId a = ues[rng() % ues.size()], b = ues[rng() % ues.size()];
        if (net.gnb_of(a) != net.gnb_of(b)) out.push_back({a, b});
    }
    return out;
}

}  // namespace

TEST_CASE("rng is the standard engine with a portable uniform draw") {
    Rng r(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = r.next();
    CHECK(x == 9981545732273789042ull);

    Rng a(3), b(3);
    std::map<std::uint64_t, int> hist;
    for (int i = 0; i < 6000; ++i) {
        const auto v = a.uniform(4, 9);
        CHECK(v == b.uniform(4, 9));
        ++hist[v];
    }
    CHECK(hist.size() == 6);
    for (const auto& [v, n] : hist) CHECK(n > 800);
    CHECK(a.uniform(7, 7) == 7);
    CHECK_THROWS(a.uniform(2, 1));
}

TEST_CASE("generate_topology examples") {
    SUBCASE("three switches, six gNBs") {
        const auto net = generate_topology(small_config(1, 3, 2, 2));
        CHECK(net.switch_count() == 3);
        CHECK(net.of_kind(NodeKind::Gnb).size() == 6);
        CHECK(net.attached_switch(net.upf()) == net.switch_node(1));
        CHECK(net.attached_switch(net.of_kind(NodeKind::Amf).front()) == net.switch_node(2));
        for (NodeId g : net.of_kind(NodeKind::Gnb)) {
            const auto nb = net.neighbors(g);
            const auto ues = std::count_if(nb.begin(), nb.end(), [&](NodeId m) { return net.node(m).kind == NodeKind::Ue; });
            CHECK(ues >= 1);
            CHECK(ues <= 2);
        }
        CHECK(structural_check(net).empty());
    }
    SUBCASE("minimal network") {
        const auto net = generate_topology(small_config(9, 2, 1, 1));
        CHECK(net.switch_count() == 2);
        CHECK(net.meta.drawn_switch_edges == 1);
        CHECK(net.switch_graph().edges().size() == 1);
        CHECK(net.of_kind(NodeKind::Gnb).size() == 2);
        CHECK(net.of_kind(NodeKind::Ue).size() == 2);
    }
    SUBCASE("deterministic under seed") {
        const auto cfg = small_config(77, 12, 4, 6);
        CHECK(network_to_json(generate_topology(cfg)) == network_to_json(generate_topology(cfg)));
        auto other = cfg;
        other.seed = 78;
        CHECK(network_to_json(generate_topology(cfg)) != network_to_json(generate_topology(other)));
    }
    SUBCASE("infeasible configurations") {
        CHECK_THROWS_AS(generate_topology(small_config(1, 1, 2, 2)), InfeasibleConfig);
        CHECK_THROWS_AS(generate_topology(small_config(1, 41, 2, 2)), InfeasibleConfig);
        CHECK_THROWS_AS(generate_topology(small_config(1, 3, 2, 11)), InfeasibleConfig);
        CHECK_THROWS_AS(generate_topology(small_config(1, 3, 2, 0)), InfeasibleConfig);
        auto lifted = small_config(1, 41, 2, 11);
        lifted.enforce_limits = false;
        CHECK(generate_topology(lifted).switch_count() == 41);
        auto capped = small_config(1, 7, 3, 2);
        capped.total_gnbs = 20;
        CHECK(generate_topology(capped).of_kind(NodeKind::Gnb).size() == 20);
        capped.total_gnbs = 22;
        CHECK_THROWS_AS(generate_topology(capped), InfeasibleConfig);
    }
}

TEST_CASE("generated topologies satisfy every structural rule") {
    std::mt19937_64 rng(31);
    std::size_t repaired = 0;
    for (int i = 0; i < 400; ++i) {
        const auto S = 2 + rng() % 39;
        auto cfg = small_config(rng(), S, 1 + rng() % 5, 1 + rng() % 10);
        const auto net = generate_topology(cfg);
        CHECK(structural_check(net).empty());
        CHECK(validate_network(net).empty());
        const auto E = net.meta.drawn_switch_edges;
        CHECK(E >= (S + 1) / 2);
        CHECK(E <= S - 1);
        CHECK(net.switch_graph().edges().size() == E + net.meta.repair_edges.size());

        // Drawn edges alone: the repair adds exactly one edge per extra component.
        auto drawn = net.switch_graph();
        for (auto [a, b] : net.meta.repair_edges) drawn.remove_edge(a, b);
        CHECK(drawn.component_count() == net.meta.repair_edges.size() + 1);
        repaired += net.meta.repair_edges.empty() ? 0 : 1;

        for (const auto& l : net.links()) {
            const auto ka = net.node(l.a).kind, kb = net.node(l.b).kind;
            if (ka != NodeKind::Ue && kb != NodeKind::Ue) {
                CHECK(l.latency >= cfg.latency.link.lo);
                CHECK(l.latency <= cfg.latency.link.hi);
            }
        }
    }
    CHECK(repaired > 0);
}

TEST_CASE("validate_network reports broken structure") {
    Network net = emulation_topology(1, 1, 1, 1, 1);
    CHECK(validate_network(net).empty());
    net.add_node({9, NodeKind::Ue, 0});
    CHECK_FALSE(validate_network(net).empty());
    net.add_link(9, 2, 0);  // UE on a switch
    CHECK(validate_network(net).size() >= 2);
    CHECK_THROWS_AS(net.add_link(9, 2, 0), InvalidNetwork);
    CHECK_THROWS_AS(net.add_node({9, NodeKind::Ue, 0}), InvalidNetwork);

    Network two_upf = emulation_topology(1, 1, 1, 1, 1);
    two_upf.add_node({10, NodeKind::Upf, 0});
    two_upf.add_link(10, 2, 1);
    CHECK_FALSE(validate_network(two_upf).empty());
    CHECK_FALSE(structural_check(two_upf).empty());
}

TEST_CASE("shortest_switch_path examples") {
    const auto line = three_switch_line(5, 7, 4);
    const auto self = shortest_switch_path(line, 1, 1);
    CHECK(self.nodes == std::vector<NodeId>{1});
    CHECK(self.total_latency == 0);
    const auto across = shortest_switch_path(line, 6, 7);
    CHECK(across.nodes == std::vector<NodeId>{1, 2, 3});
    CHECK(across.total_latency == 12 + 4);

    Network shortcut = three_switch_line(5, 7, 4);
    shortcut.add_link(1, 3, 30);
    CHECK(shortest_switch_path(shortcut, 1, 3).nodes == std::vector<NodeId>{1, 2, 3});
    Network pricey = three_switch_line(5, 7, 40);
    pricey.add_link(1, 3, 30);
    CHECK(shortest_switch_path(pricey, 1, 3).nodes == std::vector<NodeId>{1, 3});
    CHECK(shortest_switch_path(pricey, 1, 3).total_latency == 30);

    Network split = three_switch_line(5, 7, 4);
    split.add_node({20, NodeKind::Switch, 0});
    CHECK_THROWS_AS(shortest_switch_path(split, 1, 20), Unreachable);
}

TEST_CASE("latency examples") {
    SUBCASE("all zero") {
        const auto net = emulation_topology(0, 0, 0, 0, 0);
        CHECK(latency_unoptimized(net, 5, 6) == 0);
        CHECK(latency_optimized(net, 5, 6) == 0);
        CHECK_THROWS_AS(latency_gain(net, 5, 6), ZeroBaseline);
    }
    SUBCASE("both UEs on the UPF switch") {
        // gNB 10 each, UPF 50, switch 5, every link 0: the switch is visited once either way.
        const auto net = emulation_topology(10, 5, 50, 0, 0);
        const auto o = oracle_latency(net, 5, 6);
        CHECK(o.unoptimized == 10 + 10 + 0 + 0 + 50 + 5);
        CHECK(o.optimized == 10 + 10 + 5);
        CHECK(latency_unoptimized(net, 5, 6) == o.unoptimized);
        CHECK(latency_optimized(net, 5, 6) == o.optimized);
    }
    SUBCASE("line with the UPF on the first switch") {
        auto net = three_switch_line(5, 7, 4);
        const auto o = oracle_latency(net, 6, 7);
        CHECK(o.unoptimized == 0 + 0 + 0 + 16 + 0 + 1 + 1);
        CHECK(latency_unoptimized(net, 6, 7) == o.unoptimized);
        CHECK(latency_optimized(net, 6, 7) == o.optimized);
    }
    SUBCASE("gain arithmetic") {
        CHECK(latency_gain(100, 50) == doctest::Approx(0.5));
        CHECK(latency_gain(100, 100) == 0.0);
        CHECK_THROWS_AS(latency_gain(0, 0), ZeroBaseline);
    }
    SUBCASE("non-UE endpoints are rejected") {
        const auto net = emulation_topology(1, 1, 1, 1, 1);
        CHECK_THROWS_AS(latency_optimized(net, 3, 6), InvalidNetwork);
    }
}

TEST_CASE("latency model matches the term-by-term oracle") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 60; ++i) {
        auto cfg = small_config(rng(), 2 + rng() % 7, 1 + rng() % 4, 1 + rng() % 4);
        const auto net = generate_topology(cfg);
        const LatencyModel m(net);
        for (auto [a, b] : cross_gnb_pairs(net, rng, 10)) {
            const auto o = oracle_latency(net, a, b);
            CHECK(m.optimized(a, b) == o.optimized);
            CHECK(m.unoptimized(a, b) == o.unoptimized);
            const double gain = m.gain(a, b);
            const double want = (static_cast<double>(o.unoptimized) - static_cast<double>(o.optimized)) /
                                static_cast<double>(o.unoptimized);
            CHECK(gain == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("a seeded 20-gNB topology: mean gain equals the hand-summed value") {
    auto cfg = small_config(2024, 5, 4, 3);
    const auto net = generate_topology(cfg);
    REQUIRE(net.of_kind(NodeKind::Gnb).size() == 20);
    const LatencyModel m(net);
    double model_sum = 0, oracle_sum = 0;
    int n = 0;
    const auto ues = net.of_kind(NodeKind::Ue);
    for (NodeId a : ues) {
        for (NodeId b : ues) {
            if (a >= b || net.gnb_of(a) == net.gnb_of(b)) continue;
            const auto o = oracle_latency(net, a, b);
            oracle_sum += 1.0 - static_cast<double>(o.optimized) / static_cast<double>(o.unoptimized);
            model_sum += m.gain(a, b);
            ++n;
        }
    }
    REQUIRE(n > 0);
    CHECK(model_sum / n == doctest::Approx(oracle_sum / n).epsilon(1e-12));
}

TEST_CASE("optimized latency never exceeds the UPF detour") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 300; ++i) {
        auto cfg = small_config(rng(), 2 + rng() % 20, 1 + rng() % 5, 1 + rng() % 5);
        const auto net = generate_topology(cfg);
        const LatencyModel m(net);
        for (auto [a, b] : cross_gnb_pairs(net, rng, 10)) {
            const auto t = m.terms(a, b);
            CHECK(t.optimized() <= t.unoptimized());
            if (t.upf > 0) CHECK(t.optimized() < t.unoptimized());
            const double g = m.gain(a, b);
            CHECK(g >= 0.0);
            CHECK(g < 1.0);
        }
    }
}

TEST_CASE("scaling every latency scales l_p and l_o and keeps the gain") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 40; ++i) {
        const auto net = generate_topology(small_config(rng(), 2 + rng() % 10, 1 + rng() % 3, 2));
        const Latency k = 2 + rng() % 9;
        Network scaled;
        for (const auto& [id, n] : net.nodes()) scaled.add_node({id, n.kind, n.processing * k});
        for (const auto& l : net.links()) scaled.add_link(l.a, l.b, l.latency * k);
        const LatencyModel m(net), ms(scaled);
        for (auto [a, b] : cross_gnb_pairs(net, rng, 10)) {
            CHECK(ms.optimized(a, b) == k * m.optimized(a, b));
            CHECK(ms.unoptimized(a, b) == k * m.unoptimized(a, b));
            CHECK(ms.gain(a, b) == doctest::Approx(m.gain(a, b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("single-switch two-gNB topology: the UPF detour costs more") {
    for (Latency upf : {0, 1, 300}) {
        for (Latency upf_link : {0, 1, 250}) {
            const auto net = emulation_topology(400, 20, upf, 100, upf_link);
            const auto lp = latency_unoptimized(net, 5, 6);
            const auto lo = latency_optimized(net, 5, 6);
            if (upf > 0 || upf_link > 0) CHECK(lp > lo);
            else CHECK(lp == lo);
        }
    }
}

TEST_CASE("line topologies") {
    auto cfg = small_config(5, 1, 3, 2);
    const auto one = generate_line_topology(cfg);
    CHECK(one.switch_count() == 1);
    CHECK(validate_network(one).empty());
    cfg.num_switches = 6;
    const auto six = generate_line_topology(cfg);
    CHECK(validate_network(six).empty());
    CHECK(six.switch_graph().edges().size() == 5);
    for (SwitchId s = 1; s < 6; ++s) CHECK(six.switch_graph().weight(s, s + 1));
}

TEST_CASE("network and config files round trip") {
    const auto net = generate_topology(small_config(3, 9, 3, 4));
    const auto text = network_to_json(net);
    const auto back = network_from_json(text);
    CHECK(back == net);
    CHECK(network_to_json(back) == text);
    CHECK_THROWS_AS(network_from_json("{\"nodes\": [{\"id\": 1, \"kind\": \"router\"}], \"links\": []}"), InvalidNetwork);
    CHECK_THROWS_AS(network_from_json("not json"), InvalidNetwork);

    TopoConfig cfg = small_config(11, 8, 3, 5);
    cfg.total_gnbs = 22;
    cfg.latency.link = {5, 50};
    CHECK(config_from_json(config_to_json(cfg)) == cfg);
    const auto partial = config_from_json(R"({"num_switches": 4, "latency": {"link_us": {"hi": 2000}}})");
    CHECK(partial.num_switches == 4);
    CHECK(partial.latency.link == LatencyRange{100, 2000});
    CHECK_THROWS_AS(config_from_json(R"({"switches": 4})"), InvalidNetwork);
}
