#include "cellgrid/controller/switch_graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>

namespace cellgrid::controller {

namespace {

constexpr Weight kInf = std::numeric_limits<Weight>::max();

std::pair<SwitchId, SwitchId> key(SwitchId a, SwitchId b) { return {std::min(a, b), std::max(a, b)}; }

Weight cost_of(const std::map<SwitchId, Weight>& node_cost, SwitchId id) {
    auto it = node_cost.find(id);
    return it == node_cost.end() ? 0 : it->second;
}

// (cost, hops) from each switch to target; hops is the fewest among cheapest paths.
using Dist = std::pair<Weight, std::size_t>;

std::map<SwitchId, Dist> distances_to(const SwitchGraph& g, SwitchId target,
                                      const std::map<SwitchId, Weight>& node_cost) {
    std::map<SwitchId, Dist> dist;
    for (SwitchId n : g.nodes()) dist[n] = {kInf, 0};
    dist[target] = {0, 0};
    using Item = std::pair<Dist, SwitchId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({{0, 0}, target});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d != dist[u]) continue;
        const Weight through = u == target ? 0 : cost_of(node_cost, u);
        for (auto [v, w] : g.neighbors(u)) {
            const Dist nd{d.first + w + through, d.second + 1};
            if (nd < dist[v]) {
                dist[v] = nd;
                queue.push({nd, v});
            }
        }
    }
    return dist;
}

}  // namespace

DisconnectedGraph::DisconnectedGraph(std::pair<SwitchId, SwitchId> p)
    : std::runtime_error("switch " + std::to_string(p.second) + " unreachable from switch " +
                         std::to_string(p.first)),
      pair(p) {}

void SwitchGraph::add_edge(SwitchId a, SwitchId b, Weight w) {
    if (a == b) throw std::invalid_argument("self loop on switch " + std::to_string(a));
    nodes_.insert(a);
    nodes_.insert(b);
    edges_[key(a, b)] = w;
    adj_[a][b] = w;
    adj_[b][a] = w;
}

bool SwitchGraph::remove_edge(SwitchId a, SwitchId b) {
    if (!edges_.erase(key(a, b))) return false;
    adj_[a].erase(b);
    adj_[b].erase(a);
    return true;
}

void SwitchGraph::remove_node(SwitchId id) {
    for (auto [n, w] : neighbors(id)) remove_edge(id, n);
    adj_.erase(id);
    nodes_.erase(id);
}

std::optional<Weight> SwitchGraph::weight(SwitchId a, SwitchId b) const {
    auto it = edges_.find(key(a, b));
    if (it == edges_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<SwitchId, Weight>> SwitchGraph::neighbors(SwitchId id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::size_t SwitchGraph::component_count() const {
    std::set<SwitchId> seen;
    std::size_t count = 0;
    for (SwitchId start : nodes_) {
        if (seen.count(start)) continue;
        ++count;
        std::vector<SwitchId> stack{start};
        seen.insert(start);
        while (!stack.empty()) {
            const SwitchId u = stack.back();
            stack.pop_back();
            for (auto [v, w] : neighbors(u)) {
                if (seen.insert(v).second) stack.push_back(v);
            }
        }
    }
    return count;
}

PathTable shortest_paths(const SwitchGraph& g, const std::map<SwitchId, Weight>& node_cost) {
    PathTable table;
    // A zero-weight edge allows equal-cost detours that the id walk could cycle through, so
    // the walk is then limited to fewest-hop cheapest paths.
    const bool zero_edges = std::any_of(g.edges().begin(), g.edges().end(),
                                        [](const auto& e) { return e.second == 0; });
    for (SwitchId b : g.nodes()) {
        const auto dist = distances_to(g, b, node_cost);
        for (SwitchId a : g.nodes()) {
            if (a > b) continue;
            if (dist.at(a).first == kInf) {
                table.unreachable.insert({a, b});
                table.unreachable.insert({b, a});
                continue;
            }
            // Walk from a, always taking the smallest neighbor that stays on a cheapest path.
            SwitchPathEntry entry{{a}, dist.at(a).first};
            std::set<SwitchId> visited{a};
            SwitchId at = a;
            while (at != b) {
                std::optional<SwitchId> step;
                for (auto [v, w] : g.neighbors(at)) {
                    const auto [dv, hv] = dist.at(v);
                    if (visited.count(v) || dv == kInf) continue;
                    if (zero_edges && hv + 1 != dist.at(at).second) continue;
                    const Weight rest = v == b ? 0 : cost_of(node_cost, v) + dv;
                    if (w + rest == dist.at(at).first) {
                        step = v;
                        break;
                    }
                }
                if (!step) throw std::logic_error("shortest path walk stalled");
                visited.insert(*step);
                entry.hops.push_back(*step);
                at = *step;
            }
            SwitchPathEntry back{{entry.hops.rbegin(), entry.hops.rend()}, entry.cost};
            table.paths[{a, b}] = std::move(entry);
            if (a != b) table.paths[{b, a}] = std::move(back);
        }
    }
    return table;
}

PathMap compute_all_paths(const SwitchGraph& g) {
    auto table = shortest_paths(g);
    if (!table.unreachable.empty()) throw DisconnectedGraph(*table.unreachable.begin());
    return std::move(table.paths);
}

}  // namespace cellgrid::controller
