#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cellgrid/wire/types.hpp"

namespace cellgrid::controller {

using Weight = std::uint64_t;  // microseconds

// Undirected switch graph with non-negative edge weights.
class SwitchGraph {
public:
    void add_node(SwitchId id) { nodes_.insert(id); }
    // Adds or reweights an edge; self loops are rejected.
    void add_edge(SwitchId a, SwitchId b, Weight w);
    bool remove_edge(SwitchId a, SwitchId b);
    void remove_node(SwitchId id);

    const std::set<SwitchId>& nodes() const { return nodes_; }
    std::optional<Weight> weight(SwitchId a, SwitchId b) const;
    // Ascending by id.
    std::vector<std::pair<SwitchId, Weight>> neighbors(SwitchId id) const;
    const std::map<std::pair<SwitchId, SwitchId>, Weight>& edges() const { return edges_; }
    std::size_t component_count() const;

    bool operator==(const SwitchGraph&) const = default;

private:
    std::set<SwitchId> nodes_;
    std::map<std::pair<SwitchId, SwitchId>, Weight> edges_;  // key (min, max)
    std::map<SwitchId, std::map<SwitchId, Weight>> adj_;
};

struct SwitchPathEntry {
    std::vector<SwitchId> hops;  // source first, destination last
    Weight cost = 0;
    bool operator==(const SwitchPathEntry&) const = default;
};

using PathMap = std::map<std::pair<SwitchId, SwitchId>, SwitchPathEntry>;

struct PathTable {
    PathMap paths;
    std::set<std::pair<SwitchId, SwitchId>> unreachable;
};

class DisconnectedGraph : public std::runtime_error {
public:
    explicit DisconnectedGraph(std::pair<SwitchId, SwitchId> pair);
    std::pair<SwitchId, SwitchId> pair;
};

/*
 * Minimum-cost paths for every ordered pair. A path's cost is the sum of its edge weights
 * plus node_cost of every switch strictly between the endpoints. Among equal-cost paths the
 * one from the smaller id is the lexicographically smallest id sequence, and the opposite
 * direction is its reverse. The tie-break is exact when every edge weight is positive.
 */
PathTable shortest_paths(const SwitchGraph& g, const std::map<SwitchId, Weight>& node_cost = {});

// As above, but every pair must be reachable.
PathMap compute_all_paths(const SwitchGraph& g);

}  // namespace cellgrid::controller
