#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cellgrid/controller/switch_graph.hpp"
#include "cellgrid/wire/types.hpp"

namespace cellgrid::model {

using NodeId = std::uint32_t;
using Latency = std::uint64_t;  // microseconds

enum class NodeKind { Ue, Gnb, Switch, Upf, Amf };

const char* to_string(NodeKind k);
std::optional<NodeKind> parse_node_kind(const std::string& s);

struct Node {
    NodeId id = 0;
    NodeKind kind = NodeKind::Switch;
    Latency processing = 0;
    bool operator==(const Node&) const = default;
};

struct Link {
    NodeId a = 0;  // a < b
    NodeId b = 0;
    Latency latency = 0;
    bool operator==(const Link&) const = default;
};

// How the generator built a network.
struct TopologyMeta {
    std::uint64_t seed = 0;
    std::size_t drawn_switch_edges = 0;  // E
    std::vector<std::pair<SwitchId, SwitchId>> repair_edges;
    std::string generator;
    bool operator==(const TopologyMeta&) const = default;
};

class InvalidNetwork : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Network {
public:
    // Ids must be unique; throws InvalidNetwork otherwise.
    void add_node(Node n);
    // Undirected; throws InvalidNetwork for unknown endpoints, self loops or duplicates.
    void add_link(NodeId a, NodeId b, Latency latency);

    const std::map<NodeId, Node>& nodes() const { return nodes_; }
    const Node& node(NodeId id) const;
    bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
    std::vector<Link> links() const;
    std::optional<Latency> link(NodeId a, NodeId b) const;
    // Ascending by id.
    std::vector<NodeId> neighbors(NodeId id) const;
    std::vector<NodeId> of_kind(NodeKind k) const;

    // Switch ids are 1-based ordinals of switch nodes in node-id order.
    SwitchId switch_id(NodeId switch_node) const;
    NodeId switch_node(SwitchId id) const;
    std::size_t switch_count() const { return switches_.size(); }
    // The switch a gNB, UPF or AMF hangs off; for a UE, its gNB's switch.
    NodeId attached_switch(NodeId id) const;
    NodeId gnb_of(NodeId ue) const;
    NodeId upf() const;

    // Switch subgraph weighted by link latency, plus per-switch processing.
    controller::SwitchGraph switch_graph() const;
    std::map<SwitchId, Latency> switch_processing() const;

    TopologyMeta meta;

    bool operator==(const Network& o) const { return nodes_ == o.nodes_ && adj_ == o.adj_ && meta == o.meta; }

private:
    std::map<NodeId, Node> nodes_;
    std::map<NodeId, std::map<NodeId, Latency>> adj_;
    std::vector<NodeId> switches_;  // sorted
};

// Every violated structural rule, empty when the network is well formed.
std::vector<std::string> validate_network(const Network& net);

}  // namespace cellgrid::model
