#include "cellgrid/model/network.hpp"

#include <algorithm>
#include <set>

namespace cellgrid::model {

namespace {

std::string id_str(NodeId id) { return std::to_string(id); }

}  // namespace

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Ue: return "ue";
        case NodeKind::Gnb: return "gnb";
        case NodeKind::Switch: return "switch";
        case NodeKind::Upf: return "upf";
        case NodeKind::Amf: return "amf";
    }
    return "?";
}

std::optional<NodeKind> parse_node_kind(const std::string& s) {
    for (auto k : {NodeKind::Ue, NodeKind::Gnb, NodeKind::Switch, NodeKind::Upf, NodeKind::Amf}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

void Network::add_node(Node n) {
    if (nodes_.count(n.id)) throw InvalidNetwork("duplicate node id " + id_str(n.id));
    if (n.kind == NodeKind::Switch) {
        if (switches_.size() >= 255) throw InvalidNetwork("more than 255 switches");
        switches_.insert(std::upper_bound(switches_.begin(), switches_.end(), n.id), n.id);
    }
    nodes_[n.id] = n;
    adj_[n.id];
}

void Network::add_link(NodeId a, NodeId b, Latency latency) {
    if (!nodes_.count(a) || !nodes_.count(b)) {
        throw InvalidNetwork("link " + id_str(a) + "-" + id_str(b) + " names an unknown node");
    }
    if (a == b) throw InvalidNetwork("self loop on node " + id_str(a));
    if (adj_[a].count(b)) throw InvalidNetwork("duplicate link " + id_str(a) + "-" + id_str(b));
    adj_[a][b] = latency;
    adj_[b][a] = latency;
}

const Node& Network::node(NodeId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw InvalidNetwork("unknown node " + id_str(id));
    return it->second;
}

std::vector<Link> Network::links() const {
    std::vector<Link> out;
    for (const auto& [a, row] : adj_) {
        for (const auto& [b, lat] : row) {
            if (a < b) out.push_back({a, b, lat});
        }
    }
    return out;
}

std::optional<Latency> Network::link(NodeId a, NodeId b) const {
    auto it = adj_.find(a);
    if (it == adj_.end()) return std::nullopt;
    auto jt = it->second.find(b);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

std::vector<NodeId> Network::neighbors(NodeId id) const {
    std::vector<NodeId> out;
    auto it = adj_.find(id);
    if (it == adj_.end()) return out;
    for (const auto& [n, lat] : it->second) out.push_back(n);
    return out;
}

std::vector<NodeId> Network::of_kind(NodeKind k) const {
    std::vector<NodeId> out;
    for (const auto& [id, n] : nodes_) {
        if (n.kind == k) out.push_back(id);
    }
    return out;
}

SwitchId Network::switch_id(NodeId switch_node) const {
    auto it = std::lower_bound(switches_.begin(), switches_.end(), switch_node);
    if (it == switches_.end() || *it != switch_node) {
        throw InvalidNetwork("node " + id_str(switch_node) + " is not a switch");
    }
    return static_cast<SwitchId>(it - switches_.begin() + 1);
}

NodeId Network::switch_node(SwitchId id) const {
    if (id == 0 || id > switches_.size()) throw InvalidNetwork("no switch " + std::to_string(id));
    return switches_[id - 1u];
}

NodeId Network::attached_switch(NodeId id) const {
    const Node& n = node(id);
    if (n.kind == NodeKind::Switch) return id;
    if (n.kind == NodeKind::Ue) return attached_switch(gnb_of(id));
    for (NodeId m : neighbors(id)) {
        if (node(m).kind == NodeKind::Switch) return m;
    }
    throw InvalidNetwork("node " + id_str(id) + " has no switch");
}

NodeId Network::gnb_of(NodeId ue) const {
    for (NodeId m : neighbors(ue)) {
        if (node(m).kind == NodeKind::Gnb) return m;
    }
    throw InvalidNetwork("UE " + id_str(ue) + " has no gNB");
}

NodeId Network::upf() const {
    const auto upfs = of_kind(NodeKind::Upf);
    if (upfs.size() != 1) throw InvalidNetwork("network needs exactly one UPF");
    return upfs.front();
}

controller::SwitchGraph Network::switch_graph() const {
    controller::SwitchGraph g;
    for (NodeId s : switches_) {
        g.add_node(switch_id(s));
        for (const auto& [m, lat] : adj_.at(s)) {
            if (m > s && node(m).kind == NodeKind::Switch) g.add_edge(switch_id(s), switch_id(m), lat);
        }
    }
    return g;
}

std::map<SwitchId, Latency> Network::switch_processing() const {
    std::map<SwitchId, Latency> out;
    for (NodeId s : switches_) out[switch_id(s)] = nodes_.at(s).processing;
    return out;
}

std::vector<std::string> validate_network(const Network& net) {
    std::vector<std::string> bad;
    auto count_kind = [&](const std::vector<NodeId>& ids, NodeKind k) {
        return std::count_if(ids.begin(), ids.end(), [&](NodeId x) { return net.node(x).kind == k; });
    };

    if (net.of_kind(NodeKind::Upf).size() != 1) bad.push_back("network must have exactly one UPF");
    if (net.of_kind(NodeKind::Amf).size() > 1) bad.push_back("network has more than one AMF");
    if (net.switch_count() == 0) bad.push_back("network has no switch");

    for (const auto& [id, n] : net.nodes()) {
        const auto nb = net.neighbors(id);
        const std::string who = std::string(to_string(n.kind)) + " " + id_str(id);
        switch (n.kind) {
            case NodeKind::Ue:
                if (nb.size() != 1 || count_kind(nb, NodeKind::Gnb) != 1) {
                    bad.push_back(who + " must attach to exactly one gNB");
                }
                for (NodeId m : nb) {
                    if (net.link(id, m).value_or(0) != 0) bad.push_back(who + " has a non-zero link latency");
                }
                break;
            case NodeKind::Gnb:
                if (count_kind(nb, NodeKind::Switch) != 1) bad.push_back(who + " must attach to exactly one switch");
                if (count_kind(nb, NodeKind::Ue) + count_kind(nb, NodeKind::Switch) !=
                    static_cast<long>(nb.size())) {
                    bad.push_back(who + " may only link UEs and its switch");
                }
                break;
            case NodeKind::Upf:
            case NodeKind::Amf:
                if (nb.size() != 1 || count_kind(nb, NodeKind::Switch) != 1) {
                    bad.push_back(who + " must attach to exactly one switch");
                }
                break;
            case NodeKind::Switch:
                if (count_kind(nb, NodeKind::Ue) != 0) bad.push_back(who + " must not link a UE");
                break;
        }
    }
    if (net.switch_count() > 0 && net.switch_graph().component_count() != 1) {
        bad.push_back("switch subgraph is not connected");
    }
    return bad;
}

}  // namespace cellgrid::model
