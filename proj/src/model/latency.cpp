#include "cellgrid/model/latency.hpp"

#include <string>

namespace cellgrid::model {

namespace {

std::map<SwitchId, controller::Weight> processing_costs(const Network& net) {
    std::map<SwitchId, controller::Weight> out;
    for (auto [id, p] : net.switch_processing()) out[id] = p;
    return out;
}

}  // namespace

LatencyModel::LatencyModel(const Network& net)
    : net_(net), paths_(controller::shortest_paths(net.switch_graph(), processing_costs(net))) {}

PathResult LatencyModel::switch_path(NodeId a, NodeId b) const {
    const SwitchId sa = net_.switch_id(net_.attached_switch(a));
    const SwitchId sb = net_.switch_id(net_.attached_switch(b));
    auto it = paths_.paths.find({sa, sb});
    if (it == paths_.paths.end()) {
        throw Unreachable("no switch path between nodes " + std::to_string(a) + " and " + std::to_string(b));
    }
    PathResult r;
    for (SwitchId s : it->second.hops) r.nodes.push_back(net_.switch_node(s));
    r.total_latency = it->second.cost;
    return r;
}

LatencyTerms LatencyModel::terms(NodeId ue_i, NodeId ue_j) const {
    for (NodeId u : {ue_i, ue_j}) {
        if (net_.node(u).kind != NodeKind::Ue) throw InvalidNetwork("node " + std::to_string(u) + " is not a UE");
    }
    const NodeId gi = net_.gnb_of(ue_i);
    const NodeId gj = net_.gnb_of(ue_j);
    const NodeId upf = net_.upf();
    const NodeId si = net_.attached_switch(gi);
    const NodeId sj = net_.attached_switch(gj);
    const NodeId su = net_.attached_switch(upf);
    auto proc = [&](NodeId n) { return net_.node(n).processing; };

    LatencyTerms t;
    t.gnb_i = proc(gi) + *net_.link(gi, si);
    t.gnb_j = proc(gj) + *net_.link(gj, sj);
    t.upf = proc(upf) + 2 * *net_.link(upf, su);
    t.s_ij = switch_path(si, sj).total_latency;
    t.s_iu = switch_path(si, su).total_latency;
    t.s_uj = switch_path(su, sj).total_latency;
    t.edge_optimized = proc(si) + (sj != si ? proc(sj) : 0);
    t.edge_unoptimized = proc(si) + (su != si ? proc(su) : 0) + (sj != su ? proc(sj) : 0);
    return t;
}

double LatencyModel::gain(NodeId ue_i, NodeId ue_j) const {
    const auto t = terms(ue_i, ue_j);
    return latency_gain(t.unoptimized(), t.optimized());
}

PathResult shortest_switch_path(const Network& net, NodeId a, NodeId b) {
    return LatencyModel(net).switch_path(a, b);
}

Latency latency_unoptimized(const Network& net, NodeId ue_i, NodeId ue_j) {
    return LatencyModel(net).unoptimized(ue_i, ue_j);
}

Latency latency_optimized(const Network& net, NodeId ue_i, NodeId ue_j) {
    return LatencyModel(net).optimized(ue_i, ue_j);
}

double latency_gain(const Network& net, NodeId ue_i, NodeId ue_j) { return LatencyModel(net).gain(ue_i, ue_j); }

double latency_gain(Latency unoptimized, Latency optimized) {
    if (unoptimized == 0) throw ZeroBaseline("unoptimized latency is zero");
    return (static_cast<double>(unoptimized) - static_cast<double>(optimized)) /
           static_cast<double>(unoptimized);
}

}  // namespace cellgrid::model
