#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "cellgrid/controller/switch_graph.hpp"
#include "cellgrid/model/network.hpp"

namespace cellgrid::model {

class Unreachable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroBaseline : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PathResult {
    std::vector<NodeId> nodes;  // switch nodes, first to last
    Latency total_latency = 0;  // links plus processing of switches strictly inside
    bool operator==(const PathResult&) const = default;
};

/*
 * Latency terms for one UE pair.
 *
 *   gnb_x  = gNB processing + gNB-to-switch link
 *   upf    = UPF processing + 2 * UPF-to-switch link
 *   s_xy   = switch path latency (links + inner switch processing)
 *   l_o = gnb_i + gnb_j + s_ij + proc(sw_i) + [sw_j != sw_i] proc(sw_j)
 *   l_p = gnb_i + gnb_j + s_iu + s_uj + upf
 *         + proc(sw_i) + [sw_u != sw_i] proc(sw_u) + [sw_j != sw_u] proc(sw_j)
 */
struct LatencyTerms {
    Latency gnb_i = 0;
    Latency gnb_j = 0;
    Latency s_ij = 0;
    Latency s_iu = 0;
    Latency s_uj = 0;
    Latency upf = 0;
    Latency edge_optimized = 0;    // endpoint switch processing in l_o
    Latency edge_unoptimized = 0;  // endpoint switch processing in l_p
    Latency optimized() const { return gnb_i + gnb_j + s_ij + edge_optimized; }
    Latency unoptimized() const { return gnb_i + gnb_j + s_iu + s_uj + upf + edge_unoptimized; }
};

// Precomputes switch paths once so many UE pairs can be evaluated cheaply.
class LatencyModel {
public:
    explicit LatencyModel(const Network& net);

    PathResult switch_path(NodeId a, NodeId b) const;
    LatencyTerms terms(NodeId ue_i, NodeId ue_j) const;
    Latency optimized(NodeId ue_i, NodeId ue_j) const { return terms(ue_i, ue_j).optimized(); }
    Latency unoptimized(NodeId ue_i, NodeId ue_j) const { return terms(ue_i, ue_j).unoptimized(); }
    double gain(NodeId ue_i, NodeId ue_j) const;

private:
    const Network& net_;
    controller::PathTable paths_;
};

PathResult shortest_switch_path(const Network& net, NodeId a, NodeId b);
Latency latency_unoptimized(const Network& net, NodeId ue_i, NodeId ue_j);
Latency latency_optimized(const Network& net, NodeId ue_i, NodeId ue_j);
double latency_gain(const Network& net, NodeId ue_i, NodeId ue_j);
// (l_p - l_o) / l_p; throws ZeroBaseline when l_p = 0.
double latency_gain(Latency unoptimized, Latency optimized);

}  // namespace cellgrid::model
