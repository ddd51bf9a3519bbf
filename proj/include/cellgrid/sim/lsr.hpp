#pragma once

#include <map>
#include <vector>

#include "cellgrid/controller/switch_graph.hpp"
#include "cellgrid/sim/event_queue.hpp"

namespace cellgrid::sim {

using RoutingTable = std::map<SwitchId, std::vector<SwitchId>>;  // destination -> path

struct LinkStateAd {
    SwitchId origin = 0;
    std::uint32_t seq = 0;
    std::map<SwitchId, controller::Weight> links;
};

struct LsrReport {
    std::map<SwitchId, RoutingTable> tables;
    Time convergence_time = 0;  // last database install, from the start of the round
    std::size_t messages_sent = 0;
    std::size_t messages_delivered = 0;
    std::size_t duplicates = 0;
    std::size_t events = 0;
};

/*
 * Link-state flooding among switches. Each switch originates an advertisement of its own
 * links, floods newer advertisements to every neighbor but the sender, and computes its
 * table from its database once the network is quiet. Messages take the link latency.
 */
class LsrSim {
public:
    explicit LsrSim(controller::SwitchGraph graph, std::size_t event_budget = 1'000'000);

    // First round: every switch originates.
    LsrReport run();
    // Later rounds: only switches whose adjacency changed re-originate.
    LsrReport update(const controller::SwitchGraph& graph);

    const controller::SwitchGraph& graph() const { return graph_; }

private:
    LsrReport flood(const std::vector<SwitchId>& originators,
                    const std::vector<std::pair<SwitchId, SwitchId>>& new_adjacencies);
    RoutingTable table_of(SwitchId s) const;

    controller::SwitchGraph graph_;
    std::size_t budget_;
    std::map<SwitchId, std::map<SwitchId, LinkStateAd>> lsdb_;
    std::map<SwitchId, std::uint32_t> own_seq_;
};

LsrReport run_lsr(const controller::SwitchGraph& graph, std::size_t event_budget = 1'000'000);

}  // namespace cellgrid::sim
