#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cellgrid/controller/controller.hpp"
#include "cellgrid/dataplane/switch_state.hpp"
#include "cellgrid/model/network.hpp"
#include "cellgrid/sim/event_queue.hpp"

namespace cellgrid::sim {

using model::NodeId;

class UnknownGnb : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr Port kControllerPort = 0;
inline constexpr Port kUpfPort = 1;
inline constexpr Port kAmfPort = 2;
inline constexpr Port kSwitchPortBase = 100;   // + neighbor switch id
inline constexpr Port kGnbPortBase = 1000;     // + gNB index on the switch

// Dataplane switches wired like the network's switch subgraph.
struct Fleet {
    std::map<SwitchId, dataplane::SwitchState> switches;
    std::map<NodeId, std::pair<SwitchId, Port>> gnb_ports;
    controller::SwitchGraph graph;

    // Switch behind an egress port, if it leads to one.
    std::optional<SwitchId> peer(SwitchId at, Port egress) const;
    Port port_toward(SwitchId /*at*/, SwitchId neighbor) const { return static_cast<Port>(kSwitchPortBase + neighbor); }
};

Fleet build_fleet(const model::Network& net);

// Installs every controller path through the switches' UCP handlers and feeds the replies
// back. Returns the number of Path messages sent.
std::size_t install_routes(Fleet& fleet, controller::Controller& ctl);

struct TeidBirth {
    Time time = 0;
    Teid teid;
    NodeId gnb = 0;
};

struct TeidSimConfig {
    std::size_t queries = 0;  // retrieval queries issued after announcement quiescence
    std::uint64_t seed = 1;
    std::size_t event_budget = 1'000'000;
};

struct AdvertRecord {
    Teid teid;
    SwitchId owner = 0;
    Time birth = 0;
    Time duration = 0;  // birth until the last switch records the TEID
    std::size_t switches_learned = 0;
};

struct QueryRecord {
    Teid teid;
    SwitchId from = 0;
    SwitchId owner = 0;
    Time issued = 0;
    Time duration = 0;  // query until the owner's answer arrives back
    std::size_t hops = 0;  // one way
};

struct TeidReport {
    std::vector<AdvertRecord> adverts;
    std::vector<QueryRecord> queries;
    Time quiescence_time = 0;
    std::size_t route_messages = 0;
    std::size_t messages_sent = 0;
    std::size_t messages_delivered = 0;
    std::size_t duplicates = 0;
    std::size_t events = 0;
};

struct TeidRun {
    TeidReport report;
    Fleet fleet;
};

// Routes are installed first, then every birth announces its TEID from the gNB's switch
// with real UCP frames flooded switch to switch.
TeidRun run_teid_announcement(const model::Network& net, const std::vector<TeidBirth>& births,
                              const TeidSimConfig& cfg = {});

// Switches visited following TEID ownership and next hops from start; nullopt on a loop,
// a missing entry, or more than |fleet| hops.
std::optional<std::vector<SwitchId>> teid_chain(const Fleet& fleet, SwitchId start, Teid teid);

// Same walk driven by GTP frames through the dataplane pipeline; ends at the switch that
// hands the frame to a gNB port.
std::optional<std::vector<SwitchId>> gtp_walk(Fleet& fleet, SwitchId start, Teid teid);

// One TEID per gNB, all born at time 0, numbered from 1 in gNB order.
std::vector<TeidBirth> births_for_every_gnb(const model::Network& net);

}  // namespace cellgrid::sim
