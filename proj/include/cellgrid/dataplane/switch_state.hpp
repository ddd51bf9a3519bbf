#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "cellgrid/dataplane/lpm.hpp"
#include "cellgrid/wire/types.hpp"
#include "cellgrid/wire/ucp.hpp"

namespace cellgrid::dataplane {

// Default forwarding behavior of the firewall, fixed when the switch boots.
enum class SecurityMode { Blacklist, Whitelist };

struct GnbPort {
    Port port = 0;
    auto operator<=>(const GnbPort&) const = default;
};

// Where a TEID lives: behind one of this switch's gNB ports, or behind another switch.
using TeidLocus = std::variant<GnbPort, SwitchId>;

struct SecurityTables {
    LpmTable ipv4_wlist;
    LpmTable ipv4_blist;
    std::set<std::uint16_t> tcp_wlist;
    std::set<std::uint16_t> tcp_blist;
    std::set<std::uint16_t> udp_wlist;
    std::set<std::uint16_t> udp_blist;
    bool operator==(const SecurityTables&) const = default;
};

struct MonitorCounter {
    wire::MonitorRule rule;
    std::uint64_t count = 0;
    bool operator==(const MonitorCounter&) const = default;
};

struct SwitchState {
    SwitchId switch_id = 0;
    SecurityMode security_mode = SecurityMode::Blacklist;

    // Port roles.
    std::set<Port> ports;
    std::set<Port> gnb_ports;
    std::optional<Port> core_port;
    std::map<SwitchId, Port> neighbor_ports;

    std::map<MacAddress, Port> mac_table;
    std::map<Teid, TeidLocus> teids;
    std::map<SwitchId, SwitchId> nexthop;
    std::set<UeId> ue_ids;
    std::map<Ipv4Address, Teid> ipv4_down_teid;
    LpmTable ipv4_in_network;
    SecurityTables in;   // uplink: frames entering from a gNB
    SecurityTables out;  // every other direction
    std::map<std::uint16_t, std::uint64_t> http_sensor;
    std::vector<MonitorCounter> monitor;

    bool operator==(const SwitchState&) const = default;

    // Registers a port toward a directly connected switch.
    void connect_switch(SwitchId neighbor, Port port) {
        ports.insert(port);
        neighbor_ports[neighbor] = port;
    }
    void attach_gnb(Port port) {
        ports.insert(port);
        gnb_ports.insert(port);
    }
    void attach_core(Port port) {
        ports.insert(port);
        core_port = port;
    }
    std::optional<SwitchId> neighbor_on(Port port) const;
};

}  // namespace cellgrid::dataplane
