#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "cellgrid/model/network.hpp"

namespace cellgrid::model {

struct LatencyRange {
    Latency lo = 0;
    Latency hi = 0;
    bool operator==(const LatencyRange&) const = default;
};

struct LatencyDraws {
    LatencyRange link{100, 1000};
    LatencyRange switch_processing{10, 50};
    LatencyRange gnb_processing{500, 1000};
    LatencyRange upf_processing{100, 300};
    LatencyRange amf_processing{0, 0};
    bool operator==(const LatencyDraws&) const = default;
};

struct TopoConfig {
    std::size_t num_switches = 3;    // S
    std::size_t gnb_per_switch = 2;  // G
    std::size_t max_ue_per_gnb = 2;  // U
    // Caps the gNB total; switches fill G at a time and the last one takes the remainder.
    std::optional<std::size_t> total_gnbs;
    std::uint64_t seed = 1;
    LatencyDraws latency;

    // Size limits of the reference experiments; enforce_limits = false lifts them.
    std::size_t max_switches = 40;
    std::size_t max_gnbs = 200;
    std::size_t max_ue_limit = 10;
    bool enforce_limits = true;

    bool operator==(const TopoConfig&) const = default;
};

class InfeasibleConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws InfeasibleConfig describing the first violated bound.
void check_config(const TopoConfig& cfg, std::size_t min_switches = 2);

// Random switch mesh: UPF on SW1, AMF on SW2, E random unique switch pairs, repaired to be
// connected when needed.
Network generate_topology(const TopoConfig& cfg);

// Same node population, switches wired SW1 - SW2 - ... - SWS. One switch is allowed; UPF and
// AMF then share it.
Network generate_line_topology(const TopoConfig& cfg);

// One switch, two gNBs with one UE each, UPF and AMF.
Network emulation_topology(Latency gnb_processing, Latency switch_processing, Latency upf_processing,
                           Latency gnb_link, Latency upf_link);

}  // namespace cellgrid::model
