#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cellgrid/dataplane/switch_state.hpp"
#include "cellgrid/wire/bytes.hpp"
#include "cellgrid/wire/frame.hpp"
#include "cellgrid/wire/ucp.hpp"

namespace cellgrid::dataplane {

enum class DropReason {
    Parse,      // frame did not parse
    BadUcp,     // UCP frame with an opcode outside the table
    Security,   // firewall deny
    Duplicate,  // flooded announcement already known
    Consumed,   // handled, nothing to emit
    Filtered,   // L2 destination sits on the ingress port
    NoRoute,    // nowhere to send it
};

const char* to_string(DropReason r);

struct Forward {
    std::vector<Port> egress;
    wire::Bytes frame;
};

struct Drop {
    DropReason reason;
};

struct Reply {
    wire::UcpMessage message;
    Port egress = 0;
};

struct DeliverToCore {
    wire::Bytes frame;
};

using PipelineVerdict = std::variant<Forward, Drop, Reply, DeliverToCore>;

enum class Direction { In, Out };
enum class SecurityDecision { Allow, Deny };

struct IntraCellularHit {
    Teid teid;
    TeidLocus locus;  // local gNB port, or the neighbor switch to hand the frame to
};

// Top-level dispatch on packet class. Always yields exactly one verdict.
PipelineVerdict process_packet(SwitchState& state, wire::ByteView frame, Port ingress);

SecurityDecision apply_security(const SwitchState& state, const wire::ParsedHeaders& headers,
                                Direction direction);

void apply_monitoring(SwitchState& state, const wire::ParsedHeaders& headers);
bool rule_matches(const wire::MonitorRule& rule, const wire::ParsedHeaders& headers);

std::optional<IntraCellularHit> intra_cellular_forward(const SwitchState& state,
                                                       const wire::ParsedHeaders& headers);

// Resolves a TEID owned by another switch to the neighbor toward it; nullopt when stale.
std::optional<TeidLocus> resolve_locus(const SwitchState& state, const TeidLocus& locus);

// Returns true when an initial-UE record was stored (or already present).
bool ngap_register(SwitchState& state, const wire::ParsedHeaders& headers);

PipelineVerdict handle_ucp(SwitchState& state, const wire::UcpMessage& msg, Port ingress);

// Next hop a Path message installs on this switch, if it names one.
std::optional<SwitchId> path_next_hop(SwitchId self, const wire::SwitchPath& path);

}  // namespace cellgrid::dataplane
