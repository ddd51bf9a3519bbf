#include "cellgrid/dataplane/pipeline.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

namespace cellgrid::dataplane {

using namespace cellgrid::wire;

namespace {

bool port_listed(const std::set<std::uint16_t>& table, const L4Ports& p) {
    return table.count(p.src) != 0 || table.count(p.dst) != 0;
}

bool prefix_matches(const Prefix& p, Ipv4Address addr) {
    const std::uint32_t mask = prefix_mask(p.length);
    return (addr.value & mask) == (p.address.value & mask);
}

std::vector<Port> all_ports_except(const SwitchState& s, Port ingress) {
    std::vector<Port> out;
    for (Port p : s.ports) {
        if (p != ingress) out.push_back(p);
    }
    return out;
}

std::vector<Port> switch_ports_except(const SwitchState& s, std::optional<Port> ingress) {
    std::vector<Port> out;
    for (const auto& [id, p] : s.neighbor_ports) {
        if (!ingress || p != *ingress) out.push_back(p);
    }
    return out;
}

PipelineVerdict l2_forward(const SwitchState& s, ByteView frame, const EthernetHeader& eth,
                           Port ingress) {
    if (!eth.dst.is_multicast()) {
        auto it = s.mac_table.find(eth.dst);
        if (it != s.mac_table.end()) {
            if (it->second == ingress) return Drop{DropReason::Filtered};
            return Forward{{it->second}, Bytes(frame.begin(), frame.end())};
        }
    }
    auto flood = all_ports_except(s, ingress);
    if (flood.empty()) return Drop{DropReason::NoRoute};
    return Forward{std::move(flood), Bytes(frame.begin(), frame.end())};
}

PipelineVerdict reply(const SwitchState& s, Opcode op, const UcpMessage& req, Port ingress,
                      ReplyData data = {}) {
    return Reply{make_reply(s.switch_id, op, req.cmi.raw(), std::move(data)), ingress};
}

Ipv4List listed_addresses(const LpmTable& a, const LpmTable& b) {
    std::set<Ipv4Address> all;
    for (const auto& e : a.entries()) all.insert(e.prefix);
    for (const auto& e : b.entries()) all.insert(e.prefix);
    return {all.begin(), all.end()};
}

PipelineVerdict flood_announcement(const SwitchState& s, const UcpMessage& msg,
                                   std::optional<Port> except) {
    auto egress = switch_ports_except(s, except);
    if (egress.empty()) return Drop{DropReason::Consumed};
    return Forward{std::move(egress), encode_ucp(msg)};
}

PipelineVerdict handle_teid(SwitchState& s, const UcpMessage& msg, Port ingress) {
    const Teid teid = std::get<Teid>(msg.payload);
    const bool is_new = msg.cmi.opcode() == Opcode::NewTeid;

    if (s.gnb_ports.count(ingress)) {
        // Birth (or release) at a local gNB: record, then announce as this switch.
        if (is_new) s.teids[teid] = GnbPort{ingress};
        else s.teids.erase(teid);
        UcpMessage announce = msg;
        announce.switch_id = s.switch_id;
        return flood_announcement(s, announce, std::nullopt);
    }

    const SwitchId origin = msg.switch_id;
    if (origin == s.switch_id) return Drop{DropReason::Duplicate};
    auto it = s.teids.find(teid);
    if (is_new) {
        if (it != s.teids.end() && it->second == TeidLocus{origin}) {
            return Drop{DropReason::Duplicate};
        }
        s.teids[teid] = origin;
    } else {
        if (it == s.teids.end() || it->second != TeidLocus{origin}) {
            return Drop{DropReason::Duplicate};
        }
        s.teids.erase(it);
    }
    return flood_announcement(s, msg, ingress);
}

PipelineVerdict handle_path(SwitchState& s, const UcpMessage& msg, Port ingress) {
    const auto& path = std::get<SwitchPath>(msg.payload);
    const auto next = path_next_hop(s.switch_id, path);
    if (!next || path.destination == s.switch_id || !s.neighbor_ports.count(*next)) {
        return reply(s, Opcode::ModificationFailed, msg, ingress);
    }
    auto it = s.nexthop.find(path.destination);
    if (it != s.nexthop.end() && it->second == *next) return Drop{DropReason::Consumed};
    s.nexthop[path.destination] = *next;
    return reply(s, Opcode::NexthopUpdated, msg, ingress, ReplyTarget{path.destination});
}

CounterSnapshot snapshot(const SwitchState& s) {
    CounterSnapshot snap;
    for (std::size_t i = 0; i < s.monitor.size(); ++i) {
        snap.entries.push_back(
            {CounterTable::MonitorRule, static_cast<std::uint16_t>(i), s.monitor[i].count});
    }
    for (const auto& [sensor, count] : s.http_sensor) {
        snap.entries.push_back({CounterTable::HttpSensor, sensor, count});
    }
    return snap;
}

Bytes rewrite_teid(ByteView frame, const ParsedHeaders& h, Teid teid) {
    Bytes out(frame.begin(), frame.end());
    store_u32(out, h.offsets.gtp + kGtpTeidOffset, teid.value);
    return out;
}

std::optional<Port> locus_port(const SwitchState& s, const TeidLocus& locus) {
    if (auto* g = std::get_if<GnbPort>(&locus)) return g->port;
    auto it = s.neighbor_ports.find(std::get<SwitchId>(locus));
    if (it == s.neighbor_ports.end()) return std::nullopt;
    return it->second;
}

PipelineVerdict process_gtp(SwitchState& s, ByteView frame, const ParsedHeaders& h, Port ingress) {
    const bool downstream = s.core_port && ingress == *s.core_port;
    const Direction dir = s.gnb_ports.count(ingress) ? Direction::In : Direction::Out;

    if (h.inner_ipv4 && apply_security(s, h, dir) == SecurityDecision::Deny) {
        return Drop{DropReason::Security};
    }

    if (downstream) {
        // Downstream tunnels teach the switch which TEID reaches each UE address.
        if (h.inner_ipv4 && h.gtp->teid) s.ipv4_down_teid[h.inner_ipv4->dst] = *h.gtp->teid;
        if (h.inner_ipv4) apply_monitoring(s, h);
        return l2_forward(s, frame, h.ethernet, ingress);
    }

    std::optional<PipelineVerdict> verdict;
    if (h.inner_ipv4 && h.gtp->teid_flag) {
        if (auto hit = intra_cellular_forward(s, h)) {
            if (auto port = locus_port(s, hit->locus)) {
                verdict = Forward{{*port}, rewrite_teid(frame, h, hit->teid)};
            }
        }
    }
    // Frame already rewritten by an upstream switch: follow the TEID toward its owner.
    if (!verdict && h.gtp->teid && s.neighbor_on(ingress)) {
        auto it = s.teids.find(*h.gtp->teid);
        if (it != s.teids.end()) {
            if (auto locus = resolve_locus(s, it->second)) {
                if (auto port = locus_port(s, *locus)) {
                    verdict = Forward{{*port}, Bytes(frame.begin(), frame.end())};
                }
            }
        }
    }
    if (h.inner_ipv4) apply_monitoring(s, h);
    if (verdict) return std::move(*verdict);
    return DeliverToCore{Bytes(frame.begin(), frame.end())};
}

}  // namespace

const char* to_string(DropReason r) {
    switch (r) {
        case DropReason::Parse: return "parse";
        case DropReason::BadUcp: return "bad-ucp";
        case DropReason::Security: return "security";
        case DropReason::Duplicate: return "duplicate";
        case DropReason::Consumed: return "consumed";
        case DropReason::Filtered: return "filtered";
        case DropReason::NoRoute: return "no-route";
    }
    return "unknown";
}

SecurityDecision apply_security(const SwitchState& s, const ParsedHeaders& h, Direction direction) {
    const SecurityTables& t = direction == Direction::In ? s.in : s.out;
    if (!h.inner_ipv4) {
        return s.security_mode == SecurityMode::Blacklist ? SecurityDecision::Allow
                                                          : SecurityDecision::Deny;
    }
    const Ipv4Address src = h.inner_ipv4->src;
    const Ipv4Address dst = h.inner_ipv4->dst;

    if (s.security_mode == SecurityMode::Blacklist) {
        if (t.ipv4_blist.matches(src) || t.ipv4_blist.matches(dst)) return SecurityDecision::Deny;
        if (h.inner_tcp && port_listed(t.tcp_blist, *h.inner_tcp)) return SecurityDecision::Deny;
        if (h.inner_udp && port_listed(t.udp_blist, *h.inner_udp)) return SecurityDecision::Deny;
        return SecurityDecision::Allow;
    }

    if (!t.ipv4_wlist.matches(src) || !t.ipv4_wlist.matches(dst)) return SecurityDecision::Deny;
    // An empty port whitelist does not constrain ports.
    if (h.inner_tcp && !t.tcp_wlist.empty() && !port_listed(t.tcp_wlist, *h.inner_tcp)) {
        return SecurityDecision::Deny;
    }
    if (h.inner_udp && !t.udp_wlist.empty() && !port_listed(t.udp_wlist, *h.inner_udp)) {
        return SecurityDecision::Deny;
    }
    return SecurityDecision::Allow;
}

bool rule_matches(const MonitorRule& rule, const ParsedHeaders& h) {
    if (!h.inner_ipv4) return false;
    if (rule.src && !prefix_matches(*rule.src, h.inner_ipv4->src)) return false;
    if (rule.dst && !prefix_matches(*rule.dst, h.inner_ipv4->dst)) return false;
    if (rule.protocol && *rule.protocol != h.inner_ipv4->protocol) return false;
    if (rule.port) {
        const auto ports = h.inner_ports();
        if (!ports || (ports->src != *rule.port && ports->dst != *rule.port)) return false;
    }
    return true;
}

void apply_monitoring(SwitchState& s, const ParsedHeaders& h) {
    for (auto& counter : s.monitor) {
        if (rule_matches(counter.rule, h)) ++counter.count;
    }
    if (h.http_heartbeat) ++s.http_sensor[heartbeat_sensor(*h.http_heartbeat)];
}

std::optional<TeidLocus> resolve_locus(const SwitchState& s, const TeidLocus& locus) {
    const auto* owner = std::get_if<SwitchId>(&locus);
    if (!owner) return locus;
    auto hop = s.nexthop.find(*owner);
    if (hop == s.nexthop.end()) {
        spdlog::debug("switch {}: stale teid route, no nexthop toward switch {}", s.switch_id,
                      *owner);
        return std::nullopt;
    }
    return TeidLocus{hop->second};
}

std::optional<IntraCellularHit> intra_cellular_forward(const SwitchState& s,
                                                       const ParsedHeaders& h) {
    if (!h.inner_ipv4) return std::nullopt;
    const Ipv4Address dst = h.inner_ipv4->dst;
    if (!s.ipv4_in_network.matches(dst)) return std::nullopt;
    auto down = s.ipv4_down_teid.find(dst);
    if (down == s.ipv4_down_teid.end()) return std::nullopt;
    auto owner = s.teids.find(down->second);
    if (owner == s.teids.end()) return std::nullopt;
    auto locus = resolve_locus(s, owner->second);
    if (!locus) return std::nullopt;
    return IntraCellularHit{down->second, *locus};
}

bool ngap_register(SwitchState& s, const ParsedHeaders& h) {
    if (!h.ngap_init) return false;
    s.ue_ids.insert(*h.ngap_init);
    return true;
}

std::optional<SwitchId> path_next_hop(SwitchId self, const SwitchPath& path) {
    if (path.hops.empty()) return std::nullopt;
    auto it = std::find(path.hops.begin(), path.hops.end(), self);
    if (it == path.hops.end()) return path.hops.front();
    if (std::next(it) == path.hops.end()) return std::nullopt;
    return *std::next(it);
}

PipelineVerdict handle_ucp(SwitchState& s, const UcpMessage& msg, Port ingress) {
    switch (msg.cmi.opcode()) {
        case Opcode::GetWhitelist:
            return reply(s, Opcode::ReplyNoModification, msg, ingress,
                         listed_addresses(s.in.ipv4_wlist, s.out.ipv4_wlist));
        case Opcode::GetBlacklist:
            return reply(s, Opcode::ReplyNoModification, msg, ingress,
                         listed_addresses(s.in.ipv4_blist, s.out.ipv4_blist));
        case Opcode::AddWhitelist:
        case Opcode::AddBlacklist: {
            const auto addr = std::get<Ipv4Address>(msg.payload);
            const bool white = msg.cmi.opcode() == Opcode::AddWhitelist;
            const bool added_in = (white ? s.in.ipv4_wlist : s.in.ipv4_blist).insert(addr, 32);
            const bool added_out = (white ? s.out.ipv4_wlist : s.out.ipv4_blist).insert(addr, 32);
            return reply(s,
                         added_in || added_out ? Opcode::ModificationSucceeded
                                               : Opcode::ReplyNoModification,
                         msg, ingress);
        }
        case Opcode::GetMonitoringStats:
            return reply(s, Opcode::ReplyNoModification, msg, ingress, snapshot(s));
        case Opcode::GetMonitoringRule: {
            const auto index = std::get<RuleIndex>(msg.payload).value;
            if (index >= s.monitor.size()) return reply(s, Opcode::ModificationFailed, msg, ingress);
            return reply(s, Opcode::ReplyNoModification, msg, ingress, s.monitor[index].rule);
        }
        case Opcode::GetMonitoringRuleCount:
            return reply(s, Opcode::ReplyNoModification, msg, ingress,
                         Count{static_cast<std::uint32_t>(s.monitor.size())});
        case Opcode::AddMonitoringRule:
            // Rule indices travel as one octet.
            if (s.monitor.size() >= 256) return reply(s, Opcode::ModificationFailed, msg, ingress);
            s.monitor.push_back({std::get<MonitorRule>(msg.payload), 0});
            return reply(s, Opcode::ModificationSucceeded, msg, ingress);
        case Opcode::GetUeCount:
            return reply(s, Opcode::ReplyNoModification, msg, ingress,
                         Count{static_cast<std::uint32_t>(s.ue_ids.size())});
        case Opcode::DeleteUeId:
            return reply(s,
                         s.ue_ids.erase(std::get<UeId>(msg.payload)) ? Opcode::ModificationSucceeded
                                                                     : Opcode::ModificationFailed,
                         msg, ingress);
        case Opcode::AddUeIpv4:
            return reply(s,
                         s.ipv4_in_network.insert(std::get<Ipv4Address>(msg.payload), 32)
                             ? Opcode::ModificationSucceeded
                             : Opcode::ReplyNoModification,
                         msg, ingress);
        case Opcode::NewTeid:
        case Opcode::RemoveTeid: return handle_teid(s, msg, ingress);
        case Opcode::Path: return handle_path(s, msg, ingress);
        default:
            // Replies are for the controller, not for switches.
            return reply(s, Opcode::ModificationFailed, msg, ingress);
    }
}

PipelineVerdict process_packet(SwitchState& s, ByteView frame, Port ingress) {
    PacketClass cls;
    EthernetHeader eth;
    try {
        eth = decode_ethernet(frame);
        cls = classify_frame(frame);
    } catch (const WireError&) {
        return Drop{DropReason::Parse};
    }
    if (!eth.src.is_multicast()) s.mac_table[eth.src] = ingress;

    switch (cls) {
        case PacketClass::Ucp: {
            UcpMessage msg;
            try {
                msg = decode_ucp(frame);
            } catch (const WireError& e) {
                return Drop{e.code() == WireErrc::UnknownOpcode ? DropReason::BadUcp
                                                                : DropReason::Parse};
            }
            return handle_ucp(s, msg, ingress);
        }
        case PacketClass::Ngap: {
            // Passive tap: registration never blocks the signalling.
            try {
                ngap_register(s, parse_stack(frame));
            } catch (const WireError&) {
            }
            if (s.core_port && ingress == *s.core_port) return l2_forward(s, frame, eth, ingress);
            return DeliverToCore{Bytes(frame.begin(), frame.end())};
        }
        case PacketClass::Gtp: {
            ParsedHeaders h;
            try {
                h = parse_stack(frame);
            } catch (const WireError&) {
                return Drop{DropReason::Parse};
            }
            return process_gtp(s, frame, h, ingress);
        }
        case PacketClass::Other: break;
    }
    return l2_forward(s, frame, eth, ingress);
}

}  // namespace cellgrid::dataplane
