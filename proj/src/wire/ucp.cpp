#include "cellgrid/wire/ucp.hpp"

#include <array>
#include <string>

#include "cellgrid/wire/frame.hpp"

namespace cellgrid::wire {
namespace {

constexpr std::array kKnownOpcodes = {
    Opcode::GetWhitelist,        Opcode::GetBlacklist,
    Opcode::AddWhitelist,        Opcode::AddBlacklist,
    Opcode::GetMonitoringStats,  Opcode::GetMonitoringRule,
    Opcode::GetMonitoringRuleCount, Opcode::AddMonitoringRule,
    Opcode::GetUeCount,          Opcode::DeleteUeId,
    Opcode::AddUeIpv4,           Opcode::NewTeid,
    Opcode::RemoveTeid,          Opcode::Path,
    Opcode::ReplyNoModification, Opcode::ModificationSucceeded,
    Opcode::ModificationFailed,  Opcode::NexthopUpdated,
};

// Indices into UcpPayload / ReplyData.
enum PayloadIndex : std::size_t {
    kEmpty = 0,
    kIpv4 = 1,
    kTeid = 2,
    kUeId = 3,
    kRule = 4,
    kRuleIndex = 5,
    kPath = 6,
    kReply = 7,
};

enum ReplyIndex : std::size_t {
    kReplyEmpty = 0,
    kReplyIpv4List = 1,
    kReplyCounters = 2,
    kReplyRule = 3,
    kReplyCount = 4,
    kReplyTarget = 5,
};

constexpr std::uint8_t kRuleSrc = 0x01;
constexpr std::uint8_t kRuleDst = 0x02;
constexpr std::uint8_t kRuleProto = 0x04;
constexpr std::uint8_t kRulePort = 0x08;

[[noreturn]] void malformed(const std::string& what) {
    throw WireError(WireErrc::PayloadLengthMismatch, what);
}

std::size_t reply_data_index(Opcode reply_op, std::uint8_t original) {
    if (reply_op == Opcode::NexthopUpdated) return kReplyTarget;
    if (reply_op != Opcode::ReplyNoModification) return kReplyEmpty;
    switch (static_cast<Opcode>(original)) {
        case Opcode::GetWhitelist:
        case Opcode::GetBlacklist: return kReplyIpv4List;
        case Opcode::GetMonitoringStats: return kReplyCounters;
        case Opcode::GetMonitoringRule: return kReplyRule;
        case Opcode::GetMonitoringRuleCount:
        case Opcode::GetUeCount: return kReplyCount;
        default: return kReplyEmpty;
    }
}

void write_prefix(ByteWriter& w, const Prefix& p) {
    if (p.length > 32) throw WireError(WireErrc::InvariantViolation, "prefix length above 32");
    w.u32(p.address.value);
    w.u8(p.length);
}

Prefix read_prefix(ByteReader& in) {
    Prefix p{Ipv4Address{in.u32()}, in.u8()};
    if (p.length > 32) malformed("prefix length " + std::to_string(p.length));
    return p;
}

void write_rule(ByteWriter& w, const MonitorRule& r) {
    Bytes body;
    ByteWriter b(body);
    const std::uint8_t flags = (r.src ? kRuleSrc : 0) | (r.dst ? kRuleDst : 0) |
                               (r.protocol ? kRuleProto : 0) | (r.port ? kRulePort : 0);
    b.u8(flags);
    if (r.src) write_prefix(b, *r.src);
    if (r.dst) write_prefix(b, *r.dst);
    if (r.protocol) b.u8(*r.protocol);
    if (r.port) b.u16(*r.port);
    w.u8(static_cast<std::uint8_t>(body.size()));
    w.bytes(body);
}

MonitorRule read_rule(ByteReader& outer) {
    const std::uint8_t size = outer.u8();
    ByteReader in(outer.bytes(size), WireErrc::PayloadLengthMismatch, "monitor rule");
    const std::uint8_t flags = in.u8();
    if (flags & ~(kRuleSrc | kRuleDst | kRuleProto | kRulePort)) malformed("monitor rule flags");
    MonitorRule r;
    if (flags & kRuleSrc) r.src = read_prefix(in);
    if (flags & kRuleDst) r.dst = read_prefix(in);
    if (flags & kRuleProto) r.protocol = in.u8();
    if (flags & kRulePort) r.port = in.u16();
    if (!in.empty()) malformed("monitor rule has trailing octets");
    return r;
}

template <class List>
std::uint16_t checked_count(const List& list) {
    if (list.size() > 0xFFFF) throw WireError(WireErrc::InvariantViolation, "list too long");
    return static_cast<std::uint16_t>(list.size());
}

void write_reply(ByteWriter& w, Opcode reply_op, const Reply& r) {
    if (r.data.index() != reply_data_index(reply_op, r.original_cmi)) {
        throw WireError(WireErrc::InvariantViolation,
                        "reply data does not fit " + std::string(opcode_name(reply_op)));
    }
    w.u8(r.original_cmi);
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Ipv4List>) {
                w.u16(checked_count(d));
                for (auto a : d) w.u32(a.value);
            } else if constexpr (std::is_same_v<T, CounterSnapshot>) {
                w.u16(checked_count(d.entries));
                for (const auto& e : d.entries) {
                    w.u8(static_cast<std::uint8_t>(e.table));
                    w.u16(e.key);
                    w.u64(e.count);
                }
            } else if constexpr (std::is_same_v<T, MonitorRule>) {
                write_rule(w, d);
            } else if constexpr (std::is_same_v<T, Count>) {
                w.u32(d.value);
            } else if constexpr (std::is_same_v<T, ReplyTarget>) {
                w.u8(d.id);
            }
        },
        r.data);
}

Reply read_reply(ByteReader& in, Opcode reply_op) {
    Reply r;
    r.original_cmi = in.u8();
    switch (reply_data_index(reply_op, r.original_cmi)) {
        case kReplyIpv4List: {
            Ipv4List list(in.u16());
            for (auto& a : list) a = Ipv4Address{in.u32()};
            r.data = std::move(list);
            break;
        }
        case kReplyCounters: {
            CounterSnapshot snap;
            snap.entries.resize(in.u16());
            for (auto& e : snap.entries) {
                const std::uint8_t table = in.u8();
                if (table > 1) malformed("counter table " + std::to_string(table));
                e.table = static_cast<CounterTable>(table);
                e.key = in.u16();
                e.count = in.u64();
            }
            r.data = std::move(snap);
            break;
        }
        case kReplyRule: r.data = read_rule(in); break;
        case kReplyCount: r.data = Count{in.u32()}; break;
        case kReplyTarget: r.data = ReplyTarget{in.u8()}; break;
        default: break;
    }
    return r;
}

}  // namespace

bool is_known_opcode(std::uint8_t raw) {
    for (auto op : kKnownOpcodes) {
        if (static_cast<std::uint8_t>(op) == raw) return true;
    }
    return false;
}

Cmi split_cmi(std::uint8_t raw) {
    if (!is_known_opcode(raw)) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "0x%02X", raw);
        throw WireError(WireErrc::UnknownOpcode, std::string("cmi ") + buf);
    }
    return Cmi{static_cast<std::uint8_t>(raw >> 5), static_cast<std::uint8_t>(raw & 0x1F)};
}

Cmi make_cmi(Opcode op) { return split_cmi(static_cast<std::uint8_t>(op)); }

const char* op_type_name(std::uint8_t op_type) {
    switch (static_cast<OpType>(op_type)) {
        case OpType::Security: return "Security";
        case OpType::Monitoring: return "Monitoring";
        case OpType::FiveGControl: return "5G Control";
        case OpType::FiveGData: return "5G Data";
        case OpType::GnbControl: return "gNB Control";
        case OpType::Reply: return "Reply";
    }
    return "Unassigned";
}

const char* opcode_name(Opcode op) {
    switch (op) {
        case Opcode::GetWhitelist: return "Get all whitelisted IPv4s";
        case Opcode::GetBlacklist: return "Get all blacklisted IPv4s";
        case Opcode::AddWhitelist: return "Add an IPv4 to whitelist";
        case Opcode::AddBlacklist: return "Add an IPv4 to blacklist";
        case Opcode::GetMonitoringStats: return "Get monitoring stats";
        case Opcode::GetMonitoringRule: return "Get monitoring rule";
        case Opcode::GetMonitoringRuleCount: return "Get number of monitoring rules";
        case Opcode::AddMonitoringRule: return "Add a monitoring rule";
        case Opcode::GetUeCount: return "Get current number of UE";
        case Opcode::DeleteUeId: return "Delete UE ID";
        case Opcode::AddUeIpv4: return "Add UE IPv4";
        case Opcode::NewTeid: return "New TEID";
        case Opcode::RemoveTeid: return "Remove TEID";
        case Opcode::Path: return "Path";
        case Opcode::ReplyNoModification: return "Reply without modification";
        case Opcode::ModificationSucceeded: return "Modification succeeded";
        case Opcode::ModificationFailed: return "Modification failed";
        case Opcode::NexthopUpdated: return "Nexthop is updated";
    }
    return "Unknown";
}

std::size_t expected_payload_index(Opcode op) {
    switch (op) {
        case Opcode::AddWhitelist:
        case Opcode::AddBlacklist:
        case Opcode::AddUeIpv4: return kIpv4;
        case Opcode::NewTeid:
        case Opcode::RemoveTeid: return kTeid;
        case Opcode::DeleteUeId: return kUeId;
        case Opcode::AddMonitoringRule: return kRule;
        case Opcode::GetMonitoringRule: return kRuleIndex;
        case Opcode::Path: return kPath;
        case Opcode::ReplyNoModification:
        case Opcode::ModificationSucceeded:
        case Opcode::ModificationFailed:
        case Opcode::NexthopUpdated: return kReply;
        default: return kEmpty;
    }
}

Bytes encode_ucp_body(const UcpMessage& msg) {
    const std::uint8_t raw = msg.cmi.raw();
    if (msg.cmi.op_type > 7 || msg.cmi.op_id > 31) {
        throw WireError(WireErrc::InvariantViolation, "cmi fields out of range");
    }
    const Opcode op = split_cmi(raw).opcode();
    if (msg.payload.index() != expected_payload_index(op)) {
        throw WireError(WireErrc::InvariantViolation,
                        std::string("payload does not fit ") + opcode_name(op));
    }

    Bytes out;
    ByteWriter w(out);
    w.u8(raw);
    w.u8(msg.switch_id);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ipv4Address> || std::is_same_v<T, Teid> ||
                          std::is_same_v<T, UeId>) {
                w.u32(p.value);
            } else if constexpr (std::is_same_v<T, MonitorRule>) {
                write_rule(w, p);
            } else if constexpr (std::is_same_v<T, RuleIndex>) {
                w.u8(p.value);
            } else if constexpr (std::is_same_v<T, SwitchPath>) {
                if (p.hops.size() > 0xFF) {
                    throw WireError(WireErrc::InvariantViolation, "path longer than 255 hops");
                }
                w.u8(p.destination);
                w.u8(static_cast<std::uint8_t>(p.hops.size()));
                for (auto hop : p.hops) w.u8(hop);
            } else if constexpr (std::is_same_v<T, Reply>) {
                write_reply(w, op, p);
            }
        },
        msg.payload);
    return out;
}

UcpMessage decode_ucp_body(ByteView body) {
    ByteReader in(body, WireErrc::PayloadLengthMismatch, "ucp");
    UcpMessage msg;
    msg.cmi = split_cmi(in.u8());
    msg.switch_id = in.u8();
    const Opcode op = msg.cmi.opcode();
    switch (expected_payload_index(op)) {
        case kIpv4: msg.payload = Ipv4Address{in.u32()}; break;
        case kTeid: msg.payload = Teid{in.u32()}; break;
        case kUeId: msg.payload = UeId{in.u32()}; break;
        case kRule: msg.payload = read_rule(in); break;
        case kRuleIndex: msg.payload = RuleIndex{in.u8()}; break;
        case kPath: {
            SwitchPath path;
            path.destination = in.u8();
            path.hops.resize(in.u8());
            for (auto& hop : path.hops) hop = in.u8();
            msg.payload = std::move(path);
            break;
        }
        case kReply: msg.payload = read_reply(in, op); break;
        default: break;
    }
    if (!in.empty()) {
        malformed(std::string(opcode_name(op)) + " has " + std::to_string(in.remaining()) +
                  " trailing octets");
    }
    return msg;
}

Bytes encode_ucp(const UcpMessage& msg, MacAddress dst, MacAddress src) {
    return build_ethernet({dst, src, kUcpEthertype}, encode_ucp_body(msg));
}

UcpMessage decode_ucp(ByteView frame) {
    const EthernetHeader eth = decode_ethernet(frame);
    if (eth.ethertype != kUcpEthertype) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "0x%04x", eth.ethertype);
        throw WireError(WireErrc::WrongEthertype, std::string("ethertype ") + buf);
    }
    return decode_ucp_body(frame.subspan(kEthernetHeaderSize));
}

UcpMessage make_reply(SwitchId from, Opcode reply_op, std::uint8_t original_cmi, ReplyData data) {
    return UcpMessage{from, make_cmi(reply_op), Reply{original_cmi, std::move(data)}};
}

}  // namespace cellgrid::wire
