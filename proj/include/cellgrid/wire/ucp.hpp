#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cellgrid/wire/bytes.hpp"
#include "cellgrid/wire/types.hpp"

namespace cellgrid::wire {

inline constexpr std::uint16_t kUcpEthertype = 0xf1f1;

enum class OpType : std::uint8_t {
    Security = 0b000,
    Monitoring = 0b001,
    FiveGControl = 0b010,
    FiveGData = 0b011,
    GnbControl = 0b110,
    Reply = 0b111,
};

// Raw CMI values: op type in the top three bits, op id in the low five.
enum class Opcode : std::uint8_t {
    GetWhitelist = 0x00,
    GetBlacklist = 0x01,
    AddWhitelist = 0x10,
    AddBlacklist = 0x11,

    GetMonitoringStats = 0x20,
    GetMonitoringRule = 0x21,
    GetMonitoringRuleCount = 0x22,
    AddMonitoringRule = 0x30,

    GetUeCount = 0x40,
    DeleteUeId = 0x50,

    AddUeIpv4 = 0x70,

    NewTeid = 0xD0,
    RemoveTeid = 0xD1,
    Path = 0xD3,

    ReplyNoModification = 0xE0,
    ModificationSucceeded = 0xF0,
    ModificationFailed = 0xF1,
    NexthopUpdated = 0xF2,
};

struct Cmi {
    std::uint8_t op_type = 0;  // 3 bits
    std::uint8_t op_id = 0;    // 5 bits

    std::uint8_t raw() const { return static_cast<std::uint8_t>((op_type << 5) | op_id); }
    Opcode opcode() const { return static_cast<Opcode>(raw()); }
    bool operator==(const Cmi&) const = default;
};

bool is_known_opcode(std::uint8_t raw);
// Throws UnknownOpcode for pairs the opcode table does not list.
Cmi split_cmi(std::uint8_t raw);
Cmi make_cmi(Opcode op);
const char* op_type_name(std::uint8_t op_type);
const char* opcode_name(Opcode op);

struct Prefix {
    Ipv4Address address;
    std::uint8_t length = 32;
    bool operator==(const Prefix&) const = default;
};

// Conjunctive match over the decapsulated user packet; absent fields match anything.
// A port matches when either the source or the destination L4 port equals it.
struct MonitorRule {
    std::optional<Prefix> src;
    std::optional<Prefix> dst;
    std::optional<std::uint8_t> protocol;
    std::optional<std::uint16_t> port;
    bool operator==(const MonitorRule&) const = default;
};

struct RuleIndex {
    std::uint8_t value = 0;
    bool operator==(const RuleIndex&) const = default;
};

struct SwitchPath {
    SwitchId destination = 0;
    std::vector<SwitchId> hops;
    bool operator==(const SwitchPath&) const = default;
};

enum class CounterTable : std::uint8_t { MonitorRule = 0, HttpSensor = 1 };

struct CounterEntry {
    CounterTable table = CounterTable::MonitorRule;
    std::uint16_t key = 0;
    std::uint64_t count = 0;
    bool operator==(const CounterEntry&) const = default;
};

struct CounterSnapshot {
    std::vector<CounterEntry> entries;
    bool operator==(const CounterSnapshot&) const = default;
};

struct Count {
    std::uint32_t value = 0;
    bool operator==(const Count&) const = default;
};

struct ReplyTarget {
    SwitchId id = 0;
    bool operator==(const ReplyTarget&) const = default;
};

using Ipv4List = std::vector<Ipv4Address>;

using ReplyData =
    std::variant<std::monostate, Ipv4List, CounterSnapshot, MonitorRule, Count, ReplyTarget>;

struct Reply {
    std::uint8_t original_cmi = 0;
    ReplyData data;
    bool operator==(const Reply&) const = default;
};

using UcpPayload = std::variant<std::monostate, Ipv4Address, Teid, UeId, MonitorRule, RuleIndex,
                                SwitchPath, Reply>;

struct UcpMessage {
    SwitchId switch_id = 0;
    Cmi cmi;
    UcpPayload payload;
    bool operator==(const UcpMessage&) const = default;
};

// Payload variant index each request opcode must carry.
std::size_t expected_payload_index(Opcode op);

// Body = CMI, switch id, payload (no Ethernet header).
Bytes encode_ucp_body(const UcpMessage& msg);
UcpMessage decode_ucp_body(ByteView body);

// Full frame with the 0xf1f1 Ethernet header.
Bytes encode_ucp(const UcpMessage& msg, MacAddress dst = MacAddress::broadcast(),
                 MacAddress src = {});
UcpMessage decode_ucp(ByteView frame);

UcpMessage make_reply(SwitchId from, Opcode reply_op, std::uint8_t original_cmi,
                      ReplyData data = {});

}  // namespace cellgrid::wire
