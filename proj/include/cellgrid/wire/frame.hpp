#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "cellgrid/wire/bytes.hpp"
#include "cellgrid/wire/gtp.hpp"
#include "cellgrid/wire/types.hpp"
#include "cellgrid/wire/ucp.hpp"

namespace cellgrid::wire {

inline constexpr std::uint16_t kEthertypeIpv4 = 0x0800;
inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoUdp = 17;
inline constexpr std::uint8_t kProtoSctp = 132;
inline constexpr std::uint16_t kNgapPort = 38412;
inline constexpr std::uint16_t kHttpPort = 80;
inline constexpr std::size_t kEthernetHeaderSize = 14;
inline constexpr std::size_t kHeartbeatSize = 9;

// Simplified initial-UE record carried right after the SCTP common header.
inline constexpr std::uint32_t kInitialUeMagic = 0x4E474150;  // "NGAP"
inline constexpr std::size_t kInitialUeSize = 8;

enum class PacketClass { Ucp, Ngap, Gtp, Other };

const char* to_string(PacketClass c);

struct EthernetHeader {
    MacAddress dst;
    MacAddress src;
    std::uint16_t ethertype = 0;
    bool operator==(const EthernetHeader&) const = default;
};

struct Ipv4Header {
    Ipv4Address src;
    Ipv4Address dst;
    std::uint8_t protocol = 0;
    bool operator==(const Ipv4Header&) const = default;
};

struct L4Ports {
    std::uint16_t src = 0;
    std::uint16_t dst = 0;
    bool operator==(const L4Ports&) const = default;
};

// Octet offsets of each parsed layer inside the original frame.
struct LayerOffsets {
    std::size_t l3 = 0;
    std::size_t l4 = 0;
    std::size_t gtp = 0;
    std::size_t inner_l3 = 0;
    std::size_t inner_l4 = 0;
    std::size_t payload = 0;
    std::size_t payload_size = 0;
};

struct ParsedHeaders {
    EthernetHeader ethernet;
    std::optional<Ipv4Header> ipv4;
    std::optional<L4Ports> udp;
    std::optional<L4Ports> sctp;
    std::optional<GtpHeader> gtp;
    std::optional<Ipv4Header> inner_ipv4;
    std::optional<L4Ports> inner_tcp;
    std::optional<L4Ports> inner_udp;
    std::optional<std::array<std::uint8_t, kHeartbeatSize>> http_heartbeat;
    std::optional<UeId> ngap_init;
    LayerOffsets offsets;

    // Inner L4 ports regardless of protocol.
    std::optional<L4Ports> inner_ports() const { return inner_tcp ? inner_tcp : inner_udp; }
};

// Sensor id announced by a heartbeat: big-endian u16 in its first two octets.
std::uint16_t heartbeat_sensor(const std::array<std::uint8_t, kHeartbeatSize>& hb);

EthernetHeader decode_ethernet(ByteView frame);
PacketClass classify_frame(ByteView frame);
ParsedHeaders parse_stack(ByteView frame);

// Frame builders for fixtures, the simulator and the CLI.
struct Ipv4Endpoints {
    Ipv4Address src;
    Ipv4Address dst;
};

Bytes build_ethernet(const EthernetHeader& eth, ByteView payload);
Bytes build_ipv4(Ipv4Endpoints ep, std::uint8_t protocol, ByteView payload);
Bytes build_udp(L4Ports ports, ByteView payload);
Bytes build_tcp(L4Ports ports, ByteView payload);
Bytes build_sctp(L4Ports ports, ByteView payload);
Bytes build_initial_ue(UeId ue);

struct GtpFrameSpec {
    MacAddress eth_src;
    MacAddress eth_dst;
    Ipv4Endpoints outer;
    Teid teid;
    std::uint32_t sequence = 0;
    Ipv4Endpoints inner;
    std::uint8_t inner_protocol = kProtoUdp;
    L4Ports inner_ports;
};

Bytes build_gtp_frame(const GtpFrameSpec& spec, ByteView app_payload);
Bytes build_ngap_frame(MacAddress src, MacAddress dst, Ipv4Endpoints ep, L4Ports ports,
                       ByteView sctp_payload);

}  // namespace cellgrid::wire
