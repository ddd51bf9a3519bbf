#include "cellgrid/wire/frame.hpp"

#include <algorithm>
#include <string>

namespace cellgrid::wire {
namespace {

[[noreturn]] void truncated(const char* layer, const std::string& detail) {
    throw WireError(WireErrc::TruncatedFrame, std::string(layer) + ": " + detail);
}

struct Ipv4View {
    Ipv4Header header;
    std::size_t header_size = 0;
    std::size_t total_size = 0;
};

// Returns nullopt when the octets are not an IPv4 header this parser handles.
std::optional<Ipv4View> read_ipv4(ByteView frame, std::size_t at, const char* layer) {
    if (frame.size() < at + 20) {
        truncated(layer, "needs 20 octets at offset " + std::to_string(at));
    }
    const std::uint8_t vihl = frame[at];
    if ((vihl >> 4) != 4 || (vihl & 0x0f) < 5) return std::nullopt;
    Ipv4View v;
    v.header_size = std::size_t{vihl & 0x0fu} * 4;
    v.total_size = load_u16(frame, at + 2);
    if (frame.size() < at + v.header_size) truncated(layer, "options run past the frame");
    if (v.total_size < v.header_size) truncated(layer, "total length shorter than header");
    if (frame.size() < at + v.total_size) {
        truncated(layer, "total length " + std::to_string(v.total_size) + " exceeds " +
                             std::to_string(frame.size() - at) + " octets");
    }
    v.header.protocol = frame[at + 9];
    v.header.src = Ipv4Address{load_u32(frame, at + 12)};
    v.header.dst = Ipv4Address{load_u32(frame, at + 16)};
    return v;
}

L4Ports read_ports(ByteView frame, std::size_t at, std::size_t end, std::size_t min_size,
                   const char* layer) {
    if (end < at + min_size) {
        truncated(layer, "needs " + std::to_string(min_size) + " octets at offset " +
                             std::to_string(at));
    }
    return {load_u16(frame, at), load_u16(frame, at + 2)};
}

std::size_t tcp_header_size(ByteView frame, std::size_t at, std::size_t end) {
    const std::size_t size = static_cast<std::size_t>(frame[at + 12] >> 4) * 4;
    if (size < 20 || end < at + size) truncated("inner tcp", "bad data offset");
    return size;
}

}  // namespace

const char* to_string(PacketClass c) {
    switch (c) {
        case PacketClass::Ucp: return "UCP";
        case PacketClass::Ngap: return "NGAP";
        case PacketClass::Gtp: return "GTP";
        case PacketClass::Other: return "OTHER";
    }
    return "OTHER";
}

std::uint16_t heartbeat_sensor(const std::array<std::uint8_t, kHeartbeatSize>& hb) {
    return static_cast<std::uint16_t>((hb[0] << 8) | hb[1]);
}

EthernetHeader decode_ethernet(ByteView frame) {
    if (frame.size() < kEthernetHeaderSize) {
        truncated("ethernet", "needs 14 octets, have " + std::to_string(frame.size()));
    }
    EthernetHeader eth;
    std::copy_n(frame.begin(), 6, eth.dst.octets.begin());
    std::copy_n(frame.begin() + 6, 6, eth.src.octets.begin());
    eth.ethertype = load_u16(frame, 12);
    return eth;
}

PacketClass classify_frame(ByteView frame) {
    const EthernetHeader eth = decode_ethernet(frame);
    if (eth.ethertype == kUcpEthertype) return PacketClass::Ucp;
    if (eth.ethertype != kEthertypeIpv4) return PacketClass::Other;

    // Classification is total: anything that does not fully show its L4 ports is OTHER.
    const std::size_t l3 = kEthernetHeaderSize;
    if (frame.size() < l3 + 20) return PacketClass::Other;
    const std::uint8_t vihl = frame[l3];
    if ((vihl >> 4) != 4 || (vihl & 0x0f) < 5) return PacketClass::Other;
    const std::size_t l4 = l3 + std::size_t{vihl & 0x0fu} * 4;
    if (frame.size() < l4 + 4) return PacketClass::Other;
    const std::uint8_t protocol = frame[l3 + 9];
    const std::uint16_t src = load_u16(frame, l4);
    const std::uint16_t dst = load_u16(frame, l4 + 2);
    if (protocol == kProtoSctp && (src == kNgapPort || dst == kNgapPort)) return PacketClass::Ngap;
    if (protocol == kProtoUdp && src == kGtpPort) return PacketClass::Gtp;
    return PacketClass::Other;
}

ParsedHeaders parse_stack(ByteView frame) {
    ParsedHeaders h;
    h.ethernet = decode_ethernet(frame);
    auto& off = h.offsets;
    off.l3 = kEthernetHeaderSize;
    off.payload = off.l3;
    off.payload_size = frame.size() - off.l3;
    if (h.ethernet.ethertype != kEthertypeIpv4) return h;

    const auto outer = read_ipv4(frame, off.l3, "ipv4");
    if (!outer) return h;
    h.ipv4 = outer->header;
    off.l4 = off.l3 + outer->header_size;
    const std::size_t l3_end = off.l3 + outer->total_size;
    off.payload = off.l4;
    off.payload_size = l3_end - off.l4;

    if (h.ipv4->protocol == kProtoSctp) {
        h.sctp = read_ports(frame, off.l4, l3_end, 12, "sctp");
        off.payload = off.l4 + 12;
        off.payload_size = l3_end - off.payload;
        if (h.sctp->src == kNgapPort || h.sctp->dst == kNgapPort) {
            if (off.payload_size >= kInitialUeSize &&
                load_u32(frame, off.payload) == kInitialUeMagic) {
                h.ngap_init = UeId{load_u32(frame, off.payload + 4)};
            }
        }
        return h;
    }
    if (h.ipv4->protocol != kProtoUdp) return h;

    h.udp = read_ports(frame, off.l4, l3_end, 8, "udp");
    off.payload = off.l4 + 8;
    off.payload_size = l3_end - off.payload;
    if (h.udp->src != kGtpPort) return h;

    off.gtp = off.payload;
    GtpDecoded gtp;
    try {
        gtp = decode_gtp(frame.subspan(off.gtp, l3_end - off.gtp));
    } catch (const WireError& e) {
        if (e.code() == WireErrc::TruncatedHeader) truncated("gtp", e.what());
        throw;
    }
    h.gtp = gtp.header;
    off.payload = off.gtp + gtp.header.encoded_size();
    off.payload_size = gtp.payload.size();
    if (gtp.header.message_type != kGtpUserData || gtp.payload.empty()) return h;

    const std::size_t gtp_end = off.payload + off.payload_size;
    off.inner_l3 = off.payload;
    const auto inner = read_ipv4(frame.first(gtp_end), off.inner_l3, "inner ipv4");
    if (!inner) return h;
    h.inner_ipv4 = inner->header;
    off.inner_l4 = off.inner_l3 + inner->header_size;
    const std::size_t inner_end = off.inner_l3 + inner->total_size;
    off.payload = off.inner_l4;
    off.payload_size = inner_end - off.inner_l4;

    if (h.inner_ipv4->protocol == kProtoUdp) {
        h.inner_udp = read_ports(frame, off.inner_l4, inner_end, 8, "inner udp");
        off.payload = off.inner_l4 + 8;
    } else if (h.inner_ipv4->protocol == kProtoTcp) {
        h.inner_tcp = read_ports(frame, off.inner_l4, inner_end, 20, "inner tcp");
        off.payload = off.inner_l4 + tcp_header_size(frame, off.inner_l4, inner_end);
    } else {
        return h;
    }
    off.payload_size = inner_end - off.payload;

    if (h.inner_tcp && (h.inner_tcp->src == kHttpPort || h.inner_tcp->dst == kHttpPort) &&
        off.payload_size == kHeartbeatSize) {
        std::array<std::uint8_t, kHeartbeatSize> hb{};
        std::copy_n(frame.begin() + static_cast<std::ptrdiff_t>(off.payload), kHeartbeatSize,
                    hb.begin());
        h.http_heartbeat = hb;
    }
    return h;
}

Bytes build_ethernet(const EthernetHeader& eth, ByteView payload) {
    Bytes out;
    out.reserve(kEthernetHeaderSize + payload.size());
    out.insert(out.end(), eth.dst.octets.begin(), eth.dst.octets.end());
    out.insert(out.end(), eth.src.octets.begin(), eth.src.octets.end());
    ByteWriter w(out);
    w.u16(eth.ethertype);
    w.bytes(payload);
    return out;
}

Bytes build_ipv4(Ipv4Endpoints ep, std::uint8_t protocol, ByteView payload) {
    if (payload.size() + 20 > 0xFFFF) {
        throw WireError(WireErrc::InvariantViolation, "ipv4 payload too large");
    }
    Bytes out;
    ByteWriter w(out);
    w.u8(0x45);
    w.u8(0);
    w.u16(static_cast<std::uint16_t>(20 + payload.size()));
    w.u16(0);       // identification
    w.u16(0x4000);  // don't fragment
    w.u8(64);
    w.u8(protocol);
    w.u16(0);  // checksum is carried, not computed
    w.u32(ep.src.value);
    w.u32(ep.dst.value);
    w.bytes(payload);
    return out;
}

Bytes build_udp(L4Ports ports, ByteView payload) {
    Bytes out;
    ByteWriter w(out);
    w.u16(ports.src);
    w.u16(ports.dst);
    w.u16(static_cast<std::uint16_t>(8 + payload.size()));
    w.u16(0);
    w.bytes(payload);
    return out;
}

Bytes build_tcp(L4Ports ports, ByteView payload) {
    Bytes out;
    ByteWriter w(out);
    w.u16(ports.src);
    w.u16(ports.dst);
    w.u32(1);       // sequence
    w.u32(0);       // ack
    w.u8(5 << 4);   // data offset
    w.u8(0x18);     // PSH|ACK
    w.u16(0xffff);  // window
    w.u16(0);
    w.u16(0);
    w.bytes(payload);
    return out;
}

Bytes build_sctp(L4Ports ports, ByteView payload) {
    Bytes out;
    ByteWriter w(out);
    w.u16(ports.src);
    w.u16(ports.dst);
    w.u32(0);  // verification tag
    w.u32(0);  // checksum
    w.bytes(payload);
    return out;
}

Bytes build_initial_ue(UeId ue) {
    Bytes out;
    ByteWriter w(out);
    w.u32(kInitialUeMagic);
    w.u32(ue.value);
    return out;
}

Bytes build_gtp_frame(const GtpFrameSpec& s, ByteView app_payload) {
    const Bytes l4 = s.inner_protocol == kProtoTcp ? build_tcp(s.inner_ports, app_payload)
                                                   : build_udp(s.inner_ports, app_payload);
    const Bytes inner = build_ipv4(s.inner, s.inner_protocol, l4);
    const Bytes gtp =
        encode_gtp(GtpHeader::user_data(s.teid, s.sequence, inner.size()), inner);
    const Bytes udp = build_udp({kGtpPort, kGtpPort}, gtp);
    const Bytes outer = build_ipv4(s.outer, kProtoUdp, udp);
    return build_ethernet({s.eth_dst, s.eth_src, kEthertypeIpv4}, outer);
}

Bytes build_ngap_frame(MacAddress src, MacAddress dst, Ipv4Endpoints ep, L4Ports ports,
                       ByteView sctp_payload) {
    return build_ethernet({dst, src, kEthertypeIpv4},
                          build_ipv4(ep, kProtoSctp, build_sctp(ports, sctp_payload)));
}

}  // namespace cellgrid::wire
