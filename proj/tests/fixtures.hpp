#pragma once

// Frame and state fixtures shared by the test binaries.

#include <array>
#include <cstdint>
#include <variant>

#include "cellgrid/dataplane/pipeline.hpp"
#include "cellgrid/wire/frame.hpp"
#include "cellgrid/wire/ucp.hpp"

namespace fixture {

using namespace cellgrid;
using namespace cellgrid::wire;

inline const MacAddress kGnbMac{{0x02, 0, 0, 0, 0, 0x01}};
inline const MacAddress kUpfMac{{0x02, 0, 0, 0, 0, 0x02}};
inline const MacAddress kCtrlMac{{0x02, 0, 0, 0, 0, 0x03}};

inline Ipv4Address ue(std::uint8_t host) { return Ipv4Address::from_octets(10, 45, 0, host); }

inline GtpFrameSpec uplink(Ipv4Address src, Ipv4Address dst, Teid teid, std::uint8_t proto,
                           L4Ports ports, std::uint32_t seq = 1) {
    GtpFrameSpec s;
    s.eth_src = kGnbMac;
    s.eth_dst = kUpfMac;
    s.outer = {Ipv4Address::from_octets(192, 168, 1, 10), Ipv4Address::from_octets(192, 168, 1, 1)};
    s.teid = teid;
    s.sequence = seq;
    s.inner = {src, dst};
    s.inner_protocol = proto;
    s.inner_ports = ports;
    return s;
}

inline GtpFrameSpec downlink(Ipv4Address dst, Teid teid) {
    GtpFrameSpec s = uplink(Ipv4Address::from_octets(8, 8, 8, 8), dst, teid, kProtoUdp, {53, 4000});
    s.eth_src = kUpfMac;
    s.eth_dst = kGnbMac;
    s.outer = {Ipv4Address::from_octets(192, 168, 1, 1), Ipv4Address::from_octets(192, 168, 1, 10)};
    return s;
}

inline Bytes heartbeat_frame(std::uint16_t sensor, std::uint32_t seq = 1) {
    Bytes hb(kHeartbeatSize, 0);
    hb[0] = static_cast<std::uint8_t>(sensor >> 8);
    hb[1] = static_cast<std::uint8_t>(sensor & 0xff);
    hb[2] = 'a';
    hb[3] = 'l';
    hb[4] = 'i';
    hb[5] = 'v';
    hb[6] = 'e';
    return build_gtp_frame(uplink(ue(2), Ipv4Address::from_octets(10, 0, 0, 80), Teid{1},
                                  kProtoTcp, {40000, kHttpPort}, seq),
                           hb);
}

inline Bytes initial_ue_frame(UeId id) {
    return build_ngap_frame(kGnbMac, kUpfMac,
                            {Ipv4Address::from_octets(192, 168, 1, 10),
                             Ipv4Address::from_octets(192, 168, 1, 2)},
                            {kNgapPort, kNgapPort}, build_initial_ue(id));
}

inline Bytes ucp_frame(SwitchId sw, Opcode op, UcpPayload payload = {}) {
    return encode_ucp(UcpMessage{sw, make_cmi(op), std::move(payload)}, MacAddress::broadcast(),
                      kCtrlMac);
}

// Single switch: gNB on ports 1 and 2, core on port 9.
inline dataplane::SwitchState edge_switch(SwitchId id = 1) {
    dataplane::SwitchState s;
    s.switch_id = id;
    s.attach_gnb(1);
    s.attach_gnb(2);
    s.attach_core(9);
    return s;
}

template <class T>
const T& as(const dataplane::PipelineVerdict& v) {
    return std::get<T>(v);
}

}  // namespace fixture
