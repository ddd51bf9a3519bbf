#include "cellgrid/wire/hex.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "cellgrid/wire/ucp.hpp"

namespace cellgrid::wire {
namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string hex8(std::uint32_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%02X", v);
    return buf;
}

std::string ports(const L4Ports& p) {
    return std::to_string(p.src) + " -> " + std::to_string(p.dst);
}

void describe_ucp(std::ostringstream& os, const UcpMessage& m) {
    const Opcode op = m.cmi.opcode();
    os << "ucp: cmi=" << hex8(m.cmi.raw()) << " op=\"" << op_type_name(m.cmi.op_type) << " / "
       << opcode_name(op) << "\" switch_id=" << int{m.switch_id} << '\n';
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ipv4Address>) {
                os << "  ipv4 " << p.to_string() << '\n';
            } else if constexpr (std::is_same_v<T, Teid>) {
                os << "  teid " << p.value << '\n';
            } else if constexpr (std::is_same_v<T, UeId>) {
                os << "  ue_id " << p.value << '\n';
            } else if constexpr (std::is_same_v<T, RuleIndex>) {
                os << "  rule_index " << int{p.value} << '\n';
            } else if constexpr (std::is_same_v<T, MonitorRule>) {
                os << "  monitor_rule";
                if (p.src) os << " src=" << p.src->address.to_string() << '/' << int{p.src->length};
                if (p.dst) os << " dst=" << p.dst->address.to_string() << '/' << int{p.dst->length};
                if (p.protocol) os << " proto=" << int{*p.protocol};
                if (p.port) os << " port=" << *p.port;
                os << '\n';
            } else if constexpr (std::is_same_v<T, SwitchPath>) {
                os << "  path dst=" << int{p.destination} << " hops=[";
                for (std::size_t i = 0; i < p.hops.size(); ++i) {
                    os << (i ? "," : "") << int{p.hops[i]};
                }
                os << "]\n";
            } else if constexpr (std::is_same_v<T, Reply>) {
                os << "  reply_to " << hex8(p.original_cmi) << '\n';
                if (auto* list = std::get_if<Ipv4List>(&p.data)) {
                    for (auto a : *list) os << "  ipv4 " << a.to_string() << '\n';
                } else if (auto* snap = std::get_if<CounterSnapshot>(&p.data)) {
                    for (const auto& e : snap->entries) {
                        os << "  counter "
                           << (e.table == CounterTable::HttpSensor ? "http_sensor" : "rule")
                           << '[' << e.key << "] = " << e.count << '\n';
                    }
                } else if (auto* c = std::get_if<Count>(&p.data)) {
                    os << "  count " << c->value << '\n';
                } else if (auto* t = std::get_if<ReplyTarget>(&p.data)) {
                    os << "  target_switch " << int{t->id} << '\n';
                }
            }
        },
        m.payload);
}

}  // namespace

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view text) {
    Bytes out;
    int pending = -1;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == '-') {
            if (pending >= 0) throw std::invalid_argument("odd hex digit before separator");
            continue;
        }
        const int d = hex_digit(c);
        if (d < 0) throw std::invalid_argument(std::string("invalid hex character '") + c + "'");
        if (pending < 0) {
            pending = d;
        } else {
            out.push_back(static_cast<std::uint8_t>((pending << 4) | d));
            pending = -1;
        }
    }
    if (pending >= 0) throw std::invalid_argument("odd number of hex digits");
    return out;
}

std::string describe_frame(ByteView frame) {
    std::ostringstream os;
    const PacketClass cls = classify_frame(frame);
    os << "class: " << to_string(cls) << '\n';
    const ParsedHeaders h = parse_stack(frame);
    os << "ethernet: " << h.ethernet.src.to_string() << " -> " << h.ethernet.dst.to_string()
       << " type=0x";
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04x", h.ethernet.ethertype);
    os << buf << '\n';
    if (cls == PacketClass::Ucp) {
        describe_ucp(os, decode_ucp(frame));
        return os.str();
    }
    if (h.ipv4) {
        os << "ipv4: " << h.ipv4->src.to_string() << " -> " << h.ipv4->dst.to_string()
           << " proto=" << int{h.ipv4->protocol} << '\n';
    }
    if (h.udp) os << "udp: " << ports(*h.udp) << '\n';
    if (h.sctp) os << "sctp: " << ports(*h.sctp) << '\n';
    if (h.ngap_init) os << "ngap initial-ue: ue_id=" << h.ngap_init->value << '\n';
    if (h.gtp) {
        os << "gtp: version=" << int{h.gtp->version} << " piggyback=" << h.gtp->piggyback
           << " T=" << h.gtp->teid_flag << " type=" << int{h.gtp->message_type}
           << " length=" << h.gtp->message_length;
        if (h.gtp->teid) os << " teid=" << h.gtp->teid->value;
        os << " seq=" << h.gtp->sequence_number << '\n';
        if (!h.inner_ipv4) os << "inner: absent\n";
    }
    if (h.inner_ipv4) {
        os << "inner ipv4: " << h.inner_ipv4->src.to_string() << " -> "
           << h.inner_ipv4->dst.to_string() << " proto=" << int{h.inner_ipv4->protocol} << '\n';
    }
    if (h.inner_tcp) os << "inner tcp: " << ports(*h.inner_tcp) << '\n';
    if (h.inner_udp) os << "inner udp: " << ports(*h.inner_udp) << '\n';
    if (h.http_heartbeat) {
        os << "http heartbeat: sensor=" << heartbeat_sensor(*h.http_heartbeat) << '\n';
    }
    os << "payload: " << h.offsets.payload_size << " octets\n";
    return os.str();
}

}  // namespace cellgrid::wire
