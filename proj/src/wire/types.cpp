#include "cellgrid/wire/types.hpp"

#include <charconv>
#include <cstdio>

#include "cellgrid/wire/error.hpp"

namespace cellgrid {

std::optional<Ipv4Address> Ipv4Address::parse(std::string_view dotted) {
    std::uint32_t value = 0;
    const char* p = dotted.data();
    const char* end = dotted.data() + dotted.size();
    for (int i = 0; i < 4; ++i) {
        unsigned octet = 0;
        auto [next, ec] = std::from_chars(p, end, octet);
        if (ec != std::errc{} || octet > 255 || next == p) return std::nullopt;
        value = (value << 8) | octet;
        p = next;
        if (i < 3) {
            if (p == end || *p != '.') return std::nullopt;
            ++p;
        }
    }
    if (p != end) return std::nullopt;
    return Ipv4Address{value};
}

std::string Ipv4Address::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", value >> 24, (value >> 16) & 0xff,
                  (value >> 8) & 0xff, value & 0xff);
    return buf;
}

std::optional<MacAddress> MacAddress::parse(std::string_view text) {
    if (text.size() != 17) return std::nullopt;
    MacAddress mac;
    for (std::size_t i = 0; i < 6; ++i) {
        const char* p = text.data() + i * 3;
        unsigned v = 0;
        auto [next, ec] = std::from_chars(p, p + 2, v, 16);
        if (ec != std::errc{} || next != p + 2) return std::nullopt;
        if (i < 5 && text[i * 3 + 2] != ':') return std::nullopt;
        mac.octets[i] = static_cast<std::uint8_t>(v);
    }
    return mac;
}

std::string MacAddress::to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", octets[0], octets[1],
                  octets[2], octets[3], octets[4], octets[5]);
    return buf;
}

namespace wire {

const char* to_string(WireErrc code) {
    switch (code) {
        case WireErrc::TruncatedHeader: return "TruncatedHeader";
        case WireErrc::BadVersion: return "BadVersion";
        case WireErrc::LengthMismatch: return "LengthMismatch";
        case WireErrc::InvariantViolation: return "InvariantViolation";
        case WireErrc::UnknownOpcode: return "UnknownOpcode";
        case WireErrc::PayloadLengthMismatch: return "PayloadLengthMismatch";
        case WireErrc::WrongEthertype: return "WrongEthertype";
        case WireErrc::TruncatedFrame: return "TruncatedFrame";
    }
    return "WireError";
}

}  // namespace wire
}  // namespace cellgrid
