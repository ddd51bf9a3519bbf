#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace cellgrid {

using SwitchId = std::uint8_t;
using Port = std::uint16_t;

struct Teid {
    std::uint32_t value = 0;
    auto operator<=>(const Teid&) const = default;
};

struct UeId {
    std::uint32_t value = 0;
    auto operator<=>(const UeId&) const = default;
};

struct Ipv4Address {
    std::uint32_t value = 0;  // host order

    static constexpr Ipv4Address from_octets(std::uint8_t a, std::uint8_t b, std::uint8_t c,
                                             std::uint8_t d) {
        return {(std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) | (std::uint32_t{c} << 8) |
                std::uint32_t{d}};
    }
    static std::optional<Ipv4Address> parse(std::string_view dotted);
    std::string to_string() const;

    auto operator<=>(const Ipv4Address&) const = default;
};

struct MacAddress {
    std::array<std::uint8_t, 6> octets{};

    static constexpr MacAddress broadcast() { return {{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }
    static std::optional<MacAddress> parse(std::string_view text);
    std::string to_string() const;
    bool is_multicast() const { return (octets[0] & 0x01) != 0; }

    auto operator<=>(const MacAddress&) const = default;
};

}  // namespace cellgrid

template <>
struct std::hash<cellgrid::Teid> {
    std::size_t operator()(cellgrid::Teid t) const noexcept { return std::hash<std::uint32_t>{}(t.value); }
};

template <>
struct std::hash<cellgrid::Ipv4Address> {
    std::size_t operator()(cellgrid::Ipv4Address a) const noexcept {
        return std::hash<std::uint32_t>{}(a.value);
    }
};
