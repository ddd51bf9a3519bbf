#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cellgrid/wire/types.hpp"

namespace cellgrid::dataplane {

struct LpmEntry {
    Ipv4Address prefix;  // masked to length
    std::uint8_t length = 0;
    std::uint32_t action = 0;
    bool operator==(const LpmEntry&) const = default;
};

inline constexpr std::uint32_t prefix_mask(std::uint8_t length) {
    return length == 0 ? 0u : ~std::uint32_t{0} << (32 - length);
}

// IPv4 longest-prefix-match table: one hash bucket per prefix length, probed from /32 down.
class LpmTable {
public:
    // Inserts or replaces the entry for (prefix, length). Returns true when the pair was new.
    bool insert(Ipv4Address prefix, std::uint8_t length, std::uint32_t action = 0);
    bool erase(Ipv4Address prefix, std::uint8_t length);
    void clear();

    std::optional<LpmEntry> lookup(Ipv4Address addr) const;
    bool matches(Ipv4Address addr) const { return lookup(addr).has_value(); }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    // Sorted by (prefix, length).
    std::vector<LpmEntry> entries() const;

    bool operator==(const LpmTable& other) const { return entries() == other.entries(); }

private:
    std::array<std::unordered_map<std::uint32_t, std::uint32_t>, 33> by_length_;
    std::uint64_t occupied_ = 0;  // bit n set when by_length_[n] is non-empty
    std::size_t size_ = 0;
};

std::optional<LpmEntry> lpm_lookup(const LpmTable& table, Ipv4Address addr);

}  // namespace cellgrid::dataplane
