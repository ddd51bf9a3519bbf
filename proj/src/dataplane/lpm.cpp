#include "cellgrid/dataplane/lpm.hpp"

#include <algorithm>
#include <stdexcept>

namespace cellgrid::dataplane {

bool LpmTable::insert(Ipv4Address prefix, std::uint8_t length, std::uint32_t action) {
    if (length > 32) throw std::invalid_argument("prefix length above 32");
    auto [it, inserted] = by_length_[length].insert_or_assign(prefix.value & prefix_mask(length), action);
    (void)it;
    if (inserted) {
        ++size_;
        occupied_ |= std::uint64_t{1} << length;
    }
    return inserted;
}

bool LpmTable::erase(Ipv4Address prefix, std::uint8_t length) {
    if (length > 32) return false;
    auto& bucket = by_length_[length];
    if (bucket.erase(prefix.value & prefix_mask(length)) == 0) return false;
    --size_;
    if (bucket.empty()) occupied_ &= ~(std::uint64_t{1} << length);
    return true;
}

void LpmTable::clear() {
    for (auto& b : by_length_) b.clear();
    occupied_ = 0;
    size_ = 0;
}

std::optional<LpmEntry> LpmTable::lookup(Ipv4Address addr) const {
    for (int length = 32; length >= 0; --length) {
        if (!(occupied_ & (std::uint64_t{1} << length))) continue;
        const auto len = static_cast<std::uint8_t>(length);
        const auto& bucket = by_length_[len];
        auto it = bucket.find(addr.value & prefix_mask(len));
        if (it != bucket.end()) return LpmEntry{Ipv4Address{it->first}, len, it->second};
    }
    return std::nullopt;
}

std::vector<LpmEntry> LpmTable::entries() const {
    std::vector<LpmEntry> out;
    out.reserve(size_);
    for (std::size_t length = 0; length < by_length_.size(); ++length) {
        for (const auto& [prefix, action] : by_length_[length]) {
            out.push_back({Ipv4Address{prefix}, static_cast<std::uint8_t>(length), action});
        }
    }
    std::sort(out.begin(), out.end(), [](const LpmEntry& a, const LpmEntry& b) {
        return std::tie(a.prefix, a.length) < std::tie(b.prefix, b.length);
    });
    return out;
}

std::optional<LpmEntry> lpm_lookup(const LpmTable& table, Ipv4Address addr) {
    return table.lookup(addr);
}

}  // namespace cellgrid::dataplane
