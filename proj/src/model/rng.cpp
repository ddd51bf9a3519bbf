#include "cellgrid/model/rng.hpp"

#include <limits>
#include <stdexcept>

namespace cellgrid::model {

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw std::invalid_argument("empty uniform range");
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
    const std::uint64_t n = span + 1;
    // Reject the short tail so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return lo + x % n;
}

}  // namespace cellgrid::model
