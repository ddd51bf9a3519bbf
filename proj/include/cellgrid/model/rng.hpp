#pragma once

#include <cstdint>
#include <random>

namespace cellgrid::model {

// Seeded generator whose draws are identical on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform over [lo, hi], both inclusive. Requires lo <= hi.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace cellgrid::model
