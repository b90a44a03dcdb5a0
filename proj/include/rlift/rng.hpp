#pragma once

#include <cstdint>
#include <random>

namespace rlift {

// A (seed, stream) pair names an independent random sequence. Engines are
// created on demand so that the same pair always replays the same draws.
class SeededRng {
public:
    SeededRng(std::uint64_t seed = 0, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Child stream; used per base edge, per trial, per entry block, ...
    SeededRng derive(std::uint64_t index) const;

    std::mt19937_64 engine() const;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rlift
