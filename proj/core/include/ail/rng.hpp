#pragma once

#include <cstdint>
#include <cstddef>
#include <string_view>
#include <vector>

namespace ail {

// Counter-based deterministic RNG. Every draw is a pure function of
// (master seed, substream label, coordinates), so adding instrumentation or
// reordering consumers never perturbs the draws of another substream.
//
// Substream labels in use across the library:
//   "label"       expert label draws, coords (t, h, m)
//   "agg"         aggregation randomness (random-mix expert pick), coords (t, h)
//   "explore"     bandit exploration draws, coords (t, draw)
//   "stream"      context stream draws, coords (t)
//   "dynamics"    per-round environment seed iota_t, coords (t)
//   "reward"      Bernoulli reward draws, coords (t, h)
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed) : seed_(master_seed) {}

    std::uint64_t master_seed() const { return seed_; }

    // Raw 64-bit draw at a substream coordinate.
    std::uint64_t bits(std::string_view stream, std::uint64_t a = 0,
                       std::uint64_t b = 0, std::uint64_t c = 0) const;

    // Uniform double in [0, 1).
    double uniform(std::string_view stream, std::uint64_t a = 0,
                   std::uint64_t b = 0, std::uint64_t c = 0) const;

    // Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n, std::string_view stream,
                              std::uint64_t a = 0, std::uint64_t b = 0,
                              std::uint64_t c = 0) const;

    // Sample from a finite distribution (weights need not be normalized).
    std::size_t categorical(const std::vector<double>& weights,
                            std::string_view stream, std::uint64_t a = 0,
                            std::uint64_t b = 0, std::uint64_t c = 0) const;

private:
    std::uint64_t seed_;
};

}  // namespace ail
