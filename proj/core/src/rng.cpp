#include "ail/rng.hpp"

#include "ail/errors.hpp"

namespace ail {

namespace {

// SplitMix64 finalizer; full-period bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t RngStream::bits(std::string_view stream, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c) const {
    std::uint64_t h = mix64(seed_ ^ fnv1a(stream));
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

double RngStream::uniform(std::string_view stream, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c) const {
    return static_cast<double>(bits(stream, a, b, c) >> 11) * 0x1.0p-53;
}

std::size_t RngStream::uniform_index(std::size_t n, std::string_view stream,
                                     std::uint64_t a, std::uint64_t b,
                                     std::uint64_t c) const {
    if (n == 0) throw InvalidInput("uniform_index: empty support");
    return static_cast<std::size_t>(uniform(stream, a, b, c) * static_cast<double>(n)) % n;
}

std::size_t RngStream::categorical(const std::vector<double>& weights,
                                   std::string_view stream, std::uint64_t a,
                                   std::uint64_t b, std::uint64_t c) const {
    if (weights.empty()) throw InvalidInput("categorical: empty support");
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw InvalidInput("categorical: nonpositive total mass");
    double u = uniform(stream, a, b, c) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

}  // namespace ail
