#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace gmdsim {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-derived seed: hash of the master seed and a tuple of stream
/// coordinates (case, user, trial, ...). Streams are independent of the
/// order in which they are created.
constexpr std::uint64_t substream_seed(std::uint64_t master,
                                       std::initializer_list<std::uint64_t> coords) noexcept
{
    std::uint64_t h = mix64(master);
    for (std::uint64_t c : coords) {
        h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
    }
    return h;
}

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> coords)
{
    return Rng(substream_seed(master, coords));
}

/// Circularly-symmetric complex Gaussian with E|z|² = variance.
inline std::complex<double> complex_gaussian(Rng& rng, double variance = 1.0)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    const double scale = std::sqrt(variance / 2.0);
    const double re = nd(rng);
    const double im = nd(rng);
    return {scale * re, scale * im};
}

}  // namespace gmdsim
