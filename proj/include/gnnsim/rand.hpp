#pragma once

#include <cstdint>
#include <random>

namespace gnnsim {

// Explicit-arithmetic draws on top of mt19937_64 so sequences are
// identical across standard library implementations (std distribution
// types leave their algorithms unspecified).

/// Unbiased index in [0, n), n >= 1.
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gnnsim
