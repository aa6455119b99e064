#pragma once

#include <cstdint>
#include <random>

namespace gedwalk::detail {

inline double unit_interval(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * m) >> 64);
}

} // namespace gedwalk::detail
