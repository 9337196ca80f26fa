#pragma once

#include "semsig/bitstream.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace semsig {

enum class EliasVariant { gamma, delta };

inline int floor_log2(std::uint64_t x) {
    return 63 - std::countl_zero(x);
}

// Elias-gamma: floor(log2 x) zeros, then x in binary. 2*floor(log2 x)+1 bits.
inline void elias_gamma_encode(BitWriter& w, std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("elias codes require x >= 1");
    int n = floor_log2(x);
    for (int i = 0; i < n; ++i) w.push(false);
    w.write_bits(x, n + 1);
}

inline std::uint64_t elias_gamma_decode(BitReader& r) {
    int n = 0;
    while (!r.read()) {
        if (++n > 63) throw std::runtime_error("malformed elias-gamma code");
    }
    return (std::uint64_t{1} << n) | r.read_bits(n);
}

// Elias-delta: gamma(floor(log2 x)+1), then the low floor(log2 x) bits of x.
inline void elias_delta_encode(BitWriter& w, std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("elias codes require x >= 1");
    int n = floor_log2(x);
    elias_gamma_encode(w, static_cast<std::uint64_t>(n) + 1);
    w.write_bits(x & ~(std::uint64_t{1} << n), n);
}

inline std::uint64_t elias_delta_decode(BitReader& r) {
    int n = static_cast<int>(elias_gamma_decode(r)) - 1;
    if (n > 63) throw std::runtime_error("malformed elias-delta code");
    return (std::uint64_t{1} << n) | r.read_bits(n);
}

inline void elias_encode(BitWriter& w, std::uint64_t x, EliasVariant v) {
    v == EliasVariant::gamma ? elias_gamma_encode(w, x) : elias_delta_encode(w, x);
}

inline std::uint64_t elias_decode(BitReader& r, EliasVariant v) {
    return v == EliasVariant::gamma ? elias_gamma_decode(r) : elias_delta_decode(r);
}

inline std::size_t elias_gamma_length(std::uint64_t x) {
    return 2 * static_cast<std::size_t>(floor_log2(x)) + 1;
}

inline std::size_t elias_delta_length(std::uint64_t x) {
    std::size_t n = static_cast<std::size_t>(floor_log2(x));
    return n + 2 * static_cast<std::size_t>(floor_log2(n + 1)) + 1;
}

} // namespace semsig
