#pragma once

#include "semsig/bitstream.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace semsig {

// Canonical Huffman code over an arbitrary symbol alphabet. Codewords are
// assigned in (length, symbol) order, so two codebooks built from the same
// frequency table are bit-identical.
class HuffmanCodebook {
public:
    struct Entry {
        std::uint32_t symbol;
        std::uint8_t length;
        std::uint32_t code; // low `length` bits, MSB-first on the wire
    };

    // Frequencies must be strictly positive.
    static HuffmanCodebook build(const std::map<std::uint32_t, double>& freqs);

    void encode(BitWriter& w, std::uint32_t symbol) const;
    std::uint32_t decode(BitReader& r) const;

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t code_length(std::uint32_t symbol) const;
    double kraft_sum() const;
    double average_length(const std::map<std::uint32_t, double>& freqs) const;

private:
    std::vector<Entry> entries_;                  // sorted by (length, symbol)
    std::map<std::uint32_t, std::size_t> index_;  // symbol -> entries_ position
    // canonical decode tables, indexed by code length
    std::vector<std::uint32_t> first_code_;
    std::vector<std::uint32_t> first_index_;
};

inline HuffmanCodebook huffman_build(const std::map<std::uint32_t, double>& freqs) {
    return HuffmanCodebook::build(freqs);
}

inline BitString huffman_encode(std::span<const std::uint32_t> symbols,
                                const HuffmanCodebook& book) {
    BitWriter w;
    for (std::uint32_t s : symbols) book.encode(w, s);
    return w.take();
}

inline std::vector<std::uint32_t> huffman_decode(const BitString& bits, std::size_t count,
                                                 const HuffmanCodebook& book) {
    BitReader r(bits);
    std::vector<std::uint32_t> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(book.decode(r));
    return out;
}

} // namespace semsig
