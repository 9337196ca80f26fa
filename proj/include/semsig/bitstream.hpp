#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace semsig {

// A bit sequence packed big-endian: bit 0 is the MSB of bytes[0].
struct BitString {
    std::vector<std::uint8_t> bytes;
    std::size_t bit_count = 0;

    bool bit(std::size_t i) const {
        return (bytes[i >> 3] >> (7 - (i & 7))) & 1u;
    }
    bool operator==(const BitString& o) const {
        return bit_count == o.bit_count && bytes == o.bytes;
    }
};

class BitWriter {
public:
    void push(bool b) {
        if ((bits_ & 7) == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - (bits_ & 7)));
        ++bits_;
    }

    // Writes the low `count` bits of value, most significant first.
    void write_bits(std::uint64_t value, int count) {
        for (int i = count - 1; i >= 0; --i) push((value >> i) & 1u);
    }

    void append(const BitString& s) {
        for (std::size_t i = 0; i < s.bit_count; ++i) push(s.bit(i));
    }

    std::size_t bit_count() const { return bits_; }

    BitString take() {
        BitString out{std::move(bytes_), bits_};
        bytes_ = {};
        bits_ = 0;
        return out;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bits_ = 0;
};

class BitReader {
public:
    explicit BitReader(const BitString& s) : bytes_(s.bytes.data()), end_(s.bit_count) {}
    BitReader(const std::uint8_t* data, std::size_t bit_count) : bytes_(data), end_(bit_count) {}

    bool read() {
        if (pos_ >= end_) throw std::runtime_error("bitstream truncated");
        bool b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
        ++pos_;
        return b;
    }

    std::uint64_t read_bits(int count) {
        std::uint64_t v = 0;
        for (int i = 0; i < count; ++i) v = (v << 1) | (read() ? 1u : 0u);
        return v;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return end_ - pos_; }
    bool exhausted() const { return pos_ == end_; }

private:
    const std::uint8_t* bytes_;
    std::size_t end_;
    std::size_t pos_ = 0;
};

} // namespace semsig
