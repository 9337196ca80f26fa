#include "semsig/trellis.hpp"

#include <bit>
#include <stdexcept>

namespace semsig {

namespace {

std::uint32_t octal_to_mask(std::uint32_t octal) {
    std::uint32_t mask = 0, shift = 0;
    while (octal > 0) {
        mask |= (octal % 10) << shift;
        octal /= 10;
        shift += 3;
    }
    return mask;
}

std::vector<double> midpoint_levels(int m) {
    int n = 2 << m;
    std::vector<double> levels(n);
    for (int j = 0; j < n; ++j) levels[j] = (j + 0.5) / n;
    return levels;
}

} // namespace

TrellisSpec TrellisSpec::preset(int m) {
    TrellisSpec spec;
    spec.bits_per_sample = m;
    switch (m) {
        case 2:
            spec.generators = {2, 1, 4, /**/ 0, 1, 2};
            spec.constraint_lengths = {3, 2};
            break;
        case 3:
            spec.generators = {23, 35, 0, 0, /**/ 0, 5, 13, 0, /**/ 0, 0, 6, 13};
            spec.constraint_lengths = {5, 4, 4};
            break;
        case 4:
            spec.generators = {23, 35, 0, 0, 0, /**/ 0, 5, 13, 0, 0, /**/ 0, 0, 6, 13, 0,
                               /**/ 0, 0, 0, 6, 13};
            spec.constraint_lengths = {5, 4, 4, 4};
            break;
        default:
            throw std::invalid_argument("trellis preset: bits per sample must be 2, 3 or 4");
    }
    spec.reproduction_levels = midpoint_levels(m);
    return spec;
}

int TrellisSpec::memory_bits() const {
    int total = 0;
    for (int k : constraint_lengths) total += k - 1;
    return total;
}

std::vector<std::string> TrellisSpec::validate() const {
    std::vector<std::string> out;
    int m = bits_per_sample;
    if (m < 1) out.push_back("bits per sample must be >= 1");
    if (static_cast<int>(constraint_lengths.size()) != m)
        out.push_back("one constraint length per input bank required");
    if (static_cast<int>(generators.size()) != m * (m + 1))
        out.push_back("generator matrix must be m x (m+1)");
    for (std::size_t i = 0; i < constraint_lengths.size(); ++i) {
        int k = constraint_lengths[i];
        if (k < 1) {
            out.push_back("constraint lengths must be >= 1");
            continue;
        }
        for (int j = 0; j <= m && (i * (m + 1) + j) < generators.size(); ++j) {
            std::uint32_t mask = octal_to_mask(generators[i * (m + 1) + j]);
            if (mask >> k) out.push_back("generator tap exceeds its bank's constraint length");
        }
    }
    if (static_cast<int>(reproduction_levels.size()) != (2 << m))
        out.push_back("reproduction table must have 2^(m+1) levels");
    return out;
}

Trellis::Trellis(const TrellisSpec& spec) {
    auto problems = spec.validate();
    if (!problems.empty()) throw std::invalid_argument("trellis: " + problems.front());

    const int m = spec.bits_per_sample;
    states_ = spec.state_count();
    inputs_ = spec.input_count();
    next_.resize(static_cast<std::size_t>(states_) * inputs_);
    output_.resize(static_cast<std::size_t>(states_) * inputs_);

    std::vector<std::uint32_t> masks(spec.generators.size());
    for (std::size_t i = 0; i < masks.size(); ++i) masks[i] = octal_to_mask(spec.generators[i]);

    // State layout: bank 0 occupies the most significant memory bits.
    std::vector<int> bank_shift(m);
    int shift = spec.memory_bits();
    for (int i = 0; i < m; ++i) {
        shift -= spec.constraint_lengths[i] - 1;
        bank_shift[i] = shift;
    }

    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(states_); ++s) {
        for (std::uint32_t in = 0; in < static_cast<std::uint32_t>(inputs_); ++in) {
            std::uint32_t out = 0, next = 0;
            for (int i = 0; i < m; ++i) {
                int k = spec.constraint_lengths[i];
                std::uint32_t mem = (s >> bank_shift[i]) & ((1u << (k - 1)) - 1u);
                std::uint32_t bit = (in >> (m - 1 - i)) & 1u; // input line i = bit m-1-i
                // window bit tau = input bit tau steps back (bit 0 = current)
                std::uint32_t window = (mem << 1) | bit;
                for (int j = 0; j <= m; ++j) {
                    std::uint32_t taps = window & masks[static_cast<std::size_t>(i) * (m + 1) + j];
                    out ^= static_cast<std::uint32_t>(std::popcount(taps) & 1) << j;
                }
                next |= (window & ((1u << (k - 1)) - 1u)) << bank_shift[i];
            }
            next_[static_cast<std::size_t>(s) * inputs_ + in] = next;
            output_[static_cast<std::size_t>(s) * inputs_ + in] = out;
        }
    }
}

} // namespace semsig
