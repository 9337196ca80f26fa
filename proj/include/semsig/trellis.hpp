#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semsig {

// Rate m/(m+1) feedforward convolutional code plus the reproduction-level
// table that turns trellis paths into quantizer codewords.
//
// generators holds the m x (m+1) octal matrix row-major (row = input bank,
// column = output line). Each octal entry, read as binary, is a tap mask over
// that bank's window of constraint_lengths[row] bits; mask bit tau taps the
// input from tau steps back (bit 0 = the current input bit). Output line j
// contributes bit j of the branch-output level index.
struct TrellisSpec {
    int bits_per_sample = 2; // m
    std::vector<std::uint32_t> generators;
    std::vector<int> constraint_lengths;       // one per input bank
    std::vector<double> reproduction_levels;   // 2^(m+1) values indexed by branch output

    // Built-in rate 2/3, 3/4 and 4/5 codes; reproduction levels default to
    // the 2^(m+1) midpoints of [0, 1].
    static TrellisSpec preset(int m);

    int input_count() const { return 1 << bits_per_sample; }
    int output_count() const { return 2 << bits_per_sample; }
    int memory_bits() const;
    int state_count() const { return 1 << memory_bits(); }
    std::vector<std::string> validate() const;
};

// Compiled transition tables: next_state and branch output per (state, input).
class Trellis {
public:
    explicit Trellis(const TrellisSpec& spec);

    int state_count() const { return states_; }
    int input_count() const { return inputs_; }
    std::uint32_t next_state(std::uint32_t state, std::uint32_t input) const {
        return next_[static_cast<std::size_t>(state) * inputs_ + input];
    }
    std::uint32_t output(std::uint32_t state, std::uint32_t input) const {
        return output_[static_cast<std::size_t>(state) * inputs_ + input];
    }

private:
    int states_;
    int inputs_;
    std::vector<std::uint32_t> next_;
    std::vector<std::uint32_t> output_;
};

} // namespace semsig
