#pragma once

#include "semsig/bitstream.hpp"
#include "semsig/cost.hpp"
#include "semsig/trellis.hpp"

#include <span>
#include <string>
#include <vector>

namespace semsig {

// Discrete memoryless channel over m-bit symbols; transition[i * 2^m + j] is
// P(Y = c_j | X = c_i).
struct DMCChannel {
    int symbol_bits = 2;
    std::vector<double> transition;

    int alphabet_size() const { return 1 << symbol_bits; }
    double prob(int sent, int received) const {
        return transition[static_cast<std::size_t>(sent) * alphabet_size() + received];
    }
    std::vector<std::string> validate() const;

    static DMCChannel identity(int symbol_bits);
    // Independent per-bit flips with probability eps, lifted to m-bit symbols.
    static DMCChannel bit_flip(int symbol_bits, double eps);
    static DMCChannel uniform(int symbol_bits);
};

// Expected distortion cost at the receiver when the TCQ input-bit codeword is
// sent symbol-per-element over the channel. Per-element symbol errors are
// evaluated against the transmitted path: the reproduction of a received
// symbol at stage b is the level reached from the true (transmitted) trellis
// state at b, so the identity channel yields zero for every metric. The cost
// between reproductions is the metric's per-element term; Lp applies its
// final root/scale to the accumulated expectation.
double dmc_expected_cost(std::span<const double> theta, const BitString& codeword,
                         const TrellisSpec& spec, const DMCChannel& channel,
                         const CostMetric& metric);

} // namespace semsig
