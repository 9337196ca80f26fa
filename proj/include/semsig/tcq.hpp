#pragma once

#include "semsig/bitstream.hpp"
#include "semsig/cost.hpp"
#include "semsig/trellis.hpp"

#include <span>
#include <vector>

namespace semsig {

// Trellis-coded quantization of a vector in [0, 1]^d at m bits per element.
// The encoder runs Viterbi from the all-zero state, one stage per element;
// branch cost is the metric's per-element cost against the reproduction level
// indexed by the branch output. Ties resolve to the lexicographically
// smallest input-bit sequence. Output is the m*d input bits of the winning
// path, stage-major, each stage's input word MSB-first.
BitString tcq_encode(std::span<const double> theta, const TrellisSpec& spec,
                     const CostMetric& metric);

// Replays the encoder trellis; exact reconstruction of the encoder-side
// reproductions.
std::vector<double> tcq_decode(const BitString& bits, const TrellisSpec& spec);
std::vector<double> tcq_decode(BitReader& reader, std::size_t dim, const TrellisSpec& spec);

// Reproductions the encoder itself selected (decode of encode, in one step).
std::vector<double> tcq_reproduce(std::span<const double> theta, const TrellisSpec& spec,
                                  const CostMetric& metric);

// Element-by-element quantization to the 2^m midpoint levels of [0, 1].
std::vector<double> uniform_scalar_quantize(std::span<const double> theta, int bits);

} // namespace semsig
