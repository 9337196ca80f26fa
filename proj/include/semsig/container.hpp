#pragma once

#include "semsig/adjacency.hpp"
#include "semsig/cost.hpp"
#include "semsig/description.hpp"
#include "semsig/trellis.hpp"

#include <cstdint>
#include <vector>

namespace semsig {

// Attribute encoding policy for the SGX1 container.
struct CodecConfig {
    bool include_attributes = true;
    bool tcq_enabled = true;
    int tcq_bits = 2;                 // m in {2, 3, 4}
    CostMetric metric = CostMetric::mse();
    std::size_t tcq_min_dim = 16;     // smaller real vectors are stored raw
};

// SGX1 binary container: magic "SGX1", version byte, 8-byte registry digest,
// then a bit-packed payload of frames -> atoms -> (graph block, attribute
// block), each length-prefixed with Elias-delta so blocks can be skipped.
// Real-vector levels of at least tcq_min_dim elements are TCQ coded (values
// mapped affinely from [-1, 1] to the quantizer's [0, 1] domain); everything
// else is stored losslessly.
//
// Class graphs are not serialized: the decoder rebuilds them as
// abstract(instance graph), which the description invariant makes exact.
std::vector<std::uint8_t> sgx1_encode(const std::vector<SemanticDescription>& frames,
                                      const ClassRegistry& reg, const CodecConfig& cfg = {});

std::vector<SemanticDescription> sgx1_decode(const std::vector<std::uint8_t>& bytes,
                                             const ClassRegistry& reg);

// Encoded size in bits of a single frame under the given policy (container
// header included); the bench strategies are tallied with this.
std::uint64_t sgx1_frame_bits(const SemanticDescription& frame, const ClassRegistry& reg,
                              const CodecConfig& cfg);

} // namespace semsig
