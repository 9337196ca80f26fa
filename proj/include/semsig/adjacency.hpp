#pragma once

#include "semsig/bitstream.hpp"
#include "semsig/graph.hpp"
#include "semsig/huffman.hpp"
#include "semsig/registry.hpp"

#include <utility>

namespace semsig {

// Adjacency-list graph codec. Node counts, instance indices and edge
// references are Elias-delta coded; class ids are Huffman coded with
// codebooks built from the registry's occurrence rates (uniform fallback).
// Edges reference nodes by their position in the sorted node lists, so equal
// graphs serialize to identical bits.
struct GraphCodec {
    explicit GraphCodec(const ClassRegistry& reg)
        : component_book(HuffmanCodebook::build(reg.component_frequencies())),
          predicate_book(HuffmanCodebook::build(reg.predicate_frequencies())) {}

    HuffmanCodebook component_book;
    HuffmanCodebook predicate_book;
};

void adjacency_encode(BitWriter& w, const InstanceGraph& g, const GraphCodec& codec);
void adjacency_encode(BitWriter& w, const ClassGraph& g, const GraphCodec& codec);
BitString adjacency_encode(const InstanceGraph& g, const GraphCodec& codec);
BitString adjacency_encode(const ClassGraph& g, const GraphCodec& codec);

InstanceGraph adjacency_decode_instance(BitReader& r, const GraphCodec& codec);
ClassGraph adjacency_decode_class(BitReader& r, const GraphCodec& codec);
InstanceGraph adjacency_decode_instance(const BitString& bits, const GraphCodec& codec);
ClassGraph adjacency_decode_class(const BitString& bits, const GraphCodec& codec);

} // namespace semsig
