#pragma once

#include "semsig/registry.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace semsig {

// One detected instance of a class: (class id, per-class detection index k >= 1).
// Whether it names a component or a predicate is positional.
struct InstanceRef {
    int class_id = 0;
    int index = 0;
    auto operator<=>(const InstanceRef&) const = default;
};

// Connection triplet: component -> predicate [-> component].
// The target is empty for state predicates.
struct EdgeTriplet {
    InstanceRef source;
    InstanceRef predicate;
    std::optional<InstanceRef> target;
    auto operator<=>(const EdgeTriplet&) const = default;
};

// One atomic (or combined, pre-split) bipartite instance graph.
struct InstanceGraph {
    std::vector<InstanceRef> components; // sorted, unique
    std::vector<InstanceRef> predicates; // sorted, unique
    std::vector<EdgeTriplet> edges;      // sorted, unique
    std::int64_t t = 0;

    bool has_component(const InstanceRef& r) const;
    bool has_predicate(const InstanceRef& r) const;
    void add_component(const InstanceRef& r);
    void add_predicate(const InstanceRef& r);
    void add_edge(const EdgeTriplet& e); // inserts endpoints as needed
    void normalize();                    // sort + dedup all three lists
    bool operator==(const InstanceGraph&) const = default;
};

// Class-level counterpart: nodes are class ids, edges are class triplets.
struct ClassEdge {
    int source = 0;
    int predicate = 0;
    std::optional<int> target;
    auto operator<=>(const ClassEdge&) const = default;
};

struct ClassGraph {
    std::vector<int> components;
    std::vector<int> predicates;
    std::vector<ClassEdge> edges;

    bool has_component(int id) const;
    bool has_predicate(int id) const;
    void add_edge(const ClassEdge& e);
    void normalize();
    bool operator==(const ClassGraph&) const = default;
};

struct BinaryMatrix {
    int rows = 0, cols = 0;
    std::vector<std::uint8_t> data; // row-major

    BinaryMatrix() = default;
    BinaryMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
    std::uint8_t& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::uint8_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::size_t count_nonzero() const;
    bool operator==(const BinaryMatrix&) const = default;
};

// Component->predicate and predicate->component halves of the biadjacency
// matrix. cp rows are component ids - 1; pc rows are predicate ids.
struct BiadjacencyPair {
    BinaryMatrix cp; // N_c x N_p
    BinaryMatrix pc; // N_p x N_c
    bool operator==(const BiadjacencyPair&) const = default;
};

// --- structural operations ---------------------------------------------

// Returns one description per invariant violation; empty means valid.
std::vector<std::string> validate(const InstanceGraph& g, const ClassRegistry& reg);
std::vector<std::string> validate(const ClassGraph& g, const ClassRegistry& reg);

BiadjacencyPair biadjacency(const ClassGraph& s, const ClassRegistry& reg);

// Reconstructs a class graph whose biadjacency equals the input. Triplet
// grouping is not recoverable from the matrices: relation predicates are
// re-expanded as the full (incoming x outgoing) pairing.
ClassGraph from_biadjacency(const BiadjacencyPair& b, const ClassRegistry& reg);

// Connects every isolated component to a fresh null-predicate instance.
InstanceGraph attach_null_predicates(const InstanceGraph& g);

// Class-level projection (the surjective instance -> class summary).
ClassGraph abstract_graph(const InstanceGraph& g);

} // namespace semsig
