#pragma once

#include "semsig/attributes.hpp"
#include "semsig/graph.hpp"

#include <utility>
#include <vector>

namespace semsig {

// Full semantic description of one time step: index-aligned atomic class
// graphs, instance graphs and attribute sets.
struct SemanticDescription {
    std::int64_t t = 0;
    std::vector<ClassGraph> class_graphs;
    std::vector<InstanceGraph> instance_graphs;
    std::vector<AttributeSet> attributes;

    std::size_t atom_count() const { return instance_graphs.size(); }
    bool empty() const { return instance_graphs.empty(); }
    bool operator==(const SemanticDescription&) const = default;
};

// Splits a combined graph into connected atoms (weak connectivity),
// partitioning the attribute set along with the nodes. Deterministic order:
// atoms sorted by their smallest (class_id, k) component.
std::vector<std::pair<InstanceGraph, AttributeSet>> split_atomic(const InstanceGraph& g,
                                                                 const AttributeSet& a);

// Builds the (S, D, A) triple from a combined instance graph.
SemanticDescription make_description(const InstanceGraph& combined, const AttributeSet& attrs);

std::vector<std::string> validate(const SemanticDescription& y, const ClassRegistry& reg);

} // namespace semsig
