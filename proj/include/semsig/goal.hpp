#pragma once

#include "semsig/description.hpp"
#include "semsig/graph.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace semsig {

// Instance-level query pattern: nodes carry a class id and optionally a
// pinned detection index (wildcard otherwise); edges reference node slots.
struct PatternNode {
    int class_id = 0;
    std::optional<int> pinned_index;
    auto operator<=>(const PatternNode&) const = default;
};

struct PatternEdge {
    int source = 0;    // component slot
    int predicate = 0; // predicate slot
    std::optional<int> target;
    auto operator<=>(const PatternEdge&) const = default;
};

struct InstancePattern {
    std::vector<PatternNode> components;
    std::vector<PatternNode> predicates;
    std::vector<PatternEdge> edges;

    bool empty() const { return components.empty() && predicates.empty() && edges.empty(); }
    bool operator==(const InstancePattern&) const = default;
};

// The goal operator arguments: optional class-level and instance-level
// patterns plus per-pattern graph/attribute complexity (order: class pattern
// entry first when present, then instance pattern). An empty pattern matches
// everything and keeps the whole atom.
struct GoalQuery {
    std::optional<ClassGraph> class_pattern;
    std::optional<InstancePattern> instance_pattern;
    std::vector<std::uint32_t> graph_complexity;     // l_g per present pattern
    std::vector<std::uint32_t> attribute_complexity; // l_a per present pattern

    static constexpr std::uint32_t unlimited = 0xffffffffu;
};

std::vector<std::string> validate(const GoalQuery& q, const ClassRegistry& reg);

// One located occurrence of the pattern: slot -> instance assignments plus
// the full target edges realizing the pattern edges (a 2-tuple pattern edge
// on a relation predicate matches any third slot, and the realized target
// edge is kept whole).
struct MatchEmbedding {
    std::vector<InstanceRef> component_map;
    std::vector<InstanceRef> predicate_map;
    std::vector<EdgeTriplet> matched_edges;
    bool operator==(const MatchEmbedding&) const = default;
};

// Class-level containment: pattern nodes and edges are a subset of s
// (non-induced; extra structure in s never disqualifies).
bool match_class(const ClassGraph& s, const ClassGraph& pattern);

// All embeddings of the pattern, deduplicated by matched node/edge image
// (automorphic duplicates keep the lexicographically smallest node map),
// in deterministic order.
std::vector<MatchEmbedding> match_instances(const InstanceGraph& d, const InstancePattern& pattern);

// Induced subgraph spanned by the match grown `hops` steps in the component
// projection (components adjacent when they share a predicate instance).
// hops = 0 keeps exactly the matched subgraph plus state predicates of the
// matched components.
InstanceGraph expand_l_hop(const InstanceGraph& d, const MatchEmbedding& seed, std::uint32_t hops,
                           const ClassRegistry& reg);

// The goal-filtering operator: drops atoms whose class graph misses the class
// pattern, reduces surviving atoms to the union of expanded instance matches
// and truncates attributes to the first min(l_a, L) levels.
SemanticDescription filter(const SemanticDescription& y, const GoalQuery& q,
                           const ClassRegistry& reg);

// Lifts a class pattern to an all-wildcard instance pattern.
InstancePattern lift_class_pattern(const ClassGraph& pattern);

} // namespace semsig
