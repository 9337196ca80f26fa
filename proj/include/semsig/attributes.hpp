#pragma once

#include "semsig/graph.hpp"

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

namespace semsig {

struct RealVector {
    std::vector<double> values;
    bool operator==(const RealVector&) const = default;
};

struct TimeAmplitude {
    std::int64_t time = 0;
    double amplitude = 0.0;
    bool operator==(const TimeAmplitude&) const = default;
};

struct Blob {
    std::vector<std::uint8_t> bytes;
    bool operator==(const Blob&) const = default;
};

// One attribute level: simplest-first hierarchy entries are one of these.
using AttributeLevel = std::variant<RealVector, TimeAmplitude, Blob>;

enum class NodeSide : std::uint8_t { component = 0, predicate = 1 };

struct NodeKey {
    NodeSide side = NodeSide::component;
    InstanceRef ref;
    auto operator<=>(const NodeKey&) const = default;
};

inline NodeKey component_key(InstanceRef r) { return {NodeSide::component, r}; }
inline NodeKey predicate_key(InstanceRef r) { return {NodeSide::predicate, r}; }

// Ordered attribute levels per keyed node. Nodes without side information
// (e.g. null-predicate instances) simply map to an empty list or are absent.
using AttributeSet = std::map<NodeKey, std::vector<AttributeLevel>>;

// Consistency check against the companion graph (keys exist, null predicates
// carry no levels). Returns violation descriptions.
std::vector<std::string> validate(const AttributeSet& a, const InstanceGraph& g);

} // namespace semsig
