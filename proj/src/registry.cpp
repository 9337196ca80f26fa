#include "semsig/registry.hpp"

#include <stdexcept>

namespace semsig {

ClassRegistry::ClassRegistry(std::vector<ComponentClass> components,
                             std::vector<PredicateClass> predicates)
    : components_(std::move(components)), predicates_(std::move(predicates)) {
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto& c = components_[i];
        if (c.id != static_cast<int>(i) + 1)
            throw std::invalid_argument("registry: component ids must be dense starting at 1");
        if (!component_by_name_.emplace(c.name, c.id).second)
            throw std::invalid_argument("registry: duplicate component name '" + c.name + "'");
    }
    if (predicates_.empty())
        throw std::invalid_argument("registry: predicate class 0 (null) is required");
    for (std::size_t i = 0; i < predicates_.size(); ++i) {
        const auto& p = predicates_[i];
        if (p.id != static_cast<int>(i))
            throw std::invalid_argument("registry: predicate ids must be dense starting at 0");
        if (!predicate_by_name_.emplace(p.name, p.id).second)
            throw std::invalid_argument("registry: duplicate predicate name '" + p.name + "'");
    }
    if (predicates_[0].name != "null" || predicates_[0].kind != PredicateKind::state)
        throw std::invalid_argument("registry: predicate 0 must be the state predicate 'null'");
}

const ComponentClass& ClassRegistry::component(int id) const {
    if (!has_component(id)) throw std::invalid_argument("registry: unknown component class id");
    return components_[static_cast<std::size_t>(id) - 1];
}

const PredicateClass& ClassRegistry::predicate(int id) const {
    if (!has_predicate(id)) throw std::invalid_argument("registry: unknown predicate class id");
    return predicates_[static_cast<std::size_t>(id)];
}

std::optional<int> ClassRegistry::component_id(std::string_view name) const {
    auto it = component_by_name_.find(name);
    if (it == component_by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> ClassRegistry::predicate_id(std::string_view name) const {
    auto it = predicate_by_name_.find(name);
    if (it == predicate_by_name_.end()) return std::nullopt;
    return it->second;
}

void ClassRegistry::set_component_frequency(int id, double f) {
    if (!has_component(id)) throw std::invalid_argument("registry: unknown component class id");
    if (!(f > 0.0)) throw std::invalid_argument("registry: frequency must be positive");
    component_freq_[id] = f;
}

void ClassRegistry::set_predicate_frequency(int id, double f) {
    if (!has_predicate(id)) throw std::invalid_argument("registry: unknown predicate class id");
    if (!(f > 0.0)) throw std::invalid_argument("registry: frequency must be positive");
    predicate_freq_[id] = f;
}

std::map<std::uint32_t, double> ClassRegistry::component_frequencies() const {
    std::map<std::uint32_t, double> out;
    for (const auto& c : components_) {
        auto it = component_freq_.find(c.id);
        out[static_cast<std::uint32_t>(c.id)] = it == component_freq_.end() ? 1.0 : it->second;
    }
    return out;
}

std::map<std::uint32_t, double> ClassRegistry::predicate_frequencies() const {
    std::map<std::uint32_t, double> out;
    for (const auto& p : predicates_) {
        auto it = predicate_freq_.find(p.id);
        out[static_cast<std::uint32_t>(p.id)] = it == predicate_freq_.end() ? 1.0 : it->second;
    }
    return out;
}

std::uint64_t ClassRegistry::digest() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
    };
    for (const auto& c : components_) mix(c.name);
    mix("|");
    for (const auto& p : predicates_) {
        mix(p.name);
        mix(p.kind == PredicateKind::state ? "s" : "r");
    }
    return h;
}

ClassRegistry default_video_registry() {
    std::vector<ComponentClass> comps{
        {1, "person"}, {2, "bicycle"}, {3, "car"},
        {4, "dog"},    {5, "horse"},   {6, "remote"},
    };
    std::vector<PredicateClass> preds{
        {0, "null", PredicateKind::state},
        {1, "moving-together", PredicateKind::relation},
        {2, "conjunct", PredicateKind::relation},
    };
    return ClassRegistry(std::move(comps), std::move(preds));
}

} // namespace semsig
