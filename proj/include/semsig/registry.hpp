#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semsig {

enum class PredicateKind { state, relation };

struct ComponentClass {
    int id; // dense in [1, N_c]
    std::string name;
};

struct PredicateClass {
    int id; // dense in [0, N_p - 1]; id 0 is the reserved null predicate
    std::string name;
    PredicateKind kind;
};

// The language definition: component and predicate class alphabets.
// Immutable after construction; throws std::invalid_argument on malformed input.
class ClassRegistry {
public:
    static constexpr int null_predicate_id = 0;

    ClassRegistry(std::vector<ComponentClass> components, std::vector<PredicateClass> predicates);

    int component_count() const { return static_cast<int>(components_.size()); }
    int predicate_count() const { return static_cast<int>(predicates_.size()); }

    bool has_component(int id) const { return id >= 1 && id <= component_count(); }
    bool has_predicate(int id) const { return id >= 0 && id < predicate_count(); }

    const ComponentClass& component(int id) const;
    const PredicateClass& predicate(int id) const;
    PredicateKind predicate_kind(int id) const { return predicate(id).kind; }

    std::optional<int> component_id(std::string_view name) const;
    std::optional<int> predicate_id(std::string_view name) const;

    // Optional relative occurrence rates used by the codec layer; unset classes
    // fall back to uniform weight 1.
    void set_component_frequency(int id, double f);
    void set_predicate_frequency(int id, double f);
    std::map<std::uint32_t, double> component_frequencies() const;
    std::map<std::uint32_t, double> predicate_frequencies() const;

    // FNV-1a over the canonical class listing; attribute/frequency agnostic.
    std::uint64_t digest() const;

private:
    std::vector<ComponentClass> components_; // index = id - 1
    std::vector<PredicateClass> predicates_; // index = id
    std::map<std::string, int, std::less<>> component_by_name_;
    std::map<std::string, int, std::less<>> predicate_by_name_;
    std::map<int, double> component_freq_;
    std::map<int, double> predicate_freq_;
};

// person/bicycle/... registry with null, moving-together and conjunct
// predicates; the default language for the video-style pipeline.
ClassRegistry default_video_registry();

} // namespace semsig
