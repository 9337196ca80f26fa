#include "semsig/adjacency.hpp"

#include "semsig/elias.hpp"

#include <algorithm>
#include <stdexcept>

namespace semsig {

namespace {

// Timestamps are nonnegative; shift by one for the delta code.
void put_count(BitWriter& w, std::uint64_t n) { elias_delta_encode(w, n + 1); }
std::uint64_t get_count(BitReader& r) {
    std::uint64_t v = elias_delta_decode(r);
    if (v == 0) throw std::runtime_error("adjacency: malformed count");
    return v - 1;
}

std::size_t ref_position(const std::vector<InstanceRef>& nodes, const InstanceRef& r,
                         const char* what) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), r);
    if (it == nodes.end() || *it != r)
        throw std::invalid_argument(std::string("adjacency: edge references missing ") + what);
    return static_cast<std::size_t>(it - nodes.begin());
}

std::size_t id_position(const std::vector<int>& nodes, int id, const char* what) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
    if (it == nodes.end() || *it != id)
        throw std::invalid_argument(std::string("adjacency: edge references missing ") + what);
    return static_cast<std::size_t>(it - nodes.begin());
}

} // namespace

void adjacency_encode(BitWriter& w, const InstanceGraph& g, const GraphCodec& codec) {
    InstanceGraph sorted = g;
    sorted.normalize();
    if (sorted.t < 0) throw std::invalid_argument("adjacency: negative timestamp");

    put_count(w, static_cast<std::uint64_t>(sorted.t));
    put_count(w, sorted.components.size());
    for (const auto& c : sorted.components) {
        codec.component_book.encode(w, static_cast<std::uint32_t>(c.class_id));
        elias_delta_encode(w, static_cast<std::uint64_t>(c.index));
    }
    put_count(w, sorted.predicates.size());
    for (const auto& p : sorted.predicates) {
        codec.predicate_book.encode(w, static_cast<std::uint32_t>(p.class_id));
        elias_delta_encode(w, static_cast<std::uint64_t>(p.index));
    }
    put_count(w, sorted.edges.size());
    for (const auto& e : sorted.edges) {
        elias_delta_encode(w, ref_position(sorted.components, e.source, "component") + 1);
        elias_delta_encode(w, ref_position(sorted.predicates, e.predicate, "predicate") + 1);
        // 1 is reserved for the empty third slot
        if (e.target)
            elias_delta_encode(w, ref_position(sorted.components, *e.target, "component") + 2);
        else
            elias_delta_encode(w, 1);
    }
}

InstanceGraph adjacency_decode_instance(BitReader& r, const GraphCodec& codec) {
    InstanceGraph g;
    g.t = static_cast<std::int64_t>(get_count(r));
    std::uint64_t nc = get_count(r);
    for (std::uint64_t i = 0; i < nc; ++i) {
        int cls = static_cast<int>(codec.component_book.decode(r));
        int k = static_cast<int>(elias_delta_decode(r));
        g.components.push_back({cls, k});
    }
    std::uint64_t np = get_count(r);
    for (std::uint64_t i = 0; i < np; ++i) {
        int cls = static_cast<int>(codec.predicate_book.decode(r));
        int k = static_cast<int>(elias_delta_decode(r));
        g.predicates.push_back({cls, k});
    }
    if (!std::is_sorted(g.components.begin(), g.components.end()) ||
        !std::is_sorted(g.predicates.begin(), g.predicates.end()))
        throw std::runtime_error("adjacency: node lists not in canonical order");
    std::uint64_t ne = get_count(r);
    for (std::uint64_t i = 0; i < ne; ++i) {
        std::uint64_t src = elias_delta_decode(r);
        std::uint64_t pred = elias_delta_decode(r);
        std::uint64_t dst = elias_delta_decode(r);
        if (src == 0 || src > g.components.size() || pred == 0 || pred > g.predicates.size() ||
            dst > g.components.size() + 1)
            throw std::runtime_error("adjacency: edge reference out of range");
        EdgeTriplet e{g.components[src - 1], g.predicates[pred - 1], std::nullopt};
        if (dst >= 2) e.target = g.components[dst - 2];
        g.edges.push_back(e);
    }
    return g;
}

void adjacency_encode(BitWriter& w, const ClassGraph& g, const GraphCodec& codec) {
    ClassGraph sorted = g;
    sorted.normalize();

    put_count(w, sorted.components.size());
    for (int c : sorted.components) codec.component_book.encode(w, static_cast<std::uint32_t>(c));
    put_count(w, sorted.predicates.size());
    for (int p : sorted.predicates) codec.predicate_book.encode(w, static_cast<std::uint32_t>(p));
    put_count(w, sorted.edges.size());
    for (const auto& e : sorted.edges) {
        elias_delta_encode(w, id_position(sorted.components, e.source, "component class") + 1);
        elias_delta_encode(w, id_position(sorted.predicates, e.predicate, "predicate class") + 1);
        if (e.target)
            elias_delta_encode(w, id_position(sorted.components, *e.target, "component class") + 2);
        else
            elias_delta_encode(w, 1);
    }
}

ClassGraph adjacency_decode_class(BitReader& r, const GraphCodec& codec) {
    ClassGraph g;
    std::uint64_t nc = get_count(r);
    for (std::uint64_t i = 0; i < nc; ++i)
        g.components.push_back(static_cast<int>(codec.component_book.decode(r)));
    std::uint64_t np = get_count(r);
    for (std::uint64_t i = 0; i < np; ++i)
        g.predicates.push_back(static_cast<int>(codec.predicate_book.decode(r)));
    if (!std::is_sorted(g.components.begin(), g.components.end()) ||
        !std::is_sorted(g.predicates.begin(), g.predicates.end()))
        throw std::runtime_error("adjacency: node lists not in canonical order");
    std::uint64_t ne = get_count(r);
    for (std::uint64_t i = 0; i < ne; ++i) {
        std::uint64_t src = elias_delta_decode(r);
        std::uint64_t pred = elias_delta_decode(r);
        std::uint64_t dst = elias_delta_decode(r);
        if (src == 0 || src > g.components.size() || pred == 0 || pred > g.predicates.size() ||
            dst > g.components.size() + 1)
            throw std::runtime_error("adjacency: edge reference out of range");
        ClassEdge e{g.components[src - 1], g.predicates[pred - 1], std::nullopt};
        if (dst >= 2) e.target = g.components[dst - 2];
        g.edges.push_back(e);
    }
    return g;
}

BitString adjacency_encode(const InstanceGraph& g, const GraphCodec& codec) {
    BitWriter w;
    adjacency_encode(w, g, codec);
    return w.take();
}

BitString adjacency_encode(const ClassGraph& g, const GraphCodec& codec) {
    BitWriter w;
    adjacency_encode(w, g, codec);
    return w.take();
}

InstanceGraph adjacency_decode_instance(const BitString& bits, const GraphCodec& codec) {
    BitReader r(bits);
    return adjacency_decode_instance(r, codec);
}

ClassGraph adjacency_decode_class(const BitString& bits, const GraphCodec& codec) {
    BitReader r(bits);
    return adjacency_decode_class(r, codec);
}

} // namespace semsig
