#include "semsig/graph.hpp"

#include "semsig/description.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace semsig {

namespace {

std::string ref_str(const InstanceRef& r) {
    std::ostringstream os;
    os << r.class_id << "#" << r.index;
    return os.str();
}

template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <typename T>
bool contains_sorted(const std::vector<T>& v, const T& x) {
    return std::binary_search(v.begin(), v.end(), x);
}

} // namespace

bool InstanceGraph::has_component(const InstanceRef& r) const {
    return contains_sorted(components, r);
}

bool InstanceGraph::has_predicate(const InstanceRef& r) const {
    return contains_sorted(predicates, r);
}

void InstanceGraph::add_component(const InstanceRef& r) {
    auto it = std::lower_bound(components.begin(), components.end(), r);
    if (it == components.end() || *it != r) components.insert(it, r);
}

void InstanceGraph::add_predicate(const InstanceRef& r) {
    auto it = std::lower_bound(predicates.begin(), predicates.end(), r);
    if (it == predicates.end() || *it != r) predicates.insert(it, r);
}

void InstanceGraph::add_edge(const EdgeTriplet& e) {
    add_component(e.source);
    add_predicate(e.predicate);
    if (e.target) add_component(*e.target);
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) edges.insert(it, e);
}

void InstanceGraph::normalize() {
    sort_unique(components);
    sort_unique(predicates);
    sort_unique(edges);
}

bool ClassGraph::has_component(int id) const { return contains_sorted(components, id); }
bool ClassGraph::has_predicate(int id) const { return contains_sorted(predicates, id); }

void ClassGraph::add_edge(const ClassEdge& e) {
    auto ins = [](std::vector<int>& v, int x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x) v.insert(it, x);
    };
    ins(components, e.source);
    ins(predicates, e.predicate);
    if (e.target) ins(components, *e.target);
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) edges.insert(it, e);
}

void ClassGraph::normalize() {
    sort_unique(components);
    sort_unique(predicates);
    sort_unique(edges);
}

std::size_t BinaryMatrix::count_nonzero() const {
    return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

std::vector<std::string> validate(const InstanceGraph& g, const ClassRegistry& reg) {
    std::vector<std::string> out;

    for (const auto& c : g.components) {
        if (!reg.has_component(c.class_id))
            out.push_back("unknown component class " + std::to_string(c.class_id));
        if (c.index < 1) out.push_back("component " + ref_str(c) + " has instance index < 1");
    }
    for (const auto& p : g.predicates) {
        if (!reg.has_predicate(p.class_id))
            out.push_back("unknown predicate class " + std::to_string(p.class_id));
        if (p.index < 1) out.push_back("predicate " + ref_str(p) + " has instance index < 1");
    }

    std::set<InstanceRef> connected_components, connected_predicates;
    for (const auto& e : g.edges) {
        if (!g.has_component(e.source))
            out.push_back("edge references missing component " + ref_str(e.source));
        if (!g.has_predicate(e.predicate))
            out.push_back("edge references missing predicate " + ref_str(e.predicate));
        if (e.target && !g.has_component(*e.target))
            out.push_back("edge references missing component " + ref_str(*e.target));
        // A component id in the predicate slot (or vice versa) cannot be
        // detected structurally: the id spaces overlap. The bipartite rule is
        // enforced through the class registry lookups below.
        if (reg.has_predicate(e.predicate.class_id) &&
            reg.predicate_kind(e.predicate.class_id) == PredicateKind::state && e.target) {
            out.push_back("state predicate " + ref_str(e.predicate) + " used in a 3-tuple");
        }
        connected_components.insert(e.source);
        if (e.target) connected_components.insert(*e.target);
        connected_predicates.insert(e.predicate);
    }

    for (const auto& c : g.components)
        if (!connected_components.count(c))
            out.push_back("isolated component " + ref_str(c) + " (missing null-predicate edge)");
    for (const auto& p : g.predicates)
        if (!connected_predicates.count(p))
            out.push_back("predicate " + ref_str(p) + " appears in no triplet");

    return out;
}

std::vector<std::string> validate(const ClassGraph& g, const ClassRegistry& reg) {
    std::vector<std::string> out;
    for (int c : g.components)
        if (!reg.has_component(c)) out.push_back("unknown component class " + std::to_string(c));
    for (int p : g.predicates)
        if (!reg.has_predicate(p)) out.push_back("unknown predicate class " + std::to_string(p));

    std::set<int> connected_c, connected_p;
    std::set<ClassEdge> seen;
    for (const auto& e : g.edges) {
        if (!g.has_component(e.source))
            out.push_back("edge references missing component class " + std::to_string(e.source));
        if (!g.has_predicate(e.predicate))
            out.push_back("edge references missing predicate class " + std::to_string(e.predicate));
        if (e.target && !g.has_component(*e.target))
            out.push_back("edge references missing component class " + std::to_string(*e.target));
        if (reg.has_predicate(e.predicate) &&
            reg.predicate_kind(e.predicate) == PredicateKind::state && e.target)
            out.push_back("state predicate class " + std::to_string(e.predicate) +
                          " used in a 3-tuple");
        if (!seen.insert(e).second) out.push_back("duplicate class edge");
        connected_c.insert(e.source);
        if (e.target) connected_c.insert(*e.target);
        connected_p.insert(e.predicate);
    }
    for (int c : g.components)
        if (!connected_c.count(c))
            out.push_back("isolated component class " + std::to_string(c));
    for (int p : g.predicates)
        if (!connected_p.count(p))
            out.push_back("predicate class " + std::to_string(p) + " appears in no triplet");
    return out;
}

BiadjacencyPair biadjacency(const ClassGraph& s, const ClassRegistry& reg) {
    for (int c : s.components)
        if (!reg.has_component(c))
            throw std::invalid_argument("biadjacency: unknown component class " + std::to_string(c));
    for (int p : s.predicates)
        if (!reg.has_predicate(p))
            throw std::invalid_argument("biadjacency: unknown predicate class " + std::to_string(p));

    BiadjacencyPair out;
    out.cp = BinaryMatrix(reg.component_count(), reg.predicate_count());
    out.pc = BinaryMatrix(reg.predicate_count(), reg.component_count());
    for (const auto& e : s.edges) {
        out.cp.at(e.source - 1, e.predicate) = 1;
        if (e.target) out.pc.at(e.predicate, *e.target - 1) = 1;
    }
    return out;
}

ClassGraph from_biadjacency(const BiadjacencyPair& b, const ClassRegistry& reg) {
    if (b.cp.rows != reg.component_count() || b.cp.cols != reg.predicate_count() ||
        b.pc.rows != reg.predicate_count() || b.pc.cols != reg.component_count())
        throw std::invalid_argument("from_biadjacency: matrix dimensions do not match registry");

    ClassGraph g;
    for (int p = 0; p < b.cp.cols; ++p) {
        std::vector<int> in, out;
        for (int c = 0; c < b.cp.rows; ++c)
            if (b.cp.at(c, p)) in.push_back(c + 1);
        for (int c = 0; c < b.pc.cols; ++c)
            if (b.pc.at(p, c)) out.push_back(c + 1);
        for (int src : in) {
            if (out.empty()) {
                g.add_edge({src, p, std::nullopt});
            } else {
                for (int dst : out) g.add_edge({src, p, dst});
            }
        }
    }
    return g;
}

InstanceGraph attach_null_predicates(const InstanceGraph& g) {
    InstanceGraph out = g;
    out.normalize();

    std::set<InstanceRef> connected;
    int max_null_index = 0;
    for (const auto& e : out.edges) {
        connected.insert(e.source);
        if (e.target) connected.insert(*e.target);
    }
    for (const auto& p : out.predicates)
        if (p.class_id == ClassRegistry::null_predicate_id)
            max_null_index = std::max(max_null_index, p.index);

    for (const auto& c : out.components) {
        if (connected.count(c)) continue;
        InstanceRef null_pred{ClassRegistry::null_predicate_id, ++max_null_index};
        out.add_edge({c, null_pred, std::nullopt});
    }
    return out;
}

ClassGraph abstract_graph(const InstanceGraph& g) {
    ClassGraph out;
    for (const auto& c : g.components) {
        if (!out.has_component(c.class_id)) {
            auto it = std::lower_bound(out.components.begin(), out.components.end(), c.class_id);
            out.components.insert(it, c.class_id);
        }
    }
    for (const auto& p : g.predicates) {
        if (!out.has_predicate(p.class_id)) {
            auto it = std::lower_bound(out.predicates.begin(), out.predicates.end(), p.class_id);
            out.predicates.insert(it, p.class_id);
        }
    }
    for (const auto& e : g.edges) {
        ClassEdge ce{e.source.class_id, e.predicate.class_id,
                     e.target ? std::optional<int>(e.target->class_id) : std::nullopt};
        out.add_edge(ce);
    }
    out.normalize();
    return out;
}

std::vector<std::pair<InstanceGraph, AttributeSet>> split_atomic(const InstanceGraph& g,
                                                                 const AttributeSet& a) {
    // Union-find over all nodes; edges connect regardless of direction.
    std::map<NodeKey, int> ids;
    std::vector<NodeKey> keys;
    auto key_id = [&](const NodeKey& k) {
        auto [it, inserted] = ids.emplace(k, static_cast<int>(keys.size()));
        if (inserted) keys.push_back(k);
        return it->second;
    };
    for (const auto& c : g.components) key_id(component_key(c));
    for (const auto& p : g.predicates) key_id(predicate_key(p));
    for (const auto& e : g.edges) {
        key_id(component_key(e.source));
        key_id(predicate_key(e.predicate));
        if (e.target) key_id(component_key(*e.target));
    }

    std::vector<int> parent(keys.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int x, int y) { parent[find(x)] = find(y); };

    for (const auto& e : g.edges) {
        int pe = key_id(predicate_key(e.predicate));
        unite(key_id(component_key(e.source)), pe);
        if (e.target) unite(key_id(component_key(*e.target)), pe);
    }

    std::map<int, InstanceGraph> atoms;
    std::map<int, AttributeSet> atom_attrs;
    for (const auto& c : g.components) atoms[find(key_id(component_key(c)))].add_component(c);
    for (const auto& p : g.predicates) atoms[find(key_id(predicate_key(p)))].add_predicate(p);
    for (const auto& e : g.edges) atoms[find(key_id(component_key(e.source)))].add_edge(e);
    for (const auto& [key, levels] : a) {
        auto it = ids.find(key);
        if (it != ids.end()) atom_attrs[find(it->second)][key] = levels;
    }

    std::vector<std::pair<InstanceGraph, AttributeSet>> out;
    out.reserve(atoms.size());
    std::vector<std::pair<InstanceRef, int>> order;
    for (auto& [root, atom] : atoms) {
        atom.t = g.t;
        InstanceRef smallest = atom.components.empty() ? keys[root].ref : atom.components.front();
        order.emplace_back(smallest, root);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [smallest, root] : order)
        out.emplace_back(std::move(atoms[root]), std::move(atom_attrs[root]));
    return out;
}

SemanticDescription make_description(const InstanceGraph& combined, const AttributeSet& attrs) {
    SemanticDescription y;
    y.t = combined.t;
    for (auto& [atom, atom_attrs] : split_atomic(combined, attrs)) {
        y.class_graphs.push_back(abstract_graph(atom));
        y.instance_graphs.push_back(std::move(atom));
        y.attributes.push_back(std::move(atom_attrs));
    }
    return y;
}

std::vector<std::string> validate(const AttributeSet& a, const InstanceGraph& g) {
    std::vector<std::string> out;
    for (const auto& [key, levels] : a) {
        bool exists = key.side == NodeSide::component ? g.has_component(key.ref)
                                                      : g.has_predicate(key.ref);
        if (!exists) out.push_back("attribute entry for node absent from graph");
        if (key.side == NodeSide::predicate &&
            key.ref.class_id == ClassRegistry::null_predicate_id && !levels.empty())
            out.push_back("null predicate " + ref_str(key.ref) + " carries attribute levels");
    }
    return out;
}

std::vector<std::string> validate(const SemanticDescription& y, const ClassRegistry& reg) {
    std::vector<std::string> out;
    if (y.class_graphs.size() != y.instance_graphs.size() ||
        y.attributes.size() != y.instance_graphs.size()) {
        out.push_back("description: graph/attribute list lengths differ");
        return out;
    }
    for (std::size_t i = 0; i < y.instance_graphs.size(); ++i) {
        for (auto& v : validate(y.instance_graphs[i], reg))
            out.push_back("atom " + std::to_string(i) + ": " + v);
        for (auto& v : validate(y.attributes[i], y.instance_graphs[i]))
            out.push_back("atom " + std::to_string(i) + ": " + v);
        if (!(abstract_graph(y.instance_graphs[i]) == y.class_graphs[i]))
            out.push_back("atom " + std::to_string(i) + ": class graph is not abstract(instance)");
    }
    return out;
}

} // namespace semsig
