#include "semsig/goal.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace semsig {

namespace {

int pattern_count(const GoalQuery& q) {
    return (q.class_pattern ? 1 : 0) + (q.instance_pattern ? 1 : 0);
}

// Complexity vector slot for a pattern: class pattern first when present.
int instance_slot(const GoalQuery& q) { return q.class_pattern ? 1 : 0; }

} // namespace

std::vector<std::string> validate(const GoalQuery& q, const ClassRegistry& reg) {
    std::vector<std::string> out;
    int n = pattern_count(q);
    if (n == 0) out.push_back("goal: at least one pattern required");
    if (static_cast<int>(q.graph_complexity.size()) != n)
        out.push_back("goal: graph complexity length must match pattern count");
    if (static_cast<int>(q.attribute_complexity.size()) != n)
        out.push_back("goal: attribute complexity length must match pattern count");

    if (q.class_pattern) {
        std::set<int> in_edges_c, in_edges_p;
        for (const auto& e : q.class_pattern->edges) {
            if (!reg.has_component(e.source) || (e.target && !reg.has_component(*e.target)))
                out.push_back("goal: class pattern references unknown component class");
            if (!reg.has_predicate(e.predicate))
                out.push_back("goal: class pattern references unknown predicate class");
            else if (reg.predicate_kind(e.predicate) == PredicateKind::state && e.target)
                out.push_back("goal: state predicate class used in a 3-tuple");
            in_edges_c.insert(e.source);
            if (e.target) in_edges_c.insert(*e.target);
            in_edges_p.insert(e.predicate);
        }
        for (int c : q.class_pattern->components)
            if (!in_edges_c.count(c)) out.push_back("goal: isolated class pattern component");
        for (int p : q.class_pattern->predicates)
            if (!in_edges_p.count(p)) out.push_back("goal: class pattern predicate in no triplet");
    }
    if (q.instance_pattern) {
        const auto& pat = *q.instance_pattern;
        std::set<int> used_c, used_p;
        for (const auto& e : pat.edges) {
            if (e.source < 0 || e.source >= static_cast<int>(pat.components.size()) ||
                e.predicate < 0 || e.predicate >= static_cast<int>(pat.predicates.size()) ||
                (e.target && (*e.target < 0 || *e.target >= static_cast<int>(pat.components.size())))) {
                out.push_back("goal: pattern edge references missing slot");
                continue;
            }
            int pc = pat.predicates[e.predicate].class_id;
            if (!reg.has_predicate(pc))
                out.push_back("goal: pattern references unknown predicate class");
            else if (reg.predicate_kind(pc) == PredicateKind::state && e.target)
                out.push_back("goal: state predicate used in a 3-tuple");
            used_c.insert(e.source);
            if (e.target) used_c.insert(*e.target);
            used_p.insert(e.predicate);
        }
        for (std::size_t i = 0; i < pat.components.size(); ++i) {
            if (!reg.has_component(pat.components[i].class_id))
                out.push_back("goal: pattern references unknown component class");
            if (!used_c.count(static_cast<int>(i)))
                out.push_back("goal: isolated pattern component slot");
        }
        for (std::size_t i = 0; i < pat.predicates.size(); ++i)
            if (!used_p.count(static_cast<int>(i)))
                out.push_back("goal: pattern predicate slot in no edge");
    }
    return out;
}

bool match_class(const ClassGraph& s, const ClassGraph& pattern) {
    for (int c : pattern.components)
        if (!s.has_component(c)) return false;
    for (int p : pattern.predicates)
        if (!s.has_predicate(p)) return false;
    for (const auto& e : pattern.edges) {
        bool found = false;
        for (const auto& se : s.edges) {
            if (se.source != e.source || se.predicate != e.predicate) continue;
            if (!e.target || se.target == e.target) { // empty third slot is a wildcard
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

InstancePattern lift_class_pattern(const ClassGraph& pattern) {
    InstancePattern out;
    std::map<int, int> comp_slot, pred_slot;
    auto comp = [&](int cls) {
        auto [it, inserted] = comp_slot.emplace(cls, static_cast<int>(out.components.size()));
        if (inserted) out.components.push_back({cls, std::nullopt});
        return it->second;
    };
    auto pred = [&](int cls) {
        auto [it, inserted] = pred_slot.emplace(cls, static_cast<int>(out.predicates.size()));
        if (inserted) out.predicates.push_back({cls, std::nullopt});
        return it->second;
    };
    for (int c : pattern.components) comp(c);
    for (int p : pattern.predicates) pred(p);
    for (const auto& e : pattern.edges) {
        PatternEdge pe{comp(e.source), pred(e.predicate), std::nullopt};
        if (e.target) pe.target = comp(*e.target);
        out.edges.push_back(pe);
    }
    return out;
}

namespace {

struct MatchContext {
    const InstanceGraph& graph;
    const InstancePattern& pattern;
    // slot assignment order (components first in the combined numbering)
    std::vector<int> order; // combined slot id: components [0, nc), predicates [nc, nc+np)
    std::vector<std::vector<InstanceRef>> candidates; // per combined slot
    std::vector<InstanceRef> comp_assign, pred_assign;
    std::vector<bool> comp_done, pred_done;
    std::vector<MatchEmbedding> results;
};

bool edge_ready(const MatchContext& ctx, const PatternEdge& e) {
    return ctx.comp_done[e.source] && ctx.pred_done[e.predicate] &&
           (!e.target || ctx.comp_done[*e.target]);
}

// All target edges realizing a fully-assigned pattern edge.
void realized_edges(const MatchContext& ctx, const PatternEdge& e,
                    std::vector<EdgeTriplet>& out) {
    const InstanceRef& src = ctx.comp_assign[e.source];
    const InstanceRef& prd = ctx.pred_assign[e.predicate];
    for (const auto& te : ctx.graph.edges) {
        if (te.source != src || te.predicate != prd) continue;
        if (e.target) {
            if (te.target == std::optional<InstanceRef>(ctx.comp_assign[*e.target]))
                out.push_back(te);
        } else {
            out.push_back(te);
        }
    }
}

bool edge_satisfied(const MatchContext& ctx, const PatternEdge& e) {
    std::vector<EdgeTriplet> hits;
    realized_edges(ctx, e, hits);
    return !hits.empty();
}

void backtrack(MatchContext& ctx, std::size_t depth) {
    const int nc = static_cast<int>(ctx.pattern.components.size());
    if (depth == ctx.order.size()) {
        MatchEmbedding emb;
        emb.component_map = ctx.comp_assign;
        emb.predicate_map = ctx.pred_assign;
        for (const auto& e : ctx.pattern.edges) realized_edges(ctx, e, emb.matched_edges);
        std::sort(emb.matched_edges.begin(), emb.matched_edges.end());
        emb.matched_edges.erase(std::unique(emb.matched_edges.begin(), emb.matched_edges.end()),
                                emb.matched_edges.end());
        ctx.results.push_back(std::move(emb));
        return;
    }
    int slot = ctx.order[depth];
    bool is_comp = slot < nc;
    for (const auto& cand : ctx.candidates[slot]) {
        // injectivity within each side
        bool clash = false;
        if (is_comp) {
            for (int i = 0; i < nc; ++i)
                if (ctx.comp_done[i] && ctx.comp_assign[i] == cand) clash = true;
        } else {
            for (std::size_t i = 0; i < ctx.pattern.predicates.size(); ++i)
                if (ctx.pred_done[i] && ctx.pred_assign[i] == cand) clash = true;
        }
        if (clash) continue;

        if (is_comp) {
            ctx.comp_assign[slot] = cand;
            ctx.comp_done[slot] = true;
        } else {
            ctx.pred_assign[slot - nc] = cand;
            ctx.pred_done[slot - nc] = true;
        }

        bool ok = true;
        for (const auto& e : ctx.pattern.edges)
            if (edge_ready(ctx, e) && !edge_satisfied(ctx, e)) {
                ok = false;
                break;
            }
        if (ok) backtrack(ctx, depth + 1);

        if (is_comp)
            ctx.comp_done[slot] = false;
        else
            ctx.pred_done[slot - nc] = false;
    }
}

} // namespace

std::vector<MatchEmbedding> match_instances(const InstanceGraph& d,
                                            const InstancePattern& pattern) {
    if (pattern.empty()) return {MatchEmbedding{}}; // vacuous match

    MatchContext ctx{d, pattern, {}, {}, {}, {}, {}, {}, {}};
    const int nc = static_cast<int>(pattern.components.size());
    const int np = static_cast<int>(pattern.predicates.size());
    ctx.candidates.resize(nc + np);
    for (int i = 0; i < nc; ++i) {
        for (const auto& c : d.components)
            if (c.class_id == pattern.components[i].class_id &&
                (!pattern.components[i].pinned_index ||
                 c.index == *pattern.components[i].pinned_index))
                ctx.candidates[i].push_back(c);
    }
    for (int i = 0; i < np; ++i) {
        for (const auto& p : d.predicates)
            if (p.class_id == pattern.predicates[i].class_id &&
                (!pattern.predicates[i].pinned_index ||
                 p.index == *pattern.predicates[i].pinned_index))
                ctx.candidates[nc + i].push_back(p);
    }

    ctx.order.resize(nc + np);
    for (int i = 0; i < nc + np; ++i) ctx.order[i] = i;
    std::sort(ctx.order.begin(), ctx.order.end(), [&](int a, int b) {
        // rarest class first; slot id breaks ties for determinism
        auto ka = std::make_pair(ctx.candidates[a].size(), a);
        auto kb = std::make_pair(ctx.candidates[b].size(), b);
        return ka < kb;
    });

    ctx.comp_assign.resize(nc);
    ctx.pred_assign.resize(np);
    ctx.comp_done.assign(nc, false);
    ctx.pred_done.assign(np, false);
    backtrack(ctx, 0);

    // canonicalize: one embedding per matched image, smallest node map wins
    std::map<std::pair<std::vector<InstanceRef>, std::vector<EdgeTriplet>>, MatchEmbedding> best;
    for (auto& emb : ctx.results) {
        std::vector<InstanceRef> image = emb.component_map;
        for (const auto& p : emb.predicate_map) image.push_back(p);
        std::sort(image.begin(), image.end());
        auto key = std::make_pair(std::move(image), emb.matched_edges);
        auto it = best.find(key);
        if (it == best.end()) {
            best.emplace(std::move(key), std::move(emb));
        } else {
            auto rank = [](const MatchEmbedding& e) {
                return std::make_pair(e.component_map, e.predicate_map);
            };
            if (rank(emb) < rank(it->second)) it->second = std::move(emb);
        }
    }
    std::vector<MatchEmbedding> out;
    out.reserve(best.size());
    for (auto& [key, emb] : best) out.push_back(std::move(emb));
    std::sort(out.begin(), out.end(), [](const MatchEmbedding& a, const MatchEmbedding& b) {
        return std::make_pair(a.component_map, a.predicate_map) <
               std::make_pair(b.component_map, b.predicate_map);
    });
    return out;
}

namespace {

// Endpoint components of each predicate instance, across all its triplets.
std::map<InstanceRef, std::set<InstanceRef>> predicate_endpoints(const InstanceGraph& d) {
    std::map<InstanceRef, std::set<InstanceRef>> out;
    for (const auto& e : d.edges) {
        out[e.predicate].insert(e.source);
        if (e.target) out[e.predicate].insert(*e.target);
    }
    return out;
}

} // namespace

InstanceGraph expand_l_hop(const InstanceGraph& d, const MatchEmbedding& seed, std::uint32_t hops,
                           const ClassRegistry& reg) {
    InstanceGraph out;
    out.t = d.t;

    if (hops == 0) {
        for (const auto& e : seed.matched_edges) out.add_edge(e);
        for (const auto& c : seed.component_map) {
            out.add_component(c);
            for (const auto& e : d.edges)
                if (e.source == c && !e.target &&
                    reg.predicate_kind(e.predicate.class_id) == PredicateKind::state)
                    out.add_edge(e);
        }
        return out;
    }

    auto endpoints = predicate_endpoints(d);

    // BFS over the component projection: components are adjacent when they
    // share a predicate instance.
    std::map<InstanceRef, std::set<InstanceRef>> adjacency;
    for (const auto& [pred, comps] : endpoints) {
        for (const auto& a : comps)
            for (const auto& b : comps)
                if (!(a == b)) adjacency[a].insert(b);
    }

    std::set<InstanceRef> ball(seed.component_map.begin(), seed.component_map.end());
    std::vector<InstanceRef> frontier(ball.begin(), ball.end());
    for (std::uint32_t step = 0; step < hops && !frontier.empty(); ++step) {
        std::vector<InstanceRef> next;
        for (const auto& c : frontier) {
            auto it = adjacency.find(c);
            if (it == adjacency.end()) continue;
            for (const auto& n : it->second)
                if (ball.insert(n).second) next.push_back(n);
        }
        frontier = std::move(next);
    }

    for (const auto& e : seed.matched_edges) out.add_edge(e);
    for (const auto& [pred, comps] : endpoints) {
        bool inside = true;
        for (const auto& c : comps)
            if (!ball.count(c)) {
                inside = false;
                break;
            }
        if (!inside) continue;
        for (const auto& e : d.edges)
            if (e.predicate == pred) out.add_edge(e);
    }
    for (const auto& c : seed.component_map) out.add_component(c);
    return out;
}

namespace {

InstanceGraph union_graphs(const std::vector<InstanceGraph>& parts, std::int64_t t) {
    InstanceGraph out;
    out.t = t;
    for (const auto& g : parts) {
        for (const auto& c : g.components) out.add_component(c);
        for (const auto& p : g.predicates) out.add_predicate(p);
        for (const auto& e : g.edges) out.add_edge(e);
    }
    return out;
}

std::vector<AttributeLevel> truncate_levels(const std::vector<AttributeLevel>& levels,
                                            std::uint32_t keep) {
    std::size_t n = std::min<std::size_t>(levels.size(), keep);
    return {levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(n)};
}

} // namespace

SemanticDescription filter(const SemanticDescription& y, const GoalQuery& q,
                           const ClassRegistry& reg) {
    auto problems = validate(q, reg);
    if (!problems.empty()) throw std::invalid_argument("filter: " + problems.front());

    const bool class_empty =
        q.class_pattern && q.class_pattern->components.empty() &&
        q.class_pattern->predicates.empty() && q.class_pattern->edges.empty();
    const bool instance_empty = q.instance_pattern && q.instance_pattern->empty();

    // Selection pattern: the instance pattern when given, otherwise the class
    // pattern lifted to wildcards. Complexities follow the selecting pattern.
    std::optional<InstancePattern> selector;
    std::uint32_t l_g = 0, l_a = GoalQuery::unlimited;
    if (q.instance_pattern) {
        if (!instance_empty) selector = *q.instance_pattern;
        l_g = q.graph_complexity[instance_slot(q)];
        l_a = q.attribute_complexity[instance_slot(q)];
    } else {
        if (!class_empty) selector = lift_class_pattern(*q.class_pattern);
        l_g = q.graph_complexity[0];
        l_a = q.attribute_complexity[0];
    }

    SemanticDescription out;
    out.t = y.t;
    for (std::size_t i = 0; i < y.instance_graphs.size(); ++i) {
        if (q.class_pattern && !class_empty &&
            !match_class(y.class_graphs[i], *q.class_pattern))
            continue;

        InstanceGraph kept;
        if (!selector) {
            kept = y.instance_graphs[i]; // empty pattern keeps the atom whole
        } else {
            auto embeddings = match_instances(y.instance_graphs[i], *selector);
            if (embeddings.empty()) continue;
            std::vector<InstanceGraph> parts;
            parts.reserve(embeddings.size());
            for (const auto& emb : embeddings)
                parts.push_back(expand_l_hop(y.instance_graphs[i], emb, l_g, reg));
            kept = union_graphs(parts, y.instance_graphs[i].t);
        }

        AttributeSet kept_attrs;
        for (const auto& [key, levels] : y.attributes[i]) {
            bool present = key.side == NodeSide::component ? kept.has_component(key.ref)
                                                           : kept.has_predicate(key.ref);
            if (present) kept_attrs[key] = truncate_levels(levels, l_a);
        }

        out.class_graphs.push_back(abstract_graph(kept));
        out.instance_graphs.push_back(std::move(kept));
        out.attributes.push_back(std::move(kept_attrs));
    }
    return out;
}

} // namespace semsig
