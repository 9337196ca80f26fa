#include "semsig/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semsig {

std::vector<std::string> validate(const Detection& det, const ClassRegistry& reg) {
    std::vector<std::string> out;
    if (!reg.has_component(det.class_id))
        out.push_back("detection references unknown component class " +
                      std::to_string(det.class_id));
    if (!(det.bbox[2] > 0.0) || !(det.bbox[3] > 0.0))
        out.push_back("detection bbox must have positive width and height");
    if (det.feature) {
        double norm = 0.0;
        for (double v : *det.feature) norm += v * v;
        if (std::fabs(std::sqrt(norm) - 1.0) > 1e-6)
            out.push_back("detection feature vector is not unit norm");
    }
    return out;
}

std::vector<std::string> PredicateThresholds::validate() const {
    std::vector<std::string> out;
    if (!(z2 >= -1.0 && z2 <= 1.0)) out.push_back("z2 must lie in [-1, 1]");
    if (!(z3 >= 0.0 && z3 <= 1.0)) out.push_back("z3 must lie in [0, 1]");
    if (persistence < 1) out.push_back("persistence window must be >= 1");
    return out;
}

TrackState kalman_step(const TrackState& state, const Detection& obs, const KalmanConfig& cfg) {
    TrackState out = state;
    out.class_id = obs.class_id;

    if (!state.initialized()) {
        for (int i = 0; i < 4; ++i) {
            out.m[i] = obs.bbox[i];
            out.m[i + 4] = 0.0;
            out.cov[i] = {cfg.observation_noise, 0.0, cfg.initial_velocity_variance};
        }
    } else {
        if (obs.frame <= state.last_frame)
            throw std::invalid_argument("kalman_step: frame index must increase");
        double dt = static_cast<double>(obs.frame - state.last_frame);
        for (int i = 0; i < 4; ++i) {
            // predict: x' = x + dt v, with process noise on the velocity state
            double x = state.m[i] + dt * state.m[i + 4];
            double v = state.m[i + 4];
            auto [p00, p01, p11] = state.cov[i];
            double q = cfg.process_noise * dt;
            double pp00 = p00 + dt * (p01 + p01 + dt * p11);
            double pp01 = p01 + dt * p11;
            double pp11 = p11 + q;
            // update with the scalar position measurement
            double s = pp00 + cfg.observation_noise;
            double k0 = pp00 / s, k1 = pp01 / s;
            double innov = obs.bbox[i] - x;
            out.m[i] = x + k0 * innov;
            out.m[i + 4] = v + k1 * innov;
            out.cov[i] = {(1.0 - k0) * pp00, (1.0 - k0) * pp01, pp11 - k1 * pp01};
        }
    }

    if (obs.feature) out.feature_history.push_back(*obs.feature);
    out.last_frame = obs.frame;
    out.obs_count = state.obs_count + 1;
    return out;
}

double metric_d1(const TrackState& a, const TrackState& b) {
    double dx = a.m[0] - b.m[0], dy = a.m[1] - b.m[1];
    return (dx * dx + dy * dy) / std::sqrt(a.m[2] * a.m[3] * b.m[2] * b.m[3]);
}

double metric_d2(const TrackState& a, const TrackState& b) {
    double na = std::hypot(a.m[4], a.m[5]);
    double nb = std::hypot(b.m[4], b.m[5]);
    if (na == 0.0 || nb == 0.0) return 0.0; // cosine undefined at rest
    return (a.m[4] * b.m[4] + a.m[5] * b.m[5]) / (na * nb);
}

double metric_d3(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double ax0 = a[0] - a[2] / 2, ax1 = a[0] + a[2] / 2;
    double ay0 = a[1] - a[3] / 2, ay1 = a[1] + a[3] / 2;
    double bx0 = b[0] - b[2] / 2, bx1 = b[0] + b[2] / 2;
    double by0 = b[1] - b[3] / 2, by1 = b[1] + b[3] / 2;
    double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
    double ih = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
    double inter = iw * ih;
    double uni = a[2] * a[3] + b[2] * b[3] - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<InferredPredicate> PredicateTracker::update(const std::map<int, TrackState>& states) {
    for (const auto& v : z_.validate()) throw std::invalid_argument("predicate tracker: " + v);

    std::vector<InferredPredicate> out;
    std::set<std::pair<int, int>> seen;
    for (auto ai = states.begin(); ai != states.end(); ++ai) {
        for (auto bi = std::next(ai); bi != states.end(); ++bi) {
            std::pair<int, int> pair{ai->first, bi->first};
            seen.insert(pair);
            const TrackState& a = ai->second;
            const TrackState& b = bi->second;
            double d1 = metric_d1(a, b);
            double d2 = metric_d2(a, b);
            double d3 = metric_d3({a.m[0], a.m[1], a.m[2], a.m[3]},
                                  {b.m[0], b.m[1], b.m[2], b.m[3]});
            bool moving = d1 <= z_.z1 && d2 >= z_.z2;
            bool conjunct = moving && d3 >= z_.z3;

            Streak& st = streaks_[pair];
            st.moving = moving ? st.moving + 1 : 0;
            st.conjunct = conjunct ? st.conjunct + 1 : 0;

            if (st.conjunct >= z_.persistence)
                out.push_back({conjunct_id_, pair.first, pair.second, {d1, d2, d3}});
            else if (st.moving >= z_.persistence)
                out.push_back({moving_id_, pair.first, pair.second, {d1, d2, d3}});
        }
    }
    // drop streaks of pairs that disappeared
    for (auto it = streaks_.begin(); it != streaks_.end();)
        it = seen.count(it->first) ? std::next(it) : streaks_.erase(it);
    return out;
}

SemanticDescription build_frame(const std::vector<Detection>& dets,
                                const std::vector<InferredPredicate>& predicates,
                                const std::map<int, TrackState>& states,
                                const ClassRegistry& reg, const AttributeOptions& opts) {
    InstanceGraph g;
    AttributeSet attrs;
    std::map<int, InstanceRef> track_ref;
    std::map<int, int> class_counter; // per-class instance indices in detection order
    std::int64_t frame = dets.empty() ? 0 : dets.front().frame;
    g.t = frame;

    for (const auto& det : dets) {
        if (!reg.has_component(det.class_id))
            throw std::invalid_argument("build_frame: unknown component class " +
                                        std::to_string(det.class_id));
        if (det.frame != frame)
            throw std::invalid_argument("build_frame: detections span multiple frames");
        InstanceRef ref{det.class_id, ++class_counter[det.class_id]};
        g.add_component(ref);
        track_ref[det.track_id] = ref;

        std::vector<AttributeLevel> levels;
        auto sit = states.find(det.track_id);
        const TrackState* ts = sit == states.end() ? nullptr : &sit->second;
        RealVector state_vec;
        if (ts) {
            state_vec.values.assign(ts->m.begin(), ts->m.end());
        } else {
            state_vec.values.assign(det.bbox.begin(), det.bbox.end());
            state_vec.values.resize(8, 0.0);
        }
        levels.push_back(std::move(state_vec));
        if (ts && !ts->feature_history.empty()) {
            RealVector history;
            std::size_t keep = std::min(opts.feature_history_cap, ts->feature_history.size());
            for (std::size_t i = ts->feature_history.size() - keep;
                 i < ts->feature_history.size(); ++i)
                history.values.insert(history.values.end(), ts->feature_history[i].begin(),
                                      ts->feature_history[i].end());
            levels.push_back(std::move(history));
        }
        if (det.crop) levels.push_back(Blob{*det.crop});
        attrs[component_key(ref)] = std::move(levels);
    }

    std::map<int, int> pred_counter;
    for (const auto& p : predicates) {
        auto a = track_ref.find(p.track_a);
        auto b = track_ref.find(p.track_b);
        if (a == track_ref.end() || b == track_ref.end())
            continue; // pair not visible in this frame
        if (!reg.has_predicate(p.predicate_id))
            throw std::invalid_argument("build_frame: unknown predicate class " +
                                        std::to_string(p.predicate_id));
        InstanceRef pref{p.predicate_id, ++pred_counter[p.predicate_id]};
        g.add_edge({a->second, pref, b->second});
        attrs[predicate_key(pref)] = {RealVector{{p.metrics[0], p.metrics[1], p.metrics[2]}}};
    }

    g = attach_null_predicates(g);
    return make_description(g, attrs);
}

SemanticDescription apply_global_goal(const SemanticDescription& y,
                                      const std::set<int>& class_whitelist) {
    if (class_whitelist.empty()) return y;

    InstanceGraph combined;
    AttributeSet attrs;
    combined.t = y.t;
    for (std::size_t i = 0; i < y.instance_graphs.size(); ++i) {
        const auto& g = y.instance_graphs[i];
        auto keep = [&](const InstanceRef& c) { return class_whitelist.count(c.class_id) > 0; };
        for (const auto& c : g.components)
            if (keep(c)) combined.add_component(c);
        for (const auto& e : g.edges) {
            if (!keep(e.source)) continue;
            if (e.target && !keep(*e.target)) continue;
            combined.add_edge(e);
        }
        for (const auto& [key, levels] : y.attributes[i]) {
            bool kept = key.side == NodeSide::component
                            ? combined.has_component(key.ref)
                            : combined.has_predicate(key.ref);
            if (kept) attrs[key] = levels;
        }
    }
    combined = attach_null_predicates(combined);
    return make_description(combined, attrs);
}

FrameTracker::FrameTracker(const ClassRegistry& reg, PredicateThresholds z, KalmanConfig kalman,
                           AttributeOptions attrs)
    : reg_(reg), kalman_(kalman), attrs_(attrs),
      predicates_(z, reg.predicate_id("moving-together").value_or(1),
                  reg.predicate_id("conjunct").value_or(2)) {}

SemanticDescription FrameTracker::process_frame(std::int64_t frame,
                                                const std::vector<Detection>& dets) {
    if (frame <= last_frame_)
        throw std::invalid_argument("process_frame: frame indices must increase");
    last_frame_ = frame;

    std::map<int, TrackState> visible;
    for (const auto& det : dets) {
        auto problems = validate(det, reg_);
        if (!problems.empty())
            throw std::invalid_argument("process_frame: " + problems.front());
        auto it = states_.find(det.track_id);
        TrackState next = kalman_step(it == states_.end() ? TrackState{} : it->second, det,
                                      kalman_);
        states_[det.track_id] = next;
        visible[det.track_id] = next;
    }

    auto inferred = predicates_.update(visible);
    return build_frame(dets, inferred, visible, reg_, attrs_);
}

} // namespace semsig
