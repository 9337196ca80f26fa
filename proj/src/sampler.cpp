#include "semsig/sampler.hpp"

#include "semsig/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semsig {

std::vector<std::string> ThresholdConfig::validate() const {
    std::vector<std::string> out;
    if (thresholds.empty()) out.push_back("at least one threshold required");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i - 1] < thresholds[i]))
            out.push_back("thresholds must be strictly increasing");
    return out;
}

CondMoments cond_moments(double alpha, int n, double x0) {
    if (n < 1) throw std::invalid_argument("cond_moments: n must be >= 1");
    double a_n = std::pow(alpha, n);
    double a_nm1 = std::pow(alpha, n - 1);
    return {a_n * x0, 1.0 - a_n * a_n, alpha * (1.0 - a_nm1 * a_nm1)};
}

namespace {

double band_probability(const SamplerState& s, int n) {
    CondMoments m = cond_moments(s.model.alpha, n, s.last_value);
    double sd = std::sqrt(m.variance);
    return norm_cdf((s.config.upper() - m.mean) / sd) - norm_cdf((s.config.lower() - m.mean) / sd);
}

} // namespace

double h_prob(const SamplerState& state, int i) {
    if (i < 1) throw std::invalid_argument("h_prob: i must be >= 1");
    for (const auto& v : state.config.validate()) throw std::invalid_argument("h_prob: " + v);
    double l = state.config.lower(), u = state.config.upper();
    if (!(state.last_value > l && state.last_value < u))
        throw std::invalid_argument("h_prob: last value must lie strictly inside the band");

    if (i == 1) return std::clamp(band_probability(state, 1), 0.0, 1.0);

    CondMoments prev = cond_moments(state.model.alpha, i - 1, state.last_value);
    CondMoments cur = cond_moments(state.model.alpha, i, state.last_value);
    double sd_prev = std::sqrt(prev.variance);
    double sd_cur = std::sqrt(cur.variance);
    double rho = cur.covariance / (sd_prev * sd_cur);
    double joint = bivariate_rectangle(prev.mean, sd_prev, l, u, cur.mean, sd_cur, l, u, rho);
    double marginal = band_probability(state, i - 1);
    if (marginal <= 0.0) return 0.0;
    return std::clamp(joint / marginal, 0.0, 1.0);
}

NextSample next_sample_time(const SamplerState& state) {
    double l = state.config.lower(), u = state.config.upper();
    if (!(state.last_value > l && state.last_value < u))
        throw std::invalid_argument("next_sample_time: last value outside thresholds");
    if (!(state.miss_probability > 0.0 && state.miss_probability < 1.0))
        throw std::invalid_argument("next_sample_time: p_m must lie in (0, 1)");

    const double target = 1.0 - state.miss_probability;
    double product = 1.0;
    for (int n = 1; n <= state.horizon_cap; ++n) {
        product *= h_prob(state, n);
        if (product < target) return {n, false};
    }
    return {state.horizon_cap, true};
}

std::vector<double> expected_first_times(const ARModel& model, const ThresholdConfig& config,
                                         std::span<const double> miss_probabilities,
                                         int horizon_cap, int mc_samples, std::uint64_t seed) {
    double min_target = 1.0;
    for (double pm : miss_probabilities) {
        if (!(pm > 0.0 && pm < 1.0))
            throw std::invalid_argument("expected_first_times: p_m must lie in (0, 1)");
        min_target = std::min(min_target, 1.0 - pm);
    }

    Rng rng(seed);
    std::vector<double> sums(miss_probabilities.size(), 0.0);
    std::vector<double> products;
    for (int s = 0; s < mc_samples; ++s) {
        SamplerState st{model, config, 0.5, 0, draw_truncated_in_band(config, rng), horizon_cap};
        products.clear();
        double product = 1.0;
        for (int n = 1; n <= horizon_cap && product >= min_target; ++n) {
            product *= h_prob(st, n);
            products.push_back(product);
        }
        for (std::size_t j = 0; j < miss_probabilities.size(); ++j) {
            double target = 1.0 - miss_probabilities[j];
            // count of k with psi_k >= target; psi is nonincreasing
            std::size_t lo = 0, hi = products.size();
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (products[mid] >= target)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            sums[j] += 1.0 + static_cast<double>(lo);
        }
    }
    for (double& v : sums) v /= static_cast<double>(mc_samples);
    return sums;
}

double expected_first_time(const SamplerState& state, int mc_samples, std::uint64_t seed) {
    double pm[1] = {state.miss_probability};
    return expected_first_times(state.model, state.config, pm, state.horizon_cap, mc_samples,
                                seed)[0];
}

int region_of(double x, const ThresholdConfig& config) {
    const auto& t = config.thresholds;
    int k = static_cast<int>(t.size());
    if (x > t[k - 1]) return 1;
    if (x < t[0]) return k + 1;
    // largest 1-based m with t_m <= x
    int m = static_cast<int>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
    if (m == k) return 2; // x == t_k sits in the topmost interior band
    return k - m + 1;
}

namespace {
constexpr int kUpId = 1, kDownId = 2, kIdleId = 3;
}

int upward_predicate_id() { return kUpId; }
int downward_predicate_id() { return kDownId; }
int idle_predicate_id() { return kIdleId; }

ClassRegistry make_threshold_registry(const ThresholdConfig& config) {
    std::vector<ComponentClass> comps;
    for (int i = 1; i <= config.region_count(); ++i)
        comps.push_back({i, "region-" + std::to_string(i)});
    std::vector<PredicateClass> preds{
        {0, "null", PredicateKind::state},
        {kUpId, "upward-crossing", PredicateKind::relation},
        {kDownId, "downward-crossing", PredicateKind::relation},
        {kIdleId, "idling", PredicateKind::state},
    };
    return ClassRegistry(std::move(comps), std::move(preds));
}

std::pair<CrossingEvent, InstanceGraph> crossing_event(const Sample& prev, const Sample& cur,
                                                       const ThresholdConfig& config, int levels) {
    CrossingEvent ev;
    ev.from_region = region_of(prev.value, config);
    ev.to_region = region_of(cur.value, config);
    if (ev.to_region == ev.from_region)
        ev.kind = CrossingKind::idle;
    else if (ev.to_region < ev.from_region) // smaller region id = higher amplitude
        ev.kind = CrossingKind::upward;
    else
        ev.kind = CrossingKind::downward;

    if (levels >= 1) ev.attributes.push_back({cur.time, cur.value});
    if (levels >= 2) ev.attributes.push_back({prev.time, prev.value});

    InstanceGraph g;
    g.t = cur.time;
    if (ev.kind == CrossingKind::idle) {
        g.add_edge({{ev.from_region, 1}, {kIdleId, 1}, std::nullopt});
    } else {
        int pred = ev.kind == CrossingKind::upward ? kUpId : kDownId;
        g.add_edge({{ev.from_region, 1}, {pred, 1}, InstanceRef{ev.to_region, 1}});
    }
    return {std::move(ev), std::move(g)};
}

AttributeSet crossing_attributes(const CrossingEvent& event, const InstanceGraph& graph) {
    AttributeSet a;
    std::vector<AttributeLevel> levels;
    for (const auto& ta : event.attributes) levels.push_back(ta);
    a[predicate_key(graph.predicates.front())] = std::move(levels);
    return a;
}

std::vector<double> simulate_ar1(const ARModel& model, double x0, int steps, Rng& rng) {
    std::vector<double> x(static_cast<std::size_t>(steps) + 1);
    x[0] = x0;
    double noise = std::sqrt(1.0 - model.alpha * model.alpha);
    for (int n = 1; n <= steps; ++n) x[n] = model.alpha * x[n - 1] + noise * rng.normal();
    return x;
}

double draw_truncated_in_band(const ThresholdConfig& config, Rng& rng) {
    double l = config.lower(), u = config.upper();
    for (;;) {
        double x = rng.normal();
        if (x > l && x < u) return x;
    }
}

SamplerRun run_sampler(const ARModel& model, const ThresholdConfig& config, double pm,
                       int attribute_levels, int horizon, int horizon_cap, std::uint64_t seed) {
    for (const auto& v : config.validate())
        throw std::invalid_argument("run_sampler: " + v);

    Rng rng(seed);
    SamplerRun run;
    run.path = simulate_ar1(model, draw_truncated_in_band(config, rng), horizon, rng);

    double l = config.lower(), u = config.upper();
    std::int64_t pos = 0;
    run.sample_times.push_back(0);
    while (pos < horizon) {
        std::int64_t next;
        if (run.path[pos] > l && run.path[pos] < u) {
            SamplerState st{model, config, pm, pos, run.path[pos], horizon_cap};
            NextSample ns = next_sample_time(st);
            run.any_capped |= ns.capped;
            next = std::min<std::int64_t>(pos + ns.wait, horizon);
        } else {
            next = pos + 1; // outside the band: watch every step until re-entry
        }
        auto [ev, g] = crossing_event({pos, run.path[pos]}, {next, run.path[next]}, config,
                                      attribute_levels);
        run.sample_times.push_back(next);
        run.events.push_back(std::move(ev));
        run.event_graphs.push_back(std::move(g));
        pos = next;
    }
    return run;
}

} // namespace semsig
