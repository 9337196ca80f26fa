#pragma once

#include "semsig/attributes.hpp"
#include "semsig/graph.hpp"
#include "semsig/registry.hpp"
#include "semsig/rng.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace semsig {

// Stationary Gaussian AR(1): x_n = alpha x_{n-1} + sqrt(1 - alpha^2) w_{n-1},
// standard normal innovations, unit stationary variance.
struct ARModel {
    double alpha = 0.95;
};

// Ascending thresholds t_1 < ... < t_k. Region ids count down with amplitude:
// region 1 is x > t_k, region k+1 is x < t_1.
struct ThresholdConfig {
    std::vector<double> thresholds;

    int count() const { return static_cast<int>(thresholds.size()); }
    int region_count() const { return count() + 1; }
    double lower() const { return thresholds.front(); }
    double upper() const { return thresholds.back(); }
    std::vector<std::string> validate() const;
};

struct CondMoments {
    double mean;       // E[x_n | x_0]
    double variance;   // V[x_n | x_0]
    double covariance; // C[x_n, x_{n-1} | x_0]
};

// Conditional moments of x_n given x_0; n >= 1.
CondMoments cond_moments(double alpha, int n, double x0);

struct SamplerState {
    ARModel model;
    ThresholdConfig config;
    double miss_probability = 0.05; // p_m, tolerated per-interval miss probability
    std::int64_t last_time = 0;
    double last_value = 0.0;
    int horizon_cap = 10000;
};

// P(x_i in band | x_{i-1} in band), conditioned on x_0 = last observed value;
// the i = 1 case is the plain conditional band probability. The joint term is
// a bivariate-normal rectangle probability evaluated by quadrature.
double h_prob(const SamplerState& state, int i);

struct NextSample {
    std::int64_t wait = 1; // steps after the last sample
    bool capped = false;   // search hit horizon_cap before the product dropped
};

// First n with prod_{i<=n} h_i < 1 - p_m, i.e. the longest wait that keeps the
// in-band survival proxy above 1 - p_m. Requires the last value strictly
// inside the outer band.
NextSample next_sample_time(const SamplerState& state);

// Mean first sampling time, Monte-Carlo averaged over x_0 drawn from a
// standard normal truncated to the outer band. Draws where the product never
// drops within horizon_cap contribute 1 + horizon_cap.
double expected_first_time(const SamplerState& state, int mc_samples, std::uint64_t seed);

// Same, for a whole p_m grid with common random numbers (one h-product
// sequence per draw serves every p_m).
std::vector<double> expected_first_times(const ARModel& model, const ThresholdConfig& config,
                                         std::span<const double> miss_probabilities,
                                         int horizon_cap, int mc_samples, std::uint64_t seed);

// Region component id of an amplitude; boundary values belong to the closed
// interior band (ties between two interior bands go to the upper one).
int region_of(double x, const ThresholdConfig& config);

enum class CrossingKind { upward, downward, idle };

struct Sample {
    std::int64_t time = 0;
    double value = 0.0;
};

struct CrossingEvent {
    CrossingKind kind = CrossingKind::idle;
    int from_region = 0;
    int to_region = 0;
    std::vector<TimeAmplitude> attributes; // newest first
};

// Threshold-model language: region components plus null/U/D/I predicates.
ClassRegistry make_threshold_registry(const ThresholdConfig& config);
int upward_predicate_id();
int downward_predicate_id();
int idle_predicate_id();

// Event between two consecutive retained samples, with up to `levels`
// time-amplitude attribute levels (newest first) attached to the event
// predicate instance.
std::pair<CrossingEvent, InstanceGraph> crossing_event(const Sample& prev, const Sample& cur,
                                                       const ThresholdConfig& config, int levels);
AttributeSet crossing_attributes(const CrossingEvent& event, const InstanceGraph& graph);

// --- simulation driver ----------------------------------------------------

std::vector<double> simulate_ar1(const ARModel& model, double x0, int steps, Rng& rng);

// Draw from N(0,1) restricted to the open outer band.
double draw_truncated_in_band(const ThresholdConfig& config, Rng& rng);

struct SamplerRun {
    std::vector<double> path;             // x_0 .. x_H
    std::vector<std::int64_t> sample_times;
    std::vector<CrossingEvent> events;    // between consecutive retained samples
    std::vector<InstanceGraph> event_graphs;
    bool any_capped = false;
};

// Full non-uniform sampling pass over one simulated path: waits come from
// next_sample_time while in band; once a sample lands on/outside a threshold
// the sampler falls back to unit steps until the process re-enters the band.
SamplerRun run_sampler(const ARModel& model, const ThresholdConfig& config, double pm,
                       int attribute_levels, int horizon, int horizon_cap, std::uint64_t seed);

} // namespace semsig
