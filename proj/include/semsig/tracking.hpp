#pragma once

#include "semsig/description.hpp"
#include "semsig/registry.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace semsig {

// One ingested detector/tracker record. bbox is (x_center, y_center, w, h)
// in pixels; feature, when present, is unit-norm.
struct Detection {
    std::int64_t frame = 0;
    int track_id = 0;
    int class_id = 0;
    std::array<double, 4> bbox{};
    std::optional<std::array<double, 4>> velocity; // informational, from the stream
    std::optional<std::vector<double>> feature;
    std::optional<std::vector<std::uint8_t>> crop;
};

std::vector<std::string> validate(const Detection& det, const ClassRegistry& reg);

struct KalmanConfig {
    double process_noise = 1e-2;      // velocity-state process noise intensity
    double observation_noise = 1.0;   // pixel measurement variance
    double initial_velocity_variance = 1e4;
};

// Constant-velocity track state: position/size plus their rates, with the
// accumulated appearance-feature history. The filter runs per axis (the
// dynamics are block diagonal), so the covariance is four independent 2x2
// blocks stored as (p00, p01, p11).
struct TrackState {
    std::array<double, 8> m{}; // xc, yc, w, h, then their velocities
    std::array<std::array<double, 3>, 4> cov{};
    std::vector<std::vector<double>> feature_history;
    std::int64_t last_frame = -1;
    int class_id = 0;

    bool initialized() const { return last_frame >= 0; }
    int observation_count() const { return obs_count; }
    int obs_count = 0;
};

// Predict/update with the constant-velocity model. The first observation
// initializes position at the measurement with zero velocity. Throws on a
// non-monotone frame index.
TrackState kalman_step(const TrackState& state, const Detection& obs,
                       const KalmanConfig& cfg = {});

// Predicate-inference metrics.
double metric_d1(const TrackState& a, const TrackState& b); // scaled center distance
double metric_d2(const TrackState& a, const TrackState& b); // velocity cosine (0 at rest)
double metric_d3(const std::array<double, 4>& a, const std::array<double, 4>& b); // IoU

struct PredicateThresholds {
    double z1 = 1.0; // scaled distance upper bound
    double z2 = 0.9; // velocity cosine lower bound
    double z3 = 0.3; // IoU lower bound
    int persistence = 3; // W consecutive frames
    std::vector<std::string> validate() const;
};

struct InferredPredicate {
    int predicate_id = 0;
    int track_a = 0;
    int track_b = 0;
    std::array<double, 3> metrics{}; // d1, d2, d3
};

// Streak bookkeeping across frames for the indicator products. Call once per
// frame with the complete current state map; emits the pair predicates whose
// indicators held for `persistence` consecutive frames (conjunct supersedes
// moving-together for a pair).
class PredicateTracker {
public:
    explicit PredicateTracker(PredicateThresholds z, int moving_together_id = 1,
                              int conjunct_id = 2)
        : z_(z), moving_id_(moving_together_id), conjunct_id_(conjunct_id) {}

    std::vector<InferredPredicate> update(const std::map<int, TrackState>& states);
    void reset() { streaks_.clear(); }

private:
    PredicateThresholds z_;
    int moving_id_;
    int conjunct_id_;
    struct Streak {
        int moving = 0;
        int conjunct = 0;
    };
    std::map<std::pair<int, int>, Streak> streaks_;
};

// Options controlling how track state becomes attribute levels.
struct AttributeOptions {
    std::size_t feature_history_cap = 16; // most recent vectors kept in level 2
};

// Assembles the per-frame semantic description: instance graph from the
// detections and inferred predicates (instance indices per class in detection
// order, null predicates attached), attribute hierarchy per node (state
// vector, feature history, crop), split into atoms.
SemanticDescription build_frame(const std::vector<Detection>& dets,
                                const std::vector<InferredPredicate>& predicates,
                                const std::map<int, TrackState>& states,
                                const ClassRegistry& reg, const AttributeOptions& opts = {});

// Keeps only whitelisted component classes (and predicates whose endpoints
// all survive); the empty whitelist is the identity.
SemanticDescription apply_global_goal(const SemanticDescription& y,
                                      const std::set<int>& class_whitelist);

// Per-stream tracking front end: Kalman state per track id plus predicate
// streaks, fed frame by frame.
class FrameTracker {
public:
    FrameTracker(const ClassRegistry& reg, PredicateThresholds z = {}, KalmanConfig kalman = {},
                 AttributeOptions attrs = {});

    // Detections must share one frame index, nondecreasing across calls.
    SemanticDescription process_frame(std::int64_t frame, const std::vector<Detection>& dets);

    const std::map<int, TrackState>& states() const { return states_; }

private:
    const ClassRegistry& reg_;
    KalmanConfig kalman_;
    AttributeOptions attrs_;
    PredicateTracker predicates_;
    std::map<int, TrackState> states_;
    std::int64_t last_frame_ = -1;
};

} // namespace semsig
