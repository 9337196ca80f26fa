#pragma once

#include "semsig/container.hpp"
#include "semsig/goal.hpp"
#include "semsig/tracking.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace semsig {

// Per-frame bit tallies for the transmission strategies compared by the
// benchmark: the raw-frame baseline and the four semantic variants.
struct BenchReport {
    struct Row {
        std::int64_t frame = 0;
        std::uint64_t raw = 0;             // (frame bytes) / 10 modeling constant
        std::uint64_t graphs_attrs = 0;    // (D, A)
        std::uint64_t graphs = 0;          // D
        std::uint64_t goal_graphs_attrs = 0;
        std::uint64_t goal_graphs = 0;
    };
    std::vector<Row> rows;

    std::uint64_t total_raw() const;
    std::uint64_t total_graphs_attrs() const;
    std::uint64_t total_graphs() const;
    std::uint64_t total_goal_graphs_attrs() const;
    std::uint64_t total_goal_graphs() const;
    double ratio_vs_raw(std::uint64_t total) const;

    void write_csv(std::ostream& out) const; // frame,strategy,bits
    void write_summary(std::ostream& out) const;
};

struct PipelineConfig {
    PredicateThresholds thresholds;
    KalmanConfig kalman;
    AttributeOptions attributes;
    CodecConfig codec;
    std::set<int> global_whitelist;   // empty = identity
    int frame_width = 640;            // raw-baseline frame dimensions
    int frame_height = 480;
    double raw_compression = 10.0;    // fixed raw-image compression model
};

struct PipelineResult {
    std::vector<SemanticDescription> frames;          // after the global goal
    std::vector<SemanticDescription> filtered_frames; // after the goal query
    std::vector<std::uint8_t> container;              // SGX1 of the filtered stream
    BenchReport report;
};

// Per-frame flow: track -> build -> global goal -> goal filter -> encode,
// tallying all five strategies. Frames with an empty filtered description
// contribute zero bits to the goal strategies (event-driven transmission).
PipelineResult run_pipeline(const std::vector<Detection>& stream, const ClassRegistry& reg,
                            const GoalQuery& goal, const PipelineConfig& cfg);

} // namespace semsig
