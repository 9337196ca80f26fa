#include "semsig/pipeline.hpp"

#include <map>
#include <ostream>
#include <stdexcept>

namespace semsig {

namespace {

std::uint64_t sum(const std::vector<BenchReport::Row>& rows,
                  std::uint64_t BenchReport::Row::*field) {
    std::uint64_t total = 0;
    for (const auto& r : rows) total += r.*field;
    return total;
}

} // namespace

std::uint64_t BenchReport::total_raw() const { return sum(rows, &Row::raw); }
std::uint64_t BenchReport::total_graphs_attrs() const { return sum(rows, &Row::graphs_attrs); }
std::uint64_t BenchReport::total_graphs() const { return sum(rows, &Row::graphs); }
std::uint64_t BenchReport::total_goal_graphs_attrs() const {
    return sum(rows, &Row::goal_graphs_attrs);
}
std::uint64_t BenchReport::total_goal_graphs() const { return sum(rows, &Row::goal_graphs); }

double BenchReport::ratio_vs_raw(std::uint64_t total) const {
    return total == 0 ? 0.0 : static_cast<double>(total_raw()) / static_cast<double>(total);
}

void BenchReport::write_csv(std::ostream& out) const {
    out << "frame,strategy,bits\n";
    for (const auto& r : rows) {
        out << r.frame << ",raw," << r.raw << "\n";
        out << r.frame << ",graphs_attrs," << r.graphs_attrs << "\n";
        out << r.frame << ",graphs," << r.graphs << "\n";
        out << r.frame << ",goal_graphs_attrs," << r.goal_graphs_attrs << "\n";
        out << r.frame << ",goal_graphs," << r.goal_graphs << "\n";
    }
}

void BenchReport::write_summary(std::ostream& out) const {
    auto line = [&](const char* name, std::uint64_t total) {
        out << name << ": " << total << " bits";
        if (total > 0 && total != total_raw()) out << "  (" << ratio_vs_raw(total) << ":1 vs raw)";
        out << "\n";
    };
    line("raw frames        ", total_raw());
    line("graphs + attributes", total_graphs_attrs());
    line("graphs             ", total_graphs());
    line("goal graphs + attrs", total_goal_graphs_attrs());
    line("goal graphs        ", total_goal_graphs());
}

PipelineResult run_pipeline(const std::vector<Detection>& stream, const ClassRegistry& reg,
                            const GoalQuery& goal, const PipelineConfig& cfg) {
    std::map<std::int64_t, std::vector<Detection>> by_frame;
    for (const auto& det : stream) by_frame[det.frame].push_back(det);

    CodecConfig graphs_only = cfg.codec;
    graphs_only.include_attributes = false;
    CodecConfig with_attrs = cfg.codec;
    with_attrs.include_attributes = true;

    const std::uint64_t raw_bits_per_frame = static_cast<std::uint64_t>(
        8.0 * cfg.frame_width * cfg.frame_height * 3 / cfg.raw_compression);

    FrameTracker tracker(reg, cfg.thresholds, cfg.kalman, cfg.attributes);
    PipelineResult result;
    for (const auto& [frame, dets] : by_frame) {
        SemanticDescription y;
        SemanticDescription filtered;
        try {
            y = tracker.process_frame(frame, dets);
            y = apply_global_goal(y, cfg.global_whitelist);
            filtered = filter(y, goal, reg);
        } catch (const std::exception& e) {
            throw std::runtime_error("frame " + std::to_string(frame) + ": " + e.what());
        }

        BenchReport::Row row;
        row.frame = frame;
        row.raw = raw_bits_per_frame;
        row.graphs_attrs = sgx1_frame_bits(y, reg, with_attrs);
        row.graphs = sgx1_frame_bits(y, reg, graphs_only);
        row.goal_graphs_attrs = filtered.empty() ? 0 : sgx1_frame_bits(filtered, reg, with_attrs);
        row.goal_graphs = filtered.empty() ? 0 : sgx1_frame_bits(filtered, reg, graphs_only);
        result.report.rows.push_back(row);

        result.frames.push_back(std::move(y));
        result.filtered_frames.push_back(std::move(filtered));
    }
    result.container = sgx1_encode(result.filtered_frames, reg, with_attrs);
    return result;
}

} // namespace semsig
