#pragma once

#include "semsig/registry.hpp"
#include "semsig/tracking.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace semsig {

// Synthetic detection-stream generator: persistent constant-velocity
// background tracks with Gaussian jitter (the first two co-move with
// overlapping boxes so pair predicates fire), plus sporadic detections of an
// "interesting" event class in ~event_rate of the frames. Deterministic for a
// fixed seed.
struct StreamConfig {
    int n_frames = 240;
    int n_tracks = 3;
    double event_rate = 0.02;
    std::vector<std::string> classes = {"person", "dog", "car"}; // background track classes
    std::string event_class = "remote";
    std::uint64_t seed = 1;
    int frame_width = 640;
    int frame_height = 480;
    int crop_width = 40;
    int crop_height = 40;
    int feature_dim = 128;
    double jitter = 0.5; // bbox observation noise, pixels

    std::vector<std::string> validate(const ClassRegistry& reg) const;
};

std::vector<Detection> gen_stream(const StreamConfig& cfg, const ClassRegistry& reg);

} // namespace semsig
