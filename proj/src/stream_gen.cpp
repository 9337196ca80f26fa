#include "semsig/stream_gen.hpp"

#include "semsig/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semsig {

std::vector<std::string> StreamConfig::validate(const ClassRegistry& reg) const {
    std::vector<std::string> out;
    if (n_frames < 1) out.push_back("n_frames must be >= 1");
    if (n_tracks < 1) out.push_back("n_tracks must be >= 1");
    if (!(event_rate >= 0.0 && event_rate <= 1.0)) out.push_back("event_rate must lie in [0, 1]");
    if (classes.empty()) out.push_back("at least one background class required");
    for (const auto& c : classes)
        if (!reg.component_id(c)) out.push_back("unknown class '" + c + "'");
    if (!reg.component_id(event_class)) out.push_back("unknown event class '" + event_class + "'");
    if (frame_width < 16 || frame_height < 16) out.push_back("frame size too small");
    if (crop_width < 1 || crop_height < 1) out.push_back("crop size must be positive");
    if (feature_dim < 0) out.push_back("feature_dim must be >= 0");
    return out;
}

namespace {

struct TrackSim {
    int id;
    int class_id;
    double x, y, w, h;
    double vx, vy;
    std::vector<double> feature;
};

std::vector<double> random_unit_vector(int dim, Rng& rng) {
    std::vector<double> v(dim);
    double norm = 0.0;
    for (double& x : v) {
        x = rng.normal();
        norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        v[0] = 1.0;
        return v;
    }
    for (double& x : v) x /= norm;
    return v;
}

std::vector<std::uint8_t> random_crop(int w, int h, Rng& rng) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * 3);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.integer(256));
    return bytes;
}

void drift_feature(std::vector<double>& v, Rng& rng) {
    double norm = 0.0;
    for (double& x : v) {
        x += 0.01 * rng.normal();
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
}

} // namespace

std::vector<Detection> gen_stream(const StreamConfig& cfg, const ClassRegistry& reg) {
    auto problems = cfg.validate(reg);
    if (!problems.empty()) throw std::invalid_argument("gen_stream: " + problems.front());

    Rng rng(cfg.seed);
    const double W = cfg.frame_width, H = cfg.frame_height;

    std::vector<TrackSim> tracks;
    for (int i = 0; i < cfg.n_tracks; ++i) {
        TrackSim t;
        t.id = i + 1;
        t.class_id = *reg.component_id(cfg.classes[i % cfg.classes.size()]);
        t.w = rng.uniform(30.0, 80.0);
        t.h = rng.uniform(30.0, 80.0);
        t.x = rng.uniform(0.15 * W, 0.85 * W);
        t.y = rng.uniform(0.15 * H, 0.85 * H);
        t.vx = rng.uniform(-3.0, 3.0);
        t.vy = rng.uniform(-3.0, 3.0);
        if (cfg.feature_dim > 0) t.feature = random_unit_vector(cfg.feature_dim, rng);
        tracks.push_back(std::move(t));
    }
    // track 2 shadows track 1: same velocity, overlapping box
    if (cfg.n_tracks >= 2) {
        tracks[1].vx = tracks[0].vx;
        tracks[1].vy = tracks[0].vy;
        tracks[1].x = tracks[0].x + 0.25 * tracks[0].w;
        tracks[1].y = tracks[0].y;
        tracks[1].w = tracks[0].w;
        tracks[1].h = tracks[0].h;
    }

    const int event_class = *reg.component_id(cfg.event_class);
    const int event_track_id = cfg.n_tracks + 1;
    std::vector<double> event_feature =
        cfg.feature_dim > 0 ? random_unit_vector(cfg.feature_dim, rng) : std::vector<double>{};

    std::vector<Detection> out;
    for (int frame = 0; frame < cfg.n_frames; ++frame) {
        for (auto& t : tracks) {
            // bounce off the frame boundary
            if (t.x < t.w / 2 || t.x > W - t.w / 2) t.vx = -t.vx;
            if (t.y < t.h / 2 || t.y > H - t.h / 2) t.vy = -t.vy;
            t.x += t.vx;
            t.y += t.vy;
            if (cfg.feature_dim > 0) drift_feature(t.feature, rng);

            Detection det;
            det.frame = frame;
            det.track_id = t.id;
            det.class_id = t.class_id;
            det.bbox = {t.x + cfg.jitter * rng.normal(), t.y + cfg.jitter * rng.normal(),
                        std::max(4.0, t.w + cfg.jitter * rng.normal()),
                        std::max(4.0, t.h + cfg.jitter * rng.normal())};
            det.velocity = std::array<double, 4>{t.vx, t.vy, 0.0, 0.0};
            if (cfg.feature_dim > 0) det.feature = t.feature;
            det.crop = random_crop(cfg.crop_width, cfg.crop_height, rng);
            out.push_back(std::move(det));
        }
        if (rng.uniform() < cfg.event_rate) {
            if (!event_feature.empty()) drift_feature(event_feature, rng);
            Detection det;
            det.frame = frame;
            det.track_id = event_track_id;
            det.class_id = event_class;
            det.bbox = {rng.uniform(0.2 * W, 0.8 * W), rng.uniform(0.2 * H, 0.8 * H),
                        rng.uniform(10.0, 30.0), rng.uniform(10.0, 30.0)};
            if (!event_feature.empty()) det.feature = event_feature;
            det.crop = random_crop(cfg.crop_width, cfg.crop_height, rng);
            out.push_back(std::move(det));
        }
    }
    return out;
}

} // namespace semsig
