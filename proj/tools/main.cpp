// semsig: goal-oriented semantic signal processing CLI.
//
// Subcommands: gen, extract, filter, sample, encode, decode, bench.
// Exit codes: 0 success, 2 input/usage error.

#include "semsig/container.hpp"
#include "semsig/formats.hpp"
#include "semsig/pipeline.hpp"
#include "semsig/sampler.hpp"
#include "semsig/stream_gen.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace semsig;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

ClassRegistry load_registry(const std::string& path) {
    if (path.empty()) return default_video_registry();
    return read_registry_file(path);
}

CostMetric parse_metric(const std::string& text) {
    auto m = CostMetric::parse(text);
    if (!m) throw std::runtime_error("unknown metric '" + text + "'");
    return *m;
}

std::vector<double> parse_thresholds(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

GoalQuery load_goal(const std::string& path, const ClassRegistry& reg) {
    if (path.empty()) {
        // identity goal: empty class pattern, everything kept
        GoalQuery q;
        q.class_pattern = ClassGraph{};
        q.graph_complexity = {GoalQuery::unlimited};
        q.attribute_complexity = {GoalQuery::unlimited};
        return q;
    }
    return read_goal_file(path, reg);
}

struct CodecFlags {
    int tcq_bits = 2;
    std::string metric = "mse";
    std::size_t tcq_min_dim = 16;
    bool no_tcq = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tcq-bits", tcq_bits, "TCQ bits per element")
            ->check(CLI::IsMember({2, 3, 4}));
        cmd->add_option("--metric", metric,
                        "cost metric: mse|tvd|logcosh|quantile:G|lp:P");
        cmd->add_option("--tcq-min-dim", tcq_min_dim,
                        "smallest vector dimension that gets TCQ coded");
        cmd->add_flag("--no-tcq", no_tcq, "store attribute vectors raw");
    }
    CodecConfig to_config() const {
        CodecConfig cfg;
        cfg.tcq_bits = tcq_bits;
        cfg.metric = parse_metric(metric);
        cfg.tcq_min_dim = tcq_min_dim;
        cfg.tcq_enabled = !no_tcq;
        return cfg;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"goal-oriented semantic signal processing"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "generate a synthetic detection stream");
    StreamConfig stream_cfg;
    std::string gen_registry, gen_out;
    gen->add_option("--frames", stream_cfg.n_frames, "number of frames");
    gen->add_option("--tracks", stream_cfg.n_tracks, "number of background tracks");
    gen->add_option("--event-rate", stream_cfg.event_rate, "fraction of event frames");
    gen->add_option("--classes", stream_cfg.classes, "background track class names");
    gen->add_option("--event-class", stream_cfg.event_class, "interesting class name");
    gen->add_option("--feature-dim", stream_cfg.feature_dim, "feature vector dimension");
    gen->add_option("--seed", stream_cfg.seed, "RNG seed");
    gen->add_option("--registry", gen_registry, "registry JSON file");
    gen->add_option("--out", gen_out, "output JSONL path")->required();

    // --- extract ---
    auto* extract = app.add_subcommand("extract", "detection stream -> semantic descriptions");
    std::string ex_in, ex_registry, ex_out, ex_whitelist;
    PredicateThresholds ex_thresholds;
    KalmanConfig ex_kalman;
    extract->add_option("--in", ex_in, "input JSONL stream")->required();
    extract->add_option("--registry", ex_registry, "registry JSON file");
    extract->add_option("--out", ex_out, "output description JSON")->required();
    extract->add_option("--whitelist", ex_whitelist, "global goal: comma-separated class names");
    extract->add_option("--z1", ex_thresholds.z1, "scaled distance threshold");
    extract->add_option("--z2", ex_thresholds.z2, "velocity cosine threshold");
    extract->add_option("--z3", ex_thresholds.z3, "IoU threshold");
    extract->add_option("--persistence", ex_thresholds.persistence, "predicate window (frames)");
    extract->add_option("--process-noise", ex_kalman.process_noise,
                        "tracker velocity process noise");
    extract->add_option("--obs-noise", ex_kalman.observation_noise,
                        "tracker observation noise (pixels^2)");

    // --- filter ---
    auto* filt = app.add_subcommand("filter", "apply a goal query to descriptions");
    std::string f_in, f_goal, f_registry, f_out;
    filt->add_option("--in", f_in, "input description JSON")->required();
    filt->add_option("--goal", f_goal, "goal JSON file")->required();
    filt->add_option("--registry", f_registry, "registry JSON file");
    filt->add_option("--out", f_out, "output description JSON")->required();

    // --- sample ---
    auto* sample = app.add_subcommand("sample", "optimal non-uniform AR(1) sampling");
    double s_alpha = 0.95, s_pm = 0.05;
    std::string s_thresholds = "-2,2", s_out, s_events_out;
    int s_levels = 2, s_nmax = 10000, s_horizon = 1000;
    std::uint64_t s_seed = 1;
    sample->add_option("--alpha", s_alpha, "AR(1) coefficient");
    sample->add_option("--thresholds", s_thresholds, "comma-separated ascending thresholds");
    sample->add_option("--pm", s_pm, "tolerated miss probability");
    sample->add_option("--r", s_levels, "attribute levels per event");
    sample->add_option("--nmax", s_nmax, "search horizon cap");
    sample->add_option("--horizon", s_horizon, "simulated path length");
    sample->add_option("--seed", s_seed, "RNG seed");
    sample->add_option("--out", s_out, "output CSV path")->required();
    sample->add_option("--events-out", s_events_out,
                       "event-graph description JSON (default: <out>.events.json)");

    // --- encode / decode ---
    auto* encode = app.add_subcommand("encode", "descriptions -> SGX1 container");
    std::string e_in, e_registry, e_out;
    bool e_no_attrs = false;
    CodecFlags e_codec;
    encode->add_option("--in", e_in, "input description JSON")->required();
    encode->add_option("--registry", e_registry, "registry JSON file");
    encode->add_option("--out", e_out, "output SGX1 path")->required();
    encode->add_flag("--no-attributes", e_no_attrs, "encode graph structure only");
    e_codec.attach(encode);

    auto* decode = app.add_subcommand("decode", "SGX1 container -> descriptions");
    std::string d_in, d_registry, d_out;
    decode->add_option("--in", d_in, "input SGX1 path")->required();
    decode->add_option("--registry", d_registry, "registry JSON file");
    decode->add_option("--out", d_out, "output description JSON")->required();

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "compression benchmark on a synthetic stream");
    StreamConfig bench_stream;
    std::string b_registry, b_goal, b_out;
    double b_raw_compression = 10.0;
    CodecFlags b_codec;
    bench->add_option("--frames", bench_stream.n_frames, "number of frames");
    bench->add_option("--event-rate", bench_stream.event_rate, "fraction of event frames");
    bench->add_option("--seed", bench_stream.seed, "RNG seed");
    bench->add_option("--registry", b_registry, "registry JSON file");
    bench->add_option("--goal", b_goal, "goal JSON (default: event-class pattern)");
    bench->add_option("--raw-compression", b_raw_compression,
                      "raw-frame baseline compression model (bytes / this factor)");
    bench->add_option("--out", b_out, "per-frame CSV path");
    b_codec.attach(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (gen->parsed()) {
        ClassRegistry reg = load_registry(gen_registry);
        auto dets = gen_stream(stream_cfg, reg);
        auto out = open_out(gen_out);
        write_detections_jsonl(out, dets, reg);
        std::cerr << "wrote " << dets.size() << " detections over " << stream_cfg.n_frames
                  << " frames to " << gen_out << "\n";
    } else if (extract->parsed()) {
        ClassRegistry reg = load_registry(ex_registry);
        auto dets = read_detections_file(ex_in, reg);
        std::set<int> whitelist;
        if (!ex_whitelist.empty()) {
            std::stringstream ss(ex_whitelist);
            std::string name;
            while (std::getline(ss, name, ',')) {
                auto id = reg.component_id(name);
                if (!id) throw std::runtime_error("unknown class '" + name + "'");
                whitelist.insert(*id);
            }
        }
        std::map<std::int64_t, std::vector<Detection>> by_frame;
        for (const auto& det : dets) by_frame[det.frame].push_back(det);
        FrameTracker tracker(reg, ex_thresholds, ex_kalman);
        std::vector<SemanticDescription> frames;
        for (const auto& [frame, frame_dets] : by_frame)
            frames.push_back(apply_global_goal(tracker.process_frame(frame, frame_dets),
                                               whitelist));
        auto out = open_out(ex_out);
        out << descriptions_to_json(frames);
        std::cerr << "extracted " << frames.size() << " frames to " << ex_out << "\n";
    } else if (filt->parsed()) {
        ClassRegistry reg = load_registry(f_registry);
        auto frames = read_descriptions_file(f_in);
        GoalQuery q = read_goal_file(f_goal, reg);
        std::vector<SemanticDescription> out_frames;
        for (const auto& y : frames) out_frames.push_back(filter(y, q, reg));
        auto out = open_out(f_out);
        out << descriptions_to_json(out_frames);
        std::cerr << "filtered " << frames.size() << " frames to " << f_out << "\n";
    } else if (sample->parsed()) {
        ARModel model{s_alpha};
        if (!(s_alpha > -1.0 && s_alpha < 1.0))
            throw std::runtime_error("alpha must lie in (-1, 1)");
        ThresholdConfig cfg{parse_thresholds(s_thresholds)};
        auto problems = cfg.validate();
        if (!problems.empty()) throw std::runtime_error(problems.front());
        if (!(s_pm > 0.0 && s_pm < 1.0)) throw std::runtime_error("pm must lie in (0, 1)");
        SamplerRun run = run_sampler(model, cfg, s_pm, s_levels, s_horizon, s_nmax, s_seed);
        auto out = open_out(s_out);
        out << "n,x,retained,event\n";
        std::size_t next_sample = 0, next_event = 0;
        auto kind_name = [](CrossingKind k) {
            switch (k) {
                case CrossingKind::upward: return "U";
                case CrossingKind::downward: return "D";
                default: return "I";
            }
        };
        for (std::size_t n = 0; n < run.path.size(); ++n) {
            bool retained = next_sample < run.sample_times.size() &&
                            run.sample_times[next_sample] == static_cast<std::int64_t>(n);
            out << n << "," << run.path[n] << "," << (retained ? 1 : 0) << ",";
            if (retained) {
                if (n > 0 && next_event < run.events.size())
                    out << kind_name(run.events[next_event++].kind);
                ++next_sample;
            }
            out << "\n";
        }
        // the crossing-event graphs, one description frame per event
        std::vector<SemanticDescription> event_frames;
        for (std::size_t i = 0; i < run.events.size(); ++i) {
            SemanticDescription frame;
            frame.t = run.event_graphs[i].t;
            frame.class_graphs.push_back(abstract_graph(run.event_graphs[i]));
            frame.attributes.push_back(
                crossing_attributes(run.events[i], run.event_graphs[i]));
            frame.instance_graphs.push_back(run.event_graphs[i]);
            event_frames.push_back(std::move(frame));
        }
        std::string events_path = s_events_out.empty() ? s_out + ".events.json" : s_events_out;
        auto ev_out = open_out(events_path);
        ev_out << descriptions_to_json(event_frames);

        if (run.any_capped)
            std::cerr << "note: the n_1 search hit the horizon cap at least once\n";
        std::cerr << "retained " << run.sample_times.size() << " of " << run.path.size()
                  << " samples; wrote " << s_out << " and " << events_path << "\n";
    } else if (encode->parsed()) {
        ClassRegistry reg = load_registry(e_registry);
        auto frames = read_descriptions_file(e_in);
        CodecConfig cfg = e_codec.to_config();
        cfg.include_attributes = !e_no_attrs;
        auto bytes = sgx1_encode(frames, reg, cfg);
        auto out = open_out(e_out);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        std::cerr << "encoded " << frames.size() << " frames into " << bytes.size()
                  << " bytes at " << e_out << "\n";
    } else if (decode->parsed()) {
        ClassRegistry reg = load_registry(d_registry);
        std::ifstream in(d_in, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open '" + d_in + "'");
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        auto frames = sgx1_decode(bytes, reg);
        auto out = open_out(d_out);
        out << descriptions_to_json(frames);
        std::cerr << "decoded " << frames.size() << " frames to " << d_out << "\n";
    } else if (bench->parsed()) {
        ClassRegistry reg = load_registry(b_registry);
        auto dets = gen_stream(bench_stream, reg);

        GoalQuery goal;
        if (b_goal.empty()) {
            int event_id = *reg.component_id(bench_stream.event_class);
            ClassGraph pattern;
            pattern.add_edge({event_id, ClassRegistry::null_predicate_id, std::nullopt});
            goal.class_pattern = pattern;
            goal.graph_complexity = {0};
            goal.attribute_complexity = {GoalQuery::unlimited};
        } else {
            goal = read_goal_file(b_goal, reg);
        }

        PipelineConfig cfg;
        cfg.codec = b_codec.to_config();
        cfg.frame_width = bench_stream.frame_width;
        cfg.frame_height = bench_stream.frame_height;
        cfg.raw_compression = b_raw_compression;
        PipelineResult result = run_pipeline(dets, reg, goal, cfg);
        if (!b_out.empty()) {
            auto out = open_out(b_out);
            result.report.write_csv(out);
        }
        result.report.write_summary(std::cout);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
