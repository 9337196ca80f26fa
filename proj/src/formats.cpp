#include "semsig/formats.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semsig {

using nlohmann::json;

namespace {

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::ifstream open_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return in;
}

} // namespace

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        std::uint32_t chunk = bytes[i] << 16;
        if (i + 1 < bytes.size()) chunk |= bytes[i + 1] << 8;
        if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
        out.push_back(kB64Alphabet[(chunk >> 18) & 63]);
        out.push_back(kB64Alphabet[(chunk >> 12) & 63]);
        out.push_back(i + 1 < bytes.size() ? kB64Alphabet[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < bytes.size() ? kB64Alphabet[chunk & 63] : '=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        if (c == '=') return -1;
        throw std::runtime_error("base64: invalid character");
    };
    if (text.size() % 4 != 0) throw std::runtime_error("base64: length not a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int v[4];
        for (int j = 0; j < 4; ++j) v[j] = value(text[i + j]);
        std::uint32_t chunk = (v[0] << 18) | (v[1] << 12);
        out.push_back(static_cast<std::uint8_t>((chunk >> 16) & 0xff));
        if (v[2] >= 0) {
            chunk |= v[2] << 6;
            out.push_back(static_cast<std::uint8_t>((chunk >> 8) & 0xff));
        }
        if (v[3] >= 0) {
            chunk |= v[3];
            out.push_back(static_cast<std::uint8_t>(chunk & 0xff));
        }
    }
    return out;
}

// --- registry ---------------------------------------------------------------

ClassRegistry read_registry_json(std::istream& in) {
    json doc = json::parse(in);
    std::vector<ComponentClass> comps;
    for (const auto& c : doc.at("components"))
        comps.push_back({c.at("id").get<int>(), c.at("name").get<std::string>()});
    std::vector<PredicateClass> preds;
    for (const auto& p : doc.at("predicates")) {
        std::string kind = p.at("kind").get<std::string>();
        if (kind != "state" && kind != "relation")
            throw std::runtime_error("registry: predicate kind must be 'state' or 'relation'");
        preds.push_back({p.at("id").get<int>(), p.at("name").get<std::string>(),
                         kind == "state" ? PredicateKind::state : PredicateKind::relation});
    }
    ClassRegistry reg(std::move(comps), std::move(preds));
    if (doc.contains("frequencies")) {
        const auto& f = doc["frequencies"];
        if (f.contains("components"))
            for (auto it = f["components"].begin(); it != f["components"].end(); ++it) {
                auto id = reg.component_id(it.key());
                if (!id) throw std::runtime_error("registry: frequency for unknown component");
                reg.set_component_frequency(*id, it.value().get<double>());
            }
        if (f.contains("predicates"))
            for (auto it = f["predicates"].begin(); it != f["predicates"].end(); ++it) {
                auto id = reg.predicate_id(it.key());
                if (!id) throw std::runtime_error("registry: frequency for unknown predicate");
                reg.set_predicate_frequency(*id, it.value().get<double>());
            }
    }
    return reg;
}

ClassRegistry read_registry_file(const std::string& path) {
    auto in = open_file(path);
    return read_registry_json(in);
}

std::string registry_to_json(const ClassRegistry& reg) {
    json doc;
    doc["components"] = json::array();
    for (int id = 1; id <= reg.component_count(); ++id)
        doc["components"].push_back({{"id", id}, {"name", reg.component(id).name}});
    doc["predicates"] = json::array();
    for (int id = 0; id < reg.predicate_count(); ++id) {
        const auto& p = reg.predicate(id);
        doc["predicates"].push_back(
            {{"id", id},
             {"name", p.name},
             {"kind", p.kind == PredicateKind::state ? "state" : "relation"}});
    }
    return doc.dump(2);
}

// --- goal -------------------------------------------------------------------

namespace {

ClassGraph class_pattern_from_json(const json& doc) {
    ClassGraph g;
    for (const auto& c : doc.value("components", json::array())) g.components.push_back(c.get<int>());
    for (const auto& p : doc.value("predicates", json::array())) g.predicates.push_back(p.get<int>());
    for (const auto& e : doc.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 3) throw std::runtime_error("goal: edge must be a triple");
        ClassEdge ce{e[0].get<int>(), e[1].get<int>(), std::nullopt};
        if (!e[2].is_null()) ce.target = e[2].get<int>();
        g.add_edge(ce);
    }
    g.normalize();
    return g;
}

InstancePattern instance_pattern_from_json(const json& doc) {
    InstancePattern p;
    for (const auto& c : doc.value("components", json::array())) {
        PatternNode n{c.at("class").get<int>(), std::nullopt};
        if (c.contains("k") && !c["k"].is_null()) n.pinned_index = c["k"].get<int>();
        p.components.push_back(n);
    }
    for (const auto& q : doc.value("predicates", json::array())) {
        PatternNode n{q.at("class").get<int>(), std::nullopt};
        if (q.contains("k") && !q["k"].is_null()) n.pinned_index = q["k"].get<int>();
        p.predicates.push_back(n);
    }
    for (const auto& e : doc.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 3) throw std::runtime_error("goal: edge must be a triple");
        PatternEdge pe{e[0].get<int>(), e[1].get<int>(), std::nullopt};
        if (!e[2].is_null()) pe.target = e[2].get<int>();
        p.edges.push_back(pe);
    }
    return p;
}

std::vector<std::uint32_t> complexity_from_json(const json& arr) {
    std::vector<std::uint32_t> out;
    for (const auto& v : arr) {
        if (v.is_null())
            out.push_back(GoalQuery::unlimited);
        else
            out.push_back(v.get<std::uint32_t>());
    }
    return out;
}

} // namespace

GoalQuery read_goal_json(std::istream& in, const ClassRegistry& reg) {
    json doc = json::parse(in);
    GoalQuery q;
    if (doc.contains("class_pattern") && !doc["class_pattern"].is_null())
        q.class_pattern = class_pattern_from_json(doc["class_pattern"]);
    if (doc.contains("instance_pattern") && !doc["instance_pattern"].is_null())
        q.instance_pattern = instance_pattern_from_json(doc["instance_pattern"]);
    q.graph_complexity = complexity_from_json(doc.value("l_g", json::array()));
    q.attribute_complexity = complexity_from_json(doc.value("l_a", json::array()));
    auto problems = validate(q, reg);
    if (!problems.empty()) throw std::runtime_error(problems.front());
    return q;
}

GoalQuery read_goal_file(const std::string& path, const ClassRegistry& reg) {
    auto in = open_file(path);
    return read_goal_json(in, reg);
}

std::string goal_to_json(const GoalQuery& q) {
    json doc;
    if (q.class_pattern) {
        json g;
        g["components"] = q.class_pattern->components;
        g["predicates"] = q.class_pattern->predicates;
        g["edges"] = json::array();
        for (const auto& e : q.class_pattern->edges)
            g["edges"].push_back({e.source, e.predicate,
                                  e.target ? json(*e.target) : json(nullptr)});
        doc["class_pattern"] = g;
    } else {
        doc["class_pattern"] = nullptr;
    }
    if (q.instance_pattern) {
        json g;
        g["components"] = json::array();
        for (const auto& n : q.instance_pattern->components) {
            json jn{{"class", n.class_id}};
            if (n.pinned_index) jn["k"] = *n.pinned_index;
            g["components"].push_back(jn);
        }
        g["predicates"] = json::array();
        for (const auto& n : q.instance_pattern->predicates) {
            json jn{{"class", n.class_id}};
            if (n.pinned_index) jn["k"] = *n.pinned_index;
            g["predicates"].push_back(jn);
        }
        g["edges"] = json::array();
        for (const auto& e : q.instance_pattern->edges)
            g["edges"].push_back({e.source, e.predicate,
                                  e.target ? json(*e.target) : json(nullptr)});
        doc["instance_pattern"] = g;
    } else {
        doc["instance_pattern"] = nullptr;
    }
    auto complexity = [](const std::vector<std::uint32_t>& v) {
        json arr = json::array();
        for (std::uint32_t x : v)
            arr.push_back(x == GoalQuery::unlimited ? json(nullptr) : json(x));
        return arr;
    };
    doc["l_g"] = complexity(q.graph_complexity);
    doc["l_a"] = complexity(q.attribute_complexity);
    return doc.dump(2);
}

// --- detections -------------------------------------------------------------

std::vector<Detection> read_detections_jsonl(std::istream& in, const ClassRegistry& reg) {
    std::vector<Detection> out;
    std::string line;
    std::int64_t last_frame = -1;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("detections line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
        Detection det;
        det.frame = rec.at("frame").get<std::int64_t>();
        det.track_id = rec.at("id").get<int>();
        std::string cls = rec.at("class").get<std::string>();
        auto id = reg.component_id(cls);
        if (!id)
            throw std::runtime_error("detections line " + std::to_string(line_no) +
                                     ": unknown class '" + cls + "'");
        det.class_id = *id;
        auto bbox = rec.at("bbox");
        if (!bbox.is_array() || bbox.size() != 4)
            throw std::runtime_error("detections line " + std::to_string(line_no) +
                                     ": bbox must have 4 entries");
        for (int i = 0; i < 4; ++i) det.bbox[i] = bbox[i].get<double>();
        if (rec.contains("vel") && !rec["vel"].is_null()) {
            std::array<double, 4> v{};
            for (int i = 0; i < 4; ++i) v[i] = rec["vel"][i].get<double>();
            det.velocity = v;
        }
        if (rec.contains("feature") && !rec["feature"].is_null())
            det.feature = rec["feature"].get<std::vector<double>>();
        if (rec.contains("crop_bytes") && !rec["crop_bytes"].is_null())
            det.crop = base64_decode(rec["crop_bytes"].get<std::string>());
        if (det.frame < last_frame)
            throw std::runtime_error("detections line " + std::to_string(line_no) +
                                     ": frame indices must be nondecreasing");
        last_frame = det.frame;
        out.push_back(std::move(det));
    }
    return out;
}

std::vector<Detection> read_detections_file(const std::string& path, const ClassRegistry& reg) {
    auto in = open_file(path);
    return read_detections_jsonl(in, reg);
}

void write_detections_jsonl(std::ostream& out, const std::vector<Detection>& dets,
                            const ClassRegistry& reg) {
    for (const auto& det : dets) {
        json rec;
        rec["frame"] = det.frame;
        rec["id"] = det.track_id;
        rec["class"] = reg.component(det.class_id).name;
        rec["bbox"] = det.bbox;
        if (det.velocity) rec["vel"] = *det.velocity;
        if (det.feature) rec["feature"] = *det.feature;
        if (det.crop) rec["crop_bytes"] = base64_encode(*det.crop);
        out << rec.dump() << "\n";
    }
}

// --- descriptions -----------------------------------------------------------

namespace {

json ref_to_json(const InstanceRef& r) { return json::array({r.class_id, r.index}); }

InstanceRef ref_from_json(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json level_to_json(const AttributeLevel& level) {
    if (const auto* vec = std::get_if<RealVector>(&level)) return json{{"vec", vec->values}};
    if (const auto* ta = std::get_if<TimeAmplitude>(&level))
        return json{{"ta", json::array({ta->time, ta->amplitude})}};
    return json{{"blob", base64_encode(std::get<Blob>(level).bytes)}};
}

AttributeLevel level_from_json(const json& j) {
    if (j.contains("vec")) return RealVector{j["vec"].get<std::vector<double>>()};
    if (j.contains("ta"))
        return TimeAmplitude{j["ta"].at(0).get<std::int64_t>(), j["ta"].at(1).get<double>()};
    if (j.contains("blob")) return Blob{base64_decode(j["blob"].get<std::string>())};
    throw std::runtime_error("description: unknown attribute level type");
}

} // namespace

std::string descriptions_to_json(const std::vector<SemanticDescription>& frames) {
    json doc = json::array();
    for (const auto& frame : frames) {
        json jf;
        jf["t"] = frame.t;
        jf["atoms"] = json::array();
        for (std::size_t i = 0; i < frame.atom_count(); ++i) {
            const auto& g = frame.instance_graphs[i];
            json jg;
            jg["components"] = json::array();
            for (const auto& c : g.components) jg["components"].push_back(ref_to_json(c));
            jg["predicates"] = json::array();
            for (const auto& p : g.predicates) jg["predicates"].push_back(ref_to_json(p));
            jg["edges"] = json::array();
            for (const auto& e : g.edges)
                jg["edges"].push_back(json::array(
                    {ref_to_json(e.source), ref_to_json(e.predicate),
                     e.target ? ref_to_json(*e.target) : json(nullptr)}));
            json attrs = json::array();
            for (const auto& [key, levels] : frame.attributes[i]) {
                json ja;
                ja["node"] = json::array(
                    {key.side == NodeSide::component ? "c" : "p", key.ref.class_id, key.ref.index});
                ja["levels"] = json::array();
                for (const auto& level : levels) ja["levels"].push_back(level_to_json(level));
                attrs.push_back(ja);
            }
            jf["atoms"].push_back({{"graph", jg}, {"attributes", attrs}});
        }
        doc.push_back(jf);
    }
    return doc.dump();
}

std::vector<SemanticDescription> read_descriptions_json(std::istream& in) {
    json doc = json::parse(in);
    std::vector<SemanticDescription> out;
    for (const auto& jf : doc) {
        SemanticDescription frame;
        frame.t = jf.at("t").get<std::int64_t>();
        for (const auto& atom : jf.at("atoms")) {
            const auto& jg = atom.at("graph");
            InstanceGraph g;
            g.t = frame.t;
            for (const auto& c : jg.at("components")) g.components.push_back(ref_from_json(c));
            for (const auto& p : jg.at("predicates")) g.predicates.push_back(ref_from_json(p));
            for (const auto& e : jg.at("edges")) {
                EdgeTriplet et{ref_from_json(e.at(0)), ref_from_json(e.at(1)), std::nullopt};
                if (!e.at(2).is_null()) et.target = ref_from_json(e.at(2));
                g.edges.push_back(et);
            }
            g.normalize();
            AttributeSet attrs;
            for (const auto& ja : atom.at("attributes")) {
                NodeKey key;
                key.side = ja.at("node").at(0).get<std::string>() == "p" ? NodeSide::predicate
                                                                         : NodeSide::component;
                key.ref.class_id = ja.at("node").at(1).get<int>();
                key.ref.index = ja.at("node").at(2).get<int>();
                std::vector<AttributeLevel> levels;
                for (const auto& level : ja.at("levels")) levels.push_back(level_from_json(level));
                attrs[key] = std::move(levels);
            }
            frame.class_graphs.push_back(abstract_graph(g));
            frame.instance_graphs.push_back(std::move(g));
            frame.attributes.push_back(std::move(attrs));
        }
        out.push_back(std::move(frame));
    }
    return out;
}

std::vector<SemanticDescription> read_descriptions_file(const std::string& path) {
    auto in = open_file(path);
    return read_descriptions_json(in);
}

} // namespace semsig
