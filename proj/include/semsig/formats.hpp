#pragma once

#include "semsig/description.hpp"
#include "semsig/goal.hpp"
#include "semsig/registry.hpp"
#include "semsig/tracking.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace semsig {

// JSON registry file:
//   {"components": [{"id": 1, "name": "person"}, ...],
//    "predicates": [{"id": 0, "name": "null", "kind": "state"}, ...],
//    "frequencies": {"components": {"person": 9.0}, "predicates": {...}}}
// frequencies are optional and feed the codec's Huffman tables.
ClassRegistry read_registry_json(std::istream& in);
ClassRegistry read_registry_file(const std::string& path);
std::string registry_to_json(const ClassRegistry& reg);

// JSON goal file:
//   {"class_pattern": {"components": [...], "predicates": [...],
//                      "edges": [[c, p, c|null], ...]} | null,
//    "instance_pattern": {"components": [{"class": 1, "k": 3}, ...],
//                         "predicates": [{"class": 1}, ...],
//                         "edges": [[ci, pi, ci|null], ...]} | null,
//    "l_g": [...], "l_a": [...]}        (null l_a entry = unlimited)
GoalQuery read_goal_json(std::istream& in, const ClassRegistry& reg);
GoalQuery read_goal_file(const std::string& path, const ClassRegistry& reg);
std::string goal_to_json(const GoalQuery& q);

// JSONL detection stream, one record per line:
//   {"frame": 0, "id": 3, "class": "person", "bbox": [xc, yc, w, h],
//    "vel": [...], "feature": [...], "crop_bytes": "<base64>"}
std::vector<Detection> read_detections_jsonl(std::istream& in, const ClassRegistry& reg);
std::vector<Detection> read_detections_file(const std::string& path, const ClassRegistry& reg);
void write_detections_jsonl(std::ostream& out, const std::vector<Detection>& dets,
                            const ClassRegistry& reg);

// JSON description interchange: array of frames, each
//   {"t": n, "atoms": [{"graph": {...}, "attributes": [...]}]}
std::string descriptions_to_json(const std::vector<SemanticDescription>& frames);
std::vector<SemanticDescription> read_descriptions_json(std::istream& in);
std::vector<SemanticDescription> read_descriptions_file(const std::string& path);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

} // namespace semsig
