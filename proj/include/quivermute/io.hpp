#pragma once

#include "quivermute/quiver.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace qm {

using ojson = nlohmann::ordered_json;

// QuiverFile text -> validated bound quiver. PARSE_ERROR carries "line L, column C" when the
// offending token can be located; validation errors keep their own codes.
BoundQuiver parse_quiver(const std::string& text);
// Canonical text: fixed key order, two-space indent, trailing newline.
std::string serialize_quiver(const BoundQuiver& q);

ojson quiver_to_json(const BoundQuiver& q);
// `where` prefixes messages (file name or "body").
BoundQuiver quiver_from_json(const nlohmann::json& j, const std::string& where = "input");

BoundQuiver load_quiver(const std::string& path);
void save_quiver(const BoundQuiver& q, const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Level of an ambient label "v@L", if it has one.
std::optional<int> label_level(const std::string& label);
std::string label_base(const std::string& label);

struct DotOptions {
    std::string graph_name;
    bool relations_as_comments = true;
};

// Deterministic DOT; labels with "@L" are grouped into rank=same levels.
std::string export_dot(const BoundQuiver& q, const DotOptions& opts = {});

}  // namespace qm
