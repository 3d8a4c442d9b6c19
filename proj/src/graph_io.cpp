/*
 * Copyright 2026 The auxsel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "auxsel/graph_io.hpp"

#include <algorithm>
#include <json.hpp>

#include "auxsel/error.hpp"
#include "auxsel/io.hpp"

namespace auxsel {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::ParseError,
                        "unknown key '" + key + "' in " + std::string(where));
        }
    }
}

std::size_t as_index(const json& v, std::string_view what) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw Error(ErrorCode::ParseError, std::string(what) + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

Dag parse_graph_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "graph must be a JSON object");
    reject_unknown_keys(doc, {"nodes", "edges"}, "graph");
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw Error(ErrorCode::ParseError, "graph needs a 'nodes' array");
    }

    const auto& nodes = doc["nodes"];
    const std::size_t n = nodes.size();
    std::vector<std::string> labels(n);
    std::vector<bool> filled(n, false);
    NodeSet observed;
    for (const auto& node : nodes) {
        if (!node.is_object()) throw Error(ErrorCode::ParseError, "node entries must be objects");
        reject_unknown_keys(node, {"id", "label", "observed"}, "node");
        if (!node.contains("id") || !node.contains("label")) {
            throw Error(ErrorCode::ParseError, "node needs 'id' and 'label'");
        }
        const std::size_t id = as_index(node["id"], "node id");
        if (id >= n || filled[id]) {
            throw Error(ErrorCode::ParseError, "node ids must be dense 0..n-1 without repeats");
        }
        if (!node["label"].is_string()) throw Error(ErrorCode::ParseError, "label must be a string");
        labels[id] = node["label"].get<std::string>();
        filled[id] = true;
        if (node.contains("observed")) {
            if (!node["observed"].is_boolean()) {
                throw Error(ErrorCode::ParseError, "'observed' must be a boolean");
            }
            if (node["observed"].get<bool>()) observed.insert(NodeId(id));
        }
    }

    std::vector<Edge> edges;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw Error(ErrorCode::ParseError, "'edges' must be an array");
        for (const auto& e : doc["edges"]) {
            if (!e.is_array() || e.size() != 2) {
                throw Error(ErrorCode::ParseError, "edges must be [parent, child] pairs");
            }
            edges.push_back(Edge{NodeId(as_index(e[0], "edge endpoint")),
                                 NodeId(as_index(e[1], "edge endpoint"))});
        }
    }
    return build_dag(n, edges, observed, std::move(labels));
}

Dag load_graph(const std::filesystem::path& path) { return parse_graph_json(read_text_file(path)); }

std::string graph_to_json(const Dag& dag) {
    json nodes = json::array();
    for (std::size_t i = 0; i < dag.size(); ++i) {
        nodes.push_back({{"id", i}, {"label", dag.label(NodeId(i))}, {"observed", dag.is_observed(NodeId(i))}});
    }
    json edges = json::array();
    for (const Edge& e : dag.edges()) edges.push_back({e.parent.index(), e.child.index()});
    return json{{"nodes", nodes}, {"edges", edges}}.dump();
}

}  // namespace auxsel
