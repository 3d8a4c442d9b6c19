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

#include "auxsel/dseparation.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <json.hpp>

#include "auxsel/error.hpp"

namespace auxsel {

using json = nlohmann::ordered_json;

namespace {

void require_valid(const Dag& dag, const NodeSet& s, std::string_view what) {
    for (NodeId v : s) {
        if (!dag.contains(v)) {
            throw Error(ErrorCode::InvalidId, std::string(what) + " node " + std::to_string(v.index()));
        }
    }
}

bool intersects(const NodeSet& a, const NodeSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            return true;
        }
    }
    return false;
}

std::vector<bool> mask_of(const Dag& dag, const NodeSet& s) {
    std::vector<bool> mask(dag.size(), false);
    for (NodeId v : s) mask[v.index()] = true;
    return mask;
}

enum class Direction { Up, Down };

}  // namespace

NodeSet d_connected(const Dag& dag, const NodeSet& sources, const NodeSet& conditioning) {
    require_valid(dag, sources, "source");
    require_valid(dag, conditioning, "conditioning");
    const auto in_cond = mask_of(dag, conditioning);
    const auto opens_collider = [&](NodeId v) {
        if (in_cond[v.index()]) return true;
        for (NodeId d : dag.descendants(v)) {
            if (in_cond[d.index()]) return true;
        }
        return false;
    };

    // visited[v][0]: arrived travelling up (from a child), [1]: travelling down.
    std::vector<std::array<bool, 2>> visited(dag.size(), {false, false});
    std::vector<bool> reached(dag.size(), false);
    std::deque<std::pair<NodeId, Direction>> queue;
    for (NodeId s : sources) queue.emplace_back(s, Direction::Up);

    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        auto& seen = visited[v.index()][dir == Direction::Up ? 0 : 1];
        if (seen) continue;
        seen = true;

        const bool conditioned = in_cond[v.index()];
        if (!conditioned) reached[v.index()] = true;

        if (dir == Direction::Up) {
            if (conditioned) continue;
            for (NodeId p : dag.parents(v)) queue.emplace_back(p, Direction::Up);
            for (NodeId c : dag.children(v)) queue.emplace_back(c, Direction::Down);
        } else {
            if (!conditioned) {
                for (NodeId c : dag.children(v)) queue.emplace_back(c, Direction::Down);
            }
            if (opens_collider(v)) {
                for (NodeId p : dag.parents(v)) queue.emplace_back(p, Direction::Up);
            }
        }
    }

    NodeSet out;
    for (std::size_t i = 0; i < dag.size(); ++i) {
        if (reached[i]) out.insert(NodeId(i));
    }
    return out;
}

ReachabilityResult bayes_ball(const Dag& dag, const NodeSet& sources, const NodeSet& conditioning) {
    if (intersects(sources, conditioning)) {
        throw Error(ErrorCode::OverlappingSets, "sources and conditioning set intersect");
    }
    ReachabilityResult result{sources, conditioning, {}};
    for (NodeId v : d_connected(dag, sources, conditioning)) {
        if (!dag.is_observed(v)) result.reached.insert(v);
    }
    return result;
}

namespace {

void check_query_sets(const NodeSet& a, const NodeSet& b, const NodeSet& conditioning) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::InvalidArgument, "d-separation needs two nonempty node sets");
    }
    if (intersects(a, b) || intersects(a, conditioning) || intersects(b, conditioning)) {
        throw Error(ErrorCode::OverlappingSets, "query sets must be pairwise disjoint");
    }
}

}  // namespace

bool d_separated(const Dag& dag, const NodeSet& a, const NodeSet& b, const NodeSet& conditioning) {
    check_query_sets(a, b, conditioning);
    return !intersects(d_connected(dag, a, conditioning), b);
}

namespace {

class PathOracle {
public:
    PathOracle(const Dag& dag, const NodeSet& conditioning)
        : m_dag(dag), m_cond(mask_of(dag, conditioning)), m_on_path(dag.size(), false) {
        // Ancestors of the conditioning set (inclusive), found by walking parent
        // links so nothing is shared with the descendant closure on Dag.
        m_opens.assign(dag.size(), false);
        std::vector<NodeId> stack(conditioning.begin(), conditioning.end());
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            if (m_opens[v.index()]) continue;
            m_opens[v.index()] = true;
            for (NodeId p : dag.parents(v)) stack.push_back(p);
        }
    }

    bool any_active_path(NodeId from, const std::vector<bool>& targets) {
        m_targets = &targets;
        m_path.assign(1, {from, false});
        m_on_path.assign(m_dag.size(), false);
        m_on_path[from.index()] = true;
        return extend();
    }

private:
    struct Step {
        NodeId node;
        bool forward;
    };

    bool extend() {
        const NodeId tail = m_path.back().node;
        for (NodeId c : m_dag.children(tail)) {
            if (visit(c, true)) return true;
        }
        for (NodeId p : m_dag.parents(tail)) {
            if (visit(p, false)) return true;
        }
        return false;
    }

    bool visit(NodeId next, bool forward) {
        if (m_on_path[next.index()]) return false;
        m_path.push_back({next, forward});
        m_on_path[next.index()] = true;
        bool found = false;
        // Interior status of the previous tail is settled now that `next` is known.
        if (interior_ok(m_path.size() - 2)) {
            found = (*m_targets)[next.index()] || extend();
        }
        m_on_path[next.index()] = false;
        m_path.pop_back();
        return found;
    }

    bool interior_ok(std::size_t k) const {
        if (k == 0) return true;
        const NodeId v = m_path[k].node;
        const bool collider = m_path[k].forward && !m_path[k + 1].forward;
        if (collider) return m_opens[v.index()];
        return !m_cond[v.index()];
    }

    const Dag& m_dag;
    std::vector<bool> m_cond;
    std::vector<bool> m_opens;
    std::vector<bool> m_on_path;
    std::vector<Step> m_path;
    const std::vector<bool>* m_targets = nullptr;
};

}  // namespace

bool d_separated_oracle(const Dag& dag, const NodeSet& a, const NodeSet& b,
                        const NodeSet& conditioning) {
    require_valid(dag, a, "query");
    require_valid(dag, b, "query");
    require_valid(dag, conditioning, "conditioning");
    check_query_sets(a, b, conditioning);
    if (dag.size() > kMaxEnumerationNodes) {
        throw Error(ErrorCode::GraphTooLarge, std::to_string(dag.size()) + " nodes exceeds the limit of " +
                                                  std::to_string(kMaxEnumerationNodes));
    }
    PathOracle oracle(dag, conditioning);
    const auto targets = mask_of(dag, b);
    for (NodeId s : a) {
        if (oracle.any_active_path(s, targets)) return false;
    }
    return true;
}

LatentPartition partition(const Dag& dag, const NodeSet& conditioning) {
    require_valid(dag, conditioning, "conditioning");
    for (NodeId v : conditioning) {
        if (!dag.is_observed(v)) {
            throw Error(ErrorCode::NotObserved, "conditioning node '" + dag.label(v) + "' is not observed");
        }
    }
    LatentPartition p;
    p.conditioning = conditioning;
    for (NodeId v : dag.observed()) {
        if (!conditioning.contains(v)) p.unconditioned_observed.insert(v);
    }

    std::vector<bool> assigned(dag.size(), false);
    for (NodeId seed : dag.unobserved()) {
        if (assigned[seed.index()]) continue;
        // d-connection is not transitive; grow the source set to a fixpoint so
        // the group is a connected component of the pairwise relation.
        NodeSet group{seed};
        while (true) {
            NodeSet reached = bayes_ball(dag, group, conditioning).reached;
            if (reached.size() == group.size()) break;
            group = std::move(reached);
        }
        for (NodeId v : group) assigned[v.index()] = true;
        p.groups.emplace_back(group.begin(), group.end());
    }
    return p;
}

std::string partition_to_json(const Dag& dag, const LatentPartition& p) {
    json groups = json::array();
    for (const auto& g : p.groups) {
        json labels = json::array();
        for (NodeId v : g) labels.push_back(dag.label(v));
        groups.push_back(labels);
    }
    return json{{"conditioning", labels_of(dag, p.conditioning)}, {"groups", groups}}.dump();
}

LatentPartition parse_partition_json(const Dag& dag, std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("conditioning") || !doc.contains("groups") ||
        !doc["conditioning"].is_array() || !doc["groups"].is_array()) {
        throw Error(ErrorCode::ParseError, "partition needs 'conditioning' and 'groups' arrays");
    }
    for (const auto& [key, _] : doc.items()) {
        if (key != "conditioning" && key != "groups") {
            throw Error(ErrorCode::ParseError, "unknown key '" + key + "' in partition");
        }
    }
    const auto resolve = [&](const json& v) {
        if (!v.is_string()) throw Error(ErrorCode::ParseError, "partition entries must be labels");
        return dag.at(v.get<std::string>());
    };

    LatentPartition p;
    for (const auto& v : doc["conditioning"]) p.conditioning.insert(resolve(v));
    for (NodeId v : p.conditioning) {
        if (!dag.is_observed(v)) {
            throw Error(ErrorCode::NotObserved, "conditioning node '" + dag.label(v) + "' is not observed");
        }
    }
    for (NodeId v : dag.observed()) {
        if (!p.conditioning.contains(v)) p.unconditioned_observed.insert(v);
    }

    std::vector<bool> used(dag.size(), false);
    for (const auto& g : doc["groups"]) {
        if (!g.is_array() || g.empty()) throw Error(ErrorCode::ParseError, "groups must be nonempty arrays");
        NodeSet members;
        for (const auto& v : g) {
            NodeId id = resolve(v);
            if (dag.is_observed(id) || used[id.index()]) {
                throw Error(ErrorCode::InvalidArgument,
                            "groups must be a disjoint cover of the unobserved nodes ('" + dag.label(id) + "')");
            }
            used[id.index()] = true;
            members.insert(id);
        }
        p.groups.emplace_back(members.begin(), members.end());
    }
    for (NodeId v : dag.unobserved()) {
        if (!used[v.index()]) {
            throw Error(ErrorCode::InvalidArgument, "unobserved node '" + dag.label(v) + "' is in no group");
        }
    }
    std::sort(p.groups.begin(), p.groups.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return p;
}

}  // namespace auxsel
