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

#include "auxsel/graph.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "auxsel/error.hpp"

namespace auxsel {

namespace {

std::string id_text(std::size_t v) { return std::to_string(v); }

}  // namespace

bool Dag::has_edge(NodeId parent, NodeId child) const {
    const auto& kids = m_children[parent.index()];
    return std::binary_search(kids.begin(), kids.end(), child);
}

std::optional<NodeId> Dag::find(std::string_view label) const {
    for (std::size_t i = 0; i < m_labels.size(); ++i) {
        if (m_labels[i] == label) return NodeId(i);
    }
    return std::nullopt;
}

NodeId Dag::at(std::string_view label) const {
    if (auto id = find(label)) return *id;
    throw Error(ErrorCode::InvalidArgument, "unknown node label '" + std::string(label) + "'");
}

NodeSet Dag::observed() const {
    NodeSet out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (m_observed[i]) out.insert(NodeId(i));
    }
    return out;
}

NodeSet Dag::unobserved() const {
    NodeSet out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!m_observed[i]) out.insert(NodeId(i));
    }
    return out;
}

Dag build_dag(std::size_t n, std::span<const Edge> edges, const NodeSet& observed,
              std::vector<std::string> labels) {
    Dag dag;
    if (labels.empty()) {
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) labels.push_back("z" + std::to_string(i + 1));
    }
    if (labels.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(n) + " labels, got " +
                                                    std::to_string(labels.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw Error(ErrorCode::InvalidArgument, "empty node label");
        if (!seen.insert(l).second) throw Error(ErrorCode::DuplicateLabel, "label '" + l + "'");
    }

    dag.m_labels = std::move(labels);
    dag.m_observed.assign(n, false);
    for (NodeId v : observed) {
        if (v.index() >= n) throw Error(ErrorCode::InvalidId, "observed node " + id_text(v.index()));
        dag.m_observed[v.index()] = true;
    }

    dag.m_parents.resize(n);
    dag.m_children.resize(n);
    for (const Edge& e : edges) {
        if (e.parent.index() >= n || e.child.index() >= n) {
            throw Error(ErrorCode::InvalidId, "edge (" + id_text(e.parent.index()) + "," +
                                                  id_text(e.child.index()) + ")");
        }
        if (e.parent == e.child) throw Error(ErrorCode::SelfLoop, "node " + id_text(e.parent.index()));
        dag.m_edges.push_back(e);
    }
    std::sort(dag.m_edges.begin(), dag.m_edges.end());
    if (auto dup = std::adjacent_find(dag.m_edges.begin(), dag.m_edges.end());
        dup != dag.m_edges.end()) {
        throw Error(ErrorCode::DuplicateEdge, "edge (" + id_text(dup->parent.index()) + "," +
                                                  id_text(dup->child.index()) + ")");
    }
    for (const Edge& e : dag.m_edges) {
        dag.m_parents[e.child.index()].push_back(e.parent);
        dag.m_children[e.parent.index()].push_back(e.child);
    }
    for (auto& p : dag.m_parents) std::sort(p.begin(), p.end());

    // Kahn pass doubles as the cycle check.
    std::vector<std::size_t> indegree(n);
    for (std::size_t v = 0; v < n; ++v) indegree[v] = dag.m_parents[v].size();
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    std::vector<NodeId> order;
    while (!ready.empty()) {
        std::size_t v = ready.back();
        ready.pop_back();
        order.emplace_back(v);
        for (NodeId c : dag.m_children[v]) {
            if (--indegree[c.index()] == 0) ready.push_back(c.index());
        }
    }
    if (order.size() != n) {
        throw Error(ErrorCode::CycleDetected, "edge set contains a directed cycle");
    }

    // Descendant closure, built in reverse topological order.
    dag.m_descendants.resize(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::vector<bool> mark(n, false);
        for (NodeId c : dag.m_children[it->index()]) {
            mark[c.index()] = true;
            for (NodeId d : dag.m_descendants[c.index()]) mark[d.index()] = true;
        }
        auto& desc = dag.m_descendants[it->index()];
        for (std::size_t v = 0; v < n; ++v) {
            if (mark[v]) desc.emplace_back(v);
        }
    }
    return dag;
}

std::vector<NodeId> topological_order(const Dag& dag) {
    const std::size_t n = dag.size();
    std::vector<std::size_t> indegree(n);
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v) {
        indegree[v] = dag.parents(NodeId(v)).size();
        if (indegree[v] == 0) ready.push(v);
    }
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        std::size_t v = ready.top();
        ready.pop();
        order.emplace_back(v);
        for (NodeId c : dag.children(NodeId(v))) {
            if (--indegree[c.index()] == 0) ready.push(c.index());
        }
    }
    return order;
}

namespace {

struct Step {
    NodeId node;
    bool forward;  // true when the edge into `node` along the path points at `node`
};

class RoleWalker {
public:
    RoleWalker(const Dag& dag, NodeRoles& roles)
        : m_dag(dag), m_roles(roles), m_on_path(dag.size(), false) {}

    void run_from(NodeId source) {
        m_source = source;
        m_path.assign(1, Step{source, false});
        m_on_path[source.index()] = true;
        extend();
        m_on_path[source.index()] = false;
    }

private:
    void extend() {
        const NodeId tail = m_path.back().node;
        for (NodeId c : m_dag.children(tail)) visit(c, true);
        for (NodeId p : m_dag.parents(tail)) visit(p, false);
    }

    void visit(NodeId next, bool forward) {
        if (m_on_path[next.index()]) return;
        m_path.push_back(Step{next, forward});
        m_on_path[next.index()] = true;
        // Each unordered endpoint pair is seen from both ends; marking from the
        // smaller one is enough since roles are direction-free.
        if (!m_dag.is_observed(next) && m_source < next) mark_interior();
        extend();
        m_on_path[next.index()] = false;
        m_path.pop_back();
    }

    void mark_interior() {
        for (std::size_t k = 1; k + 1 < m_path.size(); ++k) {
            const bool into_from_left = m_path[k].forward;
            const bool into_from_right = !m_path[k + 1].forward;
            auto& role = m_roles[m_path[k].node.index()];
            if (into_from_left && into_from_right) {
                role.collider = true;
            } else {
                role.non_collider = true;
            }
        }
    }

    const Dag& m_dag;
    NodeRoles& m_roles;
    std::vector<bool> m_on_path;
    std::vector<Step> m_path;
    NodeId m_source;
};

}  // namespace

NodeRoles classify_roles(const Dag& dag) {
    if (dag.size() > kMaxEnumerationNodes) {
        throw Error(ErrorCode::GraphTooLarge, std::to_string(dag.size()) + " nodes exceeds the limit of " +
                                                  std::to_string(kMaxEnumerationNodes));
    }
    NodeRoles roles(dag.size());
    RoleWalker walker(dag, roles);
    for (NodeId s : dag.unobserved()) walker.run_from(s);
    return roles;
}

std::vector<std::string> labels_of(const Dag& dag, const NodeSet& nodes) {
    std::vector<std::string> out;
    out.reserve(nodes.size());
    for (NodeId v : nodes) out.push_back(dag.label(v));
    return out;
}

}  // namespace auxsel
