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

#ifndef AUXSEL_GRAPH_HPP
#define AUXSEL_GRAPH_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace auxsel {

/// Dense node index into a Dag.
struct NodeId {
    std::uint32_t value = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

    constexpr std::size_t index() const { return value; }
    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

using NodeSet = std::set<NodeId>;

struct Edge {
    NodeId parent;
    NodeId child;
    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Exhaustive path enumeration (role classification, the d-separation oracle)
/// refuses graphs above this size.
inline constexpr std::size_t kMaxEnumerationNodes = 20;

class Dag {
public:
    std::size_t size() const { return m_labels.size(); }

    std::span<const NodeId> parents(NodeId v) const { return m_parents[v.index()]; }
    std::span<const NodeId> children(NodeId v) const { return m_children[v.index()]; }
    /// Strict descendants of v, ascending.
    std::span<const NodeId> descendants(NodeId v) const { return m_descendants[v.index()]; }

    bool has_edge(NodeId parent, NodeId child) const;
    const std::vector<Edge>& edges() const { return m_edges; }

    const std::string& label(NodeId v) const { return m_labels[v.index()]; }
    const std::vector<std::string>& labels() const { return m_labels; }
    std::optional<NodeId> find(std::string_view label) const;
    /// Throws InvalidArgument for an unknown label.
    NodeId at(std::string_view label) const;

    bool is_observed(NodeId v) const { return m_observed[v.index()]; }
    NodeSet observed() const;
    NodeSet unobserved() const;

    bool contains(NodeId v) const { return v.index() < size(); }

    friend Dag build_dag(std::size_t n, std::span<const Edge> edges, const NodeSet& observed,
                         std::vector<std::string> labels);

private:
    Dag() = default;

    std::vector<std::string> m_labels;
    std::vector<bool> m_observed;
    std::vector<Edge> m_edges;
    std::vector<std::vector<NodeId>> m_parents;
    std::vector<std::vector<NodeId>> m_children;
    std::vector<std::vector<NodeId>> m_descendants;
};

/// Validates and builds a DAG. Empty `labels` defaults to "z1".."zn".
/// Throws Error with CycleDetected, InvalidId, SelfLoop, DuplicateEdge or DuplicateLabel.
Dag build_dag(std::size_t n, std::span<const Edge> edges, const NodeSet& observed,
              std::vector<std::string> labels = {});

/// Kahn's algorithm, always releasing the smallest ready id first.
std::vector<NodeId> topological_order(const Dag& dag);

struct RoleSet {
    bool collider = false;
    bool non_collider = false;

    bool only_collider() const { return collider && !non_collider; }
    bool only_non_collider() const { return non_collider && !collider; }
    bool empty() const { return !collider && !non_collider; }
    friend bool operator==(const RoleSet&, const RoleSet&) = default;
};

/// Indexed by node id.
using NodeRoles = std::vector<RoleSet>;

/// Roles a node plays as an interior vertex of simple skeleton paths joining two
/// distinct unobserved nodes. Throws GraphTooLarge above kMaxEnumerationNodes.
NodeRoles classify_roles(const Dag& dag);

/// Labels of `nodes` in ascending id order.
std::vector<std::string> labels_of(const Dag& dag, const NodeSet& nodes);

}  // namespace auxsel

#endif  // AUXSEL_GRAPH_HPP
