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

#ifndef AUXSEL_DSEPARATION_HPP
#define AUXSEL_DSEPARATION_HPP

#include <string>
#include <string_view>
#include <vector>

#include "auxsel/graph.hpp"

namespace auxsel {

struct ReachabilityResult {
    NodeSet sources;
    NodeSet conditioning;
    /// d-connected to some source, with conditioned and observed nodes filtered out.
    NodeSet reached;
};

/// Unobserved nodes grouped by d-connection given `conditioning`.
struct LatentPartition {
    NodeSet conditioning;
    /// Observed nodes left out of the conditioning set.
    NodeSet unconditioned_observed;
    /// Each group ascending; groups ordered by their smallest member.
    std::vector<std::vector<NodeId>> groups;

    friend bool operator==(const LatentPartition&, const LatentPartition&) = default;
};

/// Every node d-connected to `sources` given `conditioning`, excluding the
/// conditioning set itself. Sources are included. Visits are tracked per
/// (node, direction).
NodeSet d_connected(const Dag& dag, const NodeSet& sources, const NodeSet& conditioning);

/// Bayes-ball reachability with the observed-node filter applied to the result.
/// Throws OverlappingSets when sources and conditioning intersect.
ReachabilityResult bayes_ball(const Dag& dag, const NodeSet& sources, const NodeSet& conditioning);

/// Throws OverlappingSets unless a, b and conditioning are pairwise disjoint,
/// InvalidArgument when a or b is empty.
bool d_separated(const Dag& dag, const NodeSet& a, const NodeSet& b, const NodeSet& conditioning);

/// Path-enumeration d-separation, sharing no code with the Bayes-ball route.
/// Throws GraphTooLarge above kMaxEnumerationNodes.
bool d_separated_oracle(const Dag& dag, const NodeSet& a, const NodeSet& b,
                        const NodeSet& conditioning);

/// Throws NotObserved if `conditioning` holds an unobserved node.
LatentPartition partition(const Dag& dag, const NodeSet& conditioning);

/// `{"conditioning":["z4"],"groups":[["z1"],["z3"]]}`
std::string partition_to_json(const Dag& dag, const LatentPartition& p);
/// Labels are resolved against `dag`. Groups must be a disjoint cover of the
/// unobserved nodes; they are returned in canonical order.
LatentPartition parse_partition_json(const Dag& dag, std::string_view text);

}  // namespace auxsel

#endif  // AUXSEL_DSEPARATION_HPP
