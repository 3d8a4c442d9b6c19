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

#ifndef AUXSEL_SELECTION_HPP
#define AUXSEL_SELECTION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "auxsel/dseparation.hpp"
#include "auxsel/graph.hpp"

namespace auxsel {

struct SubsetScore {
    NodeSet subset;
    std::size_t group_count = 0;
    friend bool operator==(const SubsetScore&, const SubsetScore&) = default;
};

struct SelectOptions {
    /// Drop observed nodes whose only role is collider before enumerating.
    bool prune = true;
};

struct SelectionReport {
    NodeSet chosen;
    LatentPartition partition;
    std::size_t group_count = 0;
    std::size_t candidates_evaluated = 0;
    /// Observed nodes surviving the pruning step.
    NodeSet candidates;
    /// Observed nodes removed as collider-only.
    NodeSet pruned;
    /// Observed nodes acting only as non-colliders; the starting incumbent.
    NodeSet initial_incumbent;
    /// Every nonempty candidate subset, by size then lexicographically.
    std::vector<SubsetScore> table;

    friend bool operator==(const SelectionReport&, const SelectionReport&) = default;
};

/// Largest group count wins; ties go to the smaller subset, then the
/// lexicographically smaller one. The empty subset is never scored.
/// Throws NoObservedSources, NoCandidates, or GraphTooLarge (> 20 candidates).
SelectionReport select(const Dag& dag, const SelectOptions& options = {});

/// Subset table only; same ordering and errors as select().
std::vector<SubsetScore> enumerate_subsets(const Dag& dag, const SelectOptions& options = {});

/// `{"chosen":[...],"groups":[[...]],"group_count":d}`, plus the candidate and
/// per-subset breakdown when `explain` is set.
std::string selection_to_json(const Dag& dag, const SelectionReport& report, bool explain);

}  // namespace auxsel

#endif  // AUXSEL_SELECTION_HPP
