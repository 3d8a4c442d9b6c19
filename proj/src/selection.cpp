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

#include "auxsel/selection.hpp"

#include <json.hpp>

#include "auxsel/error.hpp"

namespace auxsel {

using json = nlohmann::ordered_json;

namespace {

inline constexpr std::size_t kMaxCandidates = 20;

struct Candidates {
    NodeSet kept;
    NodeSet pruned;
    NodeSet confounder_only;
};

Candidates candidate_set(const Dag& dag, const SelectOptions& options) {
    const NodeSet observed = dag.observed();
    if (observed.empty()) {
        throw Error(ErrorCode::NoObservedSources, "graph has no observed nodes to condition on");
    }
    Candidates c;
    if (!options.prune) {
        c.kept = observed;
    } else {
        const NodeRoles roles = classify_roles(dag);
        for (NodeId v : observed) {
            const RoleSet& r = roles[v.index()];
            if (r.only_collider()) {
                c.pruned.insert(v);
            } else {
                c.kept.insert(v);
            }
            if (r.only_non_collider()) c.confounder_only.insert(v);
        }
    }
    if (c.kept.empty()) {
        throw Error(ErrorCode::NoCandidates, "every observed node acts only as a collider");
    }
    if (c.kept.size() > kMaxCandidates) {
        throw Error(ErrorCode::GraphTooLarge, std::to_string(c.kept.size()) +
                                                  " candidates exceeds the limit of " +
                                                  std::to_string(kMaxCandidates));
    }
    return c;
}

/// Calls `fn` on every nonempty subset, by size then lexicographically.
template <typename Fn>
void for_each_subset(const NodeSet& pool, Fn&& fn) {
    const std::vector<NodeId> items(pool.begin(), pool.end());
    const std::size_t m = items.size();
    for (std::size_t k = 1; k <= m; ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            NodeSet subset;
            for (std::size_t i : idx) subset.insert(items[i]);
            fn(subset);
            // Advance to the next k-combination.
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == m - k + (i - 1)) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

std::vector<SubsetScore> enumerate_subsets(const Dag& dag, const SelectOptions& options) {
    const Candidates c = candidate_set(dag, options);
    std::vector<SubsetScore> table;
    for_each_subset(c.kept, [&](const NodeSet& subset) {
        table.push_back(SubsetScore{subset, partition(dag, subset).groups.size()});
    });
    return table;
}

SelectionReport select(const Dag& dag, const SelectOptions& options) {
    const Candidates c = candidate_set(dag, options);
    SelectionReport report;
    report.candidates = c.kept;
    report.pruned = c.pruned;
    report.initial_incumbent = c.confounder_only;

    // Canonical enumeration order means a later subset only displaces the
    // incumbent with a strictly larger group count.
    bool have_best = false;
    for_each_subset(c.kept, [&](const NodeSet& subset) {
        LatentPartition p = partition(dag, subset);
        const std::size_t count = p.groups.size();
        report.table.push_back(SubsetScore{subset, count});
        if (!have_best || count > report.group_count) {
            have_best = true;
            report.chosen = subset;
            report.group_count = count;
            report.partition = std::move(p);
        }
    });
    report.candidates_evaluated = report.table.size();
    return report;
}

std::string selection_to_json(const Dag& dag, const SelectionReport& report, bool explain) {
    json groups = json::array();
    for (const auto& g : report.partition.groups) {
        json labels = json::array();
        for (NodeId v : g) labels.push_back(dag.label(v));
        groups.push_back(labels);
    }
    json out;
    out["chosen"] = labels_of(dag, report.chosen);
    out["groups"] = groups;
    out["group_count"] = report.group_count;
    if (explain) {
        out["candidates"] = labels_of(dag, report.candidates);
        out["pruned"] = labels_of(dag, report.pruned);
        out["initial_incumbent"] = labels_of(dag, report.initial_incumbent);
        json table = json::array();
        for (const auto& row : report.table) {
            table.push_back({{"subset", labels_of(dag, row.subset)}, {"group_count", row.group_count}});
        }
        out["subsets"] = table;
    }
    return out.dump();
}

}  // namespace auxsel
