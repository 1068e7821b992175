#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

// A two-sided preference system over a bipartite multigraph. Edges carry one
// strict rank key per endpoint (lower is better; keys are strict per vertex)
// and a class tag grouping parallel copies of the same underlying edge: a
// matching uses at most one edge per class. color and base_ref are payload
// for callers; the engine never reads them.
struct SystemEdge {
    int left = -1, right = -1;
    int class_tag = -1;
    std::int64_t left_key = 0, right_key = 0;
    int color = 0;
    int base_ref = -1;
};

struct PreferenceSystem {
    std::vector<int> left_caps, right_caps;
    std::vector<SystemEdge> edges; // document order; edge id = index

    int num_left() const { return static_cast<int>(left_caps.size()); }
    int num_right() const { return static_cast<int>(right_caps.size()); }
};

// Checks endpoint bounds, capacity positivity and per-vertex key strictness.
void validate_system(const PreferenceSystem& sys);

// Edge ids, sorted. Build via make_system_matching to get the invariants
// (ids valid and unique, capacities respected, one edge per class) checked.
using SystemMatching = std::vector<int>;

SystemMatching make_system_matching(const PreferenceSystem& sys, std::vector<int> edge_ids);

// e blocks m iff e is not in m and each endpoint either has spare capacity
// or prefers e to the worst edge it holds in m.
bool is_blocking(const PreferenceSystem& sys, const SystemMatching& m, int edge_id);

// First blocking edge in document order among eligible edges (not in m, class
// unused by m), or nullopt if m is stable.
std::optional<int> find_blocking_edge(const PreferenceSystem& sys, const SystemMatching& m);

inline bool is_stable(const PreferenceSystem& sys, const SystemMatching& m) {
    return !find_blocking_edge(sys, m).has_value();
}

// Proposal-rejection fixpoint: every left vertex proposes its best selection
// (greedy by key, one per class, up to capacity) among never-rejected edges;
// every right vertex keeps its best subset of the proposals the same way and
// permanently rejects the rest; repeat until nothing is rejected. The result
// is stable and deterministic.
SystemMatching deferred_acceptance(const PreferenceSystem& sys);

} // namespace popmatch
