#include "popmatch/stability.hpp"

#include <algorithm>
#include <set>

#include "popmatch/errors.hpp"

namespace popmatch {

namespace {

// Incidence lists sorted best-first by the endpoint's key.
std::vector<std::vector<int>> sorted_incidence(const PreferenceSystem& sys, bool left) {
    std::vector<std::vector<int>> inc(left ? sys.num_left() : sys.num_right());
    for (int e = 0; e < static_cast<int>(sys.edges.size()); ++e)
        inc[left ? sys.edges[e].left : sys.edges[e].right].push_back(e);
    for (auto& list : inc)
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            auto key = [&](int e) { return left ? sys.edges[e].left_key : sys.edges[e].right_key; };
            return key(a) < key(b);
        });
    return inc;
}

} // namespace

void validate_system(const PreferenceSystem& sys) {
    for (int c : sys.left_caps)
        if (c < 1) throw ValidationError("system: capacities must be >= 1");
    for (int c : sys.right_caps)
        if (c < 1) throw ValidationError("system: capacities must be >= 1");
    std::set<std::pair<int, std::int64_t>> left_keys, right_keys;
    for (const SystemEdge& e : sys.edges) {
        if (e.left < 0 || e.left >= sys.num_left() || e.right < 0 || e.right >= sys.num_right())
            throw ValidationError("system: edge endpoint out of range");
        if (!left_keys.insert({e.left, e.left_key}).second ||
            !right_keys.insert({e.right, e.right_key}).second)
            throw ValidationError("system: rank keys must be strict per vertex");
    }
}

SystemMatching make_system_matching(const PreferenceSystem& sys, std::vector<int> edge_ids) {
    std::sort(edge_ids.begin(), edge_ids.end());
    std::vector<int> left_load(sys.num_left(), 0), right_load(sys.num_right(), 0);
    std::set<int> classes;
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
        int id = edge_ids[i];
        if (id < 0 || id >= static_cast<int>(sys.edges.size()))
            throw ValidationError("system matching: edge id out of range");
        if (i > 0 && edge_ids[i - 1] == id)
            throw ValidationError("system matching: edge listed twice");
        const SystemEdge& e = sys.edges[id];
        if (!classes.insert(e.class_tag).second)
            throw ValidationError("system matching: two edges share a class tag");
        if (++left_load[e.left] > sys.left_caps[e.left] ||
            ++right_load[e.right] > sys.right_caps[e.right])
            throw ValidationError("system matching: capacity exceeded");
    }
    return edge_ids;
}

namespace {

struct MatchState {
    std::vector<int> left_load, right_load;
    // Worst (largest) key currently held per vertex; meaningful only when the
    // vertex holds at least one edge.
    std::vector<std::int64_t> left_worst, right_worst;
    std::set<int> classes;
    std::vector<char> in_matching;

    MatchState(const PreferenceSystem& sys, const SystemMatching& m)
        : left_load(sys.num_left(), 0),
          right_load(sys.num_right(), 0),
          left_worst(sys.num_left(), 0),
          right_worst(sys.num_right(), 0),
          in_matching(sys.edges.size(), 0) {
        for (int id : m) {
            const SystemEdge& e = sys.edges[id];
            in_matching[id] = 1;
            classes.insert(e.class_tag);
            left_worst[e.left] = left_load[e.left]++ ? std::max(left_worst[e.left], e.left_key)
                                                     : e.left_key;
            right_worst[e.right] = right_load[e.right]++
                                       ? std::max(right_worst[e.right], e.right_key)
                                       : e.right_key;
        }
    }

    bool blocks(const PreferenceSystem& sys, int id) const {
        const SystemEdge& e = sys.edges[id];
        if (in_matching[id]) return false;
        bool left_wants =
            left_load[e.left] < sys.left_caps[e.left] || e.left_key < left_worst[e.left];
        bool right_wants =
            right_load[e.right] < sys.right_caps[e.right] || e.right_key < right_worst[e.right];
        return left_wants && right_wants;
    }
};

} // namespace

bool is_blocking(const PreferenceSystem& sys, const SystemMatching& m, int edge_id) {
    return MatchState(sys, m).blocks(sys, edge_id);
}

std::optional<int> find_blocking_edge(const PreferenceSystem& sys, const SystemMatching& m) {
    MatchState state(sys, m);
    for (int id = 0; id < static_cast<int>(sys.edges.size()); ++id) {
        if (state.classes.count(sys.edges[id].class_tag)) continue; // class taken: ineligible
        if (state.blocks(sys, id)) return id;
    }
    return std::nullopt;
}

SystemMatching deferred_acceptance(const PreferenceSystem& sys) {
    auto left_inc = sorted_incidence(sys, true);
    auto right_inc = sorted_incidence(sys, false);
    std::vector<char> rejected(sys.edges.size(), 0);

    while (true) {
        // Left pass: greedy best selection among never-rejected edges.
        std::vector<char> proposed(sys.edges.size(), 0);
        for (int v = 0; v < sys.num_left(); ++v) {
            int taken = 0;
            std::set<int> classes;
            for (int id : left_inc[v]) {
                if (taken == sys.left_caps[v]) break;
                if (rejected[id] || classes.count(sys.edges[id].class_tag)) continue;
                proposed[id] = 1;
                classes.insert(sys.edges[id].class_tag);
                ++taken;
            }
        }
        // Right pass: keep the greedy best subset of proposals, reject the rest.
        int rejections = 0;
        for (int v = 0; v < sys.num_right(); ++v) {
            int taken = 0;
            std::set<int> classes;
            for (int id : right_inc[v]) {
                if (!proposed[id]) continue;
                if (taken < sys.right_caps[v] && !classes.count(sys.edges[id].class_tag)) {
                    classes.insert(sys.edges[id].class_tag);
                    ++taken;
                } else {
                    rejected[id] = 1;
                    ++rejections;
                }
            }
        }
        if (rejections == 0) {
            SystemMatching out;
            for (int id = 0; id < static_cast<int>(sys.edges.size()); ++id)
                if (proposed[id]) out.push_back(id);
            return out;
        }
    }
}

} // namespace popmatch
