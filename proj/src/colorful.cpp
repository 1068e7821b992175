#include "popmatch/colorful.hpp"

#include <algorithm>

#include "popmatch/errors.hpp"

namespace popmatch {

ColorfulSystem ColorfulSystem::over_instance(const Instance& inst) {
    ColorfulSystem cs;
    cs.n_colors_ = static_cast<int>(inst.total_agent_capacity());
    internal_check(cs.n_colors_ <= inst.num_agents() * inst.num_jobs(),
                   "color count exceeds the edge bound");
    cs.stride_ = std::max(inst.num_agents(), inst.num_jobs()) + 1;
    for (int a = 0; a < inst.num_agents(); ++a) cs.left_caps_.push_back(inst.agent_capacity(a));
    for (int j = 0; j < inst.num_jobs(); ++j) cs.right_caps_.push_back(inst.job_capacity(j));
    for (int be = 0; be < static_cast<int>(inst.edges().size()); ++be) {
        const Edge& e = inst.edges()[be];
        cs.base_edges_.push_back(
            {e.agent, e.job, inst.agent_rank(e.agent, e.job), inst.job_rank(e.job, e.agent), be});
    }
    return cs;
}

ColorfulSystem ColorfulSystem::over_subgraph(const SubgraphGM& g) {
    const ClonedInstance& ci = g.clones();
    ColorfulSystem cs;
    cs.n_colors_ = ci.num_agent_clones();
    cs.stride_ = std::max(ci.num_agent_clones(), ci.num_job_clones()) + 1;
    cs.left_caps_.assign(ci.num_agent_clones(), 1);
    cs.right_caps_.assign(ci.num_job_clones(), 1);
    for (const auto& se : g.edges()) {
        cs.base_edges_.push_back({se.e.agent_clone, se.e.job_clone,
                                  ci.agent_rank(se.e.agent_clone, se.e.job_clone),
                                  ci.job_rank(se.e.job_clone, se.e.agent_clone), se.base_edge});
    }
    return cs;
}

PreferenceSystem ColorfulSystem::to_system() const {
    PreferenceSystem sys;
    sys.left_caps = left_caps_;
    sys.right_caps = right_caps_;
    for (int be = 0; be < static_cast<int>(base_edges_.size()); ++be) {
        for (int c = 1; c <= n_colors_; ++c) {
            SystemEdge e;
            e.left = base_edges_[be].left;
            e.right = base_edges_[be].right;
            e.class_tag = be;
            e.left_key = left_key(be, c);
            e.right_key = right_key(be, c);
            e.color = c;
            e.base_ref = be;
            sys.edges.push_back(e);
        }
    }
    return sys;
}

ColorfulMatching colorful_from_system(const ColorfulSystem& cs, const SystemMatching& m) {
    ColorfulMatching out;
    for (int id : m) {
        int be = id / cs.colors(), c = id % cs.colors() + 1;
        out.push_back({cs.base_edges()[be].left, cs.base_edges()[be].right, c});
    }
    std::sort(out.begin(), out.end());
    return out;
}

SystemMatching colorful_to_system(const ColorfulSystem& cs, const ColorfulMatching& m) {
    SystemMatching ids;
    for (const ColoredEdge& e : m) {
        if (e.color < 1 || e.color > cs.colors())
            throw ValidationError("color out of range 1..n0");
        int be = -1;
        for (int i = 0; i < static_cast<int>(cs.base_edges().size()); ++i)
            if (cs.base_edges()[i].left == e.left && cs.base_edges()[i].right == e.right) {
                be = i;
                break;
            }
        if (be < 0) throw ValidationError("colored edge over an absent base edge");
        ids.push_back(be * cs.colors() + e.color - 1);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

Matching project(const Instance& inst, const ColorfulMatching& m) {
    std::vector<Edge> edges;
    for (const ColoredEdge& e : m) edges.push_back({e.left, e.right});
    return make_matching(inst, std::move(edges));
}

namespace {

// Tracks, per vertex, the worst (largest) key among currently colored edges.
// Final worsts can only be larger, so a copy both endpoints already rank
// above their current worst blocks every completion.
class WorstTracker {
public:
    explicit WorstTracker(int n) : count_(n, 0), worst_(n) {}

    void push(int v, std::int64_t key) {
        auto& stack = worst_[v];
        stack.push_back(stack.empty() ? key : std::max(stack.back(), key));
        ++count_[v];
    }
    void pop(int v) {
        worst_[v].pop_back();
        --count_[v];
    }
    bool any(int v) const { return count_[v] > 0; }
    std::int64_t worst(int v) const { return worst_[v].back(); }

private:
    std::vector<int> count_;
    std::vector<std::vector<std::int64_t>> worst_;
};

} // namespace

std::optional<ColorfulMatching> lift_to_stable(const Instance& inst, const PerfectMatching& m) {
    ColorfulSystem cs = ColorfulSystem::over_instance(inst);
    const int n0 = cs.colors();
    const auto& edges = m.matching.edges; // sorted by document index

    std::vector<char> in_m(inst.edges().size(), 0);
    for (const Edge& e : edges) in_m[inst.edge_index(e.agent, e.job)] = 1;

    // Non-matching base edges incident to each vertex; only these can block.
    std::vector<std::vector<int>> open_at_agent(inst.num_agents()),
        open_at_job(inst.num_jobs());
    for (int be = 0; be < static_cast<int>(inst.edges().size()); ++be)
        if (!in_m[be]) {
            open_at_agent[inst.edges()[be].agent].push_back(be);
            open_at_job[inst.edges()[be].job].push_back(be);
        }

    WorstTracker agents(inst.num_agents()), jobs(inst.num_jobs());

    // True iff some color of base edge f must block every completion of the
    // current partial coloring: a color both endpoints already rank above
    // their current (hence also above their final) worst edge.
    auto forced_blocker = [&](int f) {
        const auto& b = cs.base_edges()[f];
        if (!agents.any(b.left) || !jobs.any(b.right)) return false;
        // Agent side admits colors d with (d-1)*stride + left_rank < worst.
        std::int64_t room_a = agents.worst(b.left) - 1 - b.left_rank;
        if (room_a < 0) return false;
        std::int64_t d_max = 1 + room_a / cs.stride();
        // Job side admits colors d with (n0-d)*stride + right_rank < worst.
        std::int64_t room_j = jobs.worst(b.right) - 1 - b.right_rank;
        if (room_j < 0) return false;
        std::int64_t d_min = n0 - room_j / cs.stride();
        return std::max<std::int64_t>(1, d_min) <= std::min<std::int64_t>(n0, d_max);
    };

    std::vector<int> colors(edges.size(), 0);
    ColorfulMatching found;

    auto dfs = [&](auto&& self, std::size_t i) -> bool {
        if (i == edges.size()) return true;
        const Edge& e = edges[i];
        const int be = inst.edge_index(e.agent, e.job);
        for (int c = 1; c <= n0; ++c) {
            agents.push(e.agent, cs.left_key(be, c));
            jobs.push(e.job, cs.right_key(be, c));
            bool dead = false;
            for (int f : open_at_agent[e.agent])
                if (forced_blocker(f)) {
                    dead = true;
                    break;
                }
            if (!dead)
                for (int f : open_at_job[e.job])
                    if (forced_blocker(f)) {
                        dead = true;
                        break;
                    }
            if (!dead) {
                colors[i] = c;
                if (self(self, i + 1)) return true;
            }
            agents.pop(e.agent);
            jobs.pop(e.job);
        }
        return false;
    };

    if (!dfs(dfs, 0)) return std::nullopt;

    for (std::size_t i = 0; i < edges.size(); ++i)
        found.push_back({edges[i].agent, edges[i].job, colors[i]});
    std::sort(found.begin(), found.end());

    // The search logic above must agree with the engine; a mismatch is a bug.
    PreferenceSystem sys = cs.to_system();
    internal_check(is_stable(sys, colorful_to_system(cs, found)),
                   "lifted coloring failed the stability engine check");
    return found;
}

ColorfulRealization realize_colorful(const ClonedInstance& ci, const Instance& inst,
                                     const ColorfulMatching& m) {
    std::vector<std::vector<int>> by_agent(inst.num_agents()), by_job(inst.num_jobs());
    for (const ColoredEdge& e : m) {
        by_agent[e.left].push_back(e.right);
        by_job[e.right].push_back(e.left);
    }
    for (int a = 0; a < inst.num_agents(); ++a)
        std::sort(by_agent[a].begin(), by_agent[a].end(),
                  [&](int x, int y) { return inst.agent_rank(a, x) < inst.agent_rank(a, y); });
    for (int j = 0; j < inst.num_jobs(); ++j)
        std::sort(by_job[j].begin(), by_job[j].end(),
                  [&](int x, int y) { return inst.job_rank(j, x) < inst.job_rank(j, y); });

    ColorfulRealization out;
    for (const ColoredEdge& e : m) {
        auto& ap = by_agent[e.left];
        auto& jp = by_job[e.right];
        int acopy =
            1 + static_cast<int>(std::find(ap.begin(), ap.end(), e.right) - ap.begin());
        int jcopy = 1 + static_cast<int>(std::find(jp.begin(), jp.end(), e.left) - jp.begin());
        CloneEdge ce{ci.agent_clone(e.left, acopy), ci.job_clone(e.right, jcopy)};
        out.realization.edges.push_back(ce);
        out.clone_edges.push_back({ce.agent_clone, ce.job_clone, e.color});
    }
    std::sort(out.realization.edges.begin(), out.realization.edges.end());
    std::sort(out.clone_edges.begin(), out.clone_edges.end());
    return out;
}

} // namespace popmatch
