#include "popmatch/clone.hpp"

#include <algorithm>
#include <map>

#include "popmatch/errors.hpp"

namespace popmatch {

ClonedInstance ClonedInstance::build(const Instance& inst) {
    ClonedInstance ci;
    for (int a = 0; a < inst.num_agents(); ++a) {
        ci.agent_start_.push_back(ci.num_agent_clones());
        for (int copy = 1; copy <= inst.agent_capacity(a); ++copy) {
            ci.agent_base_.push_back(a);
            ci.agent_copy_.push_back(copy);
            ci.agent_names_.push_back(inst.agent_name(a) + "#" + std::to_string(copy));
        }
    }
    for (int j = 0; j < inst.num_jobs(); ++j) {
        ci.job_start_.push_back(ci.num_job_clones());
        for (int copy = 1; copy <= inst.job_capacity(j); ++copy) {
            ci.job_base_.push_back(j);
            ci.job_copy_.push_back(copy);
            ci.job_names_.push_back(inst.job_name(j) + "#" + std::to_string(copy));
        }
    }

    const int nac = ci.num_agent_clones(), njc = ci.num_job_clones();
    ci.agent_prefs_.resize(nac);
    ci.job_prefs_.resize(njc);
    for (int ac = 0; ac < nac; ++ac)
        for (int j : inst.agent_prefs(ci.agent_base_[ac]))
            for (int copy = 1; copy <= inst.job_capacity(j); ++copy)
                ci.agent_prefs_[ac].push_back(ci.job_clone(j, copy));
    for (int jc = 0; jc < njc; ++jc)
        for (int a : inst.job_prefs(ci.job_base_[jc]))
            for (int copy = 1; copy <= inst.agent_capacity(a); ++copy)
                ci.job_prefs_[jc].push_back(ci.agent_clone(a, copy));

    ci.agent_rank_.assign(nac, std::vector<int>(njc, -1));
    ci.job_rank_.assign(njc, std::vector<int>(nac, -1));
    for (int ac = 0; ac < nac; ++ac)
        for (int r = 0; r < static_cast<int>(ci.agent_prefs_[ac].size()); ++r)
            ci.agent_rank_[ac][ci.agent_prefs_[ac][r]] = r;
    for (int jc = 0; jc < njc; ++jc)
        for (int r = 0; r < static_cast<int>(ci.job_prefs_[jc].size()); ++r)
            ci.job_rank_[jc][ci.job_prefs_[jc][r]] = r;
    return ci;
}

Instance ClonedInstance::to_instance() const {
    InstanceData data;
    for (int ac = 0; ac < num_agent_clones(); ++ac) {
        InstanceData::Vertex v{agent_names_[ac], 1, {}};
        for (int jc : agent_prefs_[ac]) v.preferences.push_back(job_names_[jc]);
        data.agents.push_back(std::move(v));
    }
    for (int jc = 0; jc < num_job_clones(); ++jc) {
        InstanceData::Vertex v{job_names_[jc], 1, {}};
        for (int ac : job_prefs_[jc]) v.preferences.push_back(agent_names_[ac]);
        data.jobs.push_back(std::move(v));
    }
    return Instance::build(data);
}

Realization realize(const ClonedInstance& ci, const Instance& inst, const PerfectMatching& m) {
    auto by_agent = agent_partners(inst, m.matching);
    auto by_job = job_partners(inst, m.matching);
    for (int a = 0; a < inst.num_agents(); ++a)
        std::sort(by_agent[a].begin(), by_agent[a].end(),
                  [&](int x, int y) { return inst.agent_rank(a, x) < inst.agent_rank(a, y); });
    for (int j = 0; j < inst.num_jobs(); ++j)
        std::sort(by_job[j].begin(), by_job[j].end(),
                  [&](int x, int y) { return inst.job_rank(j, x) < inst.job_rank(j, y); });

    Realization r;
    for (const Edge& e : m.matching.edges) {
        auto& ap = by_agent[e.agent];
        auto& jp = by_job[e.job];
        int acopy = 1 + static_cast<int>(std::find(ap.begin(), ap.end(), e.job) - ap.begin());
        int jcopy = 1 + static_cast<int>(std::find(jp.begin(), jp.end(), e.agent) - jp.begin());
        r.edges.push_back({ci.agent_clone(e.agent, acopy), ci.job_clone(e.job, jcopy)});
    }
    std::sort(r.edges.begin(), r.edges.end());
    return r;
}

SubgraphGM SubgraphGM::build(const ClonedInstance& ci, const Instance& inst,
                             const Realization& r) {
    SubgraphGM g;
    g.ci_ = &ci;
    g.m_of_agent_.assign(ci.num_agent_clones(), -1);
    g.m_of_job_.assign(ci.num_job_clones(), -1);
    std::vector<CloneEdge> matched_copy(inst.edges().size(), CloneEdge{});
    std::vector<char> matched(inst.edges().size(), 0);
    for (const CloneEdge& e : r.edges) {
        int be = inst.edge_index(ci.agent_base(e.agent_clone), ci.job_base(e.job_clone));
        internal_check(be >= 0 && !matched[be], "realization does not project onto a matching");
        matched[be] = 1;
        matched_copy[be] = e;
        internal_check(g.m_of_agent_[e.agent_clone] < 0 && g.m_of_job_[e.job_clone] < 0,
                       "realization reuses a clone");
        g.m_of_agent_[e.agent_clone] = e.job_clone;
        g.m_of_job_[e.job_clone] = e.agent_clone;
    }

    g.edge_id_.assign(ci.num_agent_clones(), std::vector<int>(ci.num_job_clones(), -1));
    auto push = [&](CloneEdge e, int be, bool is_matched) {
        g.edge_id_[e.agent_clone][e.job_clone] = static_cast<int>(g.edges_.size());
        g.edges_.push_back({e, be, is_matched});
    };
    for (int be = 0; be < static_cast<int>(inst.edges().size()); ++be) {
        const Edge& base = inst.edges()[be];
        if (matched[be]) {
            push(matched_copy[be], be, true);
        } else {
            for (int i = 1; i <= inst.agent_capacity(base.agent); ++i)
                for (int j = 1; j <= inst.job_capacity(base.job); ++j)
                    push({ci.agent_clone(base.agent, i), ci.job_clone(base.job, j)}, be, false);
        }
    }
    return g;
}

int SubgraphGM::wt(int edge_id) const {
    const SubEdge& se = edges_[edge_id];
    if (se.matched) return 0;
    const int ac = se.e.agent_clone, jc = se.e.job_clone;
    const int pa = m_of_agent_[ac], pj = m_of_job_[jc];
    internal_check(pa >= 0 && pj >= 0, "wt needs a perfect realization");
    int va = ci_->agent_rank(ac, jc) < ci_->agent_rank(ac, pa) ? 1 : -1;
    int vb = ci_->job_rank(jc, ac) < ci_->job_rank(jc, pj) ? 1 : -1;
    return va + vb;
}

long long cycle_weight(const SubgraphGM& g, const std::vector<int>& edge_ids) {
    long long w = 0;
    for (int id : edge_ids) w += g.wt(id);
    return w;
}

CycleWitness finish_cycle(const SubgraphGM& g, std::vector<int> vertices,
                          std::vector<int> edge_ids) {
    const int len = static_cast<int>(edge_ids.size());
    internal_check(len >= 4 && len % 2 == 0 && static_cast<int>(vertices.size()) == len,
                   "malformed alternating cycle");
    for (int t = 0; t < len; ++t) {
        const auto& se = g.edges()[edge_ids[t]];
        internal_check(se.matched == (t % 2 == 1), "cycle does not alternate");
        // vertices[even] is an agent clone, vertices[odd] a job clone.
        int agent_end = vertices[t % 2 == 0 ? t : (t + 1) % len];
        int job_end = vertices[t % 2 == 0 ? t + 1 : t];
        internal_check(se.e.agent_clone == agent_end && se.e.job_clone == job_end,
                       "cycle edges do not join consecutive vertices");
    }
    CycleWitness c;
    c.vertices = std::move(vertices);
    c.edge_ids = std::move(edge_ids);
    c.weight = cycle_weight(g, c.edge_ids);
    std::vector<int> bases;
    for (int id : c.edge_ids) bases.push_back(g.edges()[id].base_edge);
    std::sort(bases.begin(), bases.end());
    c.valid = std::adjacent_find(bases.begin(), bases.end()) == bases.end();
    return c;
}

std::optional<CycleWitness> find_positive_alternating_cycle(const SubgraphGM& g) {
    // One node per matched pair; one arc per non-matching edge, from the node
    // holding its agent clone to the node holding its job clone. Arc weight
    // is the negated edge weight, so positive alternating cycles become
    // negative directed cycles.
    std::vector<int> node_edge;             // subgraph edge id of each node
    std::vector<int> node_of_agent(g.clones().num_agent_clones(), -1);
    std::vector<int> node_of_job(g.clones().num_job_clones(), -1);
    for (int id = 0; id < static_cast<int>(g.edges().size()); ++id) {
        const auto& se = g.edges()[id];
        if (!se.matched) continue;
        node_of_agent[se.e.agent_clone] = static_cast<int>(node_edge.size());
        node_of_job[se.e.job_clone] = static_cast<int>(node_edge.size());
        node_edge.push_back(id);
    }
    struct Arc {
        int from, to, edge;
        long long w;
    };
    std::vector<Arc> arcs;
    for (int id = 0; id < static_cast<int>(g.edges().size()); ++id) {
        const auto& se = g.edges()[id];
        if (se.matched) continue;
        int u = node_of_agent[se.e.agent_clone], v = node_of_job[se.e.job_clone];
        internal_check(u >= 0 && v >= 0 && u != v, "non-matching edge between unmatched clones");
        arcs.push_back({u, v, id, -static_cast<long long>(g.wt(id))});
    }

    const int n = static_cast<int>(node_edge.size());
    if (n == 0 || arcs.empty()) return std::nullopt;

    // Bellman-Ford from a virtual source connected to every node with weight
    // zero, i.e. all distances start at zero.
    std::vector<long long> dist(n, 0);
    std::vector<int> pred(n, -1); // arc index that last improved the node
    int last_improved = -1;
    for (int pass = 0; pass < n; ++pass) {
        last_improved = -1;
        for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
            const Arc& a = arcs[i];
            if (dist[a.from] + a.w < dist[a.to]) {
                dist[a.to] = dist[a.from] + a.w;
                pred[a.to] = i;
                last_improved = a.to;
            }
        }
        if (last_improved < 0) return std::nullopt; // converged: no negative cycle
    }

    // A relaxation on pass n proves a negative cycle; n predecessor hops from
    // the improved node land inside one, and marking visited nodes on a
    // second walk extracts it as a simple node sequence.
    int x = last_improved;
    for (int hop = 0; hop < n; ++hop) x = arcs[pred[x]].from;
    std::vector<char> seen(n, 0);
    std::vector<int> rev_nodes;
    int v = x;
    while (!seen[v]) {
        seen[v] = 1;
        rev_nodes.push_back(v);
        v = arcs[pred[v]].from;
    }
    internal_check(v == x, "predecessor walk re-entered outside the cycle start");

    // rev_nodes follows predecessors; reverse it to traverse arc direction.
    std::vector<int> nodes(rev_nodes.rbegin(), rev_nodes.rend());
    const int k = static_cast<int>(nodes.size());
    std::vector<int> vertices, edge_ids;
    for (int t = 0; t < k; ++t) {
        int cur = nodes[t], nxt = nodes[(t + 1) % k];
        const auto& cur_se = g.edges()[node_edge[cur]];
        const auto& nxt_se = g.edges()[node_edge[nxt]];
        int f = g.edge_id(cur_se.e.agent_clone, nxt_se.e.job_clone);
        internal_check(f >= 0 && !g.edges()[f].matched, "cycle arc lost its edge");
        vertices.push_back(cur_se.e.agent_clone);
        vertices.push_back(nxt_se.e.job_clone);
        edge_ids.push_back(f);
        edge_ids.push_back(node_edge[nxt]);
    }
    CycleWitness c = finish_cycle(g, std::move(vertices), std::move(edge_ids));
    internal_check(c.weight > 0, "negative-cycle extraction produced a non-positive cycle");
    return c;
}

CycleWitness make_valid(const SubgraphGM& g, const CycleWitness& c, int* exchanges) {
    if (c.weight <= 0) throw ValidationError("make_valid requires a positive cycle");
    if (exchanges) *exchanges = 0;
    CycleWitness cur = finish_cycle(g, c.vertices, c.edge_ids); // re-derive flags
    while (!cur.valid) {
        const int len = static_cast<int>(cur.edge_ids.size());
        // Locate the first pair of positions carrying the same instance edge.
        // Only non-matching edges (even positions) can repeat.
        std::map<int, int> first_pos;
        int p = -1, q = -1;
        for (int t = 0; t < len && q < 0; t += 2) {
            int base = g.edges()[cur.edge_ids[t]].base_edge;
            auto [it, inserted] = first_pos.emplace(base, t);
            if (!inserted) {
                p = it->second;
                q = t;
            }
        }
        internal_check(q >= 0, "invalid cycle without a duplicated instance edge");

        // Both positions hold copies of one instance edge (a, b); exchanging
        // them for the crossed copies splits the cycle at p and q. Clones of
        // one vertex order every third party identically, so each endpoint's
        // vote, and with it the weight sum, is unchanged.
        auto at = [&](int i) { return cur.vertices[(i % len + len) % len]; };
        int chord1 = g.edge_id(at(q), at(p + 1)); // closes vertices[p+1..q]
        int chord2 = g.edge_id(at(p), at(q + 1)); // closes the rest
        internal_check(chord1 >= 0 && chord2 >= 0, "crossed copy missing from subgraph");

        std::vector<int> v1{at(q)}, e1{chord1};
        for (int i = p + 1; i < q; ++i) {
            v1.push_back(at(i));
            e1.push_back(cur.edge_ids[i]);
        }
        std::vector<int> v2{at(p)}, e2{chord2};
        for (int i = q + 1; i < q + 1 + (len - (q - p)) - 1; ++i) {
            v2.push_back(at(i));
            e2.push_back(cur.edge_ids[(i % len + len) % len]);
        }
        CycleWitness c1 = finish_cycle(g, std::move(v1), std::move(e1));
        CycleWitness c2 = finish_cycle(g, std::move(v2), std::move(e2));
        internal_check(c1.weight + c2.weight == cur.weight,
                       "chord exchange changed the total cycle weight");
        if (exchanges) ++*exchanges;
        cur = c1.weight > 0 ? std::move(c1) : std::move(c2);
        internal_check(cur.weight > 0, "both halves of a positive cycle non-positive");
    }
    return cur;
}

PopularityVerdict is_popular_perfect(const Instance& inst, const PerfectMatching& m) {
    ClonedInstance ci = ClonedInstance::build(inst);
    Realization r = realize(ci, inst, m);
    SubgraphGM g = SubgraphGM::build(ci, inst, r);

    auto cycle = find_positive_alternating_cycle(g);
    if (!cycle) return {true, std::nullopt, std::nullopt, 0};

    PopularityVerdict verdict;
    verdict.popular = false;
    verdict.cycle = make_valid(g, *cycle, &verdict.chord_exchanges);

    // Switch the realization along the cycle and project back.
    std::vector<char> drop(g.edges().size(), 0);
    std::vector<Edge> bases;
    for (std::size_t t = 0; t < verdict.cycle->edge_ids.size(); ++t) {
        int id = verdict.cycle->edge_ids[t];
        if (t % 2 == 1) {
            drop[id] = 1; // matched edge leaves
        } else {
            const auto& se = g.edges()[id];
            bases.push_back(inst.edges()[se.base_edge]);
        }
    }
    for (const CloneEdge& e : r.edges) {
        int id = g.edge_id(e.agent_clone, e.job_clone);
        internal_check(id >= 0, "realization edge missing from subgraph");
        if (!drop[id]) bases.push_back(inst.edges()[g.edges()[id].base_edge]);
    }
    Matching witness = make_matching(inst, std::move(bases));
    internal_check(is_perfect(inst, witness), "cycle switch broke perfectness");
    verdict.witness = std::move(witness);
    return verdict;
}

} // namespace popmatch
