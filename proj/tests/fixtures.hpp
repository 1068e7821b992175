#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "popmatch/instance.hpp"
#include "popmatch/stability.hpp"

// Canonical hand-checked fixtures shared by the unit and acceptance tests.
namespace fx {

using namespace popmatch;

// One-to-one, unique stable matching {(a,b)} leaves ap and bp unmatched;
// the unique perfect matching {(a,bp),(ap,b)} is blocked by (a,b).
inline Instance f1() {
    InstanceData d;
    d.agents = {{"a", 1, {"b", "bp"}}, {"ap", 1, {"b"}}};
    d.jobs = {{"b", 1, {"a", "ap"}}, {"bp", 1, {"a"}}};
    return Instance::build(d);
}

// Capacities 2 throughout; the edge set itself is the unique perfect matching.
inline Instance f2() {
    InstanceData d;
    d.agents = {{"a", 2, {"b", "bp"}}, {"ap", 2, {"bp", "b"}}};
    d.jobs = {{"b", 2, {"a", "ap"}}, {"bp", 2, {"ap", "a"}}};
    return Instance::build(d);
}

// One agent v ranking u1 > ... > u6; used for set-vote examples.
inline Instance f3() {
    InstanceData d;
    d.agents = {{"v", 3, {"u1", "u2", "u3", "u4", "u5", "u6"}}};
    for (int i = 1; i <= 6; ++i) d.jobs.push_back({"u" + std::to_string(i), 1, {"v"}});
    return Instance::build(d);
}

// Complete 2x2, capacities 1. N = {(a1,b2),(a2,b1)} is popular perfect,
// M = {(a1,b1),(a2,b2)} is not (both jobs favour a1, both agents disagree).
inline Instance f4() {
    InstanceData d;
    d.agents = {{"a1", 1, {"b2", "b1"}}, {"a2", 1, {"b1", "b2"}}};
    d.jobs = {{"b1", 1, {"a1", "a2"}}, {"b2", 1, {"a1", "a2"}}};
    return Instance::build(d);
}

// f4 with the popular matching priced above the unpopular one.
inline Instance f4_costs() {
    InstanceData d = f4().to_data();
    d.costs = {{"a1", "b2", 5 * kCostScale}, {"a2", "b1", 5 * kCostScale}};
    return Instance::build(d);
}

// Admits no perfect matching: a1 and a2 compete for b1 while b2 or b3 starves.
inline Instance bottleneck() {
    InstanceData d;
    d.agents = {{"a1", 1, {"b1"}}, {"a2", 1, {"b1"}}, {"a3", 1, {"b2", "b3"}}};
    d.jobs = {{"b1", 1, {"a1", "a2"}}, {"b2", 1, {"a3"}}, {"b3", 1, {"a3"}}};
    return Instance::build(d);
}

// Complete 2x2, capacities 1, both perfect matchings popular (delta 0 both
// ways); exercises the cost and lexicographic tie-breaks.
inline Instance tie2x2() {
    InstanceData d;
    d.agents = {{"a1", 1, {"b1", "b2"}}, {"a2", 1, {"b1", "b2"}}};
    d.jobs = {{"b1", 1, {"a1", "a2"}}, {"b2", 1, {"a1", "a2"}}};
    return Instance::build(d);
}

inline Edge e(const Instance& inst, const std::string& a, const std::string& j) {
    return Edge{*inst.find_agent(a), *inst.find_job(j)};
}

inline Matching m(const Instance& inst,
                  std::initializer_list<std::pair<const char*, const char*>> pairs) {
    std::vector<Edge> edges;
    for (const auto& p : pairs) edges.push_back(e(inst, p.first, p.second));
    return make_matching(inst, std::move(edges));
}

// The instance itself as a preference system: base ranks as keys, every edge
// its own class. System edge id == instance edge index.
inline PreferenceSystem plain_system(const Instance& inst) {
    PreferenceSystem sys;
    for (int a = 0; a < inst.num_agents(); ++a) sys.left_caps.push_back(inst.agent_capacity(a));
    for (int j = 0; j < inst.num_jobs(); ++j) sys.right_caps.push_back(inst.job_capacity(j));
    for (int be = 0; be < static_cast<int>(inst.edges().size()); ++be) {
        const Edge& ed = inst.edges()[be];
        sys.edges.push_back({ed.agent, ed.job, be, inst.agent_rank(ed.agent, ed.job),
                             inst.job_rank(ed.job, ed.agent), 0, be});
    }
    return sys;
}

inline SystemMatching system_matching_of(const Instance& inst, const PreferenceSystem& sys,
                                         const Matching& match) {
    std::vector<int> ids;
    for (const Edge& ed : match.edges) ids.push_back(inst.edge_index(ed.agent, ed.job));
    return make_system_matching(sys, std::move(ids));
}

} // namespace fx
