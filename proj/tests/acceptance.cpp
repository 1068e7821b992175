// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria 4-8 share a generated corpus of small perfect-matchable
// instances (2-4 vertices per side, capacities up to 2, density 0.6-1.0).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "popmatch/clone.hpp"
#include "popmatch/colorful.hpp"
#include "popmatch/errors.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/solver.hpp"
#include "popmatch/stability.hpp"
#include "popmatch/voting.hpp"

using namespace popmatch;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* label, double budget_ms,
               const std::function<Outcome()>& body) {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("unexpected exception: ") + e.what();
    }
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (o.pass && budget_ms > 0 && ms >= budget_ms) {
        o.pass = false;
        o.detail += " (over the time budget)";
    }
    std::printf("%s  criterion %d: %s -- %s [%.1f ms]\n", o.pass ? "PASS" : "FAIL", id, label,
                o.detail.c_str(), ms);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string num(long long v) { return std::to_string(v); }

// Shared corpus state, filled in main before the criteria run.
std::vector<Instance> g_corpus;
std::vector<std::vector<Matching>> g_pms;
std::vector<std::vector<char>> g_popular; // definition-route flags, set by criterion 4
long long g_chord_exchanges = 0;          // accumulated by criterion 4

void build_corpus() {
    for (std::uint64_t seed = 1; g_corpus.size() < 220 && seed < 2000; ++seed) {
        int n_agents = 2 + static_cast<int>(seed % 3);
        int n_jobs = 2 + static_cast<int>((seed / 3) % 3);
        double density = 0.6 + 0.1 * static_cast<double>(seed % 5);
        try {
            g_corpus.push_back(generate_instance(seed, n_agents, n_jobs, 2, density));
        } catch (const InfeasibleError&) {
            continue;
        }
    }
    g_pms.resize(g_corpus.size());
    g_popular.resize(g_corpus.size());
    for (std::size_t i = 0; i < g_corpus.size(); ++i) {
        enumerate_perfect_matchings(g_corpus[i], [&](const Matching& m) {
            g_pms[i].push_back(m);
            return true;
        });
        g_popular[i].assign(g_pms[i].size(), 0);
    }
}

Outcome run_votes_example() {
    Instance inst = fx::f3();
    int v = *inst.find_agent("v");
    auto job = [&](const char* n) { return *inst.find_job(n); };
    std::vector<int> S{job("u1"), job("u3"), job("u5")};
    std::vector<int> T{job("u2"), job("u4"), job("u6")};

    auto t0 = Clock::now();
    long long st = vote_set(inst, Side::Agent, v, S, T).value;
    long long ts = vote_set(inst, Side::Agent, v, T, S).value;
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    if (st != -1) return {false, "vote_set(S,T) = " + num(st) + ", want -1"};
    if (ts != -3) return {false, "vote_set(T,S) = " + num(ts) + ", want -3"};
    if (ms >= 1.0) return {false, "took " + std::to_string(ms) + " ms, budget 1 ms"};
    return {true, "vote_set(S,T) = -1 and vote_set(T,S) = -3 in " + std::to_string(ms) + " ms"};
}

Outcome run_one_to_one_example() {
    Instance inst = fx::f1();
    PreferenceSystem sys = fx::plain_system(inst);
    Matching m = fx::m(inst, {{"a", "bp"}, {"ap", "b"}});
    int ab = inst.edge_index(*inst.find_agent("a"), *inst.find_job("b"));

    auto t0 = Clock::now();
    SystemMatching da = deferred_acceptance(sys);
    PopularityVerdict verdict = is_popular_perfect(inst, as_perfect(inst, m));
    SystemMatching m_sys = fx::system_matching_of(inst, sys, m);
    bool blocks = is_blocking(sys, m_sys, ab);
    auto witness = find_blocking_edge(sys, m_sys);
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    if (da != SystemMatching{ab}) return {false, "deferred acceptance is not {(a,b)}"};
    if (!verdict.popular) return {false, "the unique perfect matching was not accepted"};
    if (!blocks || witness != ab) return {false, "(a,b) not reported blocking"};
    if (ms >= 1.0) return {false, "took " + std::to_string(ms) + " ms, budget 1 ms"};
    return {true, "stable = {(a,b)}, perfect matching popular, (a,b) blocks it"};
}

Outcome run_many_to_many_example() {
    Instance inst = fx::f2();
    Matching all4 = fx::m(inst, {{"a", "b"}, {"a", "bp"}, {"ap", "b"}, {"ap", "bp"}});
    ClonedInstance ci = ClonedInstance::build(inst);
    Instance expansion = ci.to_instance();
    PreferenceSystem expansion_sys = fx::plain_system(expansion);
    Matching s_prime = fx::m(expansion, {{"a#1", "b#1"},
                                         {"a#2", "b#2"},
                                         {"ap#1", "bp#1"},
                                         {"ap#2", "bp#2"}});
    Matching projection = fx::m(inst, {{"a", "b"}, {"ap", "bp"}});

    auto t0 = Clock::now();
    PopularityVerdict verdict = is_popular_perfect(inst, as_perfect(inst, all4));
    bool s_stable = is_stable(expansion_sys,
                              fx::system_matching_of(expansion, expansion_sys, s_prime));
    bool proj_perfect = is_perfect(inst, projection);
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    if (!verdict.popular) return {false, "the all-edges matching was not accepted"};
    if (!s_stable) return {false, "S' is not stable in the expansion"};
    if (proj_perfect) return {false, "the projection of S' counts as perfect"};
    if (ms >= 10.0) return {false, "took " + std::to_string(ms) + " ms, budget 10 ms"};
    return {true, "all-edges matching popular; S' stable in the expansion yet projects to a "
                  "non-perfect matching"};
}

Outcome run_verifier_vs_oracle() {
    long long checked = 0, disagreements = 0, bad_witnesses = 0, rejected = 0;
    for (std::size_t i = 0; i < g_corpus.size(); ++i) {
        const Instance& inst = g_corpus[i];
        for (std::size_t k = 0; k < g_pms[i].size(); ++k) {
            PerfectMatching pm = as_perfect(inst, g_pms[i][k]);
            PopularityVerdict verdict = is_popular_perfect(inst, pm);
            bool by_definition = brute_force_is_popular_perfect(inst, pm);
            g_popular[i][k] = by_definition ? 1 : 0;
            g_chord_exchanges += verdict.chord_exchanges;
            ++checked;
            if (verdict.popular != by_definition) ++disagreements;
            if (!verdict.popular) {
                ++rejected;
                if (!verdict.witness || !is_perfect(inst, *verdict.witness) ||
                    delta(inst, pm.matching, *verdict.witness).value >= 0)
                    ++bad_witnesses;
            }
        }
    }
    bool pass = g_corpus.size() >= 200 && checked > 0 && disagreements == 0 &&
                bad_witnesses == 0 && rejected > 0;
    return {pass, num(g_corpus.size()) + " instances, " + num(checked) +
                      " perfect matchings (" + num(rejected) + " unpopular), " +
                      num(disagreements) + " disagreements, " + num(bad_witnesses) +
                      " defective witnesses"};
}

Outcome run_main_theorem() {
    long long da_failures = 0, lift_mismatches = 0, unstable_lifts = 0, lifted = 0;
    for (std::size_t i = 0; i < g_corpus.size(); ++i) {
        const Instance& inst = g_corpus[i];
        ColorfulSystem cs = ColorfulSystem::over_instance(inst);
        PreferenceSystem sys = cs.to_system();

        ColorfulMatching stable_colorful = colorful_from_system(cs, deferred_acceptance(sys));
        Matching projected = project(inst, stable_colorful);
        if (!is_perfect(inst, projected) ||
            !brute_force_is_popular_perfect(inst, as_perfect(inst, projected)))
            ++da_failures;

        for (std::size_t k = 0; k < g_pms[i].size(); ++k) {
            auto lift = lift_to_stable(inst, as_perfect(inst, g_pms[i][k]));
            if (lift.has_value() != (g_popular[i][k] != 0)) ++lift_mismatches;
            if (lift) {
                ++lifted;
                if (!is_stable(sys, colorful_to_system(cs, *lift))) ++unstable_lifts;
                if (project(inst, *lift) != g_pms[i][k]) ++unstable_lifts;
            }
        }
    }
    bool pass = da_failures == 0 && lift_mismatches == 0 && unstable_lifts == 0 && lifted > 0;
    return {pass, num(g_corpus.size()) + " instances: " + num(da_failures) +
                      " non-popular stable projections, " + num(lift_mismatches) +
                      " lift/popularity mismatches, " + num(unstable_lifts) +
                      " defective lifts over " + num(lifted) + " successes"};
}

Outcome run_weight_identity() {
    long long pairs = 0, mismatches = 0;
    auto feed = [&](const Instance& inst, const std::vector<Matching>& pms) {
        ClonedInstance ci = ClonedInstance::build(inst);
        Instance expansion = ci.to_instance();
        for (const Matching& m : pms) {
            if (pairs >= 1500) return;
            Realization r = realize(ci, inst, as_perfect(inst, m));
            std::vector<Edge> m_edges;
            for (const CloneEdge& e : r.edges) m_edges.push_back({e.agent_clone, e.job_clone});
            Matching m_prime = make_matching(expansion, std::move(m_edges));

            SubgraphGM g = SubgraphGM::build(ci, inst, r);
            for (const auto& n_clone : oracle::subgraph_perfect_matchings(g, 8)) {
                long long wt_sum = 0;
                std::vector<Edge> n_edges;
                for (const CloneEdge& e : n_clone) {
                    wt_sum += g.wt(g.edge_id(e.agent_clone, e.job_clone));
                    n_edges.push_back({e.agent_clone, e.job_clone});
                }
                Matching n_prime = make_matching(expansion, std::move(n_edges));
                if (wt_sum != delta(expansion, n_prime, m_prime).value) ++mismatches;
                if (++pairs >= 1500) break;
            }
        }
    };
    for (std::size_t i = 0; i < g_corpus.size() && pairs < 1500; ++i)
        feed(g_corpus[i], g_pms[i]);
    // top up if the corpus alone fell short
    for (std::uint64_t seed = 900000; pairs < 1000 && seed < 900400; ++seed) {
        try {
            Instance inst = generate_instance(seed, 3, 3, 2, 0.9);
            std::vector<Matching> pms;
            enumerate_perfect_matchings(inst, [&](const Matching& m) {
                pms.push_back(m);
                return pms.size() < 4;
            });
            feed(inst, pms);
        } catch (const InfeasibleError&) {
        }
    }
    bool pass = pairs >= 1000 && mismatches == 0;
    return {pass, num(pairs) + " matching pairs, " + num(mismatches) +
                      " weight/vote mismatches"};
}

// Enumerates simple cycles of the matched-pair digraph until one is positive
// yet projects two copies of the same instance edge; repairs it via
// make_valid, which asserts weight conservation on every chord exchange.
struct ChordProbe {
    long long invalid_found = 0, exchanges = 0, repairs_checked = 0;

    void probe(const SubgraphGM& g) {
        const ClonedInstance& ci = g.clones();
        int n = ci.num_agent_clones();
        std::vector<int> agents_of_node(n), jobs_of_node(n);
        std::vector<int> node_of_job(ci.num_job_clones(), -1);
        for (int ac = 0; ac < n; ++ac) {
            agents_of_node[ac] = ac;
            jobs_of_node[ac] = g.partner_of_agent(ac);
            node_of_job[g.partner_of_agent(ac)] = ac;
        }
        std::vector<std::vector<std::pair<int, long long>>> out(n);
        for (std::size_t id = 0; id < g.edges().size(); ++id) {
            const auto& se = g.edges()[id];
            if (se.matched) continue;
            out[se.e.agent_clone].push_back(
                {node_of_job[se.e.job_clone], g.wt(static_cast<int>(id))});
        }
        std::vector<int> path;
        std::vector<char> on_path(n, 0);
        auto handle_cycle = [&](long long w) {
            if (w <= 0) return;
            // materialise the alternating cycle and keep it when invalid
            std::vector<int> vertices, edge_ids;
            int k = static_cast<int>(path.size());
            std::set<int> bases;
            bool dup = false;
            for (int t = 0; t < k; ++t) {
                int cur = path[t], next = path[(t + 1) % k];
                vertices.push_back(agents_of_node[cur]);
                vertices.push_back(jobs_of_node[next]);
                int nm = g.edge_id(agents_of_node[cur], jobs_of_node[next]);
                int mm = g.edge_id(agents_of_node[next], jobs_of_node[next]);
                edge_ids.push_back(nm);
                edge_ids.push_back(mm);
                if (!bases.insert(g.edges()[nm].base_edge).second) dup = true;
                if (!bases.insert(g.edges()[mm].base_edge).second) dup = true;
            }
            if (!dup) return;
            CycleWitness raw = finish_cycle(g, vertices, edge_ids);
            if (raw.valid || raw.weight <= 0) return;
            ++invalid_found;
            int spent = 0;
            CycleWitness fixed = make_valid(g, raw, &spent);
            exchanges += spent;
            if (fixed.valid && fixed.weight > 0 && spent > 0) ++repairs_checked;
        };
        auto dfs = [&](auto&& self, int s, int u, long long w) -> void {
            if (invalid_found >= 8) return;
            for (auto [v, aw] : out[u]) {
                if (v == s) {
                    handle_cycle(w + aw);
                } else if (v > s && !on_path[v]) {
                    on_path[v] = 1;
                    path.push_back(v);
                    self(self, s, v, w + aw);
                    path.pop_back();
                    on_path[v] = 0;
                }
            }
        };
        for (int s = 0; s < n && invalid_found < 8; ++s) {
            path.assign(1, s);
            on_path.assign(n, 0);
            on_path[s] = 1;
            dfs(dfs, s, s, 0);
        }
    }
};

Outcome run_chord_conservation() {
    ChordProbe probe;
    auto scan = [&](const Instance& inst, const std::vector<Matching>& pms) {
        ClonedInstance ci = ClonedInstance::build(inst);
        for (const Matching& m : pms) {
            if (probe.invalid_found >= 8) return;
            Realization r = realize(ci, inst, as_perfect(inst, m));
            probe.probe(SubgraphGM::build(ci, inst, r));
        }
    };
    for (std::size_t i = 0; i < g_corpus.size() && probe.invalid_found < 8; ++i)
        scan(g_corpus[i], g_pms[i]);
    for (std::uint64_t seed = 9000; probe.invalid_found < 8 && seed < 9300; ++seed) {
        try {
            Instance inst = generate_instance(seed, 4, 4, 2, 1.0);
            std::vector<Matching> pms;
            enumerate_perfect_matchings(inst, [&](const Matching& m) {
                pms.push_back(m);
                return pms.size() < 40;
            });
            scan(inst, pms);
        } catch (const InfeasibleError&) {
        }
    }
    long long exercised = probe.exchanges + g_chord_exchanges;
    bool pass = probe.invalid_found > 0 && probe.repairs_checked > 0 && exercised > 0;
    return {pass, num(probe.invalid_found) + " invalid positive cycles repaired with " +
                      num(probe.exchanges) + " chord exchanges (" +
                      num(g_chord_exchanges) +
                      " more inside verifier runs); conservation held every time"};
}

Outcome run_min_cost() {
    long long mismatches = 0, solved = 0;
    for (std::size_t i = 0; i < g_corpus.size(); ++i) {
        const Instance& inst = g_corpus[i];
        bool have = false;
        Cost best_cost = 0;
        Matching best;
        for (std::size_t k = 0; k < g_pms[i].size(); ++k) {
            if (!g_popular[i][k]) continue;
            Cost c = matching_cost(inst, g_pms[i][k]);
            if (!have || c < best_cost || (c == best_cost && g_pms[i][k].edges < best.edges)) {
                have = true;
                best_cost = c;
                best = g_pms[i][k];
            }
        }
        SolveReport got = solve_min_cost(inst);
        ++solved;
        if (!have || got.matching != best || got.cost != best_cost) ++mismatches;
    }

    Instance priced = fx::f4_costs();
    SolveReport fixture = solve_min_cost(priced);
    bool fixture_ok = fixture.matching == fx::m(priced, {{"a1", "b2"}, {"a2", "b1"}}) &&
                      fixture.cost == 10 * kCostScale;

    bool pass = mismatches == 0 && solved > 0 && fixture_ok;
    return {pass, num(solved) + " instances solved, " + num(mismatches) +
                      " brute-force mismatches; priced 2x2 returns the popular matching at "
                      "cost 10: " +
                      (fixture_ok ? "yes" : "no")};
}

Outcome run_vote_set_oracle() {
    InstanceData star;
    star.agents = {{"v", 1, {}}};
    for (int i = 1; i <= 12; ++i) {
        std::string name = "u" + std::to_string(i);
        star.agents[0].preferences.push_back(name);
        star.jobs.push_back({name, 1, {"v"}});
    }
    Instance agent_star = Instance::build(star);

    InstanceData rstar;
    rstar.jobs = {{"w", 1, {}}};
    for (int i = 1; i <= 12; ++i) {
        std::string name = "x" + std::to_string(i);
        rstar.jobs[0].preferences.push_back(name);
        rstar.agents.push_back({name, 1, {"w"}});
    }
    Instance job_star = Instance::build(rstar);

    std::mt19937_64 rng(20260818);
    long long cases = 0, mismatches = 0;
    for (long long round = 0; cases < 10000 && round < 1000000; ++round) {
        bool agent_side = round % 2 == 0;
        const Instance& inst = agent_side ? agent_star : job_star;
        Side side = agent_side ? Side::Agent : Side::Job;
        std::vector<int> S, T;
        for (int u = 0; u < 12; ++u) {
            switch (rng() % 4) {
            case 0: S.push_back(u); break;
            case 1: T.push_back(u); break;
            case 2:
                S.push_back(u);
                T.push_back(u);
                break;
            default: break;
            }
        }
        std::vector<int> s_only, t_only;
        std::set_difference(S.begin(), S.end(), T.begin(), T.end(), std::back_inserter(s_only));
        std::set_difference(T.begin(), T.end(), S.begin(), S.end(), std::back_inserter(t_only));
        if (s_only.size() > 6 || t_only.size() > 6) continue;
        ++cases;
        long long got = vote_set(inst, side, 0, S, T).value;
        if (got != oracle::vote_set_by_permutations(inst, side, 0, S, T)) ++mismatches;
    }
    bool pass = cases >= 10000 && mismatches == 0;
    return {pass, num(cases) + " random set pairs, " + num(mismatches) + " mismatches"};
}

} // namespace

int main() {
    build_corpus();
    std::printf("corpus: %zu instances\n", g_corpus.size());

    criterion(1, "set votes of the u1..u6 example", 0, run_votes_example);
    criterion(2, "one-to-one example: stable vs perfect", 0, run_one_to_one_example);
    criterion(3, "capacity-2 example and its expansion", 0, run_many_to_many_example);
    criterion(4, "cycle verifier agrees with the definition on the corpus", 300000,
              run_verifier_vs_oracle);
    criterion(5, "stable colorful matchings project to and lift from popular matchings", 600000,
              run_main_theorem);
    criterion(6, "edge weights sum to the head-to-head vote", 0, run_weight_identity);
    criterion(7, "chord exchanges conserve cycle weight", 0, run_chord_conservation);
    criterion(8, "min-cost solver matches brute force", 0, run_min_cost);
    criterion(9, "set votes match permutation brute force", 0, run_vote_set_oracle);

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
