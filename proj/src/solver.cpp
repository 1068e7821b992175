#include "popmatch/solver.hpp"

#include <algorithm>
#include <cstdlib>

#include "popmatch/clone.hpp"
#include "popmatch/errors.hpp"
#include "popmatch/voting.hpp"

namespace popmatch {

long long enumeration_limit_from_env() {
    const char* v = std::getenv("POPMATCH_MAX_ENUM");
    if (!v || !*v) return kDefaultEnumLimit;
    char* end = nullptr;
    long long parsed = std::strtoll(v, &end, 10);
    if (end == v || *end != '\0' || parsed <= 0)
        throw ValidationError("POPMATCH_MAX_ENUM must be a positive integer");
    return parsed;
}

namespace {

struct Enumerator {
    const Instance& inst;
    const std::function<bool(const Matching&)>& visit;
    const long long limit;

    std::vector<int> rem;                        // remaining job capacity
    std::vector<std::vector<int>> nbrs;          // per agent, sorted by document index
    std::vector<std::vector<int>> suffix_adj;    // [a][j]: agents >= a adjacent to j
    std::vector<Edge> chosen;
    long long produced = 0;
    bool stopped = false;

    explicit Enumerator(const Instance& i, const std::function<bool(const Matching&)>& v,
                        long long lim)
        : inst(i), visit(v), limit(lim) {
        rem.resize(inst.num_jobs());
        for (int j = 0; j < inst.num_jobs(); ++j) rem[j] = inst.job_capacity(j);
        nbrs.resize(inst.num_agents());
        for (int a = 0; a < inst.num_agents(); ++a) {
            nbrs[a] = inst.agent_prefs(a);
            std::sort(nbrs[a].begin(), nbrs[a].end());
        }
        suffix_adj.assign(inst.num_agents() + 1, std::vector<int>(inst.num_jobs(), 0));
        for (int a = inst.num_agents() - 1; a >= 0; --a) {
            suffix_adj[a] = suffix_adj[a + 1];
            for (int j : nbrs[a]) ++suffix_adj[a][j];
        }
    }

    // A job needing more than the remaining adjacent agents can never fill.
    bool feasible_suffix(int a) const {
        for (int j = 0; j < inst.num_jobs(); ++j)
            if (rem[j] > suffix_adj[a][j]) return false;
        return true;
    }

    void emit() {
        if (++produced > limit)
            throw EnumLimitError("enumeration exceeded the configured limit of " +
                                 std::to_string(limit) + " perfect matchings");
        if (!visit(Matching{chosen})) stopped = true;
    }

    void choose(int a, std::size_t from, int still) {
        if (stopped) return;
        if (still == 0) {
            next_agent(a + 1);
            return;
        }
        const auto& list = nbrs[a];
        // Not enough neighbours left to fill the quota.
        if (list.size() - from < static_cast<std::size_t>(still)) return;
        for (std::size_t t = from; t < list.size() && !stopped; ++t) {
            int j = list[t];
            if (rem[j] == 0) continue;
            --rem[j];
            chosen.push_back({a, j});
            choose(a, t + 1, still - 1);
            chosen.pop_back();
            ++rem[j];
        }
    }

    void next_agent(int a) {
        if (stopped) return;
        if (a == inst.num_agents()) {
            emit();
            return;
        }
        if (!feasible_suffix(a)) return;
        choose(a, 0, inst.agent_capacity(a));
    }
};

} // namespace

long long enumerate_perfect_matchings(const Instance& inst,
                                      const std::function<bool(const Matching&)>& visit,
                                      long long limit) {
    if (inst.total_agent_capacity() != inst.total_job_capacity())
        throw InfeasibleError("capacity totals differ; no perfect matching exists");
    Enumerator e(inst, visit, limit);
    e.next_agent(0);
    return e.produced;
}

bool brute_force_is_popular_perfect(const Instance& inst, const PerfectMatching& m,
                                    long long limit) {
    bool popular = true;
    enumerate_perfect_matchings(
        inst,
        [&](const Matching& n) {
            if (delta(inst, m.matching, n).value < 0) {
                popular = false;
                return false;
            }
            return true;
        },
        limit);
    return popular;
}

SolveReport solve_min_cost(const Instance& inst, long long limit) {
    if (!admits_perfect_matching(inst))
        throw InfeasibleError("instance admits no perfect matching");

    SolveReport report;
    bool have = false;
    enumerate_perfect_matchings(
        inst,
        [&](const Matching& cand) {
            ++report.enumerated;
            if (!is_popular_perfect(inst, PerfectMatching{cand}).popular) return true;
            ++report.popular;
            Cost c = matching_cost(inst, cand);
            if (!have || c < report.cost || (c == report.cost && cand.edges < report.matching.edges)) {
                have = true;
                report.cost = c;
                report.matching = cand;
            }
            return true;
        },
        limit);
    if (!have)
        throw NotPopularError("no perfect matching is popular"); // unreachable if theory holds
    report.certificate = "accepted by the cycle check: the matched subgraph of the expansion "
                         "contains no positive-weight alternating cycle";
    return report;
}

} // namespace popmatch
