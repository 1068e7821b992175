#include "popmatch/voting.hpp"

#include <algorithm>
#include <climits>
#include <set>

#include "popmatch/errors.hpp"

namespace popmatch {

namespace {

int rank_of(const Instance& inst, Side side, int v, int u) {
    return side == Side::Agent ? inst.agent_rank(v, u) : inst.job_rank(v, u);
}

void check_neighbour(const Instance& inst, Side side, int v, int u) {
    const int limit = side == Side::Agent ? inst.num_jobs() : inst.num_agents();
    if (u < 0 || u >= limit || rank_of(inst, side, v, u) < 0)
        throw ValidationError("vote: alternative is not a neighbour of the voter");
}

} // namespace

int vote(const Instance& inst, Side side, int v, int u, int w) {
    if (u == w) return 0;
    // kNobody ranks below every real neighbour.
    if (u == kNobody) {
        check_neighbour(inst, side, v, w);
        return -1;
    }
    if (w == kNobody) {
        check_neighbour(inst, side, v, u);
        return 1;
    }
    check_neighbour(inst, side, v, u);
    check_neighbour(inst, side, v, w);
    return rank_of(inst, side, v, u) < rank_of(inst, side, v, w) ? 1 : -1;
}

std::vector<int> min_cost_assignment(const std::vector<std::vector<long long>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    const long long kInf = LLONG_MAX / 4;
    // Hungarian algorithm with row/column potentials; p[j] is the row matched
    // to column j (columns and rows 1-based, column 0 is the staging slot).
    std::vector<long long> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            long long shift = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < shift) {
                    shift = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += shift;
                    v[j] -= shift;
                } else {
                    minv[j] -= shift;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

SetVote vote_set(const Instance& inst, Side side, int v, const std::vector<int>& S,
                 const std::vector<int>& T) {
    std::set<int> s_set(S.begin(), S.end()), t_set(T.begin(), T.end());
    if (s_set.size() != S.size() || t_set.size() != T.size())
        throw ValidationError("vote_set: partner sets must not contain duplicates");
    for (int u : S) check_neighbour(inst, side, v, u);
    for (int u : T) check_neighbour(inst, side, v, u);

    auto by_rank = [&](int x, int y) {
        return rank_of(inst, side, v, x) < rank_of(inst, side, v, y);
    };
    std::vector<int> s_only, t_only;
    for (int u : S)
        if (!t_set.count(u)) s_only.push_back(u);
    for (int u : T)
        if (!s_set.count(u)) t_only.push_back(u);
    std::sort(s_only.begin(), s_only.end(), by_rank);
    std::sort(t_only.begin(), t_only.end(), by_rank);

    const int k = static_cast<int>(std::max(s_only.size(), t_only.size()));
    s_only.resize(k, kNobody);
    t_only.resize(k, kNobody);

    SetVote result;
    if (k == 0) return result;

    std::vector<std::vector<long long>> cost(k, std::vector<long long>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) cost[i][j] = vote(inst, side, v, s_only[i], t_only[j]);

    std::vector<int> assign = min_cost_assignment(cost);
    for (int i = 0; i < k; ++i) {
        result.value += cost[i][assign[i]];
        result.pairing.emplace_back(s_only[i], t_only[assign[i]]);
    }
    return result;
}

DeltaValue delta(const Instance& inst, const Matching& m, const Matching& n) {
    DeltaValue d;
    auto m_a = agent_partners(inst, m), n_a = agent_partners(inst, n);
    auto m_j = job_partners(inst, m), n_j = job_partners(inst, n);
    d.agent_votes.resize(inst.num_agents());
    d.job_votes.resize(inst.num_jobs());
    for (int a = 0; a < inst.num_agents(); ++a) {
        d.agent_votes[a] = vote_set(inst, Side::Agent, a, m_a[a], n_a[a]).value;
        d.value += d.agent_votes[a];
    }
    for (int j = 0; j < inst.num_jobs(); ++j) {
        d.job_votes[j] = vote_set(inst, Side::Job, j, m_j[j], n_j[j]).value;
        d.value += d.job_votes[j];
    }
    return d;
}

} // namespace popmatch
