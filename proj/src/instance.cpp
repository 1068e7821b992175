#include "popmatch/instance.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "popmatch/errors.hpp"

namespace popmatch {

namespace {

std::map<std::string, int> index_names(const std::vector<InstanceData::Vertex>& side,
                                       std::set<std::string>& all_names) {
    std::map<std::string, int> idx;
    for (int i = 0; i < static_cast<int>(side.size()); ++i) {
        const std::string& name = side[i].name;
        if (name.empty()) throw ValidationError("vertex name must be a non-empty string");
        if (!all_names.insert(name).second)
            throw ValidationError("duplicate vertex name '" + name + "'");
        idx.emplace(name, i);
    }
    return idx;
}

std::vector<std::vector<int>> resolve_prefs(const std::vector<InstanceData::Vertex>& side,
                                            const std::map<std::string, int>& other_idx,
                                            const char* side_label, const char* other_label) {
    std::vector<std::vector<int>> prefs(side.size());
    for (int i = 0; i < static_cast<int>(side.size()); ++i) {
        std::set<int> seen;
        prefs[i].reserve(side[i].preferences.size());
        for (const std::string& entry : side[i].preferences) {
            auto it = other_idx.find(entry);
            if (it == other_idx.end())
                throw ValidationError(std::string(side_label) + " '" + side[i].name +
                                      "' lists unknown " + other_label + " '" + entry + "'");
            if (!seen.insert(it->second).second)
                throw ValidationError(std::string(side_label) + " '" + side[i].name +
                                      "' lists '" + entry + "' more than once");
            prefs[i].push_back(it->second);
        }
    }
    return prefs;
}

} // namespace

Instance Instance::build(const InstanceData& data) {
    Instance inst;
    std::set<std::string> all_names;
    auto agent_idx = index_names(data.agents, all_names);
    auto job_idx = index_names(data.jobs, all_names);

    const int na = static_cast<int>(data.agents.size());
    const int nj = static_cast<int>(data.jobs.size());
    for (const auto& v : data.agents) inst.agent_names_.push_back(v.name);
    for (const auto& v : data.jobs) inst.job_names_.push_back(v.name);

    inst.agent_prefs_ = resolve_prefs(data.agents, job_idx, "agent", "job");
    inst.job_prefs_ = resolve_prefs(data.jobs, agent_idx, "job", "agent");

    inst.agent_rank_.assign(na, std::vector<int>(nj, -1));
    inst.job_rank_.assign(nj, std::vector<int>(na, -1));
    for (int a = 0; a < na; ++a)
        for (int r = 0; r < static_cast<int>(inst.agent_prefs_[a].size()); ++r)
            inst.agent_rank_[a][inst.agent_prefs_[a][r]] = r;
    for (int j = 0; j < nj; ++j)
        for (int r = 0; r < static_cast<int>(inst.job_prefs_[j].size()); ++r)
            inst.job_rank_[j][inst.job_prefs_[j][r]] = r;

    // Mutuality: each side's list must mirror the other's.
    for (int a = 0; a < na; ++a)
        for (int j : inst.agent_prefs_[a])
            if (inst.job_rank_[j][a] < 0)
                throw ValidationError("asymmetric preference listing: agent '" +
                                      inst.agent_names_[a] + "' lists job '" +
                                      inst.job_names_[j] + "' but not vice versa");
    for (int j = 0; j < nj; ++j)
        for (int a : inst.job_prefs_[j])
            if (inst.agent_rank_[a][j] < 0)
                throw ValidationError("asymmetric preference listing: job '" +
                                      inst.job_names_[j] + "' lists agent '" +
                                      inst.agent_names_[a] + "' but not vice versa");

    for (int a = 0; a < na; ++a) {
        int cap = data.agents[a].capacity;
        int deg = static_cast<int>(inst.agent_prefs_[a].size());
        if (cap < 1 || cap > deg)
            throw ValidationError("capacity of agent '" + inst.agent_names_[a] +
                                  "' out of range [1, degree]");
        inst.agent_caps_.push_back(cap);
        inst.total_agent_cap_ += cap;
    }
    for (int j = 0; j < nj; ++j) {
        int cap = data.jobs[j].capacity;
        int deg = static_cast<int>(inst.job_prefs_[j].size());
        if (cap < 1 || cap > deg)
            throw ValidationError("capacity of job '" + inst.job_names_[j] +
                                  "' out of range [1, degree]");
        inst.job_caps_.push_back(cap);
        inst.total_job_cap_ += cap;
    }

    inst.edge_index_.assign(na, std::vector<int>(nj, -1));
    for (int a = 0; a < na; ++a) {
        std::vector<int> sorted = inst.agent_prefs_[a];
        std::sort(sorted.begin(), sorted.end());
        for (int j : sorted) {
            inst.edge_index_[a][j] = static_cast<int>(inst.edges_.size());
            inst.edges_.push_back({a, j});
        }
    }
    inst.edge_costs_.assign(inst.edges_.size(), 0);

    std::set<std::pair<int, int>> cost_seen;
    for (const auto& entry : data.costs) {
        auto ai = agent_idx.find(entry.agent);
        auto ji = job_idx.find(entry.job);
        if (ai == agent_idx.end() || ji == job_idx.end() ||
            inst.edge_index_[ai->second][ji->second] < 0)
            throw ValidationError("cost entry for absent edge ('" + entry.agent + "', '" +
                                  entry.job + "')");
        if (!cost_seen.insert({ai->second, ji->second}).second)
            throw ValidationError("duplicate cost entry for edge ('" + entry.agent + "', '" +
                                  entry.job + "')");
        inst.edge_costs_[inst.edge_index_[ai->second][ji->second]] = entry.cost;
    }
    return inst;
}

std::optional<int> Instance::find_agent(const std::string& name) const {
    for (int a = 0; a < num_agents(); ++a)
        if (agent_names_[a] == name) return a;
    return std::nullopt;
}

std::optional<int> Instance::find_job(const std::string& name) const {
    for (int j = 0; j < num_jobs(); ++j)
        if (job_names_[j] == name) return j;
    return std::nullopt;
}

bool Instance::operator==(const Instance& other) const {
    return agent_names_ == other.agent_names_ && job_names_ == other.job_names_ &&
           agent_caps_ == other.agent_caps_ && job_caps_ == other.job_caps_ &&
           agent_prefs_ == other.agent_prefs_ && job_prefs_ == other.job_prefs_ &&
           edge_costs_ == other.edge_costs_;
}

InstanceData Instance::to_data() const {
    InstanceData data;
    for (int a = 0; a < num_agents(); ++a) {
        InstanceData::Vertex v{agent_names_[a], agent_caps_[a], {}};
        for (int j : agent_prefs_[a]) v.preferences.push_back(job_names_[j]);
        data.agents.push_back(std::move(v));
    }
    for (int j = 0; j < num_jobs(); ++j) {
        InstanceData::Vertex v{job_names_[j], job_caps_[j], {}};
        for (int a : job_prefs_[j]) v.preferences.push_back(agent_names_[a]);
        data.jobs.push_back(std::move(v));
    }
    for (const Edge& e : edges_)
        if (Cost c = edge_costs_[edge_index_[e.agent][e.job]]; c != 0)
            data.costs.push_back({agent_names_[e.agent], job_names_[e.job], c});
    return data;
}

Matching make_matching(const Instance& inst, std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.agent < 0 || e.agent >= inst.num_agents() || e.job < 0 || e.job >= inst.num_jobs() ||
            !inst.has_edge(e.agent, e.job))
            throw ValidationError("matching contains an edge absent from the instance");
        if (i > 0 && edges[i - 1] == e)
            throw ValidationError("matching lists an edge twice");
    }
    std::vector<int> a_load(inst.num_agents(), 0), j_load(inst.num_jobs(), 0);
    for (const Edge& e : edges) {
        if (++a_load[e.agent] > inst.agent_capacity(e.agent))
            throw ValidationError("matching exceeds capacity of agent '" +
                                  inst.agent_name(e.agent) + "'");
        if (++j_load[e.job] > inst.job_capacity(e.job))
            throw ValidationError("matching exceeds capacity of job '" + inst.job_name(e.job) +
                                  "'");
    }
    return Matching{std::move(edges)};
}

std::vector<std::vector<int>> agent_partners(const Instance& inst, const Matching& m) {
    std::vector<std::vector<int>> p(inst.num_agents());
    for (const Edge& e : m.edges) p[e.agent].push_back(e.job);
    return p;
}

std::vector<std::vector<int>> job_partners(const Instance& inst, const Matching& m) {
    std::vector<std::vector<int>> p(inst.num_jobs());
    for (const Edge& e : m.edges) p[e.job].push_back(e.agent);
    return p;
}

bool is_perfect(const Instance& inst, const Matching& m) {
    std::vector<int> a_load(inst.num_agents(), 0), j_load(inst.num_jobs(), 0);
    for (const Edge& e : m.edges) {
        ++a_load[e.agent];
        ++j_load[e.job];
    }
    for (int a = 0; a < inst.num_agents(); ++a)
        if (a_load[a] != inst.agent_capacity(a)) return false;
    for (int j = 0; j < inst.num_jobs(); ++j)
        if (j_load[j] != inst.job_capacity(j)) return false;
    return true;
}

PerfectMatching as_perfect(const Instance& inst, Matching m) {
    if (!is_perfect(inst, m)) throw ValidationError("matching is not perfect");
    return PerfectMatching{std::move(m)};
}

Cost matching_cost(const Instance& inst, const Matching& m) {
    Cost total = 0;
    for (const Edge& e : m.edges) total += inst.cost(e.agent, e.job);
    return total;
}

namespace {

// Edmonds-Karp on the standard perfect-matchability network: source->agent
// with capacity cap(a), agent->job with capacity 1 per edge, job->sink with
// capacity cap(b).
class FlowNetwork {
public:
    explicit FlowNetwork(int n) : head_(n, -1) {}

    void add_edge(int u, int v, int cap) {
        arcs_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({u, head_[v], 0});
        head_[v] = static_cast<int>(arcs_.size()) - 1;
    }

    long long max_flow(int s, int t) {
        long long flow = 0;
        while (true) {
            std::vector<int> pred_arc(head_.size(), -1);
            std::queue<int> q;
            q.push(s);
            pred_arc[s] = -2;
            while (!q.empty() && pred_arc[t] == -1) {
                int u = q.front();
                q.pop();
                for (int id = head_[u]; id != -1; id = arcs_[id].next) {
                    if (arcs_[id].cap > 0 && pred_arc[arcs_[id].to] == -1) {
                        pred_arc[arcs_[id].to] = id;
                        q.push(arcs_[id].to);
                    }
                }
            }
            if (pred_arc[t] == -1) return flow;
            int bottleneck = INT_MAX;
            for (int v = t; v != s;) {
                int id = pred_arc[v];
                bottleneck = std::min(bottleneck, arcs_[id].cap);
                v = arcs_[id ^ 1].to;
            }
            for (int v = t; v != s;) {
                int id = pred_arc[v];
                arcs_[id].cap -= bottleneck;
                arcs_[id ^ 1].cap += bottleneck;
                v = arcs_[id ^ 1].to;
            }
            flow += bottleneck;
        }
    }

private:
    struct Arc {
        int to, next, cap;
    };
    std::vector<int> head_;
    std::vector<Arc> arcs_;
};

} // namespace

bool admits_perfect_matching(const Instance& inst) {
    if (inst.total_agent_capacity() != inst.total_job_capacity()) return false;
    const int na = inst.num_agents(), nj = inst.num_jobs();
    FlowNetwork net(na + nj + 2);
    const int s = na + nj, t = na + nj + 1;
    for (int a = 0; a < na; ++a) net.add_edge(s, a, inst.agent_capacity(a));
    for (int j = 0; j < nj; ++j) net.add_edge(na + j, t, inst.job_capacity(j));
    for (const Edge& e : inst.edges()) net.add_edge(e.agent, na + e.job, 1);
    return net.max_flow(s, t) == inst.total_agent_capacity();
}

namespace {

// All generator draws go through these two helpers so the sequence of raw
// engine outputs, and with it the generated instance, is pinned down exactly.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_vec(std::mt19937_64& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[bounded(rng, i)]);
}

} // namespace

Instance generate_instance(std::uint64_t seed, int n_agents, int n_jobs, int max_cap,
                           double density, int max_attempts) {
    if (n_agents < 1 || n_jobs < 1 || max_cap < 1)
        throw ValidationError("generator requires n_agents, n_jobs, max_cap >= 1");
    if (!(density > 0.0) || density > 1.0)
        throw ValidationError("generator requires 0 < density <= 1");

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));

        std::vector<std::vector<int>> nbr_a(n_agents), nbr_j(n_jobs);
        for (int a = 0; a < n_agents; ++a)
            for (int j = 0; j < n_jobs; ++j)
                if (unit(rng) < density) {
                    nbr_a[a].push_back(j);
                    nbr_j[j].push_back(a);
                }
        bool isolated = false;
        for (int a = 0; a < n_agents && !isolated; ++a) isolated = nbr_a[a].empty();
        for (int j = 0; j < n_jobs && !isolated; ++j) isolated = nbr_j[j].empty();
        if (isolated) continue;

        std::vector<int> a_cap(n_agents), j_cap(n_jobs, 1);
        long long total = 0;
        for (int a = 0; a < n_agents; ++a) {
            int ub = std::min(max_cap, static_cast<int>(nbr_a[a].size()));
            a_cap[a] = 1 + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(ub)));
            total += a_cap[a];
        }
        // Distribute the same total over jobs: everyone starts at 1, then
        // random jobs with slack absorb one unit at a time.
        long long need = total - n_jobs;
        if (need < 0) continue;
        bool stuck = false;
        while (need > 0) {
            std::vector<int> open;
            for (int j = 0; j < n_jobs; ++j)
                if (j_cap[j] < std::min(max_cap, static_cast<int>(nbr_j[j].size())))
                    open.push_back(j);
            if (open.empty()) {
                stuck = true;
                break;
            }
            ++j_cap[open[bounded(rng, open.size())]];
            --need;
        }
        if (stuck) continue;

        InstanceData data;
        for (int a = 0; a < n_agents; ++a) {
            std::vector<int> order = nbr_a[a];
            shuffle_vec(rng, order);
            InstanceData::Vertex v{"a" + std::to_string(a + 1), a_cap[a], {}};
            for (int j : order) v.preferences.push_back("b" + std::to_string(j + 1));
            data.agents.push_back(std::move(v));
        }
        for (int j = 0; j < n_jobs; ++j) {
            std::vector<int> order = nbr_j[j];
            shuffle_vec(rng, order);
            InstanceData::Vertex v{"b" + std::to_string(j + 1), j_cap[j], {}};
            for (int a : order) v.preferences.push_back("a" + std::to_string(a + 1));
            data.jobs.push_back(std::move(v));
        }
        for (int a = 0; a < n_agents; ++a)
            for (int j : nbr_a[a])
                data.costs.push_back({"a" + std::to_string(a + 1), "b" + std::to_string(j + 1),
                                      static_cast<Cost>(bounded(rng, 10)) * kCostScale});

        Instance inst = Instance::build(data);
        if (admits_perfect_matching(inst)) return inst;
    }
    throw InfeasibleError("no perfect-matchable instance found within the retry bound");
}

} // namespace popmatch
