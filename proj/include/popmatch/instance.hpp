#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace popmatch {

// Costs are exact scaled integers: one cost unit == kCostScale. Decimal input
// with at most six fractional digits maps onto this grid losslessly.
using Cost = std::int64_t;
inline constexpr Cost kCostScale = 1'000'000;

// An edge of the bipartite instance, as indices into the agent/job arrays.
struct Edge {
    int agent = -1;
    int job = -1;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Raw, unvalidated instance parts. parse_instance and the generator produce
// this; Instance::build validates and freezes it.
struct InstanceData {
    struct Vertex {
        std::string name;
        int capacity = 1;
        std::vector<std::string> preferences; // opposite-side names, best first
    };
    struct CostEntry {
        std::string agent, job;
        Cost cost = 0;
    };
    std::vector<Vertex> agents, jobs;
    std::vector<CostEntry> costs;
};

// A capacitated bipartite preference instance with strict two-sided
// preferences. Immutable once built. Vertices are addressed by document
// order index; ranks are 0-based positions in preference lists (lower is
// better). The edge set is exactly the mutual preference pairs and is kept
// sorted by (agent, job).
class Instance {
public:
    // Validates and builds. Throws ValidationError on: duplicate vertex
    // names (across both sides), unknown or duplicate preference entries,
    // asymmetric preference listing, capacity outside [1, degree], cost
    // entries for absent edges or duplicated cost entries.
    static Instance build(const InstanceData& data);

    int num_agents() const { return static_cast<int>(agent_names_.size()); }
    int num_jobs() const { return static_cast<int>(job_names_.size()); }

    const std::string& agent_name(int a) const { return agent_names_[a]; }
    const std::string& job_name(int j) const { return job_names_[j]; }
    std::optional<int> find_agent(const std::string& name) const;
    std::optional<int> find_job(const std::string& name) const;

    int agent_capacity(int a) const { return agent_caps_[a]; }
    int job_capacity(int j) const { return job_caps_[j]; }
    long long total_agent_capacity() const { return total_agent_cap_; }
    long long total_job_capacity() const { return total_job_cap_; }

    const std::vector<int>& agent_prefs(int a) const { return agent_prefs_[a]; }
    const std::vector<int>& job_prefs(int j) const { return job_prefs_[j]; }

    // Preference rank of j in a's list, or -1 if (a, j) is not an edge.
    int agent_rank(int a, int j) const { return agent_rank_[a][j]; }
    int job_rank(int j, int a) const { return job_rank_[j][a]; }
    bool has_edge(int a, int j) const { return agent_rank_[a][j] >= 0; }

    const std::vector<Edge>& edges() const { return edges_; }
    int edge_index(int a, int j) const { return edge_index_[a][j]; } // -1 if absent
    Cost edge_cost(int edge_idx) const { return edge_costs_[edge_idx]; }
    Cost cost(int a, int j) const { return edge_costs_[edge_index_[a][j]]; }

    bool operator==(const Instance& other) const;

    // Reconstructs the raw parts (document order preserved; zero costs omitted).
    InstanceData to_data() const;

private:
    Instance() = default;

    std::vector<std::string> agent_names_, job_names_;
    std::vector<int> agent_caps_, job_caps_;
    std::vector<std::vector<int>> agent_prefs_, job_prefs_;
    std::vector<std::vector<int>> agent_rank_, job_rank_; // dense, -1 = non-edge
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> edge_index_;
    std::vector<Cost> edge_costs_;
    long long total_agent_cap_ = 0, total_job_cap_ = 0;
};

// A set of edges of the instance with every vertex within capacity.
// Edges are sorted and unique; build via make_matching.
struct Matching {
    std::vector<Edge> edges;
    bool operator==(const Matching&) const = default;
};

// Validates edge existence, uniqueness and capacity bounds.
Matching make_matching(const Instance& inst, std::vector<Edge> edges);

// Partner lists per vertex, each sorted by index.
std::vector<std::vector<int>> agent_partners(const Instance& inst, const Matching& m);
std::vector<std::vector<int>> job_partners(const Instance& inst, const Matching& m);

// True iff every vertex v on both sides has exactly capacity(v) partners.
bool is_perfect(const Instance& inst, const Matching& m);

// A matching checked to be perfect. Functions taking PerfectMatching rely on
// full saturation of both sides.
struct PerfectMatching {
    Matching matching;
};

// Throws ValidationError if m is not perfect in inst.
PerfectMatching as_perfect(const Instance& inst, Matching m);

Cost matching_cost(const Instance& inst, const Matching& m);

// True iff the instance admits a perfect matching: capacity totals agree and
// a max flow over the edge network (unit edge capacities, vertex capacities
// at source/sink arcs) saturates them.
bool admits_perfect_matching(const Instance& inst);

// Deterministic random instance generator. Draws an edge set of the given
// density, capacities in [1, min(max_cap, degree)], integer costs in [0, 9],
// and uniformly shuffled preference lists; rejects and retries with an
// incremented seed until the instance admits a perfect matching. Throws
// InfeasibleError when max_attempts rejections pass without success, and
// ValidationError on bad parameters (n_agents, n_jobs, max_cap >= 1,
// 0 < density <= 1).
Instance generate_instance(std::uint64_t seed, int n_agents, int n_jobs, int max_cap,
                           double density, int max_attempts = 1000);

} // namespace popmatch
