#pragma once

#include <optional>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

// The one-to-one expansion of a capacitated instance: vertex v becomes
// clones v#1..v#cap(v) (document order, base-major), and every preference
// entry u expands in place to u#1 > u#2 > ... > u#cap(u). Clones of one
// vertex therefore sit consecutively in every list they appear on.
class ClonedInstance {
public:
    static ClonedInstance build(const Instance& inst);

    int num_agent_clones() const { return static_cast<int>(agent_base_.size()); }
    int num_job_clones() const { return static_cast<int>(job_base_.size()); }

    int agent_base(int ac) const { return agent_base_[ac]; }
    int agent_copy(int ac) const { return agent_copy_[ac]; } // 1-based
    int job_base(int jc) const { return job_base_[jc]; }
    int job_copy(int jc) const { return job_copy_[jc]; }
    int agent_clone(int a, int copy) const { return agent_start_[a] + copy - 1; }
    int job_clone(int j, int copy) const { return job_start_[j] + copy - 1; }

    const std::vector<int>& agent_prefs(int ac) const { return agent_prefs_[ac]; }
    const std::vector<int>& job_prefs(int jc) const { return job_prefs_[jc]; }
    int agent_rank(int ac, int jc) const { return agent_rank_[ac][jc]; }
    int job_rank(int jc, int ac) const { return job_rank_[jc][ac]; }
    bool has_edge(int ac, int jc) const { return agent_rank_[ac][jc] >= 0; }

    // The expansion as a plain capacity-one instance; clone names render as
    // "<base>#<copy>". Costs are zero.
    Instance to_instance() const;

private:
    std::vector<int> agent_base_, agent_copy_, job_base_, job_copy_;
    std::vector<int> agent_start_, job_start_;
    std::vector<std::vector<int>> agent_prefs_, job_prefs_;
    std::vector<std::vector<int>> agent_rank_, job_rank_;
    std::vector<std::string> agent_names_, job_names_;
};

// An edge between clones.
struct CloneEdge {
    int agent_clone = -1;
    int job_clone = -1;
    friend auto operator<=>(const CloneEdge&, const CloneEdge&) = default;
};

// A one-to-one matching of clones projecting back onto a perfect matching m:
// for every edge (a, b) of m exactly one clone copy is present, and every
// clone is used exactly once. The canonical choice assigns copy indices by
// preference: each vertex hands its first clone to its best partner in m.
struct Realization {
    std::vector<CloneEdge> edges; // sorted by agent clone
};

Realization realize(const ClonedInstance& ci, const Instance& inst, const PerfectMatching& m);

// The subgraph of the expansion in which popularity of m is decided: all
// clone copies of every non-matching edge of the instance, plus exactly the
// realization's copy of each matched edge.
class SubgraphGM {
public:
    struct SubEdge {
        CloneEdge e;
        int base_edge = -1; // index into Instance::edges()
        bool matched = false;
    };

    static SubgraphGM build(const ClonedInstance& ci, const Instance& inst,
                            const Realization& r);

    const ClonedInstance& clones() const { return *ci_; }
    const std::vector<SubEdge>& edges() const { return edges_; }
    int edge_id(int ac, int jc) const { return edge_id_[ac][jc]; } // -1 if absent
    int partner_of_agent(int ac) const { return m_of_agent_[ac]; }
    int partner_of_job(int jc) const { return m_of_job_[jc]; }

    // Weight of an edge relative to the realization: the two endpoints' votes
    // for each other against their partners. 0 on matched edges; +2 exactly
    // when the edge blocks the realization; -2 when both endpoints prefer
    // their partners; 0 otherwise.
    int wt(int edge_id) const;

private:
    const ClonedInstance* ci_ = nullptr;
    std::vector<SubEdge> edges_;
    std::vector<std::vector<int>> edge_id_;
    std::vector<int> m_of_agent_, m_of_job_;
};

// A cycle alternating between matched and non-matching subgraph edges,
// stored as subgraph edge ids with edges[t] joining vertices[t] and
// vertices[t+1]; vertices alternate agent clone, job clone, starting at an
// agent clone, so even positions are non-matching edges and odd positions
// matched ones.
struct CycleWitness {
    std::vector<int> vertices;
    std::vector<int> edge_ids;
    long long weight = 0;
    // True iff no two cycle edges are copies of the same instance edge, in
    // which case switching the matched edges of the cycle for the others
    // yields again a one-to-one matching over distinct instance edges.
    bool valid = false;
};

long long cycle_weight(const SubgraphGM& g, const std::vector<int>& edge_ids);
CycleWitness finish_cycle(const SubgraphGM& g, std::vector<int> vertices,
                          std::vector<int> edge_ids);

// Searches for an alternating cycle of strictly positive total weight, via
// negative-cycle detection on the matched-pair digraph (one node per matched
// edge, one arc per non-matching edge, weights negated).
std::optional<CycleWitness> find_positive_alternating_cycle(const SubgraphGM& g);

// Repairs an invalid positive cycle: two copies of the same instance edge
// are exchanged for the two crossed copies, which splits the cycle in two
// while preserving total weight exactly (checked at runtime; a violation
// throws InternalError); a positive half is kept and the process repeats.
// The result is a valid positive cycle. exchanges, when given, receives the
// number of chord exchanges performed.
CycleWitness make_valid(const SubgraphGM& g, const CycleWitness& c, int* exchanges = nullptr);

// Popularity verdict for a perfect matching: m is popular among perfect
// matchings iff the subgraph of its canonical realization has no positive
// alternating cycle. Checking the one canonical realization suffices: a
// positive cycle in any realization's subgraph already refutes popularity,
// and a popular matching admits no such cycle in any realization. On
// failure, the witness is the projection of the realization switched along
// a repaired positive cycle; it is a perfect matching that defeats m.
struct PopularityVerdict {
    bool popular = false;
    std::optional<Matching> witness;   // present iff not popular
    std::optional<CycleWitness> cycle; // the repaired cycle behind the witness
    int chord_exchanges = 0;           // repairs spent on the found cycle
};

PopularityVerdict is_popular_perfect(const Instance& inst, const PerfectMatching& m);

} // namespace popmatch
