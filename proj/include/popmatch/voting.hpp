#pragma once

#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

enum class Side { Agent, Job };

// Sentinel standing in for "no partner" when comparing partner sets of
// unequal size. Every vertex prefers any real neighbour to kNobody, and two
// kNobody entries tie.
inline constexpr int kNobody = -1;

// Pairwise vote of vertex v (on the given side) between two alternatives on
// the other side: +1 if v prefers u to w, -1 if it prefers w to u, 0 iff
// u == w (including kNobody vs kNobody). Throws ValidationError if a real
// alternative is not a neighbour of v.
int vote(const Instance& inst, Side side, int v, int u, int w);

// Outcome of comparing two partner sets S, T of one vertex: the common part
// cancels, the remainders are matched one-to-one (the short side padded with
// kNobody), and over all such pairings the total pairwise vote is minimised.
// The minimum is the comparison value; the minimising pairing is kept as a
// certificate.
struct SetVote {
    long long value = 0;
    std::vector<std::pair<int, int>> pairing; // (from S\T, from T\S), kNobody for padding
};

// S and T are vertex indices on v's other side; duplicates are rejected, as
// are non-neighbours. The pairing minimum is computed by exact min-cost
// assignment on the pairwise vote matrix.
SetVote vote_set(const Instance& inst, Side side, int v, const std::vector<int>& S,
                 const std::vector<int>& T);

// Head-to-head comparison of two matchings: every vertex on both sides votes
// between its partner sets, each in its own worst case. Positive means m
// beats n in the popularity count.
struct DeltaValue {
    long long value = 0;
    std::vector<long long> agent_votes, job_votes; // per-vertex contributions
};

DeltaValue delta(const Instance& inst, const Matching& m, const Matching& n);

// Exact min-cost assignment on a square integer matrix; returns the column
// assigned to each row. Exposed for reuse and for oracle tests.
std::vector<int> min_cost_assignment(const std::vector<std::vector<long long>>& cost);

} // namespace popmatch
