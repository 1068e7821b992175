#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "popmatch/instance.hpp"

namespace popmatch {

inline constexpr long long kDefaultEnumLimit = 10'000'000;

// Reads POPMATCH_MAX_ENUM (positive integer) or falls back to the default.
long long enumeration_limit_from_env();

// Streams every perfect matching exactly once, in the deterministic order
// induced by picking, agent by agent in document order, each capacity-sized
// neighbour subset in lexicographic document order. The visitor may return
// false to stop early. Throws EnumLimitError after `limit` matchings have
// been produced. Returns the number of matchings visited.
long long enumerate_perfect_matchings(const Instance& inst,
                                      const std::function<bool(const Matching&)>& visit,
                                      long long limit = kDefaultEnumLimit);

// Popularity by the definition: m never loses a head-to-head vote against
// any perfect matching. Independent of the cycle-based verifier; this is the
// reference the verifier is tested against.
bool brute_force_is_popular_perfect(const Instance& inst, const PerfectMatching& m,
                                    long long limit = kDefaultEnumLimit);

struct SolveReport {
    Matching matching;
    Cost cost = 0;
    long long enumerated = 0; // perfect matchings seen
    long long popular = 0;    // of which popular
    std::string certificate;
};

// Minimum-cost popular perfect matching, ties broken toward the
// lexicographically smallest edge list. Enumerates perfect matchings and
// keeps the cheapest one the cycle-based verifier accepts. Throws
// InfeasibleError when no perfect matching exists and NotPopularError when
// perfect matchings exist but none is popular.
SolveReport solve_min_cost(const Instance& inst, long long limit = kDefaultEnumLimit);

} // namespace popmatch
