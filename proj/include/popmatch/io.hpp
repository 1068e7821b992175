#pragma once

#include <optional>
#include <string>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

// JSON document formats.
//
// Instance:
//   { "agents": [ {"name": "a", "capacity": 1, "preferences": ["b", "b2"]} ... ],
//     "jobs":   [ ... same shape, preferences name agents ... ],
//     "costs":  [ {"agent": "a", "job": "b", "cost": 1.5} ... ] }        (optional)
//
// Costs accept integers, decimal numbers, or decimal strings with at most six
// fractional digits; all are held as exact integers scaled by 1e6. Edges
// without a cost entry cost 0.
//
// Matching:
//   { "edges": [ {"agent": "a", "job": "b"} ... ] }
//
// Colorful matching: same with a "color" field (1-based) on every edge.
//
// Serialization is canonical: fixed key order, document-order vertex lists,
// matchings sorted by (agent, job) document index, zero costs omitted.
// parse(serialize(x)) == x, and equal values serialize byte-identically.

Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

Matching parse_matching(const Instance& inst, const std::string& text);
std::string serialize_matching(const Instance& inst, const Matching& m);

// Exact decimal-to-scaled-cost conversion; throws ValidationError on more
// than six fractional digits, overflow, or trailing garbage.
Cost parse_cost_string(const std::string& text);
// Renders a scaled cost as a JSON-compatible literal ("3", "1.5", "-0.25").
std::string format_cost(Cost c);

} // namespace popmatch
