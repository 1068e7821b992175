#pragma once

#include <optional>
#include <vector>

#include "popmatch/clone.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/stability.hpp"

namespace popmatch {

// A colorful system: every base edge exists in one copy per color 1..n0,
// where n0 is the total agent capacity. Agents rank copies by color first
// (lower color better), jobs by color first in the opposite direction
// (higher color better); within one color both sides follow their base
// preference order. A matching may use at most one copy of each base edge.
//
// Two bases occur: the instance itself (base edges = instance edges, vertex
// capacities kept), and the subgraph of a realization (base edges = subgraph
// edges over clones, all capacities one).
class ColorfulSystem {
public:
    struct BaseEdge {
        int left = -1, right = -1;      // vertex ids in the underlying base
        int left_rank = 0, right_rank = 0;
        int instance_edge = -1;          // instance edge index (both flavours)
    };

    static ColorfulSystem over_instance(const Instance& inst);
    static ColorfulSystem over_subgraph(const SubgraphGM& g);

    int colors() const { return n_colors_; }
    std::int64_t stride() const { return stride_; } // key gap between colors
    const std::vector<BaseEdge>& base_edges() const { return base_edges_; }
    const std::vector<int>& left_caps() const { return left_caps_; }
    const std::vector<int>& right_caps() const { return right_caps_; }

    std::int64_t left_key(int base_idx, int color) const {
        return static_cast<std::int64_t>(color - 1) * stride_ + base_edges_[base_idx].left_rank;
    }
    std::int64_t right_key(int base_idx, int color) const {
        return static_cast<std::int64_t>(n_colors_ - color) * stride_ +
               base_edges_[base_idx].right_rank;
    }

    // Materialises every copy as a PreferenceSystem edge, base-major then
    // color, class tag = base edge index. Edge id = base_idx * colors + c-1.
    PreferenceSystem to_system() const;

private:
    int n_colors_ = 0;
    std::int64_t stride_ = 1;
    std::vector<int> left_caps_, right_caps_;
    std::vector<BaseEdge> base_edges_;
};

// One copy of a base edge: base endpoints plus a color in 1..n0.
struct ColoredEdge {
    int left = -1, right = -1, color = 0;
    friend auto operator<=>(const ColoredEdge&, const ColoredEdge&) = default;
};

using ColorfulMatching = std::vector<ColoredEdge>; // sorted

// Conversions between colored edges and the materialised system's edge ids.
ColorfulMatching colorful_from_system(const ColorfulSystem& cs, const SystemMatching& m);
SystemMatching colorful_to_system(const ColorfulSystem& cs, const ColorfulMatching& m);

// Drops colors. For the instance flavour the result is a Matching of the
// instance (validated).
Matching project(const Instance& inst, const ColorfulMatching& m);

// Colors each edge of the perfect matching m with a color in 1..n0 so that
// the colored copy set is stable in the colorful system over the instance,
// if any such assignment exists; the first one in lexicographic color order
// (edges sorted by document index) is returned. Exactly the popular perfect
// matchings admit one. The search prunes a branch as soon as some uncolored
// copy of a non-matching edge is certain to block every completion.
std::optional<ColorfulMatching> lift_to_stable(const Instance& inst, const PerfectMatching& m);

// Canonical one-to-one realization of a colorful matching of the instance
// flavour: each vertex hands clone copies to its partners in base preference
// order; colors carry over. Used to relate stability over the instance to
// stability over the subgraph of the induced realization.
struct ColorfulRealization {
    Realization realization;       // the underlying clone matching
    ColorfulMatching clone_edges;  // same edges, clone ids, colors kept
};

ColorfulRealization realize_colorful(const ClonedInstance& ci, const Instance& inst,
                                     const ColorfulMatching& m);

} // namespace popmatch
