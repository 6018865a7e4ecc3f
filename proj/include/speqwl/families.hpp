#ifndef SPEQWL_FAMILIES_HPP
#define SPEQWL_FAMILIES_HPP

#include <string>
#include <utility>
#include <vector>

#include "speqwl/graph.hpp"
#include "speqwl/tuples.hpp"

namespace speqwl {

// Undirected cycle on n >= 3 nodes.
LabeledGraph cycle(int n);

// (C_{2(k+2)}, C_{k+2} u C_{k+2}): equal node and edge counts, the first
// connected, the second two disjoint cycles.
std::pair<LabeledGraph, LabeledGraph> cycle_pair(int k);

// Connected companions with equal node/edge counts and degree sequences:
// A has two (k+2)-cycles joined by a bridge, B has two (k+3)-cycles sharing
// one edge.
std::pair<LabeledGraph, LabeledGraph> ab_pair(int k);

// Gadget twins over the complete graph on k+1 base vertices: vertex clouds
// indexed by even edge subsets, one cloud flipped to odd subsets in the
// second graph. Unlabeled.
std::pair<LabeledGraph, LabeledGraph> cfi_pair(int k);

// cfi_pair with cloud colors on the original vertices and every edge
// replaced by a path of length delta (> 3k required) whose interior nodes
// carry the unordered pair of the endpoint colors. Color ids are assigned
// from the base structure, identically for both graphs.
std::pair<LabeledGraph, LabeledGraph> padded_colored_pair(int k, int delta);

// Rooted tree obtained by expanding local edges breadth-wise from a tuple,
// to exactly `depth` levels. Every neighbor of an expanded node becomes a
// child, including one for the node it was reached from.
struct UnrolledTree {
    struct Node {
        TupleIndex source = 0;  // tuple index in the originating tuple graph
        int depth = 0;
        std::int32_t parent = -1;         // -1 for the root
        std::int32_t edge_position = -1;  // 0-based position label, -1 for the root
    };
    std::vector<Node> nodes;               // root first, grouped by depth
    std::vector<std::string> node_labels;  // atomic type codes
};

UnrolledTree unroll(const TupleGraph& tg, TupleIndex root, int depth);

// Canonical code of a rooted, node- and edge-labeled tree (AHU-style).
std::string tree_canonical_code(const UnrolledTree& tree);

// Labeled isomorphism test between rooted trees. A directed tree has a
// unique source node, so any isomorphism maps root to root; the flag is
// kept for interface symmetry with the root-mapped relation.
bool trees_isomorphic(const UnrolledTree& a, const UnrolledTree& b, bool root_mapped = true);

// Witness searches used to certify non-isomorphism of the generated pairs.
// Candidates are restricted to the vertex-cloud nodes (the first
// (k+1)*2^(k-1) ids of a gadget graph, the red-colored nodes of a padded
// one); mixing in edge-cloud nodes admits degenerate witnesses.
bool has_distance_two_clique(const LabeledGraph& gadget, int k, int size);
bool has_colored_distance_clique(const LabeledGraph& padded, int k, int delta, int size);

}  // namespace speqwl

#endif  // SPEQWL_FAMILIES_HPP
