#ifndef SPEQWL_TUPLES_HPP
#define SPEQWL_TUPLES_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "speqwl/graph.hpp"

namespace speqwl {

using TupleIndex = std::int64_t;

// Number of connected components of the subgraph induced by the distinct
// nodes of `tuple`.
int component_count(const LabeledGraph& g, std::span<const NodeId> tuple);

// Canonical code of the labeled, position-marked isomorphism type of the
// subgraph induced by `tuple`: two tuples get equal codes exactly when
// position i -> position i is a labeled isomorphism between the induced
// subgraphs. Codes do not depend on node identities, so they are comparable
// across graphs.
std::string atomic_type_code(const LabeledGraph& g, std::span<const NodeId> tuple);

// All k-element node multisets whose induced subgraph has at most s
// components, as sorted vectors in lexicographic order. Seeded by the
// exhaustive set of s-multisets and grown by neighborhood expansion.
std::vector<std::vector<NodeId>> enumerate_ks_multisets(const LabeledGraph& g, int k, int s);

// All (k,s)-tuples in lexicographic order, flattened (stride k).
std::vector<NodeId> enumerate_ks_tuples(const LabeledGraph& g, int k, int s);

// |V(G)^k_s| without materializing the tuples.
std::int64_t count_ks_tuples(const LabeledGraph& g, int k, int s);

// Directed, edge-labeled graph over the (k,s)-tuples: an edge labeled j
// connects a tuple to each tuple obtained by replacing position j with a
// neighbor of the replaced node, restricted to tuples inducing at most s
// components. Immutable after construction.
struct TupleGraph {
    int k = 0;
    int s = 0;
    NodeId graph_node_count = 0;
    TupleIndex tuple_count = 0;
    std::vector<NodeId> tuple_nodes;  // tuple_count * k, lexicographically sorted

    // Atomic types, deduplicated: per-tuple index into `atomic_code_table`.
    std::vector<std::int32_t> atomic_class;
    std::vector<std::string> atomic_code_table;

    // Local edges in CSR form keyed by (tuple, position).
    std::vector<std::int64_t> edge_offsets;  // tuple_count * k + 1
    std::vector<std::int32_t> edge_targets;

    std::span<const NodeId> tuple_at(TupleIndex t) const {
        return {tuple_nodes.data() + t * k, static_cast<std::size_t>(k)};
    }
    const std::string& atomic_code(TupleIndex t) const {
        return atomic_code_table[atomic_class[t]];
    }
    // Local j-neighbors for 0-based position j.
    std::span<const std::int32_t> local_neighbors(TupleIndex t, int position) const;
    std::int64_t local_edge_count() const { return static_cast<std::int64_t>(edge_targets.size()); }

    // Index of a tuple by binary search, -1 if absent.
    TupleIndex find_tuple(std::span<const NodeId> tuple) const;
};

TupleGraph build_tuple_graph(const LabeledGraph& g, int k, int s);

// Component count of the tuple graph viewed as an undirected structure
// over local edges.
NodeId tuple_graph_component_count(const TupleGraph& tg);

// Edge-list text dump (tuple index pairs plus the 1-based position label),
// for cross-implementation diffing.
void dump_tuple_graph(const TupleGraph& tg, const std::filesystem::path& path);

}  // namespace speqwl

#endif  // SPEQWL_TUPLES_HPP
