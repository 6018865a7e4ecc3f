#ifndef SPEQWL_GRAPH_HPP
#define SPEQWL_GRAPH_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace speqwl {

using NodeId = std::int32_t;
using Label = std::int32_t;

// Immutable undirected graph with integer node and edge labels.
// Node ids are 0..node_count-1, neighbor lists are sorted ascending,
// self-loops and parallel edges are rejected at construction.
class LabeledGraph {
  public:
    LabeledGraph() = default;

    // `edges` lists each undirected edge once (either orientation);
    // `node_labels`/`edge_labels` may be empty, in which case label 0 is used.
    // `edge_labels`, when given, aligns with `edges`.
    LabeledGraph(NodeId node_count,
                 const std::vector<std::pair<NodeId, NodeId>>& edges,
                 std::vector<Label> node_labels = {},
                 const std::vector<Label>& edge_labels = {});

    NodeId node_count() const { return node_count_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(neighbors_.size()) / 2; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    NodeId degree(NodeId v) const { return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]); }
    NodeId max_degree() const;

    Label node_label(NodeId v) const { return node_labels_[v]; }
    std::span<const Label> node_labels() const { return node_labels_; }

    bool has_edge(NodeId u, NodeId v) const;
    // Label of an existing edge; throws std::invalid_argument otherwise.
    Label edge_label(NodeId u, NodeId v) const;

    // Undirected edge list, each edge once as (u, v) with u < v, sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

  private:
    NodeId node_count_ = 0;
    std::vector<std::int64_t> offsets_;  // size node_count_+1
    std::vector<NodeId> neighbors_;      // both directions, sorted per node
    std::vector<Label> slot_labels_;     // edge label per directed slot
    std::vector<Label> node_labels_;
};

struct GraphCollection {
    std::vector<LabeledGraph> graphs;
    // One target per graph when non-empty (classification labels).
    std::vector<int> targets;

    std::size_t size() const { return graphs.size(); }
    bool has_targets() const { return !targets.empty(); }
};

struct ComponentInfo {
    std::vector<NodeId> component_of;  // per node, ids contiguous from 0
    NodeId count = 0;
};

ComponentInfo connected_components(const LabeledGraph& g);

// Node ids of `h` shifted by g.node_count(); labels preserved.
LabeledGraph disjoint_union(const LabeledGraph& g, const LabeledGraph& h);

// Relabels nodes: node perm[u] of the result plays the role of node u of g.
// `perm` must be a bijection on 0..node_count-1.
LabeledGraph apply_permutation(const LabeledGraph& g, std::span<const NodeId> perm);

}  // namespace speqwl

#endif  // SPEQWL_GRAPH_HPP
