#include "speqwl/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "speqwl/errors.hpp"

namespace speqwl {

LabeledGraph::LabeledGraph(NodeId node_count,
                           const std::vector<std::pair<NodeId, NodeId>>& edges,
                           std::vector<Label> node_labels,
                           const std::vector<Label>& edge_labels)
    : node_count_(node_count) {
    if (node_count < 0) throw std::invalid_argument("negative node count");
    if (!edge_labels.empty() && edge_labels.size() != edges.size())
        throw std::invalid_argument("edge label count does not match edge count");
    if (!node_labels.empty() && node_labels.size() != static_cast<std::size_t>(node_count))
        throw std::invalid_argument("node label count does not match node count");

    node_labels_ = node_labels.empty() ? std::vector<Label>(node_count, 0) : std::move(node_labels);

    std::vector<std::vector<std::pair<NodeId, Label>>> adj(node_count);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw std::invalid_argument("edge endpoint " + std::to_string(std::max(u, v)) +
                                        " out of range");
        if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
        Label lab = edge_labels.empty() ? 0 : edge_labels[i];
        adj[u].emplace_back(v, lab);
        adj[v].emplace_back(u, lab);
    }

    offsets_.assign(node_count + 1, 0);
    for (NodeId v = 0; v < node_count; ++v) {
        auto& row = adj[v];
        std::sort(row.begin(), row.end());
        for (std::size_t i = 1; i < row.size(); ++i)
            if (row[i].first == row[i - 1].first)
                throw std::invalid_argument("parallel edge at node " + std::to_string(v));
        offsets_[v + 1] = offsets_[v] + static_cast<std::int64_t>(row.size());
    }
    neighbors_.resize(offsets_[node_count]);
    slot_labels_.resize(offsets_[node_count]);
    for (NodeId v = 0; v < node_count; ++v) {
        std::int64_t pos = offsets_[v];
        for (auto [w, lab] : adj[v]) {
            neighbors_[pos] = w;
            slot_labels_[pos] = lab;
            ++pos;
        }
    }
}

NodeId LabeledGraph::max_degree() const {
    NodeId d = 0;
    for (NodeId v = 0; v < node_count_; ++v) d = std::max(d, degree(v));
    return d;
}

bool LabeledGraph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

Label LabeledGraph::edge_label(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v)
        throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") not present");
    return slot_labels_[offsets_[u] + (it - nb.begin())];
}

std::vector<std::pair<NodeId, NodeId>> LabeledGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (NodeId u = 0; u < node_count_; ++u)
        for (NodeId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

ComponentInfo connected_components(const LabeledGraph& g) {
    ComponentInfo info;
    info.component_of.assign(g.node_count(), -1);
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < g.node_count(); ++start) {
        if (info.component_of[start] != -1) continue;
        info.component_of[start] = info.count;
        stack.push_back(start);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : g.neighbors(v)) {
                if (info.component_of[w] == -1) {
                    info.component_of[w] = info.count;
                    stack.push_back(w);
                }
            }
        }
        ++info.count;
    }
    return info;
}

LabeledGraph disjoint_union(const LabeledGraph& g, const LabeledGraph& h) {
    NodeId shift = g.node_count();
    std::vector<std::pair<NodeId, NodeId>> edges = g.edges();
    std::vector<Label> edge_labels;
    edge_labels.reserve(static_cast<std::size_t>(g.edge_count() + h.edge_count()));
    for (auto [u, v] : edges) edge_labels.push_back(g.edge_label(u, v));
    for (auto [u, v] : h.edges()) {
        edges.emplace_back(u + shift, v + shift);
        edge_labels.push_back(h.edge_label(u, v));
    }
    std::vector<Label> node_labels(g.node_labels().begin(), g.node_labels().end());
    node_labels.insert(node_labels.end(), h.node_labels().begin(), h.node_labels().end());
    return LabeledGraph(g.node_count() + h.node_count(), edges, std::move(node_labels),
                        edge_labels);
}

LabeledGraph apply_permutation(const LabeledGraph& g, std::span<const NodeId> perm) {
    NodeId n = g.node_count();
    if (perm.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("permutation size does not match node count");
    std::vector<bool> seen(n, false);
    for (NodeId v : perm) {
        if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("mapping is not a bijection");
        seen[v] = true;
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<Label> edge_labels;
    edges.reserve(static_cast<std::size_t>(g.edge_count()));
    for (auto [u, v] : g.edges()) {
        edges.emplace_back(perm[u], perm[v]);
        edge_labels.push_back(g.edge_label(u, v));
    }
    std::vector<Label> node_labels(n);
    for (NodeId v = 0; v < n; ++v) node_labels[perm[v]] = g.node_label(v);
    return LabeledGraph(n, edges, std::move(node_labels), edge_labels);
}

}  // namespace speqwl
