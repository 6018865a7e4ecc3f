#include "speqwl/families.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <stdexcept>

#include "speqwl/errors.hpp"
#include "speqwl/refinement.hpp"

namespace speqwl {

namespace {

std::vector<std::pair<NodeId, NodeId>> cycle_edges(NodeId n, NodeId base) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(n);
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(base + i, base + (i + 1) % n);
    return edges;
}

// Base structure shared by the CFI-style twins: the complete graph on k+1
// vertices with its incident-edge lists.
struct BaseStructure {
    int k;
    std::vector<std::pair<int, int>> base_edges;      // lex sorted
    std::vector<std::vector<int>> incident;           // per base vertex, edge indices
};

BaseStructure make_base(int k) {
    BaseStructure b;
    b.k = k;
    b.incident.resize(k + 1);
    for (int a = 0; a <= k; ++a)
        for (int c = a + 1; c <= k; ++c) {
            b.incident[a].push_back(static_cast<int>(b.base_edges.size()));
            b.incident[c].push_back(static_cast<int>(b.base_edges.size()));
            b.base_edges.emplace_back(a, c);
        }
    return b;
}

// One gadget graph: cloud vertices are indexed by subsets of the incident
// edges with the requested parity (odd at `flipped_vertex`, even elsewhere).
// Vertex clouds come first, then e^0/e^1 per base edge.
LabeledGraph build_gadget(const BaseStructure& b, int flipped_vertex) {
    const int k = b.k;
    const int cloud_size = 1 << (k - 1);
    const NodeId gadget_base = static_cast<NodeId>((k + 1) * cloud_size);
    auto e0 = [&](int edge) { return gadget_base + 2 * edge; };
    auto e1 = [&](int edge) { return gadget_base + 2 * edge + 1; };

    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t e = 0; e < b.base_edges.size(); ++e)
        edges.emplace_back(e0(static_cast<int>(e)), e1(static_cast<int>(e)));

    NodeId next_id = 0;
    for (int v = 0; v <= k; ++v) {
        const int want = (v == flipped_vertex) ? 1 : 0;
        for (int mask = 0; mask < (1 << k); ++mask) {
            if (std::popcount(static_cast<unsigned>(mask)) % 2 != want) continue;
            const NodeId id = next_id++;
            for (int i = 0; i < k; ++i) {
                const int edge = b.incident[v][i];
                edges.emplace_back(id, (mask >> i) & 1 ? e1(edge) : e0(edge));
            }
        }
    }
    const NodeId total = gadget_base + static_cast<NodeId>(2 * b.base_edges.size());
    return LabeledGraph(total, edges);
}

}  // namespace

LabeledGraph cycle(int n) {
    if (n < 3) throw std::invalid_argument("a cycle needs at least 3 nodes");
    return LabeledGraph(n, cycle_edges(n, 0));
}

std::pair<LabeledGraph, LabeledGraph> cycle_pair(int k) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    LabeledGraph g = cycle(2 * (k + 2));
    auto edges = cycle_edges(k + 2, 0);
    auto second = cycle_edges(k + 2, k + 2);
    edges.insert(edges.end(), second.begin(), second.end());
    return {std::move(g), LabeledGraph(2 * (k + 2), edges)};
}

std::pair<LabeledGraph, LabeledGraph> ab_pair(int k) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    const NodeId n = 2 * (k + 2);
    // A: two (k+2)-cycles, 0..k+1 and k+2..2k+3, bridged by (k+1, k+2).
    std::vector<std::pair<NodeId, NodeId>> a_edges = cycle_edges(k + 2, 0);
    auto second = cycle_edges(k + 2, k + 2);
    a_edges.insert(a_edges.end(), second.begin(), second.end());
    a_edges.emplace_back(k + 1, k + 2);
    // B: outer 2(k+2)-cycle plus the chord (0, k+2) shared by two
    // (k+3)-cycles.
    std::vector<std::pair<NodeId, NodeId>> b_edges = cycle_edges(n, 0);
    b_edges.emplace_back(0, k + 2);
    return {LabeledGraph(n, a_edges), LabeledGraph(n, b_edges)};
}

std::pair<LabeledGraph, LabeledGraph> cfi_pair(int k) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (k >= 48) throw ResourceError("gadget pair too large", ~0ull);
    const std::uint64_t nodes =
        static_cast<std::uint64_t>(k + 1) * (1ull << (k - 1)) + static_cast<std::uint64_t>(k) * (k + 1);
    const std::uint64_t bytes = nodes * static_cast<std::uint64_t>(k + 2) * 16;
    const std::uint64_t budget = resolve_memory_budget(0);
    if (bytes > budget)
        throw ResourceError("gadget pair for k=" + std::to_string(k) + " needs about " +
                                std::to_string(bytes) + " bytes, budget is " +
                                std::to_string(budget),
                            bytes);
    BaseStructure base = make_base(k);
    return {build_gadget(base, -1), build_gadget(base, 0)};
}

std::pair<LabeledGraph, LabeledGraph> padded_colored_pair(int k, int delta) {
    if (delta <= 3 * k)
        throw std::invalid_argument("delta must exceed 3k (hiding the twist needs path length > 3k)");
    auto [g, h] = cfi_pair(k);

    const int cloud_size = 1 << (k - 1);
    const int base_edge_count = k * (k + 1) / 2;
    const NodeId gadget_base = static_cast<NodeId>((k + 1) * cloud_size);
    auto cloud_color = [&](NodeId v) -> Label {
        if (v < gadget_base) return static_cast<Label>(v / cloud_size);                  // Red_v
        return static_cast<Label>(k + 1 + (v - gadget_base) / 2);                        // Blue_e
    };

    // Pair colors registered from the base structure so both graphs share
    // the same vocabulary regardless of which subsets exist.
    std::map<std::pair<Label, Label>, Label> pair_color;
    Label next = static_cast<Label>(k + 1 + base_edge_count);
    BaseStructure base = make_base(k);
    for (int e = 0; e < base_edge_count; ++e) {
        Label blue = static_cast<Label>(k + 1 + e);
        pair_color[{blue, blue}] = next++;
    }
    for (int v = 0; v <= k; ++v)
        for (int e : base.incident[v]) {
            Label red = static_cast<Label>(v);
            Label blue = static_cast<Label>(k + 1 + e);
            std::pair<Label, Label> key{std::min(red, blue), std::max(red, blue)};
            if (!pair_color.count(key)) pair_color[key] = next++;
        }

    auto subdivide = [&](const LabeledGraph& original) {
        std::vector<Label> labels;
        for (NodeId v = 0; v < original.node_count(); ++v) labels.push_back(cloud_color(v));
        std::vector<std::pair<NodeId, NodeId>> edges;
        NodeId next_id = original.node_count();
        for (auto [u, v] : original.edges()) {  // lexicographic edge order
            const Label cu = cloud_color(u), cv = cloud_color(v);
            const Label aux = pair_color.at({std::min(cu, cv), std::max(cu, cv)});
            NodeId prev = u;
            for (int i = 0; i + 1 < delta; ++i) {
                labels.push_back(aux);
                edges.emplace_back(prev, next_id);
                prev = next_id++;
            }
            edges.emplace_back(prev, v);
        }
        return LabeledGraph(next_id, edges, labels);
    };
    return {subdivide(g), subdivide(h)};
}

UnrolledTree unroll(const TupleGraph& tg, TupleIndex root, int depth) {
    if (root < 0 || root >= tg.tuple_count) throw std::invalid_argument("root tuple out of range");
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    UnrolledTree tree;
    tree.nodes.push_back({root, 0, -1, -1});
    std::size_t level_begin = 0;
    for (int d = 1; d <= depth; ++d) {
        const std::size_t level_end = tree.nodes.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            const TupleIndex src = tree.nodes[i].source;
            for (int j = 0; j < tg.k; ++j)
                for (std::int32_t dest : tg.local_neighbors(src, j))
                    tree.nodes.push_back(
                        {dest, d, static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
        }
        level_begin = level_end;
    }
    tree.node_labels.reserve(tree.nodes.size());
    for (const auto& node : tree.nodes) tree.node_labels.push_back(tg.atomic_code(node.source));
    return tree;
}

namespace {

void append_len(std::string& out, std::size_t len) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
}

void validate_tree(const UnrolledTree& t) {
    if (t.nodes.empty() || t.nodes.size() != t.node_labels.size())
        throw std::invalid_argument("malformed tree");
    if (t.nodes[0].parent != -1 || t.nodes[0].depth != 0)
        throw std::invalid_argument("first node must be the root");
    for (std::size_t i = 1; i < t.nodes.size(); ++i) {
        const auto& n = t.nodes[i];
        if (n.parent < 0 || static_cast<std::size_t>(n.parent) >= i ||
            n.depth != t.nodes[n.parent].depth + 1)
            throw std::invalid_argument("input is not a rooted tree");
    }
}

}  // namespace

std::string tree_canonical_code(const UnrolledTree& tree) {
    validate_tree(tree);
    const std::size_t n = tree.nodes.size();
    std::vector<std::vector<std::int32_t>> children(n);
    for (std::size_t i = 1; i < n; ++i)
        children[tree.nodes[i].parent].push_back(static_cast<std::int32_t>(i));
    std::vector<std::string> code(n);
    // Children precede parents in index order within each level, so a
    // reverse sweep is a valid post-order.
    for (std::size_t i = n; i-- > 0;) {
        std::vector<std::string> child_codes;
        child_codes.reserve(children[i].size());
        for (std::int32_t c : children[i]) {
            std::string rec;
            append_len(rec, static_cast<std::size_t>(tree.nodes[c].edge_position));
            append_len(rec, code[c].size());
            rec += code[c];
            child_codes.push_back(std::move(rec));
        }
        std::sort(child_codes.begin(), child_codes.end());
        std::string& out = code[i];
        append_len(out, tree.node_labels[i].size());
        out += tree.node_labels[i];
        append_len(out, child_codes.size());
        for (auto& rec : child_codes) out += rec;
        for (std::int32_t c : children[i]) code[c].clear();
    }
    return code[0];
}

bool trees_isomorphic(const UnrolledTree& a, const UnrolledTree& b, bool /*root_mapped*/) {
    // The root is the unique source of a directed tree, so every labeled
    // isomorphism fixes it; both flag values coincide.
    return tree_canonical_code(a) == tree_canonical_code(b);
}

namespace {

std::vector<int> bfs_distances(const LabeledGraph& g, NodeId from) {
    std::vector<int> dist(g.node_count(), -1);
    std::queue<NodeId> queue;
    dist[from] = 0;
    queue.push(from);
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop();
        for (NodeId w : g.neighbors(v))
            if (dist[w] == -1) {
                dist[w] = dist[v] + 1;
                queue.push(w);
            }
    }
    return dist;
}

// Backtracking clique search over an adjacency predicate.
bool find_clique(const std::vector<NodeId>& candidates,
                 const std::vector<std::vector<bool>>& adjacent, int size) {
    std::vector<int> chosen;
    auto extend = [&](auto&& self, std::size_t from) -> bool {
        if (static_cast<int>(chosen.size()) == size) return true;
        for (std::size_t i = from; i < candidates.size(); ++i) {
            bool ok = true;
            for (int c : chosen)
                if (!adjacent[c][i]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(static_cast<int>(i));
            if (self(self, i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return extend(extend, 0);
}

}  // namespace

bool has_distance_two_clique(const LabeledGraph& gadget, int k, int size) {
    // Vertices of one cloud agree on some incident edge once k >= 3 and are
    // then trivially at distance two, so the witness requires pairwise
    // distinct clouds; that is what the subset-parity argument counts.
    const int cloud_size = 1 << (k - 1);
    const NodeId clouds = static_cast<NodeId>((k + 1) * cloud_size);
    std::vector<NodeId> candidates(clouds);
    for (NodeId v = 0; v < clouds; ++v) candidates[v] = v;
    std::vector<std::vector<bool>> adjacent(clouds, std::vector<bool>(clouds, false));
    for (NodeId v = 0; v < clouds; ++v) {
        auto dist = bfs_distances(gadget, v);
        for (NodeId w = 0; w < clouds; ++w)
            adjacent[v][w] = dist[w] == 2 && v / cloud_size != w / cloud_size;
    }
    return find_clique(candidates, adjacent, size);
}

bool has_colored_distance_clique(const LabeledGraph& padded, int k, int delta, int size) {
    const Label red_limit = static_cast<Label>(k + 1);
    const Label blue_limit = static_cast<Label>(k + 1 + k * (k + 1) / 2);
    auto is_red = [&](NodeId v) { return padded.node_label(v) < red_limit; };
    auto is_blue = [&](NodeId v) {
        return padded.node_label(v) >= red_limit && padded.node_label(v) < blue_limit;
    };
    auto is_aux = [&](NodeId v) { return padded.node_label(v) >= blue_limit; };

    std::vector<NodeId> reds;
    for (NodeId v = 0; v < padded.node_count(); ++v)
        if (is_red(v)) reds.push_back(v);
    std::vector<int> red_index(padded.node_count(), -1);
    for (std::size_t i = 0; i < reds.size(); ++i) red_index[reds[i]] = static_cast<int>(i);

    // Two cloud vertices are clique-adjacent when some edge-cloud vertex
    // reaches both through auxiliary-only paths of length delta.
    std::vector<std::vector<bool>> adjacent(reds.size(), std::vector<bool>(reds.size(), false));
    for (NodeId b = 0; b < padded.node_count(); ++b) {
        if (!is_blue(b)) continue;
        std::vector<int> dist(padded.node_count(), -1);
        std::queue<NodeId> queue;
        dist[b] = 0;
        queue.push(b);
        std::vector<int> reached;
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop();
            if (dist[v] == delta) {
                if (is_red(v)) reached.push_back(red_index[v]);
                continue;
            }
            for (NodeId w : padded.neighbors(v)) {
                if (dist[w] != -1) continue;
                if (!is_aux(w) && dist[v] + 1 != delta) continue;  // interior must be auxiliary
                dist[w] = dist[v] + 1;
                queue.push(w);
            }
        }
        for (int u : reached)
            for (int v : reached)
                if (u != v && padded.node_label(reds[u]) != padded.node_label(reds[v]))
                    adjacent[u][v] = true;  // pairwise distinct clouds, as above
    }
    std::vector<NodeId> candidates(reds.size());
    for (std::size_t i = 0; i < reds.size(); ++i) candidates[i] = static_cast<NodeId>(i);
    return find_clique(candidates, adjacent, size);
}

}  // namespace speqwl
