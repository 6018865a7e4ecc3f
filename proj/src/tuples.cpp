#include "speqwl/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "speqwl/errors.hpp"

namespace speqwl {

namespace {

void check_ks(int k, int s) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (s < 1 || s > k) throw std::invalid_argument("s must lie in [k]");
}

struct VecHash {
    std::size_t operator()(const std::vector<NodeId>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (NodeId x : v) {
            h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ull;
        }
        return h;
    }
};

void append_int(std::string& out, std::int32_t value) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

// Distinct permutations of a sorted multiset, appended flat in lexicographic
// order.
void append_permutations(const std::vector<NodeId>& sorted_multiset, std::vector<NodeId>& flat) {
    std::vector<NodeId> perm = sorted_multiset;
    do {
        flat.insert(flat.end(), perm.begin(), perm.end());
    } while (std::next_permutation(perm.begin(), perm.end()));
}

std::int64_t permutation_count(const std::vector<NodeId>& sorted_multiset) {
    std::int64_t total = 1;
    std::int64_t seen = 0;
    std::int64_t run = 0;
    for (std::size_t i = 0; i < sorted_multiset.size(); ++i) {
        ++seen;
        run = (i > 0 && sorted_multiset[i] == sorted_multiset[i - 1]) ? run + 1 : 1;
        total = total * seen / run;  // multinomial, exact at every step
    }
    return total;
}

// Visits every sorted k-multiset over 0..n-1 (the exhaustive seed set).
template <typename Fn>
void for_each_sorted_multiset(NodeId n, int k, Fn&& fn) {
    std::vector<NodeId> m(k, 0);
    if (n == 0) return;
    while (true) {
        fn(m);
        int pos = k - 1;
        while (pos >= 0 && m[pos] == n - 1) --pos;
        if (pos < 0) return;
        NodeId next = m[pos] + 1;
        for (int i = pos; i < k; ++i) m[i] = next;
    }
}

}  // namespace

int component_count(const LabeledGraph& g, std::span<const NodeId> tuple) {
    // Union-find over the distinct nodes of the tuple.
    std::vector<NodeId> nodes(tuple.begin(), tuple.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    const int m = static_cast<int>(nodes.size());
    std::vector<int> parent(m);
    for (int i = 0; i < m; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int count = m;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (g.has_edge(nodes[i], nodes[j])) {
                int a = find(i), b = find(j);
                if (a != b) {
                    parent[a] = b;
                    --count;
                }
            }
    return count;
}

std::string atomic_type_code(const LabeledGraph& g, std::span<const NodeId> tuple) {
    const int k = static_cast<int>(tuple.size());
    std::string code;
    code.reserve(static_cast<std::size_t>(k) * (k + 4));
    // Pairwise relation: 1 = same node, 2 = adjacent, 0 = neither.
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            char rel = tuple[i] == tuple[j] ? 1 : (g.has_edge(tuple[i], tuple[j]) ? 2 : 0);
            code.push_back(rel);
        }
    for (int i = 0; i < k; ++i) append_int(code, g.node_label(tuple[i]));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (tuple[i] != tuple[j] && g.has_edge(tuple[i], tuple[j]))
                append_int(code, g.edge_label(tuple[i], tuple[j]));
    return code;
}

std::vector<std::vector<NodeId>> enumerate_ks_multisets(const LabeledGraph& g, int k, int s) {
    check_ks(k, s);
    std::unordered_set<std::vector<NodeId>, VecHash> seen;
    std::vector<std::vector<NodeId>> result;
    std::deque<std::vector<NodeId>> queue;

    for_each_sorted_multiset(g.node_count(), s, [&](const std::vector<NodeId>& m) {
        if (s == k) {
            result.push_back(m);
        } else {
            queue.push_back(m);
            seen.insert(m);
        }
    });

    while (!queue.empty()) {
        std::vector<NodeId> t = std::move(queue.front());
        queue.pop_front();
        if (static_cast<int>(t.size()) == k) {
            result.push_back(std::move(t));
            continue;
        }
        std::vector<NodeId> child(t.size() + 1);
        auto grow = [&](NodeId u) {
            auto it = std::upper_bound(t.begin(), t.end(), u);
            std::copy(t.begin(), it, child.begin());
            child[it - t.begin()] = u;
            std::copy(it, t.end(), child.begin() + (it - t.begin()) + 1);
            if (seen.insert(child).second) queue.push_back(child);
        };
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i > 0 && t[i] == t[i - 1]) continue;
            grow(t[i]);
            for (NodeId u : g.neighbors(t[i])) grow(u);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<NodeId> enumerate_ks_tuples(const LabeledGraph& g, int k, int s) {
    check_ks(k, s);
    std::vector<NodeId> flat;
    if (s == k) {
        // No restriction: all n^k tuples in lexicographic order.
        const NodeId n = g.node_count();
        if (n == 0) return flat;
        double logsize = static_cast<double>(k) * std::log2(static_cast<double>(n));
        if (logsize > 62)
            throw ResourceError("dense tuple enumeration overflows the index space",
                                std::numeric_limits<std::uint64_t>::max());
        std::int64_t total = 1;
        for (int i = 0; i < k; ++i) total *= n;
        flat.reserve(static_cast<std::size_t>(total) * k);
        std::vector<NodeId> t(k, 0);
        while (true) {
            flat.insert(flat.end(), t.begin(), t.end());
            int pos = k - 1;
            while (pos >= 0 && t[pos] == n - 1) t[pos--] = 0;
            if (pos < 0) break;
            ++t[pos];
        }
        return flat;
    }
    std::vector<std::vector<NodeId>> multisets = enumerate_ks_multisets(g, k, s);
    for (const auto& m : multisets) append_permutations(m, flat);
    // Permutations of distinct multisets interleave, so sort tuples flat.
    const TupleIndex count = static_cast<TupleIndex>(flat.size()) / k;
    std::vector<TupleIndex> order(count);
    for (TupleIndex i = 0; i < count; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](TupleIndex a, TupleIndex b) {
        return std::lexicographical_compare(flat.begin() + a * k, flat.begin() + (a + 1) * k,
                                            flat.begin() + b * k, flat.begin() + (b + 1) * k);
    });
    std::vector<NodeId> sorted(flat.size());
    for (TupleIndex i = 0; i < count; ++i)
        std::copy(flat.begin() + order[i] * k, flat.begin() + (order[i] + 1) * k,
                  sorted.begin() + i * k);
    return sorted;
}

std::int64_t count_ks_tuples(const LabeledGraph& g, int k, int s) {
    check_ks(k, s);
    std::int64_t total = 0;
    if (s == k) {
        for_each_sorted_multiset(g.node_count(), k,
                                 [&](const std::vector<NodeId>& m) { total += permutation_count(m); });
        return total;
    }
    for (const auto& m : enumerate_ks_multisets(g, k, s)) total += permutation_count(m);
    return total;
}

std::span<const std::int32_t> TupleGraph::local_neighbors(TupleIndex t, int position) const {
    if (position < 0 || position >= k) throw std::invalid_argument("position out of range");
    const std::int64_t slot = t * k + position;
    return {edge_targets.data() + edge_offsets[slot], edge_targets.data() + edge_offsets[slot + 1]};
}

TupleIndex TupleGraph::find_tuple(std::span<const NodeId> tuple) const {
    TupleIndex lo = 0, hi = tuple_count;
    while (lo < hi) {
        TupleIndex mid = lo + (hi - lo) / 2;
        const NodeId* p = tuple_nodes.data() + mid * k;
        int cmp = 0;
        for (int i = 0; i < k; ++i) {
            if (p[i] != tuple[i]) {
                cmp = p[i] < tuple[i] ? -1 : 1;
                break;
            }
        }
        if (cmp < 0)
            lo = mid + 1;
        else if (cmp > 0)
            hi = mid;
        else
            return mid;
    }
    return -1;
}

TupleGraph build_tuple_graph(const LabeledGraph& g, int k, int s) {
    TupleGraph tg;
    tg.k = k;
    tg.s = s;
    tg.graph_node_count = g.node_count();
    tg.tuple_nodes = enumerate_ks_tuples(g, k, s);
    tg.tuple_count = static_cast<TupleIndex>(tg.tuple_nodes.size()) / k;
    if (tg.tuple_count > std::numeric_limits<std::int32_t>::max())
        throw ResourceError("tuple count exceeds 32-bit index space",
                            static_cast<std::uint64_t>(tg.tuple_count));

    tg.atomic_class.resize(tg.tuple_count);
    std::unordered_map<std::string, std::int32_t> code_ids;
    for (TupleIndex t = 0; t < tg.tuple_count; ++t) {
        std::string code = atomic_type_code(g, tg.tuple_at(t));
        auto [it, fresh] = code_ids.try_emplace(std::move(code),
                                                static_cast<std::int32_t>(code_ids.size()));
        if (fresh) tg.atomic_code_table.push_back(it->first);
        tg.atomic_class[t] = it->second;
    }

    tg.edge_offsets.assign(static_cast<std::size_t>(tg.tuple_count) * k + 1, 0);
    std::vector<NodeId> candidate(k);
    for (TupleIndex t = 0; t < tg.tuple_count; ++t) {
        auto tuple = tg.tuple_at(t);
        std::copy(tuple.begin(), tuple.end(), candidate.begin());
        for (int j = 0; j < k; ++j) {
            const NodeId original = candidate[j];
            for (NodeId w : g.neighbors(original)) {
                candidate[j] = w;
                TupleIndex dest = tg.find_tuple(candidate);
                if (dest >= 0) tg.edge_targets.push_back(static_cast<std::int32_t>(dest));
            }
            candidate[j] = original;
            tg.edge_offsets[t * k + j + 1] = static_cast<std::int64_t>(tg.edge_targets.size());
        }
    }
    return tg;
}

NodeId tuple_graph_component_count(const TupleGraph& tg) {
    std::vector<std::int32_t> comp(tg.tuple_count, -1);
    std::vector<std::int32_t> stack;
    NodeId count = 0;
    for (TupleIndex start = 0; start < tg.tuple_count; ++start) {
        if (comp[start] != -1) continue;
        comp[start] = count;
        stack.push_back(static_cast<std::int32_t>(start));
        while (!stack.empty()) {
            std::int32_t t = stack.back();
            stack.pop_back();
            // Local edges are symmetric position-wise, so forward edges suffice.
            for (int j = 0; j < tg.k; ++j)
                for (std::int32_t dest : tg.local_neighbors(t, j))
                    if (comp[dest] == -1) {
                        comp[dest] = count;
                        stack.push_back(dest);
                    }
        }
        ++count;
    }
    return count;
}

void dump_tuple_graph(const TupleGraph& tg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (TupleIndex t = 0; t < tg.tuple_count; ++t)
        for (int j = 0; j < tg.k; ++j)
            for (std::int32_t dest : tg.local_neighbors(t, j))
                out << t << " " << dest << " " << (j + 1) << "\n";
}

}  // namespace speqwl
