#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <map>
#include <random>

#include "speqwl/families.hpp"
#include "speqwl/tuples.hpp"
#include "support/reference.hpp"

using namespace speqwl;
using namespace speqwl::testing;

namespace {

std::vector<std::vector<NodeId>> unflatten(const std::vector<NodeId>& flat, int k) {
    std::vector<std::vector<NodeId>> out;
    for (std::size_t i = 0; i < flat.size(); i += k)
        out.emplace_back(flat.begin() + i, flat.begin() + i + k);
    return out;
}

}  // namespace

TEST_CASE("component count against the BFS oracle on all C_8 triples") {
    auto g = cycle(8);
    std::map<int, int> histogram, oracle_histogram;
    for (const auto& t : all_tuples(8, 3)) {
        const int got = component_count(g, t);
        const int want = brute_component_count(g, t);
        CHECK(got == want);
        ++histogram[got];
        ++oracle_histogram[want];
    }
    CHECK(histogram == oracle_histogram);

    CHECK(component_count(g, std::vector<NodeId>{3, 3, 3}) == 1);
    CHECK(component_count(g, std::vector<NodeId>{0, 4}) == 2);  // antipodal
}

TEST_CASE("atomic type codes match the pairwise isomorphism predicate") {
    auto [g, h] = cycle_pair(2);  // C_8 and C_4 u C_4
    for (const LabeledGraph* graph : {&g, &h}) {
        auto tuples = all_tuples(graph->node_count(), 2);
        std::vector<std::string> codes;
        for (const auto& t : tuples) codes.push_back(atomic_type_code(*graph, t));
        for (std::size_t i = 0; i < tuples.size(); ++i)
            for (std::size_t j = i; j < tuples.size(); ++j)
                CHECK((codes[i] == codes[j]) ==
                      atomic_types_equal(*graph, tuples[i], *graph, tuples[j]));
    }
    // Codes stay comparable across the two graphs.
    CHECK(atomic_type_code(g, std::vector<NodeId>{0, 1}) ==
          atomic_type_code(h, std::vector<NodeId>{0, 1}));
    CHECK(atomic_type_code(g, std::vector<NodeId>{0, 0}) !=
          atomic_type_code(g, std::vector<NodeId>{0, 1}));
}

TEST_CASE("atomic types see node and edge labels") {
    LabeledGraph a(2, {{0, 1}}, {1, 1}, {5});
    LabeledGraph b(2, {{0, 1}}, {1, 1}, {6});
    CHECK(atomic_type_code(a, std::vector<NodeId>{0, 1}) !=
          atomic_type_code(b, std::vector<NodeId>{0, 1}));
    LabeledGraph c(2, {{0, 1}}, {2, 1}, {5});
    CHECK(atomic_type_code(a, std::vector<NodeId>{0, 1}) !=
          atomic_type_code(c, std::vector<NodeId>{0, 1}));
}

TEST_CASE("multiset enumeration") {
    auto g = cycle(8);
    SUBCASE("k=1 gives one singleton per node") {
        auto m = enumerate_ks_multisets(g, 1, 1);
        CHECK(m.size() == 8);
    }
    SUBCASE("C_8 with k=2, s=1: diagonals plus edges") {
        auto m = enumerate_ks_multisets(g, 2, 1);
        CHECK(m.size() == 16);
    }
    SUBCASE("matches the brute-force filter") {
        std::mt19937 rng(4);
        for (int trial = 0; trial < 10; ++trial) {
            auto graph = random_graph(6, 0.35, rng);
            for (int k = 1; k <= 3; ++k)
                for (int s = 1; s <= k; ++s) {
                    std::set<std::vector<NodeId>> expected;
                    for (auto t : brute_ks_tuples(graph, k, s)) {
                        std::sort(t.begin(), t.end());
                        expected.insert(t);
                    }
                    auto got = enumerate_ks_multisets(graph, k, s);
                    std::set<std::vector<NodeId>> got_set(got.begin(), got.end());
                    CHECK(got_set == expected);
                    CHECK(got_set.size() == got.size());  // duplicate-free
                }
        }
    }
    CHECK_THROWS_AS(enumerate_ks_multisets(g, 2, 3), std::invalid_argument);
}

TEST_CASE("tuple enumeration") {
    auto g = cycle(8);
    CHECK(unflatten(enumerate_ks_tuples(g, 2, 1), 2).size() == 24);

    auto two = disjoint_union(cycle(4), cycle(4));
    CHECK(unflatten(enumerate_ks_tuples(two, 2, 2), 2).size() == 64);
    CHECK(unflatten(enumerate_ks_tuples(two, 2, 1), 2).size() == 24);

    SUBCASE("s=k admits every tuple") {
        auto four = cycle(4);
        CHECK(unflatten(enumerate_ks_tuples(four, 2, 2), 2).size() == 16);
        CHECK(count_ks_tuples(four, 2, 2) == 16);
    }

    SUBCASE("lexicographic order and equality with the brute filter") {
        std::mt19937 rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            auto graph = random_graph(6, 0.35, rng);
            for (int k = 1; k <= 3; ++k)
                for (int s = 1; s <= k; ++s) {
                    auto got = unflatten(enumerate_ks_tuples(graph, k, s), k);
                    CHECK(got == brute_ks_tuples(graph, k, s));
                    CHECK(count_ks_tuples(graph, k, s) ==
                          static_cast<std::int64_t>(got.size()));
                }
        }
    }

    SUBCASE("exhaustively every graph on up to 5 nodes") {
        for (int n = 1; n <= 5; ++n) {
            std::vector<std::pair<int, int>> slots;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
            for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
                std::vector<std::pair<NodeId, NodeId>> edges;
                for (std::size_t b = 0; b < slots.size(); ++b)
                    if (mask >> b & 1) edges.emplace_back(slots[b].first, slots[b].second);
                LabeledGraph graph(n, edges);
                for (int k = 1; k <= 3; ++k)
                    for (int s = 1; s <= k; ++s)
                        if (unflatten(enumerate_ks_tuples(graph, k, s), k) !=
                            brute_ks_tuples(graph, k, s))
                            FAIL("tuple set mismatch at n=" << n << " mask=" << mask
                                                            << " k=" << k << " s=" << s);
            }
        }
    }

    SUBCASE("monotone in s: each tuple set contains the previous one") {
        std::mt19937 rng(6);
        auto graph = random_graph(6, 0.3, rng);
        for (int k = 2; k <= 3; ++k)
            for (int s = 1; s < k; ++s) {
                auto smaller = unflatten(enumerate_ks_tuples(graph, k, s), k);
                auto larger = unflatten(enumerate_ks_tuples(graph, k, s + 1), k);
                CHECK(std::includes(larger.begin(), larger.end(), smaller.begin(),
                                    smaller.end()));
            }
    }

    SUBCASE("permutation equivariance") {
        std::mt19937 rng(7);
        auto graph = random_graph(6, 0.4, rng);
        auto perm = random_permutation(6, rng);
        auto mapped = apply_permutation(graph, std::span<const NodeId>(perm));
        auto original = unflatten(enumerate_ks_tuples(graph, 3, 2), 3);
        std::set<std::vector<NodeId>> image;
        for (auto t : original) {
            for (auto& v : t) v = perm[v];
            image.insert(t);
        }
        auto relabeled = unflatten(enumerate_ks_tuples(mapped, 3, 2), 3);
        std::set<std::vector<NodeId>> got(relabeled.begin(), relabeled.end());
        CHECK(got == image);
    }
}

TEST_CASE("sparse counts grow linearly on cycles while dense counts are cubic") {
    auto c1 = count_ks_tuples(cycle(32), 3, 1);
    auto c2 = count_ks_tuples(cycle(64), 3, 1);
    CHECK(static_cast<double>(c2) / static_cast<double>(c1) < 2.3);
    CHECK(count_ks_tuples(cycle(32), 3, 3) == 32LL * 32 * 32);
}

TEST_CASE("tuple graph structure") {
    auto [g, h] = cycle_pair(2);
    auto tg_g = build_tuple_graph(g, 2, 2);
    auto tg_h = build_tuple_graph(h, 2, 2);
    CHECK(tuple_graph_component_count(tg_g) == 1);
    CHECK(tuple_graph_component_count(tg_h) == 4);

    // Every 2-tuple of either graph has exactly 4 outgoing local edges.
    for (const TupleGraph* tg : {&tg_g, &tg_h})
        for (TupleIndex t = 0; t < tg->tuple_count; ++t) {
            std::int64_t out_degree = 0;
            for (int j = 0; j < 2; ++j) out_degree += tg->local_neighbors(t, j).size();
            CHECK(out_degree == 4);
        }
}

TEST_CASE("local neighbors against the definition") {
    auto g = cycle(8);
    auto tg = build_tuple_graph(g, 2, 1);
    for (TupleIndex t = 0; t < tg.tuple_count; ++t) {
        auto tuple = tg.tuple_at(t);
        for (int j = 0; j < 2; ++j) {
            std::set<std::vector<NodeId>> expected;
            for (NodeId w : g.neighbors(tuple[j])) {
                std::vector<NodeId> candidate(tuple.begin(), tuple.end());
                candidate[j] = w;
                if (brute_component_count(g, candidate) <= 1) expected.insert(candidate);
            }
            std::set<std::vector<NodeId>> got;
            for (std::int32_t dest : tg.local_neighbors(t, j)) {
                auto d = tg.tuple_at(dest);
                got.insert(std::vector<NodeId>(d.begin(), d.end()));
            }
            CHECK(got == expected);
        }
    }
    // Diagonal tuples have one local neighbor per graph neighbor.
    TupleIndex diag = tg.find_tuple(std::vector<NodeId>{3, 3});
    REQUIRE(diag >= 0);
    CHECK(tg.local_neighbors(diag, 0).size() == 2);
    CHECK_THROWS_AS(tg.local_neighbors(diag, 2), std::invalid_argument);
}

TEST_CASE("local edges are symmetric per position") {
    std::mt19937 rng(8);
    auto graph = random_graph(7, 0.3, rng);
    auto tg = build_tuple_graph(graph, 3, 2);
    for (TupleIndex t = 0; t < tg.tuple_count; ++t)
        for (int j = 0; j < 3; ++j)
            for (std::int32_t dest : tg.local_neighbors(t, j)) {
                auto back = tg.local_neighbors(dest, j);
                CHECK(std::find(back.begin(), back.end(), static_cast<std::int32_t>(t)) !=
                      back.end());
            }
}

TEST_CASE("degree bound") {
    std::mt19937 rng(9);
    auto graph = random_graph(7, 0.5, rng);
    auto tg = build_tuple_graph(graph, 2, 2);
    const std::int64_t bound = 2LL * graph.max_degree();
    for (TupleIndex t = 0; t < tg.tuple_count; ++t) {
        std::int64_t total = 0;
        for (int j = 0; j < 2; ++j) total += tg.local_neighbors(t, j).size();
        CHECK(total <= bound);
    }
}

TEST_CASE("tuple graph debug dump") {
    namespace fs = std::filesystem;
    auto tg = build_tuple_graph(cycle(4), 2, 1);
    fs::path path = fs::temp_directory_path() / "speqwl_dump.txt";
    dump_tuple_graph(tg, path);
    CHECK(fs::file_size(path) > 0);
    fs::remove(path);
}
