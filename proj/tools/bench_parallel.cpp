// Times the OpenMP signature-building and Gram kernels against the serial
// reference path on generated inputs and verifies both produce identical
// results.

#include <chrono>
#include <cstdio>
#include <random>
#include <thread>

#include "speqwl/families.hpp"
#include "speqwl/kernels.hpp"
#include "speqwl/refinement.hpp"

using namespace speqwl;
using Clock = std::chrono::steady_clock;

namespace {

double time_run(const LabeledGraph& g, const RefinementConfig& cfg) {
    auto t0 = Clock::now();
    RefinementRun run = run_refinement(g, cfg);
    (void)run;
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

LabeledGraph random_graph(NodeId n, double p, std::mt19937& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    return LabeledGraph(n, edges);
}

bool same_partitions(const RefinementRun& a, const RefinementRun& b) {
    if (a.rounds.size() != b.rounds.size()) return false;
    for (std::size_t r = 0; r < a.rounds.size(); ++r)
        if (a.rounds[r].colors != b.rounds[r].colors) return false;
    return true;
}

}  // namespace

int main() {
    const int threads = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
    std::mt19937 rng(7);

    struct Case {
        const char* name;
        LabeledGraph graph;
        RefinementConfig cfg;
    };
    std::vector<Case> cases;

    RefinementConfig ks;
    ks.algorithm = Algorithm::KsLwl;
    ks.k = 3;
    ks.s = 1;
    ks.iterations = 5;
    cases.push_back({"ks-lwl:3:1 cycle n=2048", cycle(2048), ks});

    RefinementConfig ks2;
    ks2.algorithm = Algorithm::KsLwl;
    ks2.k = 2;
    ks2.s = 2;
    ks2.iterations = 5;
    cases.push_back({"ks-lwl:2:2 gnp n=160", random_graph(160, 0.05, rng), ks2});

    RefinementConfig dense;
    dense.algorithm = Algorithm::DeltaKLwl;
    dense.k = 2;
    dense.iterations = 5;
    cases.push_back({"delta-k-lwl:2 gnp n=160", random_graph(160, 0.05, rng), dense});

    std::printf("%-28s %12s %12s %8s %8s\n", "case", "serial_s", "omp_s", "speedup", "equal");
    for (auto& c : cases) {
        RefinementConfig serial = c.cfg;
        serial.threads = 1;
        RefinementConfig parallel = c.cfg;
        parallel.threads = threads;

        RefinementRun ref = run_refinement(c.graph, serial);
        RefinementRun par = run_refinement(c.graph, parallel);
        const bool equal = same_partitions(ref, par);

        const double ts = time_run(c.graph, serial);
        const double tp = time_run(c.graph, parallel);
        std::printf("%-28s %12.4f %12.4f %8.2f %8s\n", c.name, ts, tp, ts / tp,
                    equal ? "yes" : "NO");
        if (!equal) return 1;
    }

    // Gram kernel: parallel pair loop against the serial one.
    GraphCollection collection;
    std::mt19937 rng2(11);
    for (int i = 0; i < 160; ++i) collection.graphs.push_back(random_graph(24, 0.2, rng2));
    RefinementConfig kcfg;
    kcfg.algorithm = Algorithm::KsLwl;
    kcfg.k = 2;
    kcfg.s = 1;
    kcfg.iterations = 5;
    FeatureMapResult features = compute_feature_maps(collection, kcfg);

    auto t0 = Clock::now();
    GramMatrix serial_gram = gram_from_features(features.per_graph, true, 1);
    double ts = std::chrono::duration<double>(Clock::now() - t0).count();
    auto t1 = Clock::now();
    GramMatrix parallel_gram = gram_from_features(features.per_graph, true, threads);
    double tp = std::chrono::duration<double>(Clock::now() - t1).count();
    const bool equal = serial_gram.values == parallel_gram.values;
    std::printf("%-28s %12.4f %12.4f %8.2f %8s\n", "gram 160x160", ts, tp, ts / tp,
                equal ? "yes" : "NO");
    return equal ? 0 : 1;
}
