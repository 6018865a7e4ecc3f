// The OpenMP signature-building path must be bit-identical to the serial
// reference path: signatures are interned sequentially in element order
// either way.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "speqwl/families.hpp"
#include "speqwl/kernels.hpp"
#include "speqwl/refinement.hpp"
#include "support/reference.hpp"

using namespace speqwl;
using namespace speqwl::testing;

namespace {

void check_identical(const LabeledGraph& g, RefinementConfig cfg) {
    cfg.threads = 1;
    auto serial = run_refinement(g, cfg);
    cfg.threads = 4;
    auto parallel = run_refinement(g, cfg);
    REQUIRE(serial.rounds.size() == parallel.rounds.size());
    for (std::size_t r = 0; r < serial.rounds.size(); ++r)
        CHECK(serial.rounds[r].colors == parallel.rounds[r].colors);
}

}  // namespace

TEST_CASE("serial and parallel refinement agree exactly") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 4; ++trial) {
        auto g = random_graph(9, 0.3, rng, 3, 2);
        RefinementConfig cfg;
        cfg.k = 2;
        cfg.s = 2;
        for (auto algorithm : {Algorithm::OneWl, Algorithm::KsLwl, Algorithm::KsLwlPlus,
                               Algorithm::DeltaKLwl, Algorithm::DeltaKLwlPlus, Algorithm::KWl,
                               Algorithm::KFwl}) {
            cfg.algorithm = algorithm;
            cfg.k = algorithm == Algorithm::OneWl ? 1 : 2;
            check_identical(g, cfg);
        }
    }
}

TEST_CASE("serial and parallel runs agree on a large sparse instance") {
    RefinementConfig cfg;
    cfg.algorithm = Algorithm::KsLwl;
    cfg.k = 3;
    cfg.s = 1;
    cfg.iterations = 4;
    check_identical(cycle(256), cfg);
}

TEST_CASE("gram matrices are independent of the thread count") {
    std::mt19937 rng(32);
    GraphCollection c;
    for (int i = 0; i < 20; ++i) c.graphs.push_back(random_graph(8, 0.3, rng, 2, 1));
    RefinementConfig cfg;
    cfg.algorithm = Algorithm::KsLwl;
    cfg.k = 2;
    cfg.s = 1;
    cfg.iterations = 4;
    auto features = compute_feature_maps(c, cfg);
    auto serial = gram_from_features(features.per_graph, true, 1);
    auto parallel = gram_from_features(features.per_graph, true, 4);
    CHECK(serial.values == parallel.values);
}
