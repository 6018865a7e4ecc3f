#ifndef SPEQWL_KERNELS_HPP
#define SPEQWL_KERNELS_HPP

#include <filesystem>
#include <span>
#include <vector>

#include "speqwl/graph.hpp"
#include "speqwl/refinement.hpp"

namespace speqwl {

// Concatenated per-iteration color histograms. Feature ids are the compact
// color ids of a dictionary shared across the whole collection; each
// iteration's ids form one contiguous block, so entries stay sorted.
struct SparseFeatureVector {
    std::vector<std::pair<ColorId, std::int64_t>> entries;  // strictly increasing ids

    std::int64_t total_count() const {
        std::int64_t n = 0;
        for (const auto& [id, c] : entries) n += c;
        return n;
    }
};

double dot(const SparseFeatureVector& a, const SparseFeatureVector& b);

struct FeatureMapResult {
    std::vector<SparseFeatureVector> per_graph;
    int iterations = 0;
};

// Runs the configured refinement on every graph in lockstep against one
// shared dictionary (sequential over graphs within each round), recording
// the color histogram of every round 0..h. A missing iteration count
// defaults to 5.
FeatureMapResult compute_feature_maps(const GraphCollection& collection,
                                      const RefinementConfig& cfg);

SparseFeatureVector feature_map(const LabeledGraph& g, const RefinementConfig& cfg);

// Final-round color histograms of the tuples holding node v at position i,
// one histogram per position.
std::vector<std::vector<std::pair<ColorId, std::int64_t>>> node_feature_map(
    const LabeledGraph& g, const RefinementConfig& cfg, NodeId v);

struct GramMatrix {
    int n = 0;
    bool normalized = false;
    std::vector<double> values;  // row-major n*n, symmetric

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
};

GramMatrix gram_from_features(std::span<const SparseFeatureVector> features, bool normalize,
                              int threads = 1);
GramMatrix gram_matrix(const GraphCollection& collection, const RefinementConfig& cfg,
                       bool normalize);

void write_gram_csv(const GramMatrix& m, const std::filesystem::path& path);
GramMatrix read_gram_csv(const std::filesystem::path& path);

// LIBSVM precomputed-kernel rows: "label 0:rowindex+1 1:v1 2:v2 ...".
void write_gram_libsvm(const GramMatrix& m, const std::filesystem::path& path,
                       std::span<const int> labels);

// One line per graph of "id:count" pairs.
void write_feature_vectors(const std::filesystem::path& path,
                           std::span<const SparseFeatureVector> features);

}  // namespace speqwl

#endif  // SPEQWL_KERNELS_HPP
