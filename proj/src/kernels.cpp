#include "speqwl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "speqwl/errors.hpp"

namespace speqwl {

double dot(const SparseFeatureVector& a, const SparseFeatureVector& b) {
    double sum = 0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        if (a.entries[i].first < b.entries[j].first)
            ++i;
        else if (a.entries[i].first > b.entries[j].first)
            ++j;
        else {
            sum += static_cast<double>(a.entries[i].second) *
                   static_cast<double>(b.entries[j].second);
            ++i;
            ++j;
        }
    }
    return sum;
}

FeatureMapResult compute_feature_maps(const GraphCollection& collection,
                                      const RefinementConfig& cfg) {
    RefinementConfig local = cfg;
    if (!local.iterations) local.iterations = 5;
    local.validate();
    const int h = *local.iterations;
    const bool plus = local.is_plus();
    const bool last_only = local.plus_counts_last_iteration_only;

    FeatureMapResult result;
    result.iterations = h;
    result.per_graph.resize(collection.size());

    std::vector<std::unique_ptr<RefinementEngine>> engines;
    engines.reserve(collection.size());
    for (const LabeledGraph& g : collection.graphs) engines.push_back(make_engine(g, local));

    SignatureDictionary dict;
    std::vector<std::vector<ColorId>> colors(collection.size());
    std::vector<ColorId> next;

    auto record_round = [&](std::size_t graph) {
        auto hist = color_histogram(colors[graph]);
        auto& entries = result.per_graph[graph].entries;
        entries.insert(entries.end(), hist.begin(), hist.end());
    };

    dict.begin_round();
    for (std::size_t i = 0; i < collection.size(); ++i) {
        engines[i]->initial_colors(dict, colors[i]);
        record_round(i);
    }
    for (int r = 1; r <= h; ++r) {
        const bool plus_round = plus && (!last_only || r == h);
        dict.begin_round();
        for (std::size_t i = 0; i < collection.size(); ++i) {
            engines[i]->refine(dict, colors[i], next, plus_round);
            colors[i].swap(next);
            record_round(i);
        }
    }
    return result;
}

SparseFeatureVector feature_map(const LabeledGraph& g, const RefinementConfig& cfg) {
    GraphCollection single;
    single.graphs.push_back(g);
    return std::move(compute_feature_maps(single, cfg).per_graph[0]);
}

std::vector<std::vector<std::pair<ColorId, std::int64_t>>> node_feature_map(
    const LabeledGraph& g, const RefinementConfig& cfg, NodeId v) {
    if (v < 0 || v >= g.node_count()) throw std::invalid_argument("node id out of range");
    RefinementRun run = run_refinement(g, cfg);
    const std::vector<ColorId>& final_colors = run.rounds.back().colors;
    std::vector<std::unordered_map<ColorId, std::int64_t>> hist(cfg.k);
    std::vector<NodeId> nodes;
    for (std::int64_t t = 0; t < run.engine->domain_size(); ++t) {
        run.engine->element_nodes(t, nodes);
        for (int i = 0; i < cfg.k; ++i)
            if (nodes[i] == v) ++hist[i][final_colors[t]];
    }
    std::vector<std::vector<std::pair<ColorId, std::int64_t>>> out(cfg.k);
    for (int i = 0; i < cfg.k; ++i) {
        out[i].assign(hist[i].begin(), hist[i].end());
        std::sort(out[i].begin(), out[i].end());
    }
    return out;
}

GramMatrix gram_from_features(std::span<const SparseFeatureVector> features, bool normalize,
                              int threads) {
    GramMatrix m;
    m.n = static_cast<int>(features.size());
    m.normalized = normalize;
    m.values.assign(static_cast<std::size_t>(m.n) * m.n, 0.0);
    std::vector<double> self(m.n);
    for (int i = 0; i < m.n; ++i) self[i] = dot(features[i], features[i]);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
#endif
    for (int i = 0; i < m.n; ++i) {
        for (int j = i; j < m.n; ++j) {
            double value = j == i ? self[i] : dot(features[i], features[j]);
            if (normalize) {
                double denom = std::sqrt(self[i] * self[j]);
                value = denom == 0.0 ? 0.0 : value / denom;
            }
            m.at(i, j) = value;
            m.at(j, i) = value;
        }
    }
    return m;
}

GramMatrix gram_matrix(const GraphCollection& collection, const RefinementConfig& cfg,
                       bool normalize) {
    FeatureMapResult features = compute_feature_maps(collection, cfg);
    return gram_from_features(features.per_graph, normalize, cfg.threads);
}

namespace {

void format_value(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

void write_gram_csv(const GramMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    std::string line;
    for (int i = 0; i < m.n; ++i) {
        line.clear();
        for (int j = 0; j < m.n; ++j) {
            if (j) line.push_back(',');
            format_value(line, m.at(i, j));
        }
        out << line << "\n";
    }
}

GramMatrix read_gram_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        rows.push_back(std::move(row));
    }
    GramMatrix m;
    m.n = static_cast<int>(rows.size());
    m.values.assign(static_cast<std::size_t>(m.n) * m.n, 0.0);
    for (int i = 0; i < m.n; ++i) {
        if (rows[i].size() != static_cast<std::size_t>(m.n))
            throw FormatError(path.string() + ": row " + std::to_string(i + 1) +
                              " is not square");
        for (int j = 0; j < m.n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

void write_gram_libsvm(const GramMatrix& m, const std::filesystem::path& path,
                       std::span<const int> labels) {
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(m.n))
        throw std::invalid_argument("label count does not match matrix size");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    std::string line;
    for (int i = 0; i < m.n; ++i) {
        line.clear();
        line += std::to_string(labels.empty() ? 0 : labels[i]);
        line += " 0:";
        line += std::to_string(i + 1);
        for (int j = 0; j < m.n; ++j) {
            line.push_back(' ');
            line += std::to_string(j + 1);
            line.push_back(':');
            format_value(line, m.at(i, j));
        }
        out << line << "\n";
    }
}

void write_feature_vectors(const std::filesystem::path& path,
                           std::span<const SparseFeatureVector> features) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const SparseFeatureVector& f : features) {
        std::string line;
        for (const auto& [id, count] : f.entries) {
            if (!line.empty()) line.push_back(' ');
            line += std::to_string(id);
            line.push_back(':');
            line += std::to_string(count);
        }
        out << line << "\n";
    }
}

}  // namespace speqwl
