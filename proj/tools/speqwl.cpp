#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "speqwl/errors.hpp"
#include "speqwl/families.hpp"
#include "speqwl/kernels.hpp"
#include "speqwl/manifest.hpp"
#include "speqwl/refinement.hpp"
#include "speqwl/tudataset.hpp"

namespace {

using namespace speqwl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct AlgorithmFlags {
    std::string algorithm;
    int k = 1;
    int s = 0;  // 0 = defaulted to k for the restricted variants
    std::string iterations = "stable";
    bool plus_all_iterations = false;

    RefinementConfig to_config(int jobs) const {
        RefinementConfig cfg;
        cfg.algorithm = parse_algorithm(algorithm);
        cfg.k = k;
        cfg.s = s == 0 ? k : s;
        if (iterations != "stable") cfg.iterations = std::stoi(iterations);
        cfg.plus_counts_last_iteration_only = !plus_all_iterations;
        cfg.threads = jobs;
        cfg.validate();
        return cfg;
    }

    void add_flags(CLI::App* cmd, bool default_iterations_stable) {
        cmd->add_option("--algorithm", algorithm, "algorithm id (1-wl, k-wl, k-fwl, delta-k-lwl,"
                                                  " delta-k-lwl-plus, ks-lwl, ks-lwl-plus)")
            ->required();
        cmd->add_option("--k", k, "tuple length")->required();
        cmd->add_option("--s", s, "component bound for the restricted variants (defaults to k)");
        cmd->add_option("--iterations", iterations,
                        default_iterations_stable ? "round count or 'stable' (default stable)"
                                                  : "round count or 'stable' (default 5)");
        cmd->add_flag("--plus-all-iterations", plus_all_iterations,
                      "apply the '+' counts on every round instead of only the last");
    }

    void record(RunManifest& m) const {
        m.flags["algorithm"] = algorithm;
        m.flags["k"] = std::to_string(k);
        m.flags["s"] = std::to_string(s == 0 ? k : s);
        m.flags["iterations"] = iterations;
        m.flags["plus-all-iterations"] = plus_all_iterations ? "true" : "false";
    }
};

std::string dataset_name(const std::string& dir, const std::string& explicit_name) {
    if (!explicit_name.empty()) return explicit_name;
    fs::path p(dir);
    std::string base = p.filename().string();
    if (base.empty()) base = p.parent_path().filename().string();
    if (fs::exists(p / (base + "_A.txt"))) return base;
    // Fall back to the unique *_A.txt prefix in the directory.
    std::string found;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(p, ec)) {
        const std::string file = entry.path().filename().string();
        if (file.size() > 6 && file.ends_with("_A.txt")) {
            if (!found.empty()) return base;  // ambiguous, let the loader complain
            found = file.substr(0, file.size() - 6);
        }
    }
    return found.empty() ? base : found;
}

int cmd_refine(const std::string& input, const std::string& name, const AlgorithmFlags& alg,
               const std::string& output, int jobs, std::uint64_t seed) {
    RefinementConfig cfg = alg.to_config(jobs);
    RunManifest manifest;
    manifest.subcommand = "refine";
    manifest.seed = seed;
    alg.record(manifest);
    manifest.flags["input"] = input;
    manifest.flags["name"] = dataset_name(input, name);
    manifest.flags["output"] = output;
    manifest.flags["jobs"] = std::to_string(jobs);
    manifest.inputs.push_back(input);

    auto t0 = Clock::now();
    GraphCollection collection = load_tudataset(input, dataset_name(input, name));
    manifest.timings_seconds["load"] = seconds_since(t0);

    fs::create_directories(output);
    auto t1 = Clock::now();
    for (std::size_t i = 0; i < collection.size(); ++i) {
        RefinementRun run = run_refinement(collection.graphs[i], cfg);
        fs::path file = fs::path(output) / ("graph_" + std::to_string(i) + ".hist");
        std::ofstream out(file);
        if (!out) throw IoError("cannot write " + file.string());
        for (const Coloring& round : run.rounds)
            for (const auto& [color, count] : color_histogram(round.colors))
                out << round.round << " " << color << " " << count << "\n";
        manifest.outputs.push_back(file.string());
    }
    manifest.timings_seconds["refine"] = seconds_since(t1);
    manifest.write(fs::path(output) / "manifest.json");
    return 0;
}

int cmd_distinguish(const std::string& input, const std::string& name, const std::string& input_a,
                    const std::string& input_b, const AlgorithmFlags& alg,
                    const std::string& output, int jobs, std::uint64_t seed) {
    RefinementConfig cfg = alg.to_config(jobs);
    LabeledGraph g, h;
    RunManifest manifest;
    manifest.subcommand = "distinguish";
    manifest.seed = seed;
    alg.record(manifest);
    manifest.flags["jobs"] = std::to_string(jobs);
    if (!input.empty()) {
        GraphCollection c = load_tudataset(input, dataset_name(input, name));
        if (c.size() != 2)
            throw ConsistencyError("--input dataset must contain exactly two graphs, got " +
                                   std::to_string(c.size()));
        g = c.graphs[0];
        h = c.graphs[1];
        manifest.inputs.push_back(input);
        manifest.flags["input"] = input;
    } else {
        GraphCollection a = load_tudataset(input_a, dataset_name(input_a, ""));
        GraphCollection b = load_tudataset(input_b, dataset_name(input_b, ""));
        if (a.size() == 0 || b.size() == 0) throw ConsistencyError("empty input dataset");
        g = a.graphs[0];
        h = b.graphs[0];
        manifest.inputs = {input_a, input_b};
        manifest.flags["input-a"] = input_a;
        manifest.flags["input-b"] = input_b;
    }

    auto t0 = Clock::now();
    DistinguishOutcome outcome = distinguish(g, h, cfg);
    manifest.timings_seconds["distinguish"] = seconds_since(t0);

    std::string line = "distinguished=" + std::string(outcome.distinguished ? "true" : "false") +
                       " round=" + (outcome.round ? std::to_string(*outcome.round) : "-");
    std::cout << line << "\n";
    if (!output.empty()) {
        fs::create_directories(output);
        fs::path file = fs::path(output) / "result.txt";
        std::ofstream out(file);
        if (!out) throw IoError("cannot write " + file.string());
        out << line << "\n";
        manifest.outputs.push_back(file.string());
        manifest.write(fs::path(output) / "manifest.json");
    }
    return outcome.distinguished ? 0 : 3;
}

int cmd_kernel(const std::string& input, const std::string& name, AlgorithmFlags alg,
               const std::string& normalize, const std::string& format, const std::string& output,
               const std::string& features_path, int jobs, std::uint64_t seed) {
    if (alg.iterations == "stable")
        throw CLI::ValidationError(
            "feature alignment needs a fixed iteration count; pass --iterations <h>");
    RefinementConfig cfg = alg.to_config(jobs);
    if (normalize != "cosine" && normalize != "none")
        throw CLI::ValidationError("--normalize must be 'cosine' or 'none'");
    if (format != "csv" && format != "libsvm")
        throw CLI::ValidationError("--format must be 'csv' or 'libsvm'");

    RunManifest manifest;
    manifest.subcommand = "kernel";
    manifest.seed = seed;
    alg.record(manifest);
    manifest.flags["input"] = input;
    manifest.flags["name"] = dataset_name(input, name);
    manifest.flags["normalize"] = normalize;
    manifest.flags["format"] = format;
    manifest.flags["output"] = output;
    manifest.flags["jobs"] = std::to_string(jobs);
    manifest.inputs.push_back(input);

    auto t0 = Clock::now();
    GraphCollection collection = load_tudataset(input, dataset_name(input, name));
    if (collection.size() == 0) throw ConsistencyError("empty dataset: " + input);
    manifest.timings_seconds["load"] = seconds_since(t0);

    auto t1 = Clock::now();
    FeatureMapResult features = compute_feature_maps(collection, cfg);
    manifest.timings_seconds["features"] = seconds_since(t1);

    auto t2 = Clock::now();
    GramMatrix m = gram_from_features(features.per_graph, normalize == "cosine", jobs);
    manifest.timings_seconds["gram"] = seconds_since(t2);

    if (format == "csv") {
        write_gram_csv(m, output);
    } else {
        std::vector<int> labels = collection.targets;
        if (labels.empty()) labels.assign(collection.size(), 0);
        write_gram_libsvm(m, output, labels);
    }
    manifest.outputs.push_back(output);
    if (!features_path.empty()) {
        write_feature_vectors(features_path, features.per_graph);
        manifest.outputs.push_back(features_path);
    }
    manifest.write(output + ".manifest.json");
    return 0;
}

int cmd_family(const std::string& family, int n, int k, int delta, const std::string& output,
               const std::string& name, std::uint64_t seed) {
    GraphCollection collection;
    if (family == "cycle") {
        collection.graphs.push_back(cycle(n));
    } else if (family == "cycle-pair") {
        auto [g, h] = cycle_pair(k);
        collection.graphs = {g, h};
    } else if (family == "ab-pair") {
        auto [g, h] = ab_pair(k);
        collection.graphs = {g, h};
    } else if (family == "cfi") {
        auto [g, h] = cfi_pair(k);
        collection.graphs = {g, h};
    } else if (family == "padded-cfi") {
        auto [g, h] = padded_colored_pair(k, delta);
        collection.graphs = {g, h};
    } else {
        throw CLI::ValidationError("unknown family '" + family + "'");
    }
    std::string ds = name.empty() ? family : name;
    // TUDataset names must be file-name safe.
    std::replace(ds.begin(), ds.end(), '/', '_');
    write_tudataset(output, ds, collection);

    RunManifest manifest;
    manifest.subcommand = "family";
    manifest.seed = seed;
    manifest.flags["family"] = family;
    manifest.flags["n"] = std::to_string(n);
    manifest.flags["k"] = std::to_string(k);
    manifest.flags["delta"] = std::to_string(delta);
    manifest.flags["output"] = output;
    manifest.flags["name"] = ds;
    manifest.outputs.push_back(output);
    manifest.write(fs::path(output) / "manifest.json");
    return 0;
}

int cmd_bench(const std::string& input, const std::string& name, const std::string& algorithms,
              int iterations, int repeats, const std::string& output, int jobs,
              std::uint64_t seed) {
    GraphCollection collection = load_tudataset(input, dataset_name(input, name));
    std::ofstream out(output);
    if (!out) throw IoError("cannot write " + output);
    out << "dataset,algorithm,preprocess_seconds,refine_seconds\n";

    RunManifest manifest;
    manifest.subcommand = "bench";
    manifest.seed = seed;
    manifest.flags["input"] = input;
    manifest.flags["algorithms"] = algorithms;
    manifest.flags["iterations"] = std::to_string(iterations);
    manifest.flags["repeats"] = std::to_string(repeats);
    manifest.flags["jobs"] = std::to_string(jobs);
    manifest.inputs.push_back(input);

    std::stringstream entries(algorithms);
    std::string entry;
    while (std::getline(entries, entry, ',')) {
        // name:k[:s]
        std::vector<std::string> parts;
        std::stringstream ss(entry);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.empty()) throw CLI::ValidationError("empty algorithm entry");
        RefinementConfig cfg;
        cfg.algorithm = parse_algorithm(parts[0]);
        cfg.k = parts.size() > 1 ? std::stoi(parts[1]) : 1;
        cfg.s = parts.size() > 2 ? std::stoi(parts[2]) : cfg.k;
        cfg.iterations = iterations;
        cfg.threads = jobs;
        cfg.validate();

        double preprocess = 0, refine = 0;
        for (int rep = 0; rep < repeats; ++rep) {
            auto t0 = Clock::now();
            std::vector<std::unique_ptr<RefinementEngine>> engines;
            for (const LabeledGraph& g : collection.graphs) engines.push_back(make_engine(g, cfg));
            preprocess += seconds_since(t0);

            auto t1 = Clock::now();
            SignatureDictionary dict;
            std::vector<std::vector<ColorId>> colors(collection.size());
            std::vector<ColorId> next;
            dict.begin_round();
            for (std::size_t i = 0; i < collection.size(); ++i)
                engines[i]->initial_colors(dict, colors[i]);
            for (int r = 1; r <= iterations; ++r) {
                const bool plus_round = cfg.is_plus() && r == iterations;
                dict.begin_round();
                for (std::size_t i = 0; i < collection.size(); ++i) {
                    engines[i]->refine(dict, colors[i], next, plus_round);
                    colors[i].swap(next);
                }
            }
            refine += seconds_since(t1);
        }
        out << dataset_name(input, name) << "," << entry << "," << (preprocess / repeats) << ","
            << (refine / repeats) << "\n";
    }
    manifest.outputs.push_back(output);
    manifest.write(output + ".manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse higher-order Weisfeiler-Leman refinement, kernels, and graph families"};
    app.require_subcommand(1);

    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::uint64_t seed = 0;
    app.add_option("--jobs", jobs, "worker threads (1 = serial reference path)")
        ->capture_default_str();
    app.add_option("--seed", seed, "seed recorded in the run manifest");

    // refine
    auto* refine = app.add_subcommand("refine", "write per-graph per-round color histograms");
    std::string r_input, r_name, r_output;
    AlgorithmFlags r_alg;
    r_alg.iterations = "5";
    refine->add_option("--input", r_input, "TUDataset directory")->required();
    refine->add_option("--name", r_name, "dataset name (default: directory basename)");
    r_alg.add_flags(refine, false);
    refine->add_option("--output", r_output, "output directory")->required();

    // distinguish
    auto* dist = app.add_subcommand("distinguish", "test whether two graphs get different colors");
    std::string d_input, d_name, d_input_a, d_input_b, d_output;
    AlgorithmFlags d_alg;
    dist->add_option("--input", d_input, "TUDataset directory holding exactly two graphs");
    dist->add_option("--name", d_name, "dataset name");
    dist->add_option("--input-a", d_input_a, "dataset holding the first graph");
    dist->add_option("--input-b", d_input_b, "dataset holding the second graph");
    d_alg.add_flags(dist, true);
    dist->add_option("--output", d_output, "optional output directory for result.txt");

    // kernel (alias gram)
    auto* kernel = app.add_subcommand("kernel", "compute and write a Gram matrix");
    auto* gram = app.add_subcommand("gram", "alias of kernel");
    std::string k_input, k_name, k_normalize = "cosine", k_format = "csv", k_output, k_features;
    AlgorithmFlags k_alg;
    k_alg.iterations = "5";
    for (CLI::App* cmd : {kernel, gram}) {
        cmd->add_option("--input", k_input, "TUDataset directory")->required();
        cmd->add_option("--name", k_name, "dataset name");
        k_alg.add_flags(cmd, false);
        cmd->add_option("--normalize", k_normalize, "cosine (default) or none");
        cmd->add_option("--format", k_format, "csv (default) or libsvm");
        cmd->add_option("--output", k_output, "output file")->required();
        cmd->add_option("--features", k_features, "also write per-graph feature vectors here");
    }

    // family
    auto* family = app.add_subcommand("family", "generate a graph family as a TUDataset");
    std::string f_family, f_output, f_name;
    int f_n = 8, f_k = 2, f_delta = 7;
    family->add_option("family", f_family, "cycle | cycle-pair | ab-pair | cfi | padded-cfi")
        ->required();
    family->add_option("--n", f_n, "cycle length for 'cycle'");
    family->add_option("--k", f_k, "family parameter k");
    family->add_option("--delta", f_delta, "path length for 'padded-cfi'");
    family->add_option("--output", f_output, "output directory")->required();
    family->add_option("--name", f_name, "dataset name (default: family name)");

    // bench
    auto* bench = app.add_subcommand("bench", "time preprocessing and refinement per algorithm");
    std::string b_input, b_name, b_algorithms, b_output;
    int b_iterations = 5, b_repeats = 1;
    bench->add_option("--input", b_input, "TUDataset directory")->required();
    bench->add_option("--name", b_name, "dataset name");
    bench->add_option("--algorithms", b_algorithms, "comma list of name:k[:s] entries")
        ->required();
    bench->add_option("--iterations", b_iterations, "refinement rounds");
    bench->add_option("--repeats", b_repeats, "repetitions to average over");
    bench->add_option("--output", b_output, "CSV output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (refine->parsed()) return cmd_refine(r_input, r_name, r_alg, r_output, jobs, seed);
        if (dist->parsed()) {
            if (d_input.empty() == (d_input_a.empty() || d_input_b.empty())) {
                std::cerr << "distinguish needs either --input or both --input-a/--input-b\n";
                return 2;
            }
            return cmd_distinguish(d_input, d_name, d_input_a, d_input_b, d_alg, d_output, jobs,
                                   seed);
        }
        if (kernel->parsed() || gram->parsed())
            return cmd_kernel(k_input, k_name, k_alg, k_normalize, k_format, k_output, k_features,
                              jobs, seed);
        if (family->parsed()) return cmd_family(f_family, f_n, f_k, f_delta, f_output, f_name, seed);
        if (bench->parsed())
            return cmd_bench(b_input, b_name, b_algorithms, b_iterations, b_repeats, b_output,
                             jobs, seed);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
