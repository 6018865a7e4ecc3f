#include "speqwl/tudataset.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "speqwl/errors.hpp"

namespace speqwl {

namespace {

std::vector<long long> read_int_column(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    std::vector<long long> values;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        try {
            std::size_t consumed = 0;
            long long v = std::stoll(line.substr(a, b - a + 1), &consumed);
            if (consumed != b - a + 1) throw std::invalid_argument("trailing junk");
            values.push_back(v);
        } catch (const std::exception&) {
            throw FormatError(file.string() + ": row " + std::to_string(row) +
                              ": expected a single integer, got '" + line + "'");
        }
    }
    return values;
}

std::uint64_t edge_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

}  // namespace

GraphCollection load_tudataset(const std::filesystem::path& directory, const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path a_file = directory / (name + "_A.txt");
    const fs::path indicator_file = directory / (name + "_graph_indicator.txt");
    if (!fs::exists(a_file)) throw FormatError("missing mandatory file " + a_file.string());
    if (!fs::exists(indicator_file))
        throw FormatError("missing mandatory file " + indicator_file.string());

    // Graph indicator: node -> graph, 1-based in the file.
    std::vector<long long> indicator = read_int_column(indicator_file);
    const std::size_t total_nodes = indicator.size();
    long long graph_count = 0;
    for (std::size_t i = 0; i < total_nodes; ++i) {
        if (indicator[i] < 1)
            throw FormatError(indicator_file.string() + ": graph id " +
                              std::to_string(indicator[i]) + " is not positive");
        graph_count = std::max(graph_count, indicator[i]);
    }

    std::vector<NodeId> local_id(total_nodes);
    std::vector<NodeId> nodes_per_graph(graph_count, 0);
    for (std::size_t i = 0; i < total_nodes; ++i) {
        std::size_t gi = static_cast<std::size_t>(indicator[i] - 1);
        local_id[i] = nodes_per_graph[gi]++;
    }

    // Edge rows.
    std::ifstream in(a_file);
    if (!in) throw IoError("cannot open " + a_file.string());
    struct Row {
        NodeId u, v;  // 0-based global ids
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        long long u = 0, v = 0;
        std::string rest;
        if (!(ss >> u >> v) || (ss >> rest))
            throw FormatError(a_file.string() + ": row " + std::to_string(row_no) +
                              ": expected two comma-separated integers");
        if (u < 1 || v < 1 || u > static_cast<long long>(total_nodes) ||
            v > static_cast<long long>(total_nodes))
            throw FormatError(a_file.string() + ": row " + std::to_string(row_no) +
                              ": node id out of range");
        if (u == v)
            throw FormatError(a_file.string() + ": row " + std::to_string(row_no) +
                              ": self-loop on node " + std::to_string(u));
        rows.push_back({static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1)});
    }

    std::vector<long long> edge_label_col;
    const fs::path edge_label_file = directory / (name + "_edge_labels.txt");
    if (fs::exists(edge_label_file)) {
        edge_label_col = read_int_column(edge_label_file);
        if (edge_label_col.size() != rows.size())
            throw ConsistencyError(edge_label_file.string() + ": " +
                                   std::to_string(edge_label_col.size()) + " labels for " +
                                   std::to_string(rows.size()) + " edge rows");
    }

    // Collapse orientations; demand symmetry and label agreement.
    struct EdgeInfo {
        Label label;
        bool forward = false, backward = false;
    };
    std::unordered_map<std::uint64_t, EdgeInfo> undirected;
    undirected.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (indicator[rows[i].u] != indicator[rows[i].v])
            throw ConsistencyError(a_file.string() + ": row " + std::to_string(i + 1) +
                                   ": edge crosses graph boundary");
        NodeId a = std::min(rows[i].u, rows[i].v);
        NodeId b = std::max(rows[i].u, rows[i].v);
        Label lab = edge_label_col.empty() ? 0 : static_cast<Label>(edge_label_col[i]);
        auto [it, fresh] = undirected.try_emplace(edge_key(a, b), EdgeInfo{lab});
        if (!fresh && it->second.label != lab)
            throw ConsistencyError(a_file.string() + ": row " + std::to_string(i + 1) +
                                   ": orientations of edge carry different labels");
        (rows[i].u < rows[i].v ? it->second.forward : it->second.backward) = true;
    }
    for (const auto& [key, info] : undirected) {
        if (!info.forward || !info.backward)
            throw ConsistencyError(a_file.string() + ": edge (" +
                                   std::to_string((key >> 32) + 1) + "," +
                                   std::to_string((key & 0xffffffffu) + 1) +
                                   ") is not listed symmetrically");
    }

    std::vector<long long> node_label_col;
    const fs::path node_label_file = directory / (name + "_node_labels.txt");
    if (fs::exists(node_label_file)) {
        node_label_col = read_int_column(node_label_file);
        if (node_label_col.size() != total_nodes)
            throw ConsistencyError(node_label_file.string() + ": " +
                                   std::to_string(node_label_col.size()) + " labels for " +
                                   std::to_string(total_nodes) + " nodes");
    }

    // Assemble per-graph edge lists and labels.
    std::vector<std::vector<std::pair<NodeId, NodeId>>> graph_edges(graph_count);
    std::vector<std::vector<Label>> graph_edge_labels(graph_count);
    {
        std::vector<std::pair<std::uint64_t, Label>> sorted(undirected.size());
        std::size_t i = 0;
        for (const auto& [key, info] : undirected) sorted[i++] = {key, info.label};
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [key, lab] : sorted) {
            NodeId a = static_cast<NodeId>(key >> 32);
            NodeId b = static_cast<NodeId>(key & 0xffffffffu);
            std::size_t gi = static_cast<std::size_t>(indicator[a] - 1);
            graph_edges[gi].emplace_back(local_id[a], local_id[b]);
            graph_edge_labels[gi].push_back(lab);
        }
    }

    GraphCollection collection;
    collection.graphs.reserve(graph_count);
    std::vector<std::vector<Label>> graph_node_labels(graph_count);
    for (std::size_t i = 0; i < total_nodes; ++i) {
        std::size_t gi = static_cast<std::size_t>(indicator[i] - 1);
        graph_node_labels[gi].push_back(
            node_label_col.empty() ? 0 : static_cast<Label>(node_label_col[i]));
    }
    for (long long gi = 0; gi < graph_count; ++gi) {
        collection.graphs.emplace_back(nodes_per_graph[gi], graph_edges[gi],
                                       std::move(graph_node_labels[gi]), graph_edge_labels[gi]);
    }

    const fs::path graph_label_file = directory / (name + "_graph_labels.txt");
    if (fs::exists(graph_label_file)) {
        std::vector<long long> col = read_int_column(graph_label_file);
        if (col.size() != static_cast<std::size_t>(graph_count))
            throw ConsistencyError(graph_label_file.string() + ": " + std::to_string(col.size()) +
                                   " labels for " + std::to_string(graph_count) + " graphs");
        collection.targets.assign(col.begin(), col.end());
    }
    return collection;
}

void write_tudataset(const std::filesystem::path& directory, const std::string& name,
                     const GraphCollection& collection) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    std::ofstream a_out(directory / (name + "_A.txt"));
    std::ofstream ind_out(directory / (name + "_graph_indicator.txt"));
    std::ofstream nl_out(directory / (name + "_node_labels.txt"));
    std::ofstream el_out(directory / (name + "_edge_labels.txt"));
    if (!a_out || !ind_out || !nl_out || !el_out)
        throw IoError("cannot write dataset files under " + directory.string());

    long long node_base = 0;
    int graph_no = 0;
    for (const LabeledGraph& g : collection.graphs) {
        ++graph_no;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            ind_out << graph_no << "\n";
            nl_out << g.node_label(v) << "\n";
        }
        // Both orientations, global 1-based ids, ascending by source then target.
        for (NodeId u = 0; u < g.node_count(); ++u) {
            for (NodeId v : g.neighbors(u)) {
                a_out << (node_base + u + 1) << ", " << (node_base + v + 1) << "\n";
                el_out << g.edge_label(u, v) << "\n";
            }
        }
        node_base += g.node_count();
    }
    if (collection.has_targets()) {
        std::ofstream gl_out(directory / (name + "_graph_labels.txt"));
        if (!gl_out) throw IoError("cannot write graph labels under " + directory.string());
        for (int t : collection.targets) gl_out << t << "\n";
    }
}

}  // namespace speqwl
