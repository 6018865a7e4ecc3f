#ifndef SPEQWL_TUDATASET_HPP
#define SPEQWL_TUDATASET_HPP

#include <filesystem>
#include <string>

#include "speqwl/graph.hpp"

namespace speqwl {

// Readers/writers for the TUDataset plain-text format:
//   <name>_A.txt               comma-separated directed edge rows (1-based ids)
//   <name>_graph_indicator.txt one 1-based graph id per node
//   <name>_graph_labels.txt    optional, one integer per graph
//   <name>_node_labels.txt     optional, one integer per node
//   <name>_edge_labels.txt     optional, one integer per row of _A.txt
//
// Loading collapses the two orientations of each edge into one undirected
// edge and rejects self-loops and asymmetric edge lists.
GraphCollection load_tudataset(const std::filesystem::path& directory, const std::string& name);

// Emits both orientations of every edge, 1-based ids, "u, v" rows.
void write_tudataset(const std::filesystem::path& directory, const std::string& name,
                     const GraphCollection& collection);

}  // namespace speqwl

#endif  // SPEQWL_TUDATASET_HPP
