#ifndef SPEQWL_REFINEMENT_HPP
#define SPEQWL_REFINEMENT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "speqwl/graph.hpp"
#include "speqwl/tuples.hpp"

namespace speqwl {

using ColorId = std::int64_t;

enum class Algorithm {
    OneWl,             // color refinement on nodes
    KWl,               // oblivious k-WL over all k-tuples
    KFwl,              // folklore aggregation over all k-tuples
    DeltaKLwl,         // local neighbors only, all k-tuples
    DeltaKLwlPlus,     // local variant with same-color j-neighbor counts
    KsLwl,             // local variant restricted to (k,s)-tuples
    KsLwlPlus,         // restricted variant with counts inside V(G)^k_s
    EdgeLabeledOneWl,  // color refinement with edge labels on the tuple graph
};

// Hyphenated ids used by the CLI ("ks-lwl", "delta-k-lwl", "k-wl", ...).
Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

struct RefinementConfig {
    Algorithm algorithm = Algorithm::OneWl;
    int k = 1;
    int s = 1;
    std::optional<int> iterations;  // nullopt = run until the partition is stable
    bool plus_counts_last_iteration_only = true;
    int threads = 1;
    std::uint64_t memory_budget_bytes = 0;  // 0 = SPEQWL_MEM_BUDGET_BYTES or 2 GiB

    void validate() const;  // throws std::invalid_argument
    bool is_plus() const {
        return algorithm == Algorithm::DeltaKLwlPlus || algorithm == Algorithm::KsLwlPlus;
    }
};

std::uint64_t resolve_memory_budget(std::uint64_t configured);

// Maps refinement signatures to compact ids in first-encounter order.
// Ids never repeat across rounds; a round boundary lets the map forget
// signatures that cannot recur (every signature embeds a previous-round id).
class SignatureDictionary {
  public:
    ColorId intern(std::string&& signature) {
        auto [it, fresh] = map_.try_emplace(std::move(signature), next_);
        if (fresh) ++next_;
        return it->second;
    }
    void begin_round() { map_.clear(); }
    ColorId issued() const { return next_; }

  private:
    std::unordered_map<std::string, ColorId> map_;
    ColorId next_ = 0;
};

struct Coloring {
    std::vector<ColorId> colors;
    int round = 0;
    std::int64_t class_count = 0;
};

// One refinement process over a fixed domain (nodes, all k-tuples, or the
// (k,s)-tuples). Construction performs all preprocessing; refine() computes
// one round. Signature construction runs in parallel when threads > 1 and
// falls back to a serial reference loop otherwise; both orders feed the
// dictionary sequentially in element order, so results are identical.
class RefinementEngine {
  public:
    virtual ~RefinementEngine() = default;

    virtual std::int64_t domain_size() const = 0;
    virtual void initial_colors(SignatureDictionary& dict, std::vector<ColorId>& out) = 0;
    virtual void refine(SignatureDictionary& dict, std::span<const ColorId> prev,
                        std::vector<ColorId>& out, bool plus_round) = 0;

    // Nodes underlying a domain element (the tuple, or the node itself).
    virtual void element_nodes(std::int64_t element, std::vector<NodeId>& out) const = 0;

    // 0 if every node of the element is below `boundary`, 1 if none is,
    // 2 if mixed. Supports distinguishing tests on disjoint unions.
    virtual int side_of(std::int64_t element, NodeId boundary) const = 0;

    // Set for engines whose domain is a materialized (k,s)-tuple graph.
    virtual const TupleGraph* tuple_graph() const { return nullptr; }
};

std::unique_ptr<RefinementEngine> make_engine(const LabeledGraph& g, const RefinementConfig& cfg);

struct RefinementRun {
    std::unique_ptr<RefinementEngine> engine;
    std::vector<Coloring> rounds;  // round 0 = initial coloring
    bool stable = false;
};

// Runs initial coloring plus refinement rounds. Stops at the iteration cap
// or as soon as a round no longer refines the partition; rounds that do not
// refine are not part of the history. "+" variants with
// plus_counts_last_iteration_only refine plainly first and then apply the
// count-augmented aggregation: one round under a finite cap, to stability
// otherwise.
RefinementRun run_refinement(const LabeledGraph& g, const RefinementConfig& cfg);

struct DistinguishOutcome {
    bool distinguished = false;
    std::optional<int> round;  // first round whose per-graph histograms differ
};

// Runs the configured algorithm on the disjoint union of g and h with one
// shared dictionary and compares per-graph color histograms each round.
DistinguishOutcome distinguish(const LabeledGraph& g, const LabeledGraph& h,
                               const RefinementConfig& cfg);

// Edge-labeled color refinement on a prebuilt tuple graph (the simulation
// route: node labels are atomic types, edge labels are positions).
std::vector<Coloring> edge_labeled_refinement_rounds(const TupleGraph& tg,
                                                     std::optional<int> iterations,
                                                     int threads = 1);

// First-encounter renumbering; two colorings induce the same partition of
// the domain exactly when their canonical forms are equal.
std::vector<std::int64_t> canonical_partition(std::span<const ColorId> colors);

std::vector<std::pair<ColorId, std::int64_t>> color_histogram(std::span<const ColorId> colors);

}  // namespace speqwl

#endif  // SPEQWL_REFINEMENT_HPP
