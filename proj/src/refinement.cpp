#include "speqwl/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "speqwl/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace speqwl {

namespace {

void append_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void patch_u64(std::string& out, std::size_t pos, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out[pos + i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

// Sorted colors -> (color, multiplicity) run-length pairs with a count
// prefix. Run-length keeps signatures small when few classes exist.
void append_rle(std::string& sig, std::span<const ColorId> sorted) {
    const std::size_t count_pos = sig.size();
    append_u64(sig, 0);
    std::uint64_t pairs = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        append_u64(sig, static_cast<std::uint64_t>(sorted[i]));
        append_u64(sig, j - i);
        ++pairs;
        i = j;
    }
    patch_u64(sig, count_pos, pairs);
}

// Two-phase refinement pass: signatures are built per element (in parallel
// when threads > 1, in a plain serial loop otherwise) and interned
// sequentially in element order, so the compact ids are identical either way.
template <typename Build>
void refinement_pass(std::int64_t count, int threads, SignatureDictionary& dict,
                     std::vector<ColorId>& out, const Build& build) {
    constexpr std::int64_t kBlock = 4096;
    out.resize(count);
    std::vector<std::string> buf(static_cast<std::size_t>(std::min(count, kBlock)));
    for (std::int64_t begin = 0; begin < count; begin += kBlock) {
        const std::int64_t end = std::min(count, begin + kBlock);
#ifdef _OPENMP
        if (threads > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
            for (std::int64_t i = begin; i < end; ++i) build(i, buf[i - begin]);
        } else {
            for (std::int64_t i = begin; i < end; ++i) build(i, buf[i - begin]);
        }
#else
        for (std::int64_t i = begin; i < end; ++i) build(i, buf[i - begin]);
#endif
        for (std::int64_t i = begin; i < end; ++i) out[i] = dict.intern(std::move(buf[i - begin]));
    }
}

int side_of_nodes(std::span<const NodeId> nodes, NodeId boundary) {
    bool below = false, above = false;
    for (NodeId v : nodes) (v < boundary ? below : above) = true;
    return below && above ? 2 : (above ? 1 : 0);
}

// ---------------------------------------------------------------------------
// (k,s)-LWL and (k,s)-LWL+ on a materialized tuple graph.

class LocalTupleEngine final : public RefinementEngine {
  public:
    LocalTupleEngine(TupleGraph tg) : tg_(std::move(tg)) {}

    std::int64_t domain_size() const override { return tg_.tuple_count; }
    const TupleGraph* tuple_graph() const override { return &tg_; }

    void initial_colors(SignatureDictionary& dict, std::vector<ColorId>& out) override {
        refinement_pass(tg_.tuple_count, 1, dict, out, [&](std::int64_t t, std::string& sig) {
            sig.clear();
            sig.push_back('A');
            sig.append(tg_.atomic_code(t));
        });
    }

    void refine(SignatureDictionary& dict, std::span<const ColorId> prev,
                std::vector<ColorId>& out, bool plus_round) override {
        if (plus_round) build_group_counts(prev);
        const int k = tg_.k;
        refinement_pass(tg_.tuple_count, threads_, dict, out,
                        [&](std::int64_t t, std::string& sig) {
            thread_local std::vector<ColorId> scratch;
            thread_local std::vector<std::pair<ColorId, std::int64_t>> pair_scratch;
            sig.clear();
            sig.push_back('R');
            append_u64(sig, static_cast<std::uint64_t>(prev[t]));
            for (int j = 0; j < k; ++j) {
                auto nbrs = tg_.local_neighbors(t, j);
                if (!plus_round) {
                    scratch.clear();
                    for (std::int32_t dest : nbrs) scratch.push_back(prev[dest]);
                    std::sort(scratch.begin(), scratch.end());
                    append_rle(sig, scratch);
                } else {
                    pair_scratch.clear();
                    for (std::int32_t dest : nbrs)
                        pair_scratch.emplace_back(prev[dest], group_color_count(t, j, prev[dest]));
                    std::sort(pair_scratch.begin(), pair_scratch.end());
                    const std::size_t count_pos = sig.size();
                    append_u64(sig, 0);
                    std::uint64_t runs = 0;
                    std::size_t i = 0;
                    while (i < pair_scratch.size()) {
                        std::size_t e = i;
                        while (e < pair_scratch.size() && pair_scratch[e] == pair_scratch[i]) ++e;
                        append_u64(sig, static_cast<std::uint64_t>(pair_scratch[i].first));
                        append_u64(sig, static_cast<std::uint64_t>(pair_scratch[i].second));
                        append_u64(sig, e - i);
                        ++runs;
                        i = e;
                    }
                    patch_u64(sig, count_pos, runs);
                }
            }
        });
    }

    void element_nodes(std::int64_t element, std::vector<NodeId>& out) const override {
        auto t = tg_.tuple_at(element);
        out.assign(t.begin(), t.end());
    }

    int side_of(std::int64_t element, NodeId boundary) const override {
        return side_of_nodes(tg_.tuple_at(element), boundary);
    }

    void set_threads(int threads) { threads_ = threads; }

  private:
    // Tuples that agree everywhere except position j form a group; the "+"
    // count of a neighbor is the number of same-colored tuples in the group.
    void ensure_groups() {
        if (!groups_built_) {
            const int k = tg_.k;
            const std::int64_t count = tg_.tuple_count;
            order_.resize(static_cast<std::size_t>(k) * count);
            group_of_.resize(static_cast<std::size_t>(k) * count);
            group_bounds_.clear();
            group_bounds_.push_back(0);
            std::int32_t next_group = 0;
            for (int j = 0; j < k; ++j) {
                std::int32_t* seg = order_.data() + static_cast<std::size_t>(j) * count;
                for (std::int64_t t = 0; t < count; ++t) seg[t] = static_cast<std::int32_t>(t);
                auto blanked_less = [&](std::int32_t a, std::int32_t b) {
                    const NodeId* pa = tg_.tuple_nodes.data() + static_cast<std::int64_t>(a) * k;
                    const NodeId* pb = tg_.tuple_nodes.data() + static_cast<std::int64_t>(b) * k;
                    for (int i = 0; i < k; ++i) {
                        if (i == j) continue;
                        if (pa[i] != pb[i]) return pa[i] < pb[i];
                    }
                    return false;
                };
                auto blanked_equal = [&](std::int32_t a, std::int32_t b) {
                    return !blanked_less(a, b) && !blanked_less(b, a);
                };
                std::sort(seg, seg + count, blanked_less);
                for (std::int64_t i = 0; i < count; ++i) {
                    if (i > 0 && !blanked_equal(seg[i], seg[i - 1])) {
                        ++next_group;
                        group_bounds_.push_back(static_cast<std::size_t>(j) * count + i);
                    }
                    group_of_[static_cast<std::size_t>(j) * count + seg[i]] = next_group;
                }
                if (count > 0 && j + 1 < k) {
                    ++next_group;
                    group_bounds_.push_back(static_cast<std::size_t>(j + 1) * count);
                }
            }
            group_bounds_.push_back(order_.size());
            groups_built_ = true;
        }
    }

    void build_group_counts(std::span<const ColorId> prev) {
        ensure_groups();
        const std::size_t groups = group_bounds_.size() - 1;
        pair_offsets_.assign(groups + 1, 0);
        pairs_.clear();
        for (std::size_t gid = 0; gid < groups; ++gid) {
            std::vector<ColorId> colors;
            colors.reserve(group_bounds_[gid + 1] - group_bounds_[gid]);
            for (std::size_t i = group_bounds_[gid]; i < group_bounds_[gid + 1]; ++i)
                colors.push_back(prev[order_[i]]);
            std::sort(colors.begin(), colors.end());
            std::size_t i = 0;
            while (i < colors.size()) {
                std::size_t e = i;
                while (e < colors.size() && colors[e] == colors[i]) ++e;
                pairs_.emplace_back(colors[i], static_cast<std::int64_t>(e - i));
                i = e;
            }
            pair_offsets_[gid + 1] = pairs_.size();
        }
    }

    std::int64_t group_color_count(std::int64_t t, int j, ColorId color) const {
        const std::int32_t gid = group_of_[static_cast<std::size_t>(j) * tg_.tuple_count + t];
        auto begin = pairs_.begin() + pair_offsets_[gid];
        auto end = pairs_.begin() + pair_offsets_[gid + 1];
        auto it = std::lower_bound(begin, end, std::make_pair(color, std::int64_t{0}));
        return (it != end && it->first == color) ? it->second : 0;
    }

    TupleGraph tg_;
    int threads_ = 1;
    bool groups_built_ = false;
    std::vector<std::int32_t> order_;
    std::vector<std::int32_t> group_of_;
    std::vector<std::size_t> group_bounds_;
    std::vector<std::size_t> pair_offsets_;
    std::vector<std::pair<ColorId, std::int64_t>> pairs_;
};

// ---------------------------------------------------------------------------
// Dense engines over all n^k tuples, addressed by mixed-radix index; no tuple
// storage. Covers k-WL (oblivious), k-FWL, delta-k-LWL, and delta-k-LWL+.

class DenseTupleEngine final : public RefinementEngine {
  public:
    enum class Mode { Local, Oblivious, Folklore };

    DenseTupleEngine(const LabeledGraph& g, int k, Mode mode, std::uint64_t budget, int threads)
        : g_(g), k_(k), mode_(mode), threads_(threads) {
        const double n = static_cast<double>(std::max<NodeId>(g.node_count(), 1));
        const double log_total = k * std::log2(n);
        const double est = log_total > 62 ? std::numeric_limits<double>::infinity()
                                          : 24.0 * std::pow(n, k);
        if (!(est <= static_cast<double>(budget)))
            throw ResourceError(
                "dense " + std::to_string(k) + "-tuple refinement needs about " +
                    std::to_string(static_cast<std::uint64_t>(est)) + " bytes, budget is " +
                    std::to_string(budget) +
                    " (set SPEQWL_MEM_BUDGET_BYTES to raise it)",
                static_cast<std::uint64_t>(est));
        strides_.resize(k);
        total_ = 1;
        for (int j = k - 1; j >= 0; --j) {
            strides_[j] = total_;
            total_ *= g.node_count();
        }
    }

    std::int64_t domain_size() const override { return total_; }

    void initial_colors(SignatureDictionary& dict, std::vector<ColorId>& out) override {
        refinement_pass(total_, threads_, dict, out, [&](std::int64_t idx, std::string& sig) {
            thread_local std::vector<NodeId> digits;
            decode(idx, digits);
            sig.clear();
            sig.push_back('A');
            sig.append(atomic_type_code(g_, digits));
        });
    }

    void refine(SignatureDictionary& dict, std::span<const ColorId> prev,
                std::vector<ColorId>& out, bool plus_round) override {
        const NodeId n = g_.node_count();
        refinement_pass(total_, threads_, dict, out, [&](std::int64_t idx, std::string& sig) {
            thread_local std::vector<NodeId> digits;
            thread_local std::vector<ColorId> scratch;
            thread_local std::vector<ColorId> column;
            thread_local std::vector<std::pair<ColorId, std::int64_t>> pair_scratch;
            thread_local std::vector<std::vector<ColorId>> vectors;
            decode(idx, digits);
            sig.clear();
            sig.push_back('R');
            append_u64(sig, static_cast<std::uint64_t>(prev[idx]));
            if (mode_ == Mode::Folklore) {
                vectors.assign(n, {});
                for (NodeId w = 0; w < n; ++w) {
                    auto& vec = vectors[w];
                    vec.resize(k_);
                    for (int j = 0; j < k_; ++j)
                        vec[j] = prev[idx + (static_cast<std::int64_t>(w) - digits[j]) * strides_[j]];
                }
                std::sort(vectors.begin(), vectors.end());
                const std::size_t count_pos = sig.size();
                append_u64(sig, 0);
                std::uint64_t runs = 0;
                std::size_t i = 0;
                while (i < vectors.size()) {
                    std::size_t e = i;
                    while (e < vectors.size() && vectors[e] == vectors[i]) ++e;
                    for (ColorId c : vectors[i]) append_u64(sig, static_cast<std::uint64_t>(c));
                    append_u64(sig, e - i);
                    ++runs;
                    i = e;
                }
                patch_u64(sig, count_pos, runs);
                return;
            }
            for (int j = 0; j < k_; ++j) {
                const std::int64_t base = idx - static_cast<std::int64_t>(digits[j]) * strides_[j];
                if (mode_ == Mode::Oblivious) {
                    scratch.clear();
                    for (NodeId w = 0; w < n; ++w)
                        scratch.push_back(prev[base + static_cast<std::int64_t>(w) * strides_[j]]);
                    std::sort(scratch.begin(), scratch.end());
                    append_rle(sig, scratch);
                } else if (!plus_round) {
                    scratch.clear();
                    for (NodeId w : g_.neighbors(digits[j]))
                        scratch.push_back(prev[base + static_cast<std::int64_t>(w) * strides_[j]]);
                    std::sort(scratch.begin(), scratch.end());
                    append_rle(sig, scratch);
                } else {
                    // The "+" count covers all j-neighbors, local and global.
                    column.clear();
                    for (NodeId w = 0; w < n; ++w)
                        column.push_back(prev[base + static_cast<std::int64_t>(w) * strides_[j]]);
                    std::sort(column.begin(), column.end());
                    pair_scratch.clear();
                    for (NodeId w : g_.neighbors(digits[j])) {
                        ColorId c = prev[base + static_cast<std::int64_t>(w) * strides_[j]];
                        auto lo = std::lower_bound(column.begin(), column.end(), c);
                        auto hi = std::upper_bound(lo, column.end(), c);
                        pair_scratch.emplace_back(c, hi - lo);
                    }
                    std::sort(pair_scratch.begin(), pair_scratch.end());
                    const std::size_t count_pos = sig.size();
                    append_u64(sig, 0);
                    std::uint64_t runs = 0;
                    std::size_t i = 0;
                    while (i < pair_scratch.size()) {
                        std::size_t e = i;
                        while (e < pair_scratch.size() && pair_scratch[e] == pair_scratch[i]) ++e;
                        append_u64(sig, static_cast<std::uint64_t>(pair_scratch[i].first));
                        append_u64(sig, static_cast<std::uint64_t>(pair_scratch[i].second));
                        append_u64(sig, e - i);
                        ++runs;
                        i = e;
                    }
                    patch_u64(sig, count_pos, runs);
                }
            }
        });
    }

    void element_nodes(std::int64_t element, std::vector<NodeId>& out) const override {
        decode(element, out);
    }

    int side_of(std::int64_t element, NodeId boundary) const override {
        thread_local std::vector<NodeId> digits;
        decode(element, digits);
        return side_of_nodes(digits, boundary);
    }

  private:
    void decode(std::int64_t idx, std::vector<NodeId>& digits) const {
        digits.resize(k_);
        const NodeId n = g_.node_count();
        for (int j = k_ - 1; j >= 0; --j) {
            digits[j] = static_cast<NodeId>(idx % n);
            idx /= n;
        }
    }

    const LabeledGraph& g_;
    int k_;
    Mode mode_;
    int threads_;
    std::vector<std::int64_t> strides_;
    std::int64_t total_ = 0;
};

// ---------------------------------------------------------------------------
// Color refinement on the nodes of a labeled graph.

class NodeEngine final : public RefinementEngine {
  public:
    NodeEngine(const LabeledGraph& g, int threads) : g_(g), threads_(threads) {}

    std::int64_t domain_size() const override { return g_.node_count(); }

    void initial_colors(SignatureDictionary& dict, std::vector<ColorId>& out) override {
        refinement_pass(g_.node_count(), 1, dict, out, [&](std::int64_t v, std::string& sig) {
            sig.clear();
            sig.push_back('A');
            append_u64(sig, static_cast<std::uint64_t>(
                                static_cast<std::uint32_t>(g_.node_label(static_cast<NodeId>(v)))));
        });
    }

    void refine(SignatureDictionary& dict, std::span<const ColorId> prev,
                std::vector<ColorId>& out, bool) override {
        refinement_pass(g_.node_count(), threads_, dict, out,
                        [&](std::int64_t v, std::string& sig) {
            thread_local std::vector<ColorId> scratch;
            sig.clear();
            sig.push_back('R');
            append_u64(sig, static_cast<std::uint64_t>(prev[v]));
            scratch.clear();
            for (NodeId w : g_.neighbors(static_cast<NodeId>(v))) scratch.push_back(prev[w]);
            std::sort(scratch.begin(), scratch.end());
            append_rle(sig, scratch);
        });
    }

    void element_nodes(std::int64_t element, std::vector<NodeId>& out) const override {
        out.assign(1, static_cast<NodeId>(element));
    }

    int side_of(std::int64_t element, NodeId boundary) const override {
        return element < boundary ? 0 : 1;
    }

  private:
    const LabeledGraph& g_;
    int threads_;
};

// ---------------------------------------------------------------------------
// Edge-labeled color refinement on the nodes of a tuple graph: the multiset
// aggregates (neighbor color, position label) pairs over out-neighbors.

class TupleGraphNodeEngine final : public RefinementEngine {
  public:
    TupleGraphNodeEngine(TupleGraph owned, int threads)
        : storage_(std::move(owned)), tg_(&storage_), threads_(threads) {}
    TupleGraphNodeEngine(const TupleGraph* borrowed, int threads)
        : tg_(borrowed), threads_(threads) {}

    std::int64_t domain_size() const override { return tg_->tuple_count; }
    const TupleGraph* tuple_graph() const override { return tg_; }

    void initial_colors(SignatureDictionary& dict, std::vector<ColorId>& out) override {
        refinement_pass(tg_->tuple_count, 1, dict, out, [&](std::int64_t t, std::string& sig) {
            sig.clear();
            sig.push_back('A');
            sig.append(tg_->atomic_code(t));
        });
    }

    void refine(SignatureDictionary& dict, std::span<const ColorId> prev,
                std::vector<ColorId>& out, bool) override {
        const int k = tg_->k;
        refinement_pass(tg_->tuple_count, threads_, dict, out,
                        [&](std::int64_t t, std::string& sig) {
            thread_local std::vector<std::pair<ColorId, std::int32_t>> scratch;
            sig.clear();
            sig.push_back('R');
            append_u64(sig, static_cast<std::uint64_t>(prev[t]));
            scratch.clear();
            for (int j = 0; j < k; ++j)
                for (std::int32_t dest : tg_->local_neighbors(t, j))
                    scratch.emplace_back(prev[dest], j);
            std::sort(scratch.begin(), scratch.end());
            const std::size_t count_pos = sig.size();
            append_u64(sig, 0);
            std::uint64_t runs = 0;
            std::size_t i = 0;
            while (i < scratch.size()) {
                std::size_t e = i;
                while (e < scratch.size() && scratch[e] == scratch[i]) ++e;
                append_u64(sig, static_cast<std::uint64_t>(scratch[i].first));
                append_u64(sig, static_cast<std::uint64_t>(
                                    static_cast<std::uint32_t>(scratch[i].second)));
                append_u64(sig, e - i);
                ++runs;
                i = e;
            }
            patch_u64(sig, count_pos, runs);
        });
    }

    void element_nodes(std::int64_t element, std::vector<NodeId>& out) const override {
        auto t = tg_->tuple_at(element);
        out.assign(t.begin(), t.end());
    }

    int side_of(std::int64_t element, NodeId boundary) const override {
        return side_of_nodes(tg_->tuple_at(element), boundary);
    }

  private:
    TupleGraph storage_;
    const TupleGraph* tg_;
    int threads_;
};

int cap_for(std::int64_t domain) {
    return static_cast<int>(std::min<std::int64_t>(domain, std::numeric_limits<int>::max() - 2));
}

// Shared driver: initial coloring plus rounds with stability detection.
RefinementRun run_engine_loop(std::unique_ptr<RefinementEngine> engine,
                              const std::optional<int>& iterations, bool plus, bool last_only) {
    RefinementRun run;
    run.engine = std::move(engine);
    SignatureDictionary dict;

    Coloring current;
    dict.begin_round();
    run.engine->initial_colors(dict, current.colors);
    current.round = 0;
    current.class_count = dict.issued();
    run.rounds.push_back(current);

    const std::int64_t domain = run.engine->domain_size();
    if (domain == 0) {
        run.stable = true;
        return run;
    }
    const int cap = iterations ? *iterations : cap_for(domain);
    auto one_round = [&](int r, bool plus_round) {
        Coloring next;
        next.round = r;
        const ColorId before = dict.issued();
        dict.begin_round();
        run.engine->refine(dict, run.rounds.back().colors, next.colors, plus_round);
        next.class_count = dict.issued() - before;
        // Each signature embeds the previous color, so the new partition
        // refines the old one; equal class counts mean an unchanged partition.
        const bool unchanged = next.class_count == run.rounds.back().class_count;
        if (!unchanged) run.rounds.push_back(std::move(next));
        return unchanged;
    };

    const bool want_final_plus = plus && last_only && cap > 0;
    const int plain_cap = want_final_plus ? cap - 1 : cap;
    const bool plus_every_round = plus && !last_only;
    for (int r = 1; r <= plain_cap; ++r) {
        if (one_round(r, plus_every_round)) {
            run.stable = true;
            break;
        }
    }
    // Count-augmented rounds after the plain phase: exactly one under a
    // finite cap, until stable otherwise.
    if (want_final_plus) {
        const int limit = iterations ? run.rounds.back().round + 1 : cap_for(domain);
        for (int r = run.rounds.back().round + 1; r <= limit; ++r) {
            if (one_round(r, true)) {
                run.stable = true;
                break;
            }
            run.stable = false;
        }
    }
    return run;
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
    if (name == "1-wl") return Algorithm::OneWl;
    if (name == "k-wl") return Algorithm::KWl;
    if (name == "k-fwl") return Algorithm::KFwl;
    if (name == "delta-k-lwl") return Algorithm::DeltaKLwl;
    if (name == "delta-k-lwl-plus") return Algorithm::DeltaKLwlPlus;
    if (name == "ks-lwl") return Algorithm::KsLwl;
    if (name == "ks-lwl-plus") return Algorithm::KsLwlPlus;
    if (name == "el-1-wl") return Algorithm::EdgeLabeledOneWl;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::OneWl: return "1-wl";
        case Algorithm::KWl: return "k-wl";
        case Algorithm::KFwl: return "k-fwl";
        case Algorithm::DeltaKLwl: return "delta-k-lwl";
        case Algorithm::DeltaKLwlPlus: return "delta-k-lwl-plus";
        case Algorithm::KsLwl: return "ks-lwl";
        case Algorithm::KsLwlPlus: return "ks-lwl-plus";
        case Algorithm::EdgeLabeledOneWl: return "el-1-wl";
    }
    return "?";
}

void RefinementConfig::validate() const {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
    if (iterations && *iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    switch (algorithm) {
        case Algorithm::KWl:
        case Algorithm::KFwl:
        case Algorithm::DeltaKLwl:
        case Algorithm::DeltaKLwlPlus:
            if (k < 2) throw std::invalid_argument("k must be at least 2 for k-tuple variants");
            break;
        case Algorithm::KsLwl:
        case Algorithm::KsLwlPlus:
        case Algorithm::EdgeLabeledOneWl:
            if (s < 1 || s > k) throw std::invalid_argument("s must lie in [k]");
            break;
        case Algorithm::OneWl:
            break;
    }
}

std::uint64_t resolve_memory_budget(std::uint64_t configured) {
    if (configured != 0) return configured;
    if (const char* env = std::getenv("SPEQWL_MEM_BUDGET_BYTES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 2ull << 30;
}

std::unique_ptr<RefinementEngine> make_engine(const LabeledGraph& g, const RefinementConfig& cfg) {
    cfg.validate();
    const std::uint64_t budget = resolve_memory_budget(cfg.memory_budget_bytes);
    switch (cfg.algorithm) {
        case Algorithm::OneWl:
            return std::make_unique<NodeEngine>(g, cfg.threads);
        case Algorithm::KWl:
            return std::make_unique<DenseTupleEngine>(g, cfg.k, DenseTupleEngine::Mode::Oblivious,
                                                      budget, cfg.threads);
        case Algorithm::KFwl:
            return std::make_unique<DenseTupleEngine>(g, cfg.k, DenseTupleEngine::Mode::Folklore,
                                                      budget, cfg.threads);
        case Algorithm::DeltaKLwl:
        case Algorithm::DeltaKLwlPlus:
            return std::make_unique<DenseTupleEngine>(g, cfg.k, DenseTupleEngine::Mode::Local,
                                                      budget, cfg.threads);
        case Algorithm::KsLwl:
        case Algorithm::KsLwlPlus: {
            auto engine = std::make_unique<LocalTupleEngine>(build_tuple_graph(g, cfg.k, cfg.s));
            engine->set_threads(cfg.threads);
            return engine;
        }
        case Algorithm::EdgeLabeledOneWl:
            return std::make_unique<TupleGraphNodeEngine>(build_tuple_graph(g, cfg.k, cfg.s),
                                                          cfg.threads);
    }
    throw std::invalid_argument("unknown algorithm");
}

RefinementRun run_refinement(const LabeledGraph& g, const RefinementConfig& cfg) {
    return run_engine_loop(make_engine(g, cfg), cfg.iterations, cfg.is_plus(),
                           cfg.plus_counts_last_iteration_only);
}

DistinguishOutcome distinguish(const LabeledGraph& g, const LabeledGraph& h,
                               const RefinementConfig& cfg) {
    cfg.validate();
    const LabeledGraph combined = disjoint_union(g, h);
    const NodeId boundary = g.node_count();
    auto engine = make_engine(combined, cfg);
    SignatureDictionary dict;

    const std::int64_t domain = engine->domain_size();
    std::vector<int> side(static_cast<std::size_t>(domain));
    for (std::int64_t i = 0; i < domain; ++i) side[i] = engine->side_of(i, boundary);

    // Per-round per-graph histograms differ iff some color class splits
    // unevenly across the two operands. Tuples mixing both graphs belong to
    // neither side.
    auto sides_differ = [&](std::span<const ColorId> colors) {
        std::unordered_map<ColorId, std::int64_t> balance;
        for (std::int64_t i = 0; i < domain; ++i) {
            if (side[i] == 0)
                ++balance[colors[i]];
            else if (side[i] == 1)
                --balance[colors[i]];
        }
        for (const auto& [color, diff] : balance)
            if (diff != 0) return true;
        return false;
    };

    std::vector<ColorId> current, next;
    dict.begin_round();
    engine->initial_colors(dict, current);
    std::int64_t classes = dict.issued();
    if (sides_differ(current)) return {true, 0};

    const int cap = cfg.iterations ? *cfg.iterations : cap_for(domain);
    // The "+" aggregation is the algorithm here, not a kernel labeling
    // device, so it applies on every round.
    const bool plus = cfg.is_plus();
    for (int r = 1; r <= cap; ++r) {
        const ColorId before = dict.issued();
        dict.begin_round();
        engine->refine(dict, current, next, plus);
        const std::int64_t new_classes = dict.issued() - before;
        if (sides_differ(next)) return {true, r};
        if (new_classes == classes) break;  // stable and still balanced
        classes = new_classes;
        std::swap(current, next);
    }
    return {false, std::nullopt};
}

std::vector<Coloring> edge_labeled_refinement_rounds(const TupleGraph& tg,
                                                     std::optional<int> iterations, int threads) {
    auto run = run_engine_loop(std::make_unique<TupleGraphNodeEngine>(&tg, threads), iterations,
                               false, false);
    return std::move(run.rounds);
}

std::vector<std::int64_t> canonical_partition(std::span<const ColorId> colors) {
    std::vector<std::int64_t> out(colors.size());
    std::unordered_map<ColorId, std::int64_t> remap;
    remap.reserve(colors.size());
    for (std::size_t i = 0; i < colors.size(); ++i) {
        auto [it, fresh] = remap.try_emplace(colors[i], static_cast<std::int64_t>(remap.size()));
        out[i] = it->second;
    }
    return out;
}

std::vector<std::pair<ColorId, std::int64_t>> color_histogram(std::span<const ColorId> colors) {
    std::unordered_map<ColorId, std::int64_t> counts;
    counts.reserve(colors.size());
    for (ColorId c : colors) ++counts[c];
    std::vector<std::pair<ColorId, std::int64_t>> out(counts.begin(), counts.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace speqwl
