#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tcam/graph.hpp"
#include "tcam/parallel.hpp"
#include "tcam/pns.hpp"
#include "tcam/regression.hpp"

namespace tcam {

enum class SearchMode { Cam, Tcam };

struct OrderingConfig {
    // Stop once the best remaining gain falls below min_gain.
    bool early_stop = true;
    double min_gain = 1e-6;
    // A node stops accepting parents once it has this many.
    std::size_t max_parents = 20;
};

// Gain matrix of the greedy search. Entry (k, l) is the drop in the residual
// score of node l when k joins its parents; excluded pairs hold -infinity.
class ScoreMatrix {
public:
    explicit ScoreMatrix(std::size_t p = 0);

    std::size_t size() const { return p_; }
    double gain(std::size_t k, std::size_t l) const { return gains_[k * p_ + l]; }
    bool is_finite(std::size_t k, std::size_t l) const;
    void set(std::size_t k, std::size_t l, double gain, double candidate_rss);
    void exclude(std::size_t k, std::size_t l);
    void exclude_target(std::size_t l);

    // Residual score of l with the parents accepted so far.
    double node_rss(std::size_t l) const { return node_rss_[l]; }
    void set_node_rss(std::size_t l, double rss) { node_rss_[l] = rss; }
    // Residual score of l if k were added, cached alongside the gain.
    double candidate_rss(std::size_t k, std::size_t l) const { return candidate_rss_[k * p_ + l]; }

    double total_rss() const;
    std::size_t finite_count() const;
    // Largest finite entry, ties to the lexicographically smallest (k, l).
    std::optional<Edge> argmax() const;

private:
    std::size_t p_ = 0;
    std::vector<double> gains_;
    std::vector<double> candidate_rss_;
    std::vector<double> node_rss_;
};

struct TraceEntry {
    Edge edge;
    double gain = 0.0;
    double score = 0.0;  // total residual score after accepting the edge
};

struct OrderingResult {
    Dag dag_no;
    Ordering ordering;
    double initial_score = 0.0;
    double final_score = 0.0;
    // Edges placed before the greedy loop (across-tier edges in TCAM mode).
    std::vector<Edge> preplaced;
    std::vector<TraceEntry> trace;

    std::size_t iterations() const { return trace.size(); }
};

// Sum over nodes of the residual score of each node regressed on its
// candidate parents that precede it in `ordering`.
double order_score(const RegressionContext& ctx, const Ordering& ordering, const NeighborSets& neighbors,
                   const Execution& exec = {});

// Initial graph and gain matrix. With tiers, every candidate pair crossing to
// a later tier is placed as an edge up front and only same-tier pairs enter M;
// with all nodes in one tier this is the plain empty-graph start.
std::pair<Dag, ScoreMatrix> init_search(const RegressionContext& ctx, const NeighborSets& neighbors,
                                        const std::vector<int>& tiers, const OrderingConfig& config,
                                        const Execution& exec = {});
std::pair<Dag, ScoreMatrix> init_tcam(const RegressionContext& ctx, const NeighborSets& neighbors,
                                      const PriorKnowledge& prior, const OrderingConfig& config,
                                      const Execution& exec = {});

// Residual score of l on its parents in dag minus that on parents plus k,
// recomputed from scratch.
double score_gain(const RegressionContext& ctx, const Dag& dag, std::size_t k, std::size_t l);

// Greedy edge addition. CAM ignores the tier map; TCAM pre-places across-tier
// edges. Both honour the forbidden matrix folded into `neighbors`.
OrderingResult greedy_order(const RegressionContext& ctx, const NeighborSets& neighbors, const PriorKnowledge& prior,
                            SearchMode mode, const OrderingConfig& config = {}, const Execution& exec = {});

}  // namespace tcam
