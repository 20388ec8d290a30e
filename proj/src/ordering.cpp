#include "tcam/ordering.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tcam {

namespace {

constexpr double kExcluded = -std::numeric_limits<double>::infinity();

// Recomputes column l of M against the current parents of l.
void update_column(const RegressionContext& ctx, const Dag& dag, const NeighborSets& neighbors,
                   const OrderingConfig& config, std::size_t l, ScoreMatrix& m, const Execution& exec) {
    const auto parents = dag.parents(l);
    std::vector<std::size_t> candidates;
    for (auto k : neighbors.candidates[l]) {
        if (dag.can_add(k, l)) candidates.push_back(k);
    }
    m.exclude_target(l);
    if (parents.size() >= config.max_parents) return;

    const double base = m.node_rss(l);
    std::vector<double> rss(candidates.size());
    parallel_for(candidates.size(), exec, [&](std::size_t i) {
        auto extended = parents;
        extended.push_back(candidates[i]);
        rss[i] = ctx.rss(l, extended);
    });
    for (std::size_t i = 0; i < candidates.size(); ++i) m.set(candidates[i], l, base - rss[i], rss[i]);
}

void exclude_cycles(const Dag& dag, ScoreMatrix& m) {
    for (std::size_t k = 0; k < m.size(); ++k) {
        for (std::size_t l = 0; l < m.size(); ++l) {
            if (m.is_finite(k, l) && !dag.can_add(k, l)) m.exclude(k, l);
        }
    }
}

}  // namespace

ScoreMatrix::ScoreMatrix(std::size_t p)
    : p_(p), gains_(p * p, kExcluded), candidate_rss_(p * p, std::numeric_limits<double>::quiet_NaN()), node_rss_(p, 0.0) {}

bool ScoreMatrix::is_finite(std::size_t k, std::size_t l) const { return std::isfinite(gains_[k * p_ + l]); }

void ScoreMatrix::set(std::size_t k, std::size_t l, double gain, double candidate_rss) {
    gains_[k * p_ + l] = gain;
    candidate_rss_[k * p_ + l] = candidate_rss;
}

void ScoreMatrix::exclude(std::size_t k, std::size_t l) { gains_[k * p_ + l] = kExcluded; }

void ScoreMatrix::exclude_target(std::size_t l) {
    for (std::size_t k = 0; k < p_; ++k) exclude(k, l);
}

double ScoreMatrix::total_rss() const { return std::accumulate(node_rss_.begin(), node_rss_.end(), 0.0); }

std::size_t ScoreMatrix::finite_count() const {
    std::size_t n = 0;
    for (double g : gains_) n += std::isfinite(g) ? 1 : 0;
    return n;
}

std::optional<Edge> ScoreMatrix::argmax() const {
    std::optional<Edge> best;
    double best_gain = kExcluded;
    for (std::size_t k = 0; k < p_; ++k) {
        for (std::size_t l = 0; l < p_; ++l) {
            const double g = gains_[k * p_ + l];
            if (std::isfinite(g) && (!best || g > best_gain)) {
                best = Edge{k, l};
                best_gain = g;
            }
        }
    }
    return best;
}

double order_score(const RegressionContext& ctx, const Ordering& ordering, const NeighborSets& neighbors,
                   const Execution& exec) {
    if (ordering.size() != ctx.size()) throw std::invalid_argument("order_score: ordering size mismatch");
    std::vector<double> rss(ctx.size());
    parallel_for(ctx.size(), exec, [&](std::size_t l) {
        std::vector<std::size_t> predecessors;
        for (auto k : neighbors.candidates[l]) {
            if (ordering.precedes(k, l)) predecessors.push_back(k);
        }
        rss[l] = ctx.rss(l, predecessors);
    });
    return std::accumulate(rss.begin(), rss.end(), 0.0);
}

std::pair<Dag, ScoreMatrix> init_search(const RegressionContext& ctx, const NeighborSets& neighbors,
                                        const std::vector<int>& tiers, const OrderingConfig& config,
                                        const Execution& exec) {
    const std::size_t p = ctx.size();
    if (neighbors.size() != p || tiers.size() != p) throw std::invalid_argument("init_search: size mismatch");

    Dag dag(p);
    for (std::size_t l = 0; l < p; ++l) {
        for (auto k : neighbors.candidates[l]) {
            if (tiers[k] < tiers[l]) dag.add_edge(k, l);
        }
    }

    ScoreMatrix m(p);
    std::vector<double> base(p);
    parallel_for(p, exec, [&](std::size_t l) { base[l] = ctx.rss(l, dag.parents(l)); });
    for (std::size_t l = 0; l < p; ++l) m.set_node_rss(l, base[l]);

    std::vector<Edge> pairs;
    for (std::size_t l = 0; l < p; ++l) {
        if (dag.parents(l).size() >= config.max_parents) continue;
        for (auto k : neighbors.candidates[l]) {
            if (tiers[k] == tiers[l] && dag.can_add(k, l)) pairs.emplace_back(k, l);
        }
    }
    std::vector<double> rss(pairs.size());
    parallel_for(pairs.size(), exec, [&](std::size_t i) {
        const auto [k, l] = pairs[i];
        auto extended = dag.parents(l);
        extended.push_back(k);
        rss[i] = ctx.rss(l, extended);
    });
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [k, l] = pairs[i];
        m.set(k, l, base[l] - rss[i], rss[i]);
    }
    return {std::move(dag), std::move(m)};
}

std::pair<Dag, ScoreMatrix> init_tcam(const RegressionContext& ctx, const NeighborSets& neighbors,
                                      const PriorKnowledge& prior, const OrderingConfig& config,
                                      const Execution& exec) {
    return init_search(ctx, neighbors, prior.tiers, config, exec);
}

double score_gain(const RegressionContext& ctx, const Dag& dag, std::size_t k, std::size_t l) {
    if (!dag.can_add(k, l)) throw std::invalid_argument("score_gain: edge is not addable");
    auto parents = dag.parents(l);
    const double before = ctx.rss(l, parents);
    parents.push_back(k);
    return before - ctx.rss(l, parents);
}

OrderingResult greedy_order(const RegressionContext& ctx, const NeighborSets& neighbors, const PriorKnowledge& prior,
                            SearchMode mode, const OrderingConfig& config, const Execution& exec) {
    const std::size_t p = ctx.size();
    const std::vector<int> tiers = mode == SearchMode::Tcam ? prior.tiers : std::vector<int>(p, 1);
    auto [dag, m] = init_search(ctx, neighbors, tiers, config, exec);

    OrderingResult result;
    result.preplaced = dag.edges();
    result.initial_score = m.total_rss();

    while (auto best = m.argmax()) {
        const auto [k0, l0] = *best;
        const double gain = m.gain(k0, l0);
        if (config.early_stop && gain < config.min_gain) break;

        dag.add_edge(k0, l0);
        m.set_node_rss(l0, m.candidate_rss(k0, l0));
        m.exclude(k0, l0);
        result.trace.push_back({*best, gain, m.total_rss()});

        update_column(ctx, dag, neighbors, config, l0, m, exec);
        exclude_cycles(dag, m);
    }

    result.final_score = m.total_rss();
    result.ordering = topological_order(dag);
    result.dag_no = std::move(dag);
    return result;
}

}  // namespace tcam
