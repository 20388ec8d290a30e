#include "tcam/pruning.hpp"

#include <algorithm>
#include <stdexcept>

namespace tcam {

namespace {

struct TargetOutcome {
    std::vector<std::pair<std::size_t, double>> eliminated;
    std::vector<std::pair<std::size_t, double>> tested;
};

}  // namespace

PruneResult prune(const RegressionContext& ctx, const Dag& dag_no, const PruneConfig& config, const Execution& exec) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw std::invalid_argument("prune: alpha must lie in (0, 1)");
    if (dag_no.size() != ctx.size()) throw std::invalid_argument("prune: graph size does not match dataset");

    const std::size_t p = dag_no.size();
    std::vector<TargetOutcome> outcomes(p);
    parallel_for(p, exec, [&](std::size_t l) {
        auto parents = dag_no.parents(l);
        if (parents.empty()) return;
        while (parents.size() > config.max_parents) {
            const auto pvalues = ctx.parent_pvalues(l, parents);
            const auto weakest = static_cast<std::size_t>(std::max_element(pvalues.begin(), pvalues.end()) - pvalues.begin());
            outcomes[l].eliminated.emplace_back(parents[weakest], pvalues[weakest]);
            parents.erase(parents.begin() + static_cast<std::ptrdiff_t>(weakest));
        }
        const auto pvalues = ctx.parent_pvalues(l, parents);
        for (std::size_t j = 0; j < parents.size(); ++j) outcomes[l].tested.emplace_back(parents[j], pvalues[j]);
    });

    PruneResult result;
    std::vector<Edge> kept;
    for (std::size_t l = 0; l < p; ++l) {
        for (const auto& [k, pvalue] : outcomes[l].eliminated) result.p_values[{k, l}] = pvalue;
        for (const auto& [k, pvalue] : outcomes[l].tested) {
            result.p_values[{k, l}] = pvalue;
            if (pvalue < config.alpha) kept.emplace_back(k, l);
        }
    }
    std::sort(kept.begin(), kept.end());
    result.dag = Dag::from_edges(p, kept);
    return result;
}

}  // namespace tcam
