#include "tcam/discover.hpp"

#include <chrono>

#include "tcam/errors.hpp"
#include "tcam/regression.hpp"

namespace tcam {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SearchMode resolve_mode(const PriorKnowledge& prior, const std::optional<SearchMode>& requested) {
    if (requested) return *requested;
    return prior.is_informative() ? SearchMode::Tcam : SearchMode::Cam;
}

DiscoverResult discover_prepared(const Dataset& data, const PriorKnowledge& prior, const DiscoverOptions& options) {
    const auto start = Clock::now();
    if (prior.size() != data.n_cols()) throw InputError("prior knowledge does not match the dataset columns");
    if (!is_standardized(data)) throw InputError("discover: dataset is not standardized");

    DiscoverResult result;
    result.data = data;
    result.mode = resolve_mode(prior, options.mode);
    // CAM runs without background knowledge.
    result.prior = result.mode == SearchMode::Tcam ? prior : PriorKnowledge::trivial(data.n_cols());

    auto stage = Clock::now();
    result.neighbors = options.use_pns
                           ? select_neighbors(data, result.prior, options.pns, options.seed, options.exec)
                           : NeighborSets::unrestricted(result.prior);
    result.timings.pns = seconds_since(stage);

    stage = Clock::now();
    std::vector<bool> needed(data.n_cols(), false);
    for (const auto& set : result.neighbors.candidates) {
        for (auto k : set) needed[k] = true;
    }
    const RegressionContext ctx(data, options.smoother, needed, options.exec);
    result.ordering = greedy_order(ctx, result.neighbors, result.prior, result.mode, options.ordering, options.exec);
    result.timings.ordering = seconds_since(stage);

    stage = Clock::now();
    result.pruned = prune(ctx, result.ordering.dag_no, options.prune, options.exec);
    result.timings.pruning = seconds_since(stage);
    result.timings.total = seconds_since(start);
    return result;
}

DiscoverResult discover(const Dataset& raw, const std::optional<PriorKnowledge>& prior, const DiscoverOptions& options) {
    const auto start = Clock::now();
    Dataset data = prepare(raw);
    if (data.n_cols() == 0) throw InputError("no usable columns after preprocessing");
    const PriorKnowledge restricted = prior ? prior->select(data.source_indices()) : PriorKnowledge::trivial(data.n_cols());
    const double prepare_time = seconds_since(start);

    DiscoverResult result = discover_prepared(data, restricted, options);
    result.timings.prepare = prepare_time;
    result.timings.total = seconds_since(start);
    return result;
}

}  // namespace tcam
