#pragma once

#include <cstdint>
#include <optional>

#include "tcam/dataprep.hpp"
#include "tcam/graph.hpp"
#include "tcam/ordering.hpp"
#include "tcam/parallel.hpp"
#include "tcam/pns.hpp"
#include "tcam/pruning.hpp"
#include "tcam/smoothers.hpp"

namespace tcam {

struct DiscoverOptions {
    // Empty: TCAM when the prior carries information, CAM otherwise.
    std::optional<SearchMode> mode;
    SmootherConfig smoother = default_smoother();
    bool use_pns = true;
    PnsConfig pns;
    OrderingConfig ordering;
    PruneConfig prune;
    std::uint64_t seed = 0;
    Execution exec;

    // Low-cardinality columns (station ids, flags) enter as linear terms.
    static SmootherConfig default_smoother() {
        SmootherConfig config;
        config.linear_fallback = true;
        return config;
    }
};

struct Timings {
    double prepare = 0.0;
    double pns = 0.0;
    double ordering = 0.0;
    double pruning = 0.0;
    double total = 0.0;
};

struct DiscoverResult {
    Dataset data;  // after preprocessing
    PriorKnowledge prior;
    SearchMode mode = SearchMode::Cam;
    NeighborSets neighbors;
    OrderingResult ordering;
    PruneResult pruned;
    Timings timings;
};

SearchMode resolve_mode(const PriorKnowledge& prior, const std::optional<SearchMode>& requested);

// Full pipeline on raw data: impute, drop constants, standardize, PNS,
// greedy ordering, pruning. `prior` is indexed by the raw columns; absent
// means no background knowledge.
DiscoverResult discover(const Dataset& raw, const std::optional<PriorKnowledge>& prior, const DiscoverOptions& options);

// Same, for data that is already standardized and a prior over its columns.
DiscoverResult discover_prepared(const Dataset& data, const PriorKnowledge& prior, const DiscoverOptions& options);

}  // namespace tcam
