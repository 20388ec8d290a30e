#pragma once

#include <cstddef>
#include <map>

#include "tcam/graph.hpp"
#include "tcam/parallel.hpp"
#include "tcam/regression.hpp"

namespace tcam {

struct PruneConfig {
    double alpha = 1e-3;
    // Nodes with more parents are reduced by backward elimination first.
    std::size_t max_parents = 20;
};

struct PruneResult {
    Dag dag;
    // p-value of every edge of the input graph. Edges removed by backward
    // elimination carry the p-value they had when dropped.
    std::map<Edge, double> p_values;
};

// Keeps edge (k, l) iff the F-test p-value of k's term in the additive fit of
// l on all its parents in dag_no is below alpha.
PruneResult prune(const RegressionContext& ctx, const Dag& dag_no, const PruneConfig& config = {},
                  const Execution& exec = {});

}  // namespace tcam
