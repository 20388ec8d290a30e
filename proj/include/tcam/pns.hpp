#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tcam/dataprep.hpp"
#include "tcam/graph.hpp"
#include "tcam/lasso.hpp"
#include "tcam/parallel.hpp"

namespace tcam {

struct PnsConfig {
    // Keep a candidate if |coefficient at lambda_1se| exceeds this.
    double coef_threshold = 1e-2;
    int folds = 10;
    // Keep at most this many candidates per target (largest |coefficient|).
    std::optional<std::size_t> max_neighbors;
    LassoConfig lasso;
};

// Candidate parent sets P_l and the forbidden matrix with every
// non-candidate pair folded in.
struct NeighborSets {
    std::vector<std::vector<std::size_t>> candidates;  // sorted ascending
    BoolMatrix forbidden;

    std::size_t size() const { return candidates.size(); }
    bool contains(std::size_t k, std::size_t l) const { return !forbidden(k, l); }
    std::size_t total() const;

    // No screening: every pair the prior allows is a candidate.
    static NeighborSets unrestricted(const PriorKnowledge& prior);
};

// Admissible parents of target l under the prior: t(k) <= t(l), not forbidden.
std::vector<std::size_t> admissible_parents(const PriorKnowledge& prior, std::size_t target);

// Per-target LASSO screen over the admissible parents. `data` must be
// standardized and `prior` normalized. Each target uses its own seed derived
// from `seed`, so results are independent of the execution order.
NeighborSets select_neighbors(const Dataset& data, const PriorKnowledge& prior, const PnsConfig& config,
                              std::uint64_t seed, const Execution& exec = {});

}  // namespace tcam
