#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tcam/graph.hpp"

namespace tcam {

// Partially known reference graph: sure edges must be present, possible
// edges may be present, anything else is known to be absent.
struct ExpertGraph {
    std::size_t node_count = 0;
    EdgeSet sure;
    EdgeSet possible;

    // Throws InputError if the sets overlap or an index is out of range.
    void validate() const;
};

// Missing sure edges plus estimated edges outside sure and possible.
// A sure edge estimated with reversed orientation counts twice.
std::size_t ashd(const Dag& estimated, const ExpertGraph& expert);
std::size_t ashd(const EdgeSet& estimated, std::size_t node_count, const ExpertGraph& expert);

// Structural Hamming distance: one unit per node pair whose connection
// differs (missing, extra or reversed edge).
std::size_t shd(const Dag& a, const Dag& b);
std::size_t shd(const EdgeSet& a, const EdgeSet& b);

struct EdgeCounts {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;

    // 1 when nothing was estimated / nothing was there to find.
    double precision() const;
    double recall() const;
};

EdgeCounts compare_edges(const EdgeSet& estimated, const EdgeSet& truth);

// Loads {"sure": [[s, t], ...], "possible": [[s, t], ...]} against column names.
ExpertGraph load_expert_json(const std::string& text, const std::vector<std::string>& columns);

}  // namespace tcam
