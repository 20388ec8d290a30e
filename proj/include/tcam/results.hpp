#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcam/discover.hpp"
#include "tcam/semgen.hpp"

namespace tcam {

inline constexpr const char* kResultsVersion = "1.0";

struct DiscoverSettings {
    std::uint64_t seed = 0;
    double prune_alpha = 1e-3;
    double pns_threshold = 1e-2;
};

// Results document. Timings are wall-clock and therefore only written when
// requested; without them the output is byte-identical across runs.
nlohmann::ordered_json results_to_json(const DiscoverResult& result, const DiscoverSettings& settings,
                                       bool include_timings);

// Structural check against the published schema; returns the problems found.
std::vector<std::string> validate_results(const nlohmann::json& doc);

struct ResultEdge {
    std::string source;
    std::string target;
    std::optional<double> gain;
    double p_value = 0.0;
};

// The parts of a results document that evaluate and export-dot consume.
struct ResultsDocument {
    std::vector<std::string> columns;
    std::vector<int> tiers;
    std::vector<ResultEdge> edges;
    std::optional<double> total_time;
    std::size_t iterations = 0;

    EdgeSet edge_set() const;
};

// Throws InputError on malformed documents.
ResultsDocument parse_results(const std::string& text);

// Ground-truth sidecar written by `simulate`:
//   {"columns": [...], "edges": [[s, t], ...], "tiers": {name: int}}
// "tiers" is omitted for single-tier models.
nlohmann::ordered_json truth_to_json(const SemSpec& spec);

struct TruthDocument {
    std::vector<std::string> columns;
    EdgeSet edges;
    std::optional<std::vector<int>> tiers;
};

TruthDocument parse_truth(const std::string& text);

// Graphviz source. Nodes are filled by tier, edges take their source node's
// colour.
std::string to_dot(const ResultsDocument& doc);

std::string read_text_file(const std::string& path);

}  // namespace tcam
