#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcam/dataprep.hpp"
#include "tcam/graph.hpp"

namespace tcam {

// Closed-form nonlinear edge functions.
enum class FunctionKind { Sine, Tanh, GaussianBump };

struct EdgeFunction {
    FunctionKind kind = FunctionKind::Sine;
    double amplitude = 1.0;  // a
    double frequency = 1.0;  // b, unused by GaussianBump

    // a*sin(b*x), a*tanh(b*x) or a*x*exp(-x^2/2).
    double operator()(double x) const;
};

std::string to_string(FunctionKind kind);

// Ground-truth additive structural equation model.
struct SemSpec {
    Dag dag;
    std::map<Edge, EdgeFunction> functions;
    std::vector<double> noise_sd;
    std::vector<double> intercepts;
    std::optional<std::vector<int>> tiers;

    std::size_t size() const { return dag.size(); }
    std::vector<std::string> column_names() const;
};

struct SemOptions {
    // Noise scale of every node, sources included, drawn uniformly from this range.
    double noise_sd_min = 0.2;
    double noise_sd_max = 0.5;
};

// Random SEM: nodes split evenly into contiguous tiers, a random causal order
// within each tier, and each order-respecting pair joined with probability
// edge_prob. tier_count == 1 leaves the tier map empty.
SemSpec random_sem(std::size_t p, double edge_prob, int tier_count, std::uint64_t seed,
                   const SemOptions& options = {});

// Draws edge functions and noise levels for a fixed graph.
SemSpec sem_from_dag(const Dag& dag, std::optional<std::vector<int>> tiers, std::uint64_t seed,
                     const SemOptions& options = {});

// Ancestral sampling. Each edge function is centered by its empirical mean
// over the sampled parent values; columns are not standardized.
Dataset sample(const SemSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace tcam
