#include "tcam/semgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tcam {

double EdgeFunction::operator()(double x) const {
    switch (kind) {
        case FunctionKind::Sine:
            return amplitude * std::sin(frequency * x);
        case FunctionKind::Tanh:
            return amplitude * std::tanh(frequency * x);
        case FunctionKind::GaussianBump:
            return amplitude * x * std::exp(-0.5 * x * x);
    }
    return 0.0;
}

std::string to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::Sine: return "sin";
        case FunctionKind::Tanh: return "tanh";
        case FunctionKind::GaussianBump: return "x_exp";
    }
    return "unknown";
}

std::vector<std::string> SemSpec::column_names() const {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < size(); ++j) names.push_back("X" + std::to_string(j + 1));
    return names;
}

SemSpec sem_from_dag(const Dag& dag, std::optional<std::vector<int>> tiers, std::uint64_t seed,
                     const SemOptions& options) {
    if (tiers && tiers->size() != dag.size()) throw std::invalid_argument("tier map size does not match graph");
    if (tiers) {
        for (const auto& [k, l] : dag.edges()) {
            if ((*tiers)[k] > (*tiers)[l]) throw std::invalid_argument("graph edge points to an earlier tier");
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amplitude(0.8, 1.5);
    std::uniform_real_distribution<double> frequency(0.8, 2.0);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_real_distribution<double> noise(options.noise_sd_min, options.noise_sd_max);

    SemSpec spec;
    spec.dag = dag;
    spec.tiers = std::move(tiers);
    for (const auto& edge : dag.edges()) {
        EdgeFunction f;
        f.kind = static_cast<FunctionKind>(kind(rng));
        f.amplitude = amplitude(rng);
        f.frequency = frequency(rng);
        spec.functions.emplace(edge, f);
    }
    for (std::size_t l = 0; l < dag.size(); ++l) spec.noise_sd.push_back(noise(rng));
    spec.intercepts.assign(dag.size(), 0.0);
    return spec;
}

SemSpec random_sem(std::size_t p, double edge_prob, int tier_count, std::uint64_t seed, const SemOptions& options) {
    if (p < 1) throw std::invalid_argument("random_sem: p must be at least 1");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("random_sem: edge_prob must lie in [0, 1]");
    if (tier_count < 1) throw std::invalid_argument("random_sem: tier_count must be at least 1");

    std::mt19937_64 rng(seed);
    std::vector<int> tiers(p);
    for (std::size_t j = 0; j < p; ++j) {
        tiers[j] = static_cast<int>(j * static_cast<std::size_t>(tier_count) / p) + 1;
    }

    // Causal order: tiers in sequence, shuffled within each tier.
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t begin = 0; begin < p;) {
        std::size_t end = begin;
        while (end < p && tiers[end] == tiers[begin]) ++end;
        std::shuffle(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end), rng);
        begin = end;
    }

    std::bernoulli_distribution coin(edge_prob);
    Dag dag(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            if (coin(rng)) dag.add_edge(order[i], order[j]);
        }
    }
    std::optional<std::vector<int>> tier_map;
    if (tier_count > 1) tier_map = tiers;
    return sem_from_dag(dag, std::move(tier_map), rng(), options);
}

Dataset sample(const SemSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be at least 1");
    const std::size_t p = spec.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Noise is drawn column by column in index order so the draws do not
    // depend on the traversal order.
    Eigen::MatrixXd noise(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t l = 0; l < p; ++l) {
        for (std::size_t i = 0; i < n; ++i) noise(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = gauss(rng);
    }

    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    const Ordering order = topological_order(spec.dag);
    for (auto l : order.sequence()) {
        const auto col = static_cast<Eigen::Index>(l);
        Eigen::VectorXd x = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), spec.intercepts[l]);
        for (auto k : spec.dag.parents(l)) {
            const auto& f = spec.functions.at({k, l});
            Eigen::VectorXd contribution = values.col(static_cast<Eigen::Index>(k)).unaryExpr([&f](double v) { return f(v); });
            contribution.array() -= contribution.mean();
            x += contribution;
        }
        x += spec.noise_sd[l] * noise.col(col);
        values.col(col) = x;
    }
    return Dataset::from_matrix(std::move(values), spec.column_names());
}

}  // namespace tcam
