#include "tcam/pns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tcam {

std::size_t NeighborSets::total() const {
    std::size_t n = 0;
    for (const auto& c : candidates) n += c.size();
    return n;
}

std::vector<std::size_t> admissible_parents(const PriorKnowledge& prior, std::size_t target) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < prior.size(); ++k) {
        if (prior.tiers[k] <= prior.tiers[target] && !prior.forbidden(k, target)) out.push_back(k);
    }
    return out;
}

namespace {

NeighborSets fold_into_forbidden(const PriorKnowledge& prior, std::vector<std::vector<std::size_t>> candidates) {
    NeighborSets sets;
    sets.candidates = std::move(candidates);
    sets.forbidden = BoolMatrix(prior.size(), true);
    for (std::size_t l = 0; l < prior.size(); ++l) {
        for (auto k : sets.candidates[l]) sets.forbidden.set(k, l, false);
    }
    return sets;
}

}  // namespace

NeighborSets NeighborSets::unrestricted(const PriorKnowledge& prior) {
    std::vector<std::vector<std::size_t>> candidates;
    for (std::size_t l = 0; l < prior.size(); ++l) candidates.push_back(admissible_parents(prior, l));
    return fold_into_forbidden(prior, std::move(candidates));
}

NeighborSets select_neighbors(const Dataset& data, const PriorKnowledge& prior, const PnsConfig& config,
                              std::uint64_t seed, const Execution& exec) {
    const std::size_t p = data.n_cols();
    if (prior.size() != p) throw std::invalid_argument("pns: prior size does not match dataset");
    if (!prior.is_normalized()) throw std::invalid_argument("pns: prior must be normalized");

    std::vector<std::vector<std::size_t>> candidates(p);
    parallel_for(p, exec, [&](std::size_t l) {
        const auto admissible = admissible_parents(prior, l);
        if (admissible.empty()) return;

        Eigen::MatrixXd x(static_cast<Eigen::Index>(data.n_rows()), static_cast<Eigen::Index>(admissible.size()));
        for (std::size_t j = 0; j < admissible.size(); ++j) x.col(static_cast<Eigen::Index>(j)) = data.values.col(static_cast<Eigen::Index>(admissible[j]));
        const std::uint64_t target_seed = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(l) + 1));
        const LassoFit fit = fit_lasso_cv(data.column(l), x, config.folds, target_seed, config.lasso);

        std::vector<std::size_t> kept;
        for (std::size_t j = 0; j < admissible.size(); ++j) {
            if (std::abs(fit.coefficients[static_cast<Eigen::Index>(j)]) > config.coef_threshold) kept.push_back(j);
        }
        if (config.max_neighbors && kept.size() > *config.max_neighbors) {
            std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(fit.coefficients[static_cast<Eigen::Index>(a)]) > std::abs(fit.coefficients[static_cast<Eigen::Index>(b)]);
            });
            kept.resize(*config.max_neighbors);
        }
        for (auto j : kept) candidates[l].push_back(admissible[j]);
        std::sort(candidates[l].begin(), candidates[l].end());
    });
    return fold_into_forbidden(prior, std::move(candidates));
}

}  // namespace tcam
