#include <random>

#include <gtest/gtest.h>

#include "tcam/dataprep.hpp"
#include "tcam/pns.hpp"
#include "tcam/semgen.hpp"

using namespace tcam;

namespace {

Dataset sine_pair_with_noise_column(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), 3);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, 0) = dist(rng);
        m(i, 1) = std::sin(m(i, 0)) + 0.3 * dist(rng);
        m(i, 2) = dist(rng);
    }
    return standardize(Dataset::from_matrix(m, {"x1", "x2", "x3"}));
}

}  // namespace

TEST(Pns, SineParentIsSelectedAndNoiseIsNot) {
    const Dataset data = sine_pair_with_noise_column(2000, 1);
    PriorKnowledge prior = PriorKnowledge::trivial(3);
    // Target x2 may draw on x1 and x3 only.
    prior.forbidden.set(1, 0, true);
    prior.forbidden.set(1, 2, true);
    prior.normalize();
    const auto sets = select_neighbors(data, prior, PnsConfig{}, 7);
    EXPECT_EQ(sets.candidates[1], (std::vector<std::size_t>{0}));
}

TEST(Pns, EverythingForbiddenGivesEmptySets) {
    const Dataset data = sine_pair_with_noise_column(300, 2);
    PriorKnowledge prior = PriorKnowledge::trivial(3);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = 0; l < 3; ++l) prior.forbidden.set(k, l, true);
    }
    const auto sets = select_neighbors(data, prior, PnsConfig{}, 1);
    EXPECT_EQ(sets.total(), 0u);
}

TEST(Pns, RootTargetHasNoCandidates) {
    const Dataset data = sine_pair_with_noise_column(500, 3);
    PriorKnowledge prior = PriorKnowledge::trivial(3);
    prior.roots = {1};
    prior.normalize();
    const auto sets = select_neighbors(data, prior, PnsConfig{}, 1);
    EXPECT_TRUE(sets.candidates[1].empty());
}

TEST(PnsProperty, SubsetOfAdmissibleAndForbiddenElsewhere) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto spec = random_sem(7, 0.4, 3, seed);
        const Dataset data = prepare(sample(spec, 300, seed + 100));
        PriorKnowledge prior = PriorKnowledge::trivial(7);
        prior.tiers = *spec.tiers;
        prior.forbidden.set(0, 6, true);
        prior.normalize();
        const auto sets = select_neighbors(data, prior, PnsConfig{}, seed);
        for (std::size_t l = 0; l < 7; ++l) {
            const auto admissible = admissible_parents(prior, l);
            for (std::size_t k = 0; k < 7; ++k) {
                const bool in = std::binary_search(sets.candidates[l].begin(), sets.candidates[l].end(), k);
                if (in) {
                    EXPECT_TRUE(std::binary_search(admissible.begin(), admissible.end(), k));
                    EXPECT_LE(prior.tiers[k], prior.tiers[l]);
                    EXPECT_FALSE(prior.forbidden(k, l));
                }
                EXPECT_EQ(sets.forbidden(k, l), !in);
            }
        }
    }
}

TEST(PnsProperty, DeterministicAndMonotoneInThreshold) {
    const auto spec = random_sem(6, 0.5, 1, 4);
    const Dataset data = prepare(sample(spec, 400, 5));
    const auto prior = PriorKnowledge::trivial(6);
    PnsConfig strict;
    strict.coef_threshold = 0.1;
    PnsConfig loose;
    loose.coef_threshold = 0.01;
    const auto a = select_neighbors(data, prior, strict, 9);
    EXPECT_EQ(a.candidates, select_neighbors(data, prior, strict, 9).candidates);
    const auto b = select_neighbors(data, prior, loose, 9);
    for (std::size_t l = 0; l < 6; ++l) {
        for (auto k : a.candidates[l]) {
            EXPECT_TRUE(std::binary_search(b.candidates[l].begin(), b.candidates[l].end(), k));
        }
    }
}

TEST(Pns, MaxNeighborsCapsCandidateSets) {
    const auto spec = random_sem(8, 0.9, 1, 6);
    const Dataset data = prepare(sample(spec, 400, 7));
    PnsConfig config;
    config.max_neighbors = 2;
    const auto sets = select_neighbors(data, PriorKnowledge::trivial(8), config, 1);
    for (const auto& c : sets.candidates) EXPECT_LE(c.size(), 2u);
}

TEST(Pns, ThreadCountDoesNotChangeResult) {
    const auto spec = random_sem(8, 0.4, 2, 8);
    const Dataset data = prepare(sample(spec, 400, 9));
    PriorKnowledge prior = PriorKnowledge::trivial(8);
    prior.tiers = *spec.tiers;
    prior.normalize();
    const auto serial = select_neighbors(data, prior, PnsConfig{}, 3, Execution::serial());
    const auto parallel = select_neighbors(data, prior, PnsConfig{}, 3, Execution{4});
    EXPECT_EQ(serial.candidates, parallel.candidates);
    EXPECT_EQ(serial.forbidden, parallel.forbidden);
}
