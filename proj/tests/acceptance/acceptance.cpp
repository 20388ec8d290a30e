// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles/oracles.hpp"
#include "tcam/discover.hpp"
#include "tcam/lasso.hpp"
#include "tcam/metrics.hpp"
#include "tcam/results.hpp"
#include "tcam/semgen.hpp"

using namespace tcam;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::size_t total_violations = 0;

// Edges of `dag` that contradict the (un-normalized) prior.
std::size_t violations(const Dag& dag, const PriorKnowledge& raw) {
    std::size_t count = 0;
    for (const auto& [k, l] : dag.edges()) {
        if (raw.forbidden(k, l) || raw.tiers[k] > raw.tiers[l] || raw.is_root(l)) ++count;
    }
    return count;
}

PriorKnowledge tier_prior(const std::vector<int>& tiers) {
    PriorKnowledge prior = PriorKnowledge::trivial(tiers.size());
    prior.tiers = tiers;
    prior.normalize();
    return prior;
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c, d);
    return buf;
}

// 1: greedy final score against the exhaustive permutation minimum.
Outcome exhaustive_oracle() {
    const auto start = Clock::now();
    int within = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t p = seed % 2 == 0 ? 3 : 4;
        const auto spec = random_sem(p, 0.6, 1, 1000 + seed);
        const Dataset data = prepare(sample(spec, 1000, 2000 + seed));
        const auto prior = PriorKnowledge::trivial(p);
        const RegressionContext ctx(data, DiscoverOptions::default_smoother());
        const auto result = greedy_order(ctx, NeighborSets::unrestricted(prior), prior, SearchMode::Cam);
        total_violations += violations(result.dag_no, prior);
        const double best = oracle::exhaustive_min_order_score(data.values);
        const double ratio = result.final_score / best;
        worst = std::max(worst, ratio);
        if (ratio <= 1.05) ++within;
    }
    const double elapsed = seconds_since(start);
    return {within == 50 && elapsed < 300.0,
            fmt("%.0f/50 within 5%% of exhaustive minimum, worst ratio %.4f, %.1f s", within, worst, elapsed)};
}

// Chain or fork over a tier-consistent random order of 6 nodes (3 per tier).
SemSpec chain_or_fork(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> first{0, 1, 2}, second{3, 4, 5};
    std::shuffle(first.begin(), first.end(), rng);
    std::shuffle(second.begin(), second.end(), rng);
    std::vector<std::size_t> pi = first;
    pi.insert(pi.end(), second.begin(), second.end());
    std::vector<Edge> edges;
    if (seed % 2 == 0) {
        for (std::size_t i = 0; i + 1 < 6; ++i) edges.emplace_back(pi[i], pi[i + 1]);
    } else {
        edges = {{pi[0], pi[1]}, {pi[0], pi[2]}, {pi[1], pi[3]}, {pi[1], pi[4]}, {pi[2], pi[5]}};
    }
    SemOptions options;
    options.noise_sd_min = options.noise_sd_max = 0.3;
    return sem_from_dag(Dag::from_edges(6, edges), std::vector<int>{1, 1, 1, 2, 2, 2}, seed, options);
}

// 2: full TCAM pipeline recovers chains and forks.
Outcome recovery() {
    const auto start = Clock::now();
    int good = 0;
    std::ostringstream shds;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto spec = chain_or_fork(300 + seed);
        const Dataset raw = sample(spec, 1000, 400 + seed);
        const auto prior = tier_prior(*spec.tiers);
        DiscoverOptions options;
        options.seed = seed;
        const auto result = discover(raw, prior, options);
        total_violations += violations(result.pruned.dag, prior);
        const auto d = shd(result.pruned.dag, spec.dag);
        shds << d << (seed + 1 < 20 ? "," : "");
        if (d <= 1) ++good;
    }
    const double elapsed = seconds_since(start);
    return {good >= 16 && elapsed < 600.0,
            fmt("%.0f/20 runs with SHD <= 1 (need 16), %.1f s", good, elapsed) + ", SHD per seed [" + shds.str() + "]"};
}

// 3: TCAM improves on CAM for tiered SEMs.
Outcome tcam_vs_cam() {
    double ashd_cam = 0, ashd_tcam = 0, it_cam = 0, it_tcam = 0, t_cam = 0, t_tcam = 0;
    const int runs = 20;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        const auto spec = random_sem(10, 0.3, 3, 500 + seed);
        const Dataset raw = sample(spec, 500, 600 + seed);
        const auto prior = tier_prior(*spec.tiers);
        ExpertGraph expert;
        expert.node_count = 10;
        expert.sure = spec.dag.edge_set();
        for (auto mode : {SearchMode::Cam, SearchMode::Tcam}) {
            DiscoverOptions options;
            options.mode = mode;
            options.seed = seed;
            const auto start = Clock::now();
            const auto result = discover(raw, prior, options);
            const double elapsed = seconds_since(start);
            total_violations += violations(result.pruned.dag, result.prior);
            if (mode == SearchMode::Tcam) total_violations += violations(result.pruned.dag, prior);
            const double a = static_cast<double>(ashd(result.pruned.dag, expert));
            const double it = static_cast<double>(result.ordering.iterations());
            (mode == SearchMode::Cam ? ashd_cam : ashd_tcam) += a / runs;
            (mode == SearchMode::Cam ? it_cam : it_tcam) += it / runs;
            (mode == SearchMode::Cam ? t_cam : t_tcam) += elapsed / runs;
        }
    }
    return {ashd_tcam < ashd_cam && it_tcam < it_cam,
            fmt("mean aSHD CAM %.2f vs TCAM %.2f; mean iterations CAM %.2f vs TCAM %.2f", ashd_cam, ashd_tcam, it_cam,
                it_tcam) +
                fmt("; mean time CAM %.3f s vs TCAM %.3f s", t_cam, t_tcam)};
}

// 4 is tallied while 1-3 run.
Outcome constraints() {
    return {total_violations == 0, fmt("%.0f constraint-violating edges across criteria 1-3", total_violations)};
}

// 5: numerical sub-oracles.
Outcome sub_oracles() {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> dist;

    double lasso_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd m(300, 5);
        for (auto& v : m.reshaped()) v = dist(rng);
        m.rowwise() -= m.colwise().mean();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        const Eigen::MatrixXd x = Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(300, 5)) * std::sqrt(300.0);
        Eigen::VectorXd y = x * Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
        for (auto& v : y) v += 0.5 * dist(rng);
        y.array() -= y.mean();
        for (double lambda : {0.05, 0.2, 0.6}) {
            const auto ours = lasso_fixed(y, x, lambda).coefficients;
            lasso_err = std::max(lasso_err, (ours - oracle::soft_threshold_lasso(y, x, lambda)).cwiseAbs().maxCoeff());
        }
    }

    double backfit_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x(500), y(500);
        for (Eigen::Index i = 0; i < 500; ++i) {
            x[i] = dist(rng);
            y[i] = std::tanh(1.5 * x[i]) + 0.3 * dist(rng);
        }
        const auto fit = fit_additive(y, std::vector<Eigen::VectorXd>{x}, SmootherConfig{});
        const auto& term = fit.terms.front();
        const Eigen::VectorXd direct =
            oracle::constrained_penalized_fit(y, oracle::cox_de_boor(x, term.knots, 10), term.penalty_weight);
        backfit_err = std::max(backfit_err, (fit.fitted - direct).cwiseAbs().maxCoeff());
    }

    double score_err = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t p = 3 + seed;
        const Dataset data = prepare(sample(random_sem(p, 0.3, 1, seed), 400, seed));
        const RegressionContext ctx(data, DiscoverOptions::default_smoother());
        const auto prior = PriorKnowledge::trivial(p);
        const auto [dag, m] = init_search(ctx, NeighborSets::unrestricted(prior), prior.tiers, OrderingConfig{});
        score_err = std::max(score_err, std::abs(m.total_rss() - static_cast<double>(p)));
    }
    return {lasso_err < 1e-6 && backfit_err < 1e-6 && score_err < 1e-8,
            fmt("LASSO vs soft-threshold %.2e, backfit vs penalized LS %.2e, empty-graph score - p %.2e", lasso_err,
                backfit_err, score_err)};
}

// 6: F-test calibration under the null.
Outcome calibration() {
    int rejections = 0;
    for (int seed = 0; seed < 200; ++seed) {
        std::mt19937_64 rng(90000 + seed);
        std::normal_distribution<double> dist;
        Eigen::VectorXd x1(1000), x2(1000), y(1000);
        for (Eigen::Index i = 0; i < 1000; ++i) {
            x1[i] = dist(rng);
            x2[i] = dist(rng);
            y[i] = std::sin(x1[i]) + 0.5 * dist(rng);
        }
        const std::vector<Eigen::VectorXd> xs{x1, x2};
        const auto fit = fit_additive(y, xs, SmootherConfig{});
        if (term_pvalue(fit, y, xs, 1, SmootherConfig{}) < 0.05) ++rejections;
    }
    const double rate = rejections / 200.0;
    return {rate >= 0.02 && rate <= 0.10, fmt("null rejection rate %.3f at alpha 0.05 (band [0.02, 0.10])", rate)};
}

// 7: hand-computed metric values.
Outcome metric_suite() {
    struct Case {
        std::size_t p;
        EdgeSet est, sure, possible;
        std::size_t ashd, shd;
    };
    enum { a, b, c, d, e };
    const std::vector<Case> cases = {
        {3, {}, {}, {}, 0, 0},
        {3, {{a, b}, {b, c}}, {{a, b}, {b, c}}, {}, 0, 0},
        {3, {{b, c}, {c, a}}, {{a, b}}, {{b, c}}, 2, 3},
        {2, {{b, a}}, {{a, b}}, {}, 2, 1},
        {3, {}, {{a, b}, {a, c}, {b, c}}, {}, 3, 3},
        {3, {{a, b}, {a, c}, {b, c}}, {}, {}, 3, 3},
        {4, {{a, b}, {c, d}, {a, d}}, {{a, b}}, {{c, d}}, 1, 2},
        {4, {{a, b}, {b, c}, {c, d}}, {{a, b}, {b, c}, {c, d}}, {{a, c}, {b, d}}, 0, 0},
        {4, {{b, a}, {c, b}, {a, d}}, {{a, b}, {b, c}}, {{a, d}}, 4, 3},
        {5, {{a, b}, {a, c}, {d, e}, {e, c}}, {{a, b}, {d, e}, {c, e}}, {{a, c}, {b, d}}, 2, 2},
    };
    int exact = 0;
    for (const auto& k : cases) {
        ExpertGraph g;
        g.node_count = k.p;
        g.sure = k.sure;
        g.possible = k.possible;
        const bool ok = ashd(k.est, k.p, g) == k.ashd && shd(k.est, k.sure) == k.shd &&
                        shd(Dag::from_edges(k.p, {k.est.begin(), k.est.end()}),
                            Dag::from_edges(k.p, {k.sure.begin(), k.sure.end()})) == k.shd;
        exact += ok;
    }
    return {exact == 10, fmt("%.0f/10 toy pairs match hand-computed aSHD and SHD", exact)};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// 8: byte-identical discover output through the installed binary.
Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "tcam_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = TCAM_CLI_PATH;
    auto sh = [&](const std::string& args) {
        const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const std::string prefix = (dir / "data").string();
    if (sh("--seed 11 simulate --p 10 --tiers 3 --n 500 --out \"" + prefix + "\"") != 0) {
        return {false, "simulate failed"};
    }
    bool same = true;
    std::string by_thread[2];
    int slot = 0;
    for (int threads : {1, 4}) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = dir / ("r" + std::to_string(threads) + "_" + std::to_string(rep) + ".json");
            if (sh("--seed 7 --threads " + std::to_string(threads) + " discover \"" + prefix + ".csv\" --prior \"" +
                   prefix + ".prior.json\" --out \"" + out.string() + "\"") != 0) {
                return {false, "discover failed"};
            }
            outputs[rep] = slurp(out);
        }
        same = same && !outputs[0].empty() && outputs[0] == outputs[1];
        by_thread[slot++] = outputs[0];
    }
    const bool across = by_thread[0] == by_thread[1];
    fs::remove_all(dir);
    return {same, std::string("repeat runs byte-identical for --threads 1 and 4") +
                      (across ? "; also identical across thread counts" : "; differs across thread counts")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 exhaustive-oracle equivalence", exhaustive_oracle},
        {"2 chain/fork recovery", recovery},
        {"3 TCAM vs CAM on tiered SEMs", tcam_vs_cam},
        {"4 constraint satisfaction", constraints},
        {"5 numerical sub-oracles", sub_oracles},
        {"6 p-value calibration", calibration},
        {"7 metric correctness", metric_suite},
        {"8 determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failures += !outcome.pass;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << name << ": " << outcome.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
