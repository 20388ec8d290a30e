#include "tcam/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tcam/errors.hpp"

namespace tcam {

namespace {

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
}

Eigen::VectorXd rows_of(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[rows[i]];
    return out;
}

}  // namespace

LassoSolution lasso_fixed(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, double lambda,
                          const LassoConfig& config, const Eigen::VectorXd& warm_start) {
    const auto n = x.rows();
    const auto p = x.cols();
    if (y.size() != n) throw std::invalid_argument("lasso: response length does not match design");
    if (lambda < 0.0) throw std::invalid_argument("lasso: lambda must be nonnegative");

    const Eigen::RowVectorXd means = x.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - means;
    const double ybar = y.mean();
    const Eigen::VectorXd yc = (y.array() - ybar).matrix();
    const double nn = static_cast<double>(n);
    const Eigen::VectorXd scale = xc.colwise().squaredNorm().transpose() / nn;

    LassoSolution sol;
    sol.coefficients = warm_start.size() == p ? warm_start : Eigen::VectorXd::Zero(p);
    Eigen::VectorXd residual = yc - xc * sol.coefficients;

    for (sol.sweeps = 1; sol.sweeps <= config.max_sweeps; ++sol.sweeps) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double old = sol.coefficients[j];
            double updated = 0.0;
            if (scale[j] > 0.0) {
                const double z = xc.col(j).dot(residual) / nn + scale[j] * old;
                updated = soft_threshold(z, lambda) / scale[j];
            }
            if (updated != old) {
                residual -= (updated - old) * xc.col(j);
                sol.coefficients[j] = updated;
                max_change = std::max(max_change, std::abs(updated - old));
            }
        }
        if (max_change < config.tolerance) break;
    }
    sol.intercept = ybar - means.dot(sol.coefficients);
    return sol;
}

double lasso_lambda_max(const Eigen::VectorXd& y, const Eigen::MatrixXd& x) {
    if (x.cols() == 0) return 0.0;
    const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
    const Eigen::VectorXd yc = (y.array() - y.mean()).matrix();
    return (xc.transpose() * yc).cwiseAbs().maxCoeff() / static_cast<double>(x.rows());
}

std::vector<double> lasso_lambda_path(double lambda_max, const LassoConfig& config) {
    std::vector<double> path;
    const int m = std::max(config.path_length, 2);
    for (int i = 0; i < m; ++i) {
        path.push_back(lambda_max * std::pow(config.path_ratio, static_cast<double>(i) / (m - 1)));
    }
    return path;
}

std::vector<LassoSolution> lasso_path(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                      const std::vector<double>& lambdas, const LassoConfig& config) {
    std::vector<LassoSolution> out;
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(x.cols());
    for (double lambda : lambdas) {
        out.push_back(lasso_fixed(y, x, lambda, config, warm));
        warm = out.back().coefficients;
    }
    return out;
}

LassoFit fit_lasso_cv(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int k_folds, std::uint64_t seed,
                      const LassoConfig& config) {
    const auto n = x.rows();
    if (k_folds < 2 || n < k_folds) throw std::invalid_argument("lasso cv: need N >= folds >= 2");
    if (y.size() != n) throw std::invalid_argument("lasso cv: response length does not match design");

    LassoFit fit;
    const double lambda_max = lasso_lambda_max(y, x);
    if (!(lambda_max > 0.0)) {
        // No predictor is correlated with y: the whole path is the null model.
        fit.coefficients = Eigen::VectorXd::Zero(x.cols());
        fit.intercept = y.mean();
        if ((y.array() == y[0]).all()) throw DegenerateFoldError("lasso cv: response is constant");
        fit.lambda_min = fit.lambda_1se = std::numeric_limits<double>::min();
        return fit;
    }
    fit.lambdas = lasso_lambda_path(lambda_max, config);
    const std::size_t m = fit.lambdas.size();

    // Fold assignment: seeded shuffle, then round-robin.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> fold_of(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i) fold_of[static_cast<std::size_t>(order[i])] = static_cast<int>(i % k_folds);

    std::vector<std::vector<double>> errors(m, std::vector<double>(static_cast<std::size_t>(k_folds)));
    for (int fold = 0; fold < k_folds; ++fold) {
        std::vector<Eigen::Index> train, test;
        for (Eigen::Index i = 0; i < n; ++i) (fold_of[static_cast<std::size_t>(i)] == fold ? test : train).push_back(i);
        const Eigen::MatrixXd x_train = rows_of(x, train);
        const Eigen::VectorXd y_train = rows_of(y, train);
        if ((y_train.array() == y_train[0]).all()) {
            throw DegenerateFoldError("lasso cv: fold " + std::to_string(fold) + " has constant response");
        }
        const Eigen::MatrixXd x_test = rows_of(x, test);
        const Eigen::VectorXd y_test = rows_of(y, test);
        const auto path = lasso_path(y_train, x_train, fit.lambdas, config);
        for (std::size_t i = 0; i < m; ++i) {
            const Eigen::VectorXd pred = (x_test * path[i].coefficients).array() + path[i].intercept;
            errors[i][static_cast<std::size_t>(fold)] = (y_test - pred).squaredNorm() / static_cast<double>(test.size());
        }
    }

    fit.cv_mean.resize(m);
    fit.cv_sd.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& e = errors[i];
        const double mean = std::accumulate(e.begin(), e.end(), 0.0) / k_folds;
        double ss = 0.0;
        for (double v : e) ss += (v - mean) * (v - mean);
        fit.cv_mean[i] = mean;
        fit.cv_sd[i] = std::sqrt(ss / (k_folds - 1)) / std::sqrt(static_cast<double>(k_folds));
    }
    const auto best = static_cast<std::size_t>(std::min_element(fit.cv_mean.begin(), fit.cv_mean.end()) - fit.cv_mean.begin());
    fit.lambda_min = fit.lambdas[best];
    const double bound = fit.cv_mean[best] + fit.cv_sd[best];
    std::size_t chosen = best;
    for (std::size_t i = 0; i <= best; ++i) {
        if (fit.cv_mean[i] <= bound) {
            chosen = i;
            break;
        }
    }
    fit.lambda_1se = fit.lambdas[chosen];

    std::vector<double> full_path(fit.lambdas.begin(), fit.lambdas.begin() + static_cast<std::ptrdiff_t>(chosen) + 1);
    const auto solutions = lasso_path(y, x, full_path, config);
    fit.coefficients = solutions.back().coefficients;
    fit.intercept = solutions.back().intercept;
    return fit;
}

}  // namespace tcam
