#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace tcam {

struct LassoConfig {
    int path_length = 50;
    // Smallest lambda on the path as a fraction of lambda_max (two decades).
    double path_ratio = 0.01;
    double tolerance = 1e-8;
    int max_sweeps = 100000;
};

struct LassoSolution {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    int sweeps = 0;
};

// Minimizes (1/2N) ||y - b0 - X beta||^2 + lambda ||beta||_1 by cyclic
// coordinate descent. Columns are centered internally; the intercept absorbs
// the means. `warm_start`, when non-empty, seeds the coefficients.
LassoSolution lasso_fixed(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, double lambda,
                          const LassoConfig& config = {}, const Eigen::VectorXd& warm_start = {});

// Smallest lambda at which every coefficient is zero: max_j |x_j'(y - ybar)| / N.
double lasso_lambda_max(const Eigen::VectorXd& y, const Eigen::MatrixXd& x);

// Geometric grid from lambda_max down to path_ratio * lambda_max.
std::vector<double> lasso_lambda_path(double lambda_max, const LassoConfig& config);

// Solutions along a decreasing lambda path with warm starts.
std::vector<LassoSolution> lasso_path(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                      const std::vector<double>& lambdas, const LassoConfig& config = {});

struct LassoFit {
    Eigen::VectorXd coefficients;  // at lambda_1se
    double intercept = 0.0;
    double lambda_min = 0.0;
    double lambda_1se = 0.0;
    std::vector<double> lambdas;
    std::vector<double> cv_mean;
    // Standard error of the fold errors (sd / sqrt(folds)).
    std::vector<double> cv_sd;
};

// K-fold cross-validated LASSO with seeded fold assignment. Picks the largest
// lambda whose mean CV error is within one standard error of the minimum.
LassoFit fit_lasso_cv(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int k_folds, std::uint64_t seed,
                      const LassoConfig& config = {});

}  // namespace tcam
