#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace tcam {

struct SmootherConfig {
    // Cubic B-spline basis functions per term before the centering constraint.
    int basis_size = 10;
    // Penalty candidates for GCV, as multiples of trace(B'B) / trace(penalty).
    std::vector<double> gcv_grid = default_gcv_grid();
    // GCV charges gcv_gamma per effective degree of freedom; values above 1
    // counter its tendency to undersmooth pure noise.
    double gcv_gamma = 1.4;
    // Convergence threshold on the largest change of any fitted value.
    double backfit_tol = 1e-6;
    int backfit_max_iter = 50;
    // Predictors with fewer distinct values than basis_size enter as a
    // linear term instead of raising SingularBasisError.
    bool linear_fallback = false;

    static std::vector<double> default_gcv_grid();
};

// Evaluates the cubic B-spline basis on a clamped knot vector.
// Knots has basis_size + 4 entries; returns an N x basis_size matrix.
Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& x, const std::vector<double>& knots, int basis_size);

// Clamped cubic knot vector with interior knots at quantiles of x.
std::vector<double> quantile_knots(const Eigen::VectorXd& x, int basis_size);

// Model matrix and penalty of one smooth term, reparametrized so that every
// function in its span has zero empirical mean on the training data.
struct TermDesign {
    std::size_t index = 0;
    bool linear = false;
    std::vector<double> knots;
    Eigen::MatrixXd model;    // N x m
    Eigen::MatrixXd penalty;  // m x m, second-difference penalty
    Eigen::MatrixXd gram;     // model' model

    static TermDesign build(const Eigen::VectorXd& x, std::size_t index, const SmootherConfig& config);

    std::size_t rows() const { return static_cast<std::size_t>(model.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(model.cols()); }
};

// Penalty weight minimizing the generalized cross-validation score of the
// single-term smooth of y (centered) on this design.
double select_penalty_gcv(const TermDesign& design, const Eigen::VectorXd& y, const SmootherConfig& config);

struct SmoothTerm {
    std::size_t predictor_index = 0;
    bool linear = false;
    std::vector<double> knots;
    double penalty_weight = 0.0;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd fitted;
    // Trace of this term's smoother matrix S.
    double effective_dof = 0.0;
    // tr(2S - SS'), the degrees of freedom used by term_pvalue.
    double test_dof = 0.0;
};

struct AdditiveFit {
    double intercept = 0.0;
    std::vector<SmoothTerm> terms;
    Eigen::VectorXd fitted;
    // (1/N) * sum of squared residuals.
    double rss_mean = 0.0;
    bool converged = true;
    int iterations = 0;

    std::size_t n() const { return static_cast<std::size_t>(fitted.size()); }
    double total_dof() const;
    double total_test_dof() const;
    std::vector<double> effective_dof() const;
};

// Backfitting over prebuilt designs. Term order in the result follows the
// order of `designs`; with an empty list the fit is the mean of y.
AdditiveFit fit_additive(const Eigen::VectorXd& y, const std::vector<const TermDesign*>& designs,
                         const SmootherConfig& config);

// Convenience overload: builds the designs, predictor_index = list position.
AdditiveFit fit_additive(const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& predictors,
                         const SmootherConfig& config);

// F-test of one term: compares the full fit against the refit without it.
// Numerator df is the term's tr(2S - SS'); denominator df is N - 1 minus the
// sum of those over all terms. With tr(S) alone the test over-rejects once
// the penalty has been chosen by GCV.
double term_pvalue(const AdditiveFit& full, const Eigen::VectorXd& y,
                   const std::vector<const TermDesign*>& designs, std::size_t term,
                   const SmootherConfig& config);
double term_pvalue(const AdditiveFit& full, const Eigen::VectorXd& y,
                   const std::vector<Eigen::VectorXd>& predictors, std::size_t term,
                   const SmootherConfig& config);

// p-value of the F statistic from residual sums of squares (not means).
double f_test_pvalue(double rss_reduced, double rss_full, double df_term, double df_residual);

}  // namespace tcam
