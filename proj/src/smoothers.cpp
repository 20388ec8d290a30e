#include "tcam/smoothers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/fisher_f.hpp>

#include "tcam/errors.hpp"

namespace tcam {

namespace {

constexpr int kDegree = 3;

std::vector<double> sorted_values(const Eigen::VectorXd& x) {
    std::vector<double> v(x.data(), x.data() + x.size());
    std::sort(v.begin(), v.end());
    return v;
}

// Type-7 quantile of sorted data.
double quantile(const std::vector<double>& sorted, double prob) {
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> interior_quantiles(const std::vector<double>& sorted, int count) {
    std::vector<double> out;
    for (int i = 1; i <= count; ++i) out.push_back(quantile(sorted, static_cast<double>(i) / (count + 1)));
    return out;
}

bool strictly_inside(const std::vector<double>& interior, double lo, double hi) {
    double prev = lo;
    for (double v : interior) {
        if (!(v > prev)) return false;
        prev = v;
    }
    return prev < hi;
}

Eigen::MatrixXd second_difference_penalty(int k) {
    Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(k - 2, k);
    for (int i = 0; i < k - 2; ++i) {
        diff(i, i) = 1.0;
        diff(i, i + 1) = -2.0;
        diff(i, i + 2) = 1.0;
    }
    return diff.transpose() * diff;
}

// Per-term solver state for one backfitting run.
struct TermSolver {
    const TermDesign* design = nullptr;
    double lambda = 0.0;
    Eigen::LDLT<Eigen::MatrixXd> system;
    double edf = 0.0;
    double test_dof = 0.0;
};

TermSolver make_solver(const TermDesign& design, double lambda) {
    TermSolver solver;
    solver.design = &design;
    solver.lambda = lambda;
    const Eigen::MatrixXd lhs = design.gram + lambda * design.penalty;
    solver.system.compute(lhs);
    if (solver.system.info() != Eigen::Success || !solver.system.isPositive() ||
        solver.system.vectorD().minCoeff() <= 1e-12 * std::max(1.0, solver.system.vectorD().maxCoeff())) {
        throw SingularBasisError("smoothing system for predictor " + std::to_string(design.index) + " is singular");
    }
    const Eigen::MatrixXd influence = solver.system.solve(design.gram);
    solver.edf = influence.trace();
    solver.test_dof = 2.0 * solver.edf - (influence * influence).trace();
    return solver;
}

std::size_t count_distinct(const Eigen::VectorXd& x) {
    auto v = sorted_values(x);
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::vector<double> SmootherConfig::default_gcv_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(std::pow(10.0, -6.0 + i));
    return grid;
}

std::vector<double> quantile_knots(const Eigen::VectorXd& x, int basis_size) {
    if (basis_size < kDegree + 1) throw std::invalid_argument("basis_size must be at least 4");
    const auto sorted = sorted_values(x);
    const double lo = sorted.front();
    const double hi = sorted.back();
    const int n_interior = basis_size - kDegree - 1;

    auto interior = interior_quantiles(sorted, n_interior);
    if (!strictly_inside(interior, lo, hi)) {
        // Heavy ties: place knots at quantiles of the distinct values instead.
        std::vector<double> unique = sorted;
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        interior = interior_quantiles(unique, n_interior);
        if (!strictly_inside(interior, lo, hi)) {
            throw SingularBasisError("predictor has too few distinct values for the spline basis");
        }
    }
    std::vector<double> knots(kDegree + 1, lo);
    knots.insert(knots.end(), interior.begin(), interior.end());
    knots.insert(knots.end(), kDegree + 1, hi);
    return knots;
}

Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& x, const std::vector<double>& knots, int basis_size) {
    const auto n = x.size();
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, basis_size);
    const double lo = knots[kDegree];
    const double hi = knots[basis_size];
    std::vector<double> local(kDegree + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = std::clamp(x[i], lo, hi);
        // Knot span: knots[span] <= v < knots[span + 1], last span closed.
        auto span = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), v) - knots.begin()) - 1;
        span = std::clamp(span, kDegree, basis_size - 1);

        // de Boor's triangular recursion for the non-zero functions.
        std::vector<double> left(kDegree + 1), right(kDegree + 1);
        local[0] = 1.0;
        for (int j = 1; j <= kDegree; ++j) {
            left[j] = v - knots[span + 1 - j];
            right[j] = knots[span + j] - v;
            double saved = 0.0;
            for (int r = 0; r < j; ++r) {
                const double denom = right[r + 1] + left[j - r];
                const double temp = denom != 0.0 ? local[r] / denom : 0.0;
                local[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            local[j] = saved;
        }
        for (int j = 0; j <= kDegree; ++j) basis(i, span - kDegree + j) = local[j];
    }
    return basis;
}

TermDesign TermDesign::build(const Eigen::VectorXd& x, std::size_t index, const SmootherConfig& config) {
    TermDesign design;
    design.index = index;
    const auto distinct = count_distinct(x);
    if (distinct < 2) {
        throw SingularBasisError("predictor " + std::to_string(index) + " is constant");
    }

    if (distinct < static_cast<std::size_t>(config.basis_size)) {
        if (!config.linear_fallback) {
            throw SingularBasisError("predictor " + std::to_string(index) + " has " + std::to_string(distinct) +
                                     " distinct values, fewer than the basis dimension " +
                                     std::to_string(config.basis_size));
        }
        design.linear = true;
        design.model = (x.array() - x.mean()).matrix();
        design.penalty = Eigen::MatrixXd::Zero(1, 1);
        design.gram = design.model.transpose() * design.model;
        return design;
    }

    const int k = config.basis_size;
    design.knots = quantile_knots(x, k);
    const Eigen::MatrixXd basis = bspline_basis(x, design.knots, k);

    // Sum-to-zero constraint 1'B beta = 0, absorbed through the null space of
    // the constraint row (Householder QR of its transpose).
    const Eigen::VectorXd constraint = basis.colwise().sum().transpose();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraint);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd null_space = q.rightCols(k - 1);

    design.model = basis * null_space;
    design.penalty = null_space.transpose() * second_difference_penalty(k) * null_space;
    design.gram = design.model.transpose() * design.model;
    return design;
}

double select_penalty_gcv(const TermDesign& design, const Eigen::VectorXd& y, const SmootherConfig& config) {
    if (design.linear) return 0.0;
    const double n = static_cast<double>(y.size());
    const Eigen::VectorXd centered = (y.array() - y.mean()).matrix();
    const Eigen::VectorXd xty = design.model.transpose() * centered;
    const double yty = centered.squaredNorm();
    const double scale = design.gram.trace() / design.penalty.trace();

    double best_lambda = config.gcv_grid.front() * scale;
    double best_score = std::numeric_limits<double>::infinity();
    for (double multiplier : config.gcv_grid) {
        const double lambda = multiplier * scale;
        Eigen::LDLT<Eigen::MatrixXd> system(design.gram + lambda * design.penalty);
        if (system.info() != Eigen::Success) continue;
        const Eigen::VectorXd coef = system.solve(xty);
        const double rss = std::max(0.0, yty - 2.0 * coef.dot(xty) + coef.dot(design.gram * coef));
        const double edf = system.solve(design.gram).trace();
        const double denom = n - 1.0 - config.gcv_gamma * edf;
        if (denom <= 0.0) continue;
        const double score = n * rss / (denom * denom);
        if (score < best_score) {
            best_score = score;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

double AdditiveFit::total_dof() const {
    double total = 0.0;
    for (const auto& term : terms) total += term.effective_dof;
    return total;
}

double AdditiveFit::total_test_dof() const {
    double total = 0.0;
    for (const auto& term : terms) total += term.test_dof;
    return total;
}

std::vector<double> AdditiveFit::effective_dof() const {
    std::vector<double> out;
    for (const auto& term : terms) out.push_back(term.effective_dof);
    return out;
}

AdditiveFit fit_additive(const Eigen::VectorXd& y, const std::vector<const TermDesign*>& designs,
                         const SmootherConfig& config) {
    const auto n = y.size();
    if (n < 2) throw std::invalid_argument("additive fit needs at least two observations");
    for (const auto* design : designs) {
        if (static_cast<Eigen::Index>(design->rows()) != n) {
            throw std::invalid_argument("predictor length does not match response");
        }
    }

    AdditiveFit fit;
    fit.intercept = y.mean();
    fit.fitted = Eigen::VectorXd::Constant(n, fit.intercept);

    std::vector<TermSolver> solvers;
    solvers.reserve(designs.size());
    for (const auto* design : designs) solvers.push_back(make_solver(*design, select_penalty_gcv(*design, y, config)));

    std::vector<Eigen::VectorXd> terms(designs.size(), Eigen::VectorXd::Zero(n));
    std::vector<Eigen::VectorXd> coefs(designs.size());
    Eigen::VectorXd residual = y - fit.fitted;  // y - intercept - sum of terms

    fit.converged = designs.empty();
    for (int iter = 1; iter <= config.backfit_max_iter && !designs.empty(); ++iter) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < designs.size(); ++j) {
            const auto& design = *designs[j];
            const Eigen::VectorXd partial = residual + terms[j];
            coefs[j] = solvers[j].system.solve(design.model.transpose() * partial);
            Eigen::VectorXd updated = design.model * coefs[j];
            updated.array() -= updated.mean();
            max_change = std::max(max_change, (updated - terms[j]).cwiseAbs().maxCoeff());
            residual = partial - updated;
            terms[j] = std::move(updated);
        }
        fit.iterations = iter;
        if (max_change < config.backfit_tol) {
            fit.converged = true;
            break;
        }
    }

    for (std::size_t j = 0; j < designs.size(); ++j) {
        SmoothTerm term;
        term.predictor_index = designs[j]->index;
        term.linear = designs[j]->linear;
        term.knots = designs[j]->knots;
        term.penalty_weight = solvers[j].lambda;
        term.coefficients = coefs[j];
        term.fitted = terms[j];
        term.effective_dof = solvers[j].edf;
        term.test_dof = solvers[j].test_dof;
        fit.fitted += terms[j];
        fit.terms.push_back(std::move(term));
    }
    fit.rss_mean = (y - fit.fitted).squaredNorm() / static_cast<double>(n);
    return fit;
}

AdditiveFit fit_additive(const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& predictors,
                         const SmootherConfig& config) {
    std::vector<TermDesign> designs;
    designs.reserve(predictors.size());
    for (std::size_t j = 0; j < predictors.size(); ++j) designs.push_back(TermDesign::build(predictors[j], j, config));
    std::vector<const TermDesign*> pointers;
    for (const auto& d : designs) pointers.push_back(&d);
    return fit_additive(y, pointers, config);
}

double f_test_pvalue(double rss_reduced, double rss_full, double df_term, double df_residual) {
    const double drop = rss_reduced - rss_full;
    if (!(drop > 0.0) || df_term <= 0.0) return 1.0;
    if (df_residual <= 0.0 || rss_full <= 0.0) return 0.0;
    const double stat = (drop / df_term) / (rss_full / df_residual);
    boost::math::fisher_f_distribution<double> dist(df_term, df_residual);
    return std::clamp(boost::math::cdf(boost::math::complement(dist, stat)), 0.0, 1.0);
}

double term_pvalue(const AdditiveFit& full, const Eigen::VectorXd& y,
                   const std::vector<const TermDesign*>& designs, std::size_t term,
                   const SmootherConfig& config) {
    if (term >= full.terms.size() || designs.size() != full.terms.size()) {
        throw std::out_of_range("term index not present in fit");
    }
    std::vector<const TermDesign*> reduced_designs;
    for (std::size_t j = 0; j < designs.size(); ++j) {
        if (j != term) reduced_designs.push_back(designs[j]);
    }
    const AdditiveFit reduced = fit_additive(y, reduced_designs, config);
    const double n = static_cast<double>(y.size());
    return f_test_pvalue(reduced.rss_mean * n, full.rss_mean * n, full.terms[term].test_dof,
                         n - 1.0 - full.total_test_dof());
}

double term_pvalue(const AdditiveFit& full, const Eigen::VectorXd& y,
                   const std::vector<Eigen::VectorXd>& predictors, std::size_t term,
                   const SmootherConfig& config) {
    std::vector<TermDesign> designs;
    for (std::size_t j = 0; j < predictors.size(); ++j) designs.push_back(TermDesign::build(predictors[j], j, config));
    std::vector<const TermDesign*> pointers;
    for (const auto& d : designs) pointers.push_back(&d);
    return term_pvalue(full, y, pointers, term, config);
}

}  // namespace tcam
