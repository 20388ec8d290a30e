#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tcam/dataprep.hpp"
#include "tcam/parallel.hpp"
#include "tcam/smoothers.hpp"

namespace tcam {

// Additive regressions of one column of a fixed dataset on others. Spline
// designs are built once per predictor column and shared read-only between
// concurrent fits.
class RegressionContext {
public:
    // Builds designs for the columns flagged in `predictors` (all if empty).
    RegressionContext(const Dataset& data, SmootherConfig config, const std::vector<bool>& predictors = {},
                      const Execution& exec = {});

    std::size_t size() const { return columns_.size(); }
    std::size_t rows() const { return rows_; }
    const SmootherConfig& config() const { return config_; }
    const Eigen::VectorXd& column(std::size_t j) const { return columns_[j]; }
    const TermDesign& design(std::size_t j) const;

    // Parents are fitted in ascending index order, so the result does not
    // depend on the order in which they are passed.
    AdditiveFit fit(std::size_t target, std::vector<std::size_t> parents) const;
    double rss(std::size_t target, const std::vector<std::size_t>& parents) const;

    // p-value of each parent's term in the fit of target on all parents,
    // aligned with the sorted parent list.
    std::vector<double> parent_pvalues(std::size_t target, std::vector<std::size_t> parents) const;

private:
    std::vector<const TermDesign*> designs_for(const std::vector<std::size_t>& parents) const;

    SmootherConfig config_;
    std::size_t rows_ = 0;
    std::vector<Eigen::VectorXd> columns_;
    std::vector<std::optional<TermDesign>> designs_;
};

}  // namespace tcam
