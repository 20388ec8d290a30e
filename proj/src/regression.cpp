#include "tcam/regression.hpp"

#include <algorithm>
#include <stdexcept>

namespace tcam {

RegressionContext::RegressionContext(const Dataset& data, SmootherConfig config, const std::vector<bool>& predictors,
                                     const Execution& exec)
    : config_(std::move(config)), rows_(data.n_rows()), designs_(data.n_cols()) {
    if (data.has_missing()) throw std::invalid_argument("regression: dataset has missing values");
    for (std::size_t j = 0; j < data.n_cols(); ++j) columns_.push_back(data.column(j));
    parallel_for(data.n_cols(), exec, [&](std::size_t j) {
        if (predictors.empty() || predictors[j]) designs_[j] = TermDesign::build(columns_[j], j, config_);
    });
}

const TermDesign& RegressionContext::design(std::size_t j) const {
    if (j >= designs_.size() || !designs_[j]) throw std::out_of_range("no spline design built for column " + std::to_string(j));
    return *designs_[j];
}

std::vector<const TermDesign*> RegressionContext::designs_for(const std::vector<std::size_t>& parents) const {
    std::vector<const TermDesign*> out;
    out.reserve(parents.size());
    for (auto k : parents) out.push_back(&design(k));
    return out;
}

AdditiveFit RegressionContext::fit(std::size_t target, std::vector<std::size_t> parents) const {
    std::sort(parents.begin(), parents.end());
    return fit_additive(columns_.at(target), designs_for(parents), config_);
}

double RegressionContext::rss(std::size_t target, const std::vector<std::size_t>& parents) const {
    return fit(target, parents).rss_mean;
}

std::vector<double> RegressionContext::parent_pvalues(std::size_t target, std::vector<std::size_t> parents) const {
    std::sort(parents.begin(), parents.end());
    const auto designs = designs_for(parents);
    const auto& y = columns_.at(target);
    const AdditiveFit full = fit_additive(y, designs, config_);
    std::vector<double> out;
    for (std::size_t j = 0; j < parents.size(); ++j) out.push_back(term_pvalue(full, y, designs, j, config_));
    return out;
}

}  // namespace tcam
