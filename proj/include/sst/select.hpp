#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sst/risk.hpp"
#include "sst/threshold.hpp"

namespace sst {

using IndexSet = std::vector<std::size_t>;  // sorted, 0-based

/// {k : |bhat_k| >= lambda}
IndexSet active_set(std::span<const double> bhat, double lambda);

/// sqrt(2 sigma2 log(n) / n)
double universal_threshold(double sigma2, std::size_t n);

struct SelectionResult {
    ThresholdRule rule;
    SureReport report;
    std::size_t k_hat = 0;
    IndexSet active;
    std::size_t searched = 0;

    double sure() const noexcept { return report.sure; }
};

/// Minimizes SURE over lambda_grid x hyper_grid. For AdaptiveLasso the
/// lambda grid holds lambda_R values. hyper_grid is gamma (Firm,
/// AdaptiveLasso) or m (ScaledSoft) and is ignored for Soft and Garrote.
///
/// Ties on SURE go to the larger effective threshold, then the smaller total
/// DOF, then the earlier hyper-grid entry. Throws std::invalid_argument for
/// Hard or empty grids.
SelectionResult grid_select(Family family, std::span<const double> lambda_grid,
                            std::span<const double> hyper_grid, std::span<const double> bhat,
                            double sigma2);

/// Minimizes SURE over an explicit candidate list with the same tie-break;
/// list position stands in for hyper-grid order.
SelectionResult grid_select(std::span<const ThresholdRule> candidates,
                            std::span<const double> bhat, double sigma2);

/// |a symmetric-difference b| for sorted index sets.
std::size_t selection_error(std::span<const std::size_t> k_star, std::span<const std::size_t> k_hat);

/// sum_k (beta_hat_k - b_k)^2
double actual_risk(std::span<const double> beta_hat, std::span<const double> b_true);

}  // namespace sst
