#include "sst/select.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <optional>
#include <stdexcept>

namespace sst {

IndexSet active_set(std::span<const double> bhat, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    IndexSet out;
    for (std::size_t k = 0; k < bhat.size(); ++k) {
        if (std::abs(bhat[k]) >= lambda) out.push_back(k);
    }
    return out;
}

double universal_threshold(double sigma2, std::size_t n) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("sigma2 must be positive");
    }
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    const double nn = static_cast<double>(n);
    return std::sqrt(2.0 * sigma2 * std::log(nn) / nn);
}

namespace {

struct Candidate {
    ThresholdRule rule;
    SureReport report;
    std::size_t order;
};

// True when a should be preferred over b.
bool better(const Candidate& a, const Candidate& b) {
    if (a.report.sure != b.report.sure) return a.report.sure < b.report.sure;
    if (a.rule.threshold() != b.rule.threshold()) return a.rule.threshold() > b.rule.threshold();
    if (a.report.dof.total != b.report.dof.total) return a.report.dof.total < b.report.dof.total;
    return a.order < b.order;
}

bool uses_hyper(Family family) {
    return family == Family::Firm || family == Family::ScaledSoft ||
           family == Family::AdaptiveLasso;
}

}  // namespace

SelectionResult grid_select(std::span<const ThresholdRule> candidates,
                            std::span<const double> bhat, double sigma2) {
    if (candidates.empty()) throw std::invalid_argument("candidate list is empty");
    std::optional<Candidate> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].family() == Family::Hard) {
            throw std::invalid_argument("hard thresholding has no SURE; use universal_threshold");
        }
        Candidate c{candidates[i], sure(candidates[i], bhat, sigma2), i};
        if (!best || better(c, *best)) best = std::move(c);
    }
    SelectionResult result{best->rule, best->report, 0, {}, candidates.size()};
    result.active = active_set(bhat, best->rule.threshold());
    result.k_hat = result.active.size();
    return result;
}

SelectionResult grid_select(Family family, std::span<const double> lambda_grid,
                            std::span<const double> hyper_grid, std::span<const double> bhat,
                            double sigma2) {
    if (family == Family::Hard) {
        throw std::invalid_argument("hard thresholding has no SURE; use universal_threshold");
    }
    if (lambda_grid.empty()) throw std::invalid_argument("lambda grid is empty");
    if (uses_hyper(family) && hyper_grid.empty()) {
        throw std::invalid_argument("hyper-parameter grid is empty");
    }
    std::vector<ThresholdRule> candidates;
    if (uses_hyper(family)) {
        for (double hyper : hyper_grid) {
            for (double level : lambda_grid) candidates.push_back(ThresholdRule::make(family, level, hyper));
        }
    } else {
        for (double level : lambda_grid) candidates.push_back(ThresholdRule::make(family, level));
    }
    return grid_select(candidates, bhat, sigma2);
}

std::size_t selection_error(std::span<const std::size_t> k_star, std::span<const std::size_t> k_hat) {
    IndexSet a(k_star.begin(), k_star.end());
    IndexSet b(k_hat.begin(), k_hat.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    IndexSet diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    return diff.size();
}

double actual_risk(std::span<const double> beta_hat, std::span<const double> b_true) {
    if (beta_hat.size() != b_true.size()) {
        throw std::invalid_argument("actual_risk: length mismatch");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < beta_hat.size(); ++k) {
        const double d = beta_hat[k] - b_true[k];
        sum += d * d;
    }
    return sum;
}

}  // namespace sst
