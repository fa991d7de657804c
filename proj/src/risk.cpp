#include "sst/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace sst {

namespace {

void require_sigma2(double sigma2) {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("sigma2 must be >= 0 and finite");
    }
}

}  // namespace

DofBreakdown dof(const ThresholdRule& rule, std::span<const double> bhat, double sigma2) {
    if (rule.family() == Family::Hard) throw NoDataDrivenDof();
    require_sigma2(sigma2);
    const double lambda = rule.threshold();

    double count = 0.0;
    double excess = 0.0;
    for (double b : bhat) {
        const double a = std::abs(b);
        if (a < lambda) continue;
        switch (rule.family()) {
            case Family::Soft:
                count += 1.0;
                break;
            case Family::Garrote: {
                const double r = lambda / a;
                count += 1.0;
                excess += r * r;
                break;
            }
            case Family::ScaledSoft:
                count += 1.0;
                excess += rule.m() * std::pow(lambda / a, rule.m() + 1);
                break;
            case Family::AdaptiveLasso:
                count += 1.0;
                excess += rule.gamma() * rule.lambda_r() / std::pow(a, rule.gamma() + 1.0);
                break;
            case Family::Firm:
                if (a >= rule.gamma() * lambda) {
                    count += 1.0;
                } else {
                    excess += rule.gamma() / (rule.gamma() - 1.0);
                }
                break;
            case Family::Hard:
                break;
        }
    }
    DofBreakdown out;
    out.d1 = sigma2 * count;
    out.d2 = sigma2 * excess;
    out.total = out.d1 + out.d2;
    return out;
}

SureReport sure(const ThresholdRule& rule, std::span<const double> bhat, double sigma2) {
    if (bhat.empty()) throw std::invalid_argument("sure needs at least one coefficient");
    SureReport rep;
    rep.dof = dof(rule, bhat, sigma2);
    rep.sigma2 = sigma2;
    rep.n = bhat.size();
    double residual = 0.0;
    for (double b : bhat) {
        const double diff = b - apply(rule, b);
        residual += diff * diff;
    }
    rep.residual = residual;
    rep.sure = residual - sigma2 + 2.0 * rep.dof.total / static_cast<double>(rep.n);
    return rep;
}

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_density(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double hard_jump_density(double mu, double tau, double lambda) {
    return lambda * (normal_density(lambda, mu, tau) + normal_density(-lambda, mu, tau));
}

DofBreakdown ht_dof_theoretical(std::span<const double> b, double sigma2, double lambda) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("sigma2 must be positive");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be positive");
    }
    if (b.empty()) throw std::invalid_argument("coefficient vector is empty");
    const double tau = std::sqrt(sigma2 / static_cast<double>(b.size()));
    double expected_active = 0.0;
    double jump = 0.0;
    for (double bk : b) {
        expected_active +=
            normal_upper_tail((lambda - bk) / tau) + normal_upper_tail((lambda + bk) / tau);
        jump += hard_jump_density(bk, tau, lambda);
    }
    DofBreakdown out;
    out.d1 = sigma2 * expected_active;
    out.d2 = sigma2 * jump;
    out.total = out.d1 + out.d2;
    return out;
}

double estimate_sigma2(std::span<const double> bhat, std::span<const std::size_t> zero_index_set) {
    if (zero_index_set.empty()) throw std::invalid_argument("zero index set is empty");
    double sum = 0.0;
    for (std::size_t k : zero_index_set) {
        if (k >= bhat.size()) throw std::out_of_range("zero index set entry out of range");
        sum += bhat[k] * bhat[k];
    }
    return static_cast<double>(bhat.size()) / static_cast<double>(zero_index_set.size()) * sum;
}

double estimate_sigma2_mad(std::span<const double> detail, std::size_t n) {
    if (detail.empty()) throw std::invalid_argument("MAD estimate needs at least one coefficient");
    std::vector<double> mags(detail.size());
    std::transform(detail.begin(), detail.end(), mags.begin(), [](double v) { return std::abs(v); });
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
    double median = mags[mid];
    if (mags.size() % 2 == 0) {
        const double lower = *std::max_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }
    const double sigma = std::sqrt(static_cast<double>(n)) * median / kMadToSigma;
    return sigma * sigma;
}

double estimate_sigma2_mad(std::span<const double> detail) {
    return estimate_sigma2_mad(detail, detail.size());
}

}  // namespace sst
