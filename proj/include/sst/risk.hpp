#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "sst/threshold.hpp"

namespace sst {

/// Degrees of freedom split into the soft-thresholding count term and the
/// excess term. Squared observation units.
struct DofBreakdown {
    double d1 = 0.0;
    double d2 = 0.0;
    double total = 0.0;
};

struct SureReport {
    double residual = 0.0;  // (1/n)||y - X beta_hat||^2
    double sigma2 = 0.0;
    DofBreakdown dof;
    double sure = 0.0;  // residual - sigma2 + 2 dof.total / n
    std::size_t n = 0;
};

class NoDataDrivenDof : public std::domain_error {
public:
    NoDataDrivenDof()
        : std::domain_error("no-data-driven-dof: hard thresholding DOF needs the true coefficients") {}
};

/// Stein-lemma DOF of `rule` at the least-squares coefficients `bhat`.
///
/// d1 is sigma2 times the active-set size, except for firm thresholding where
/// it counts only the keep band |b| >= gamma*lambda and d2 carries the shrink
/// band weighted by gamma/(gamma-1). Throws NoDataDrivenDof for Hard.
DofBreakdown dof(const ThresholdRule& rule, std::span<const double> bhat, double sigma2);

/// SURE for the fit apply_vector(rule, bhat). The residual is computed in
/// coefficient space, which equals the signal-space residual for a square
/// orthogonal design.
SureReport sure(const ThresholdRule& rule, std::span<const double> bhat, double sigma2);

/// Standard normal upper tail P(Z > x).
double normal_upper_tail(double x);
/// Density of N(mean, sd^2) at x.
double normal_density(double x, double mean, double sd);

/// lambda * (phi(lambda) + phi(-lambda)) for phi the N(mu, tau^2) density.
double hard_jump_density(double mu, double tau, double lambda);

/// Closed-form hard-thresholding DOF for TRUE coefficients b:
/// d1 = sigma2 * E|active set|, d2 = sigma2 * sum_k h_{b_k,tau}(lambda),
/// tau = sqrt(sigma2 / n).
DofBreakdown ht_dof_theoretical(std::span<const double> b, double sigma2, double lambda);

/// (n / |J|) * sum_{k in J} bhat_k^2, with n = bhat.size(). Indices are 0-based.
double estimate_sigma2(std::span<const double> bhat, std::span<const std::size_t> zero_index_set);

/// Median-absolute-deviation noise variance from putative noise-only
/// coefficients of an n-point design: (sqrt(n) * median|c| / 0.6744897501)^2.
double estimate_sigma2_mad(std::span<const double> detail, std::size_t n);
/// Same with n = detail.size().
double estimate_sigma2_mad(std::span<const double> detail);

inline constexpr double kMadToSigma = 0.6744897501;

}  // namespace sst
