#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sst {

using Coefficients = std::vector<double>;

enum class Family { Hard, Soft, Garrote, Firm, ScaledSoft, AdaptiveLasso };

/// Short lowercase name used in CLI flags and output files ("ht", "st", ...).
std::string_view family_name(Family family);

/// Inverse of family_name; throws std::invalid_argument for unknown names.
Family parse_family(std::string_view name);

/// Thrown when a rule has no almost-everywhere derivative usable in
/// Stein's lemma (hard thresholding is discontinuous at the threshold).
class NoSteinDerivative : public std::domain_error {
public:
    NoSteinDerivative() : std::domain_error("no-stein-derivative: hard thresholding is discontinuous") {}
};

/// A componentwise thresholding estimator together with its
/// hyper-parameters. Instances are validated on construction and immutable.
///
/// The active region is the closed set |u| >= threshold(). For firm
/// thresholding the shrink band is [lambda, gamma*lambda) and the keep band
/// is [gamma*lambda, inf).
class ThresholdRule {
public:
    static ThresholdRule hard(double lambda);
    static ThresholdRule soft(double lambda);
    static ThresholdRule garrote(double lambda);
    static ThresholdRule firm(double lambda, double gamma);
    /// Requires odd m >= 1; m == 1 coincides with the garrote.
    static ThresholdRule scaled_soft(double lambda, int m);
    /// (1 - lambda_r / |u|^(gamma+1))_+ u, threshold lambda_r^(1/(gamma+1)).
    static ThresholdRule adaptive_lasso(double lambda_r, double gamma);

    /// Builds a rule of the given family. `hyper` is gamma for Firm and
    /// AdaptiveLasso, m for ScaledSoft, and ignored otherwise. For
    /// AdaptiveLasso `level` is lambda_R rather than the threshold.
    static ThresholdRule make(Family family, double level, double hyper = 0.0);

    Family family() const noexcept { return family_; }
    /// Effective threshold: |u| below it maps to zero.
    double threshold() const noexcept { return lambda_; }
    double gamma() const noexcept { return gamma_; }
    int m() const noexcept { return m_; }
    double lambda_r() const noexcept { return lambda_r_; }
    /// The family's hyper-parameter as a real (gamma, m, or 0).
    double hyper() const noexcept;

    std::string describe() const;

    bool operator==(const ThresholdRule&) const = default;

private:
    ThresholdRule() = default;

    Family family_ = Family::Soft;
    double lambda_ = 0.0;
    double gamma_ = 0.0;
    int m_ = 0;
    double lambda_r_ = 0.0;
};

double apply(const ThresholdRule& rule, double u);

/// Almost-everywhere derivative of apply() in u. At |u| == threshold the
/// active-side value is returned. Throws NoSteinDerivative for Hard.
double derivative(const ThresholdRule& rule, double u);

/// 1 / (1 - lambda/|u|): the scaling that turns S_lambda(u) back into u.
/// Throws std::domain_error unless |u| > lambda > 0.
double ideal_scaling(double lambda, double u);

/// Order-m truncation of the ideal scaling; m + 1 below the threshold.
double taylor_scaling(double lambda, int m, double u);

/// lambda * sign(u) on |u| >= lambda, else 0. H = S + hard_jump.
double hard_jump(double lambda, double u);

Coefficients apply_vector(const ThresholdRule& rule, std::span<const double> bhat);

}  // namespace sst
