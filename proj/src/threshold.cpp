#include "sst/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sst {

namespace {

void require_positive_finite(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

double soft(double lambda, double u) {
    const double a = std::abs(u);
    if (a < lambda) return 0.0;
    return std::copysign(a - lambda, u);
}

}  // namespace

std::string_view family_name(Family family) {
    switch (family) {
        case Family::Hard: return "ht";
        case Family::Soft: return "st";
        case Family::Garrote: return "ng";
        case Family::Firm: return "ft";
        case Family::ScaledSoft: return "sst";
        case Family::AdaptiveLasso: return "al";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (Family f : {Family::Hard, Family::Soft, Family::Garrote, Family::Firm,
                     Family::ScaledSoft, Family::AdaptiveLasso}) {
        if (family_name(f) == name) return f;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

ThresholdRule ThresholdRule::hard(double lambda) {
    require_positive_finite(lambda, "lambda");
    ThresholdRule r;
    r.family_ = Family::Hard;
    r.lambda_ = lambda;
    return r;
}

ThresholdRule ThresholdRule::soft(double lambda) {
    require_positive_finite(lambda, "lambda");
    ThresholdRule r;
    r.family_ = Family::Soft;
    r.lambda_ = lambda;
    return r;
}

ThresholdRule ThresholdRule::garrote(double lambda) {
    require_positive_finite(lambda, "lambda");
    ThresholdRule r;
    r.family_ = Family::Garrote;
    r.lambda_ = lambda;
    return r;
}

ThresholdRule ThresholdRule::firm(double lambda, double gamma) {
    require_positive_finite(lambda, "lambda");
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("gamma must be greater than 1");
    }
    ThresholdRule r;
    r.family_ = Family::Firm;
    r.lambda_ = lambda;
    r.gamma_ = gamma;
    return r;
}

ThresholdRule ThresholdRule::scaled_soft(double lambda, int m) {
    require_positive_finite(lambda, "lambda");
    if (m < 1 || m % 2 == 0) {
        throw std::invalid_argument("m must be odd and >= 1");
    }
    ThresholdRule r;
    r.family_ = Family::ScaledSoft;
    r.lambda_ = lambda;
    r.m_ = m;
    return r;
}

ThresholdRule ThresholdRule::adaptive_lasso(double lambda_r, double gamma) {
    require_positive_finite(lambda_r, "lambda_R");
    require_positive_finite(gamma, "gamma");
    ThresholdRule r;
    r.family_ = Family::AdaptiveLasso;
    r.lambda_r_ = lambda_r;
    r.gamma_ = gamma;
    r.lambda_ = std::pow(lambda_r, 1.0 / (gamma + 1.0));
    return r;
}

ThresholdRule ThresholdRule::make(Family family, double level, double hyper) {
    switch (family) {
        case Family::Hard: return hard(level);
        case Family::Soft: return soft(level);
        case Family::Garrote: return garrote(level);
        case Family::Firm: return firm(level, hyper);
        case Family::ScaledSoft: {
            const double rounded = std::round(hyper);
            if (rounded != hyper) throw std::invalid_argument("m must be an integer");
            return scaled_soft(level, static_cast<int>(rounded));
        }
        case Family::AdaptiveLasso: return adaptive_lasso(level, hyper);
    }
    throw std::invalid_argument("unknown family");
}

double ThresholdRule::hyper() const noexcept {
    switch (family_) {
        case Family::Firm:
        case Family::AdaptiveLasso: return gamma_;
        case Family::ScaledSoft: return m_;
        default: return 0.0;
    }
}

std::string ThresholdRule::describe() const {
    std::ostringstream os;
    os << family_name(family_);
    switch (family_) {
        case Family::Firm: os << "(lambda=" << lambda_ << ", gamma=" << gamma_ << ")"; break;
        case Family::ScaledSoft: os << "(lambda=" << lambda_ << ", m=" << m_ << ")"; break;
        case Family::AdaptiveLasso:
            os << "(lambda_R=" << lambda_r_ << ", gamma=" << gamma_ << ")";
            break;
        default: os << "(lambda=" << lambda_ << ")"; break;
    }
    return os.str();
}

double apply(const ThresholdRule& rule, double u) {
    const double lambda = rule.threshold();
    const double a = std::abs(u);
    if (a < lambda) return 0.0;
    switch (rule.family()) {
        case Family::Hard: return u;
        case Family::Soft: return soft(lambda, u);
        case Family::Garrote: {
            const double r = lambda / a;
            return (1.0 - r * r) * u;
        }
        case Family::Firm:
            if (a >= rule.gamma() * lambda) return u;
            return rule.gamma() / (rule.gamma() - 1.0) * soft(lambda, u);
        case Family::ScaledSoft:
            return (1.0 - std::pow(lambda / a, rule.m() + 1)) * u;
        case Family::AdaptiveLasso: {
            // max() guards the rounding of lambda_R^(1/(gamma+1)) at the boundary.
            const double shrink = 1.0 - rule.lambda_r() / std::pow(a, rule.gamma() + 1.0);
            return std::max(shrink, 0.0) * u;
        }
    }
    return 0.0;
}

double derivative(const ThresholdRule& rule, double u) {
    if (rule.family() == Family::Hard) throw NoSteinDerivative();
    const double lambda = rule.threshold();
    const double a = std::abs(u);
    if (a < lambda) return 0.0;
    switch (rule.family()) {
        case Family::Soft: return 1.0;
        case Family::Garrote: {
            const double r = lambda / a;
            return 1.0 + r * r;
        }
        case Family::Firm:
            if (a >= rule.gamma() * lambda) return 1.0;
            return rule.gamma() / (rule.gamma() - 1.0);
        case Family::ScaledSoft:
            return 1.0 + rule.m() * std::pow(lambda / a, rule.m() + 1);
        case Family::AdaptiveLasso:
            return 1.0 + rule.gamma() * rule.lambda_r() / std::pow(a, rule.gamma() + 1.0);
        case Family::Hard: break;
    }
    return 0.0;
}

double ideal_scaling(double lambda, double u) {
    require_positive_finite(lambda, "lambda");
    const double a = std::abs(u);
    if (!(a > lambda)) {
        throw std::domain_error("ideal scaling requires |u| > lambda");
    }
    return 1.0 / (1.0 - lambda / a);
}

double taylor_scaling(double lambda, int m, double u) {
    require_positive_finite(lambda, "lambda");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const double a = std::abs(u);
    if (a < lambda) return m + 1.0;
    const double r = lambda / a;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= m; ++j) {
        term *= r;
        sum += term;
    }
    return sum;
}

double hard_jump(double lambda, double u) {
    require_positive_finite(lambda, "lambda");
    if (u >= lambda) return lambda;
    if (u <= -lambda) return -lambda;
    return 0.0;
}

Coefficients apply_vector(const ThresholdRule& rule, std::span<const double> bhat) {
    Coefficients out(bhat.size());
    for (std::size_t k = 0; k < bhat.size(); ++k) out[k] = apply(rule, bhat[k]);
    return out;
}

}  // namespace sst
