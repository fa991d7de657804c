#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sst/design.hpp"
#include "sst/risk.hpp"
#include "sst/select.hpp"
#include "sst/threshold.hpp"

namespace sst {

enum class Sigma2Mode { Known, Estimated, Mad };

std::string_view sigma2_mode_name(Sigma2Mode mode);
Sigma2Mode parse_sigma2_mode(std::string_view name);

/// A complete Monte Carlo scenario. Coefficient indices here are 1-based,
/// as they appear in config files.
struct ExperimentConfig {
    std::size_t n = 256;
    double sigma2 = 1.0;
    std::vector<std::pair<std::size_t, double>> true_coeffs;
    std::vector<Family> methods;
    std::vector<double> lambda_grid;
    std::vector<double> gamma_grid;     // firm thresholding
    std::vector<double> m_grid;         // scaled soft thresholding
    std::vector<double> al_gamma_grid;  // adaptive lasso
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    Sigma2Mode sigma2_mode = Sigma2Mode::Known;
    std::vector<std::size_t> zero_index_set;  // empty: n/2+1 .. n
    std::string preset;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    Coefficients truth() const;
    IndexSet support() const;  // 0-based
    IndexSet noise_indices() const;  // 0-based
};

/// "fig2", "case1" or "case2"; throws std::invalid_argument otherwise.
ExperimentConfig preset_config(std::string_view name);

/// {0.01..0.1 step 0.01, 0.15..1 step 0.05, 2..10 step 1}
std::vector<double> fig2_lambda_grid();
/// {0.02..0.1 step 0.01, 0.2..1 step 0.1}
std::vector<double> selection_lambda_grid();
/// `points` log-spaced values covering [lo, hi].
std::vector<double> log_lambda_grid(std::size_t points = 100, double lo = 0.01, double hi = 10.0);

struct Stat {
    double mean = 0.0;
    double sd = 0.0;  // S-1 denominator
    std::size_t count = 0;

    double se() const { return count > 0 ? sd / std::sqrt(static_cast<double>(count)) : 0.0; }
};

/// Running sum and sum of squares.
class Accumulator {
public:
    void add(double x) {
        sum_ += x;
        sum_sq_ += x * x;
        ++count_;
    }
    void merge(const Accumulator& other) {
        sum_ += other.sum_;
        sum_sq_ += other.sum_sq_;
        count_ += other.count_;
    }
    Stat stat() const;

private:
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
    std::size_t count_ = 0;
};

/// One family with a fixed hyper-parameter, as swept over lambda.
struct SweepMethod {
    Family family;
    double hyper = 0.0;
    std::string label;

    /// Rule at threshold level lambda (adaptive lasso uses lambda_R = lambda^(gamma+1)).
    ThresholdRule at(double lambda) const;
};

std::vector<SweepMethod> sweep_methods(const ExperimentConfig& config);

struct CurvePoint {
    double lambda = 0.0;
    bool has_sure = false;  // false for hard thresholding
    Stat risk;
    Stat k_hat;
    Stat sure;
    Stat dof1;
    Stat dof2;
    Stat dof_total;
    Stat empirical_dof;      // n * sum_k beta_hat_k (bhat_k - b_k)
    Stat sure_minus_risk;    // paired, per trial
    Stat empirical_minus_formula;
};

struct MethodCurve {
    SweepMethod method;
    std::vector<CurvePoint> points;
};

struct MethodSelection {
    Family family;
    Stat risk;
    Stat k_hat;
    Stat serr;
    Stat lambda;
    Stat sigma2_hat;
};

struct McSummary {
    ExperimentConfig config;
    std::size_t trials = 0;
    // Sweep output.
    std::vector<double> lambdas;
    std::vector<DofBreakdown> ht_theory;
    std::vector<MethodCurve> curves;
    // Model-selection output.
    std::vector<MethodSelection> selection;
};

struct RunOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Noise variance used inside a trial under config.sigma2_mode.
double resolve_sigma2(const ExperimentConfig& config, std::span<const double> bhat);

/// Risk, SURE and DOF curves over lambda for every method, plus the
/// closed-form hard-thresholding DOF at the true coefficients.
McSummary run_sweep(const ExperimentConfig& config, RunOptions options = {});

/// Per trial and method: select the rule (SURE grid search, or the universal
/// threshold for hard thresholding) and record risk, k_hat and SErr.
McSummary run_model_selection(const ExperimentConfig& config, RunOptions options = {});

struct PairedDof {
    Stat empirical;
    Stat formula;     // zero-count for hard thresholding
    Stat difference;  // empirical - formula, per trial
};

/// Covariance-form DOF n * E sum_k beta_hat_k (bhat_k - b_k), paired with the
/// Stein formula where one exists.
PairedDof paired_dof(const ExperimentConfig& config, const ThresholdRule& rule,
                     RunOptions options = {});

double empirical_dof(const ExperimentConfig& config, const ThresholdRule& rule,
                     RunOptions options = {});

}  // namespace sst
