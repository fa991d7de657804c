#include "sst/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include "sst/io.hpp"

namespace sst {

std::string_view sigma2_mode_name(Sigma2Mode mode) {
    switch (mode) {
        case Sigma2Mode::Known: return "known";
        case Sigma2Mode::Estimated: return "estimated";
        case Sigma2Mode::Mad: return "mad";
    }
    return "?";
}

Sigma2Mode parse_sigma2_mode(std::string_view name) {
    if (name == "known") return Sigma2Mode::Known;
    if (name == "estimated" || name == "estimate") return Sigma2Mode::Estimated;
    if (name == "mad") return Sigma2Mode::Mad;
    throw std::invalid_argument("unknown sigma2_mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 4");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("sigma2 must be >= 0");
    }
    std::set<std::size_t> seen;
    for (const auto& [index, value] : true_coeffs) {
        if (index < 1 || index > n) throw std::invalid_argument("true_coeffs index out of [1, n]");
        if (!seen.insert(index).second) throw std::invalid_argument("duplicate true_coeffs index");
        if (!std::isfinite(value)) throw std::invalid_argument("true_coeffs value is not finite");
    }
    if (methods.empty()) throw std::invalid_argument("methods list is empty");
    if (lambda_grid.empty()) throw std::invalid_argument("lambda_grid is empty");
    for (double l : lambda_grid) {
        if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambda_grid entries must be positive");
    }
    const auto uses = [&](Family f) { return std::find(methods.begin(), methods.end(), f) != methods.end(); };
    if (uses(Family::Firm)) {
        if (gamma_grid.empty()) throw std::invalid_argument("gamma_grid is empty");
        for (double g : gamma_grid) {
            if (!(g > 1.0)) throw std::invalid_argument("gamma must be greater than 1");
        }
    }
    if (uses(Family::ScaledSoft)) {
        if (m_grid.empty()) throw std::invalid_argument("m_grid is empty");
        for (double m : m_grid) {
            if (m < 1 || m != std::round(m) || static_cast<long long>(m) % 2 == 0) {
                throw std::invalid_argument("m must be odd");
            }
        }
    }
    if (uses(Family::AdaptiveLasso)) {
        if (al_gamma_grid.empty()) throw std::invalid_argument("al_gamma_grid is empty");
        for (double g : al_gamma_grid) {
            if (!(g > 0.0)) throw std::invalid_argument("adaptive lasso gamma must be positive");
        }
    }
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (std::size_t k : zero_index_set) {
        if (k < 1 || k > n) throw std::invalid_argument("zero_index_set entry out of [1, n]");
    }
}

Coefficients ExperimentConfig::truth() const {
    Coefficients b(n, 0.0);
    for (const auto& [index, value] : true_coeffs) b.at(index - 1) = value;
    return b;
}

IndexSet ExperimentConfig::support() const {
    IndexSet out;
    for (const auto& [index, value] : true_coeffs) {
        if (value != 0.0) out.push_back(index - 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

IndexSet ExperimentConfig::noise_indices() const {
    IndexSet out;
    if (zero_index_set.empty()) {
        for (std::size_t k = n / 2; k < n; ++k) out.push_back(k);
    } else {
        for (std::size_t k : zero_index_set) out.push_back(k - 1);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

std::vector<double> fig2_lambda_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(i / 100.0);
    for (int i = 3; i <= 20; ++i) grid.push_back(i / 20.0);
    for (int i = 2; i <= 10; ++i) grid.push_back(i);
    return grid;
}

std::vector<double> selection_lambda_grid() {
    std::vector<double> grid;
    for (int i = 2; i <= 10; ++i) grid.push_back(i / 100.0);
    for (int i = 2; i <= 10; ++i) grid.push_back(i / 10.0);
    return grid;
}

std::vector<double> log_lambda_grid(std::size_t points, double lo, double hi) {
    if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bad log grid");
    std::vector<double> grid(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.back() = hi;
    return grid;
}

ExperimentConfig preset_config(std::string_view name) {
    ExperimentConfig c;
    c.n = 256;
    c.sigma2 = 1.0;
    c.trials = 5000;
    c.master_seed = 20240601;
    c.preset = std::string(name);
    c.gamma_grid = {1.1, 1.2, 1.5, 2, 3, 4, 5};
    c.m_grid = {1, 3, 5, 7, 9, 11};
    c.al_gamma_grid = {1, 3, 5, 7, 9, 11};
    if (name == "fig2") {
        for (std::size_t k = 1; k <= 5; ++k) c.true_coeffs.emplace_back(k, 1.0);
        c.methods = {Family::Hard, Family::Soft, Family::ScaledSoft};
        c.lambda_grid = fig2_lambda_grid();
        c.gamma_grid = {2};
        c.m_grid = {21};
        c.al_gamma_grid = {21};
        c.sigma2_mode = Sigma2Mode::Known;
    } else if (name == "case1" || name == "case2") {
        if (name == "case1") {
            for (std::size_t k = 1; k <= 5; ++k) c.true_coeffs.emplace_back(k, 1.0);
        } else {
            for (std::size_t k = 1; k <= 64; ++k) c.true_coeffs.emplace_back(k, 5.0 / static_cast<double>(k));
        }
        c.methods = {Family::Hard, Family::Soft, Family::Firm, Family::ScaledSoft};
        c.lambda_grid = selection_lambda_grid();
        c.sigma2_mode = Sigma2Mode::Estimated;
        for (std::size_t k = c.n / 2 + 1; k <= c.n; ++k) c.zero_index_set.push_back(k);
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

Stat Accumulator::stat() const {
    Stat s;
    s.count = count_;
    if (count_ == 0) return s;
    const double cnt = static_cast<double>(count_);
    s.mean = sum_ / cnt;
    if (count_ > 1) {
        const double var = (sum_sq_ - sum_ * sum_ / cnt) / (cnt - 1.0);
        s.sd = std::sqrt(std::max(var, 0.0));
    }
    return s;
}

ThresholdRule SweepMethod::at(double lambda) const {
    if (family == Family::AdaptiveLasso) {
        return ThresholdRule::adaptive_lasso(std::pow(lambda, hyper + 1.0), hyper);
    }
    return ThresholdRule::make(family, lambda, hyper);
}

std::vector<SweepMethod> sweep_methods(const ExperimentConfig& config) {
    std::vector<SweepMethod> out;
    for (Family f : config.methods) {
        const std::string base(family_name(f));
        switch (f) {
            case Family::Firm:
                for (double g : config.gamma_grid) out.push_back({f, g, base + "_g" + format_double(g)});
                break;
            case Family::ScaledSoft:
                for (double m : config.m_grid) out.push_back({f, m, base + "_m" + format_double(m)});
                break;
            case Family::AdaptiveLasso:
                for (double g : config.al_gamma_grid) out.push_back({f, g, base + "_g" + format_double(g)});
                break;
            default:
                out.push_back({f, 0.0, base});
                break;
        }
    }
    return out;
}

double resolve_sigma2(const ExperimentConfig& config, std::span<const double> bhat) {
    switch (config.sigma2_mode) {
        case Sigma2Mode::Known: return config.sigma2;
        case Sigma2Mode::Estimated: {
            const IndexSet j = config.noise_indices();
            return estimate_sigma2(bhat, j);
        }
        case Sigma2Mode::Mad: {
            std::vector<double> detail;
            for (std::size_t k : config.noise_indices()) detail.push_back(bhat[k]);
            return estimate_sigma2_mad(detail, bhat.size());
        }
    }
    return config.sigma2;
}

namespace {

constexpr std::size_t kBlockTrials = 32;

// Runs fn(trial, values) for every trial and reduces each field with sums
// taken trial-by-trial inside fixed-size blocks and then block-by-block, so
// the result does not depend on the number of threads.
template <class Fn>
std::vector<Accumulator> run_trials(std::size_t trials, std::size_t fields, unsigned threads, Fn fn) {
    const std::size_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    std::vector<std::vector<Accumulator>> partial(blocks, std::vector<Accumulator>(fields));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        std::vector<double> values(fields);
        for (;;) {
            const std::size_t block = next.fetch_add(1);
            if (block >= blocks) return;
            try {
                const std::size_t end = std::min(trials, (block + 1) * kBlockTrials);
                for (std::size_t t = block * kBlockTrials; t < end; ++t) {
                    std::fill(values.begin(), values.end(), 0.0);
                    fn(t, std::span<double>(values));
                    for (std::size_t f = 0; f < fields; ++f) partial[block][f].add(values[f]);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(blocks);
                return;
            }
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<Accumulator> total(fields);
    for (const auto& block : partial) {
        for (std::size_t f = 0; f < fields; ++f) total[f].merge(block[f]);
    }
    return total;
}

struct Trial {
    Coefficients bhat;
};

Trial draw_trial(const ExperimentConfig& config, const OrthogonalDesign& design,
                 const Coefficients& truth, std::size_t t) {
    RngStream rng(config.master_seed, t);
    const Signal y = generate_observation(design, truth, config.sigma2, rng);
    return {design.analyze(y)};
}

double covariance_term(std::span<const double> beta, std::span<const double> bhat,
                       std::span<const double> truth) {
    double sum = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) sum += beta[k] * (bhat[k] - truth[k]);
    return static_cast<double>(beta.size()) * sum;
}

enum SweepField : std::size_t {
    kRisk, kKhat, kSure, kDof1, kDof2, kDofTotal, kEmpirical, kSureMinusRisk, kEmpMinusFormula,
    kSweepFields
};

}  // namespace

McSummary run_sweep(const ExperimentConfig& config, RunOptions options) {
    config.validate();
    const OrthogonalDesign design = OrthogonalDesign::trig(config.n);
    const Coefficients truth = config.truth();
    const std::vector<SweepMethod> methods = sweep_methods(config);
    const std::vector<double>& lambdas = config.lambda_grid;

    std::vector<std::vector<ThresholdRule>> rules(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
        for (double l : lambdas) rules[i].push_back(methods[i].at(l));
    }

    const std::size_t per_method = lambdas.size() * kSweepFields;
    const auto acc = run_trials(
        config.trials, methods.size() * per_method, options.threads,
        [&](std::size_t t, std::span<double> out) {
            const Trial trial = draw_trial(config, design, truth, t);
            const double s2 = resolve_sigma2(config, trial.bhat);
            for (std::size_t i = 0; i < methods.size(); ++i) {
                for (std::size_t j = 0; j < lambdas.size(); ++j) {
                    const ThresholdRule& rule = rules[i][j];
                    double* v = out.data() + i * per_method + j * kSweepFields;
                    const Coefficients beta = apply_vector(rule, trial.bhat);
                    v[kRisk] = actual_risk(beta, truth);
                    v[kKhat] = static_cast<double>(active_set(trial.bhat, rule.threshold()).size());
                    v[kEmpirical] = covariance_term(beta, trial.bhat, truth);
                    if (rule.family() != Family::Hard) {
                        const SureReport rep = sure(rule, trial.bhat, s2);
                        v[kSure] = rep.sure;
                        v[kDof1] = rep.dof.d1;
                        v[kDof2] = rep.dof.d2;
                        v[kDofTotal] = rep.dof.total;
                        v[kSureMinusRisk] = rep.sure - v[kRisk];
                        v[kEmpMinusFormula] = v[kEmpirical] - rep.dof.total;
                    }
                }
            }
        });

    McSummary summary;
    summary.config = config;
    summary.trials = config.trials;
    summary.lambdas = lambdas;
    for (double l : lambdas) {
        summary.ht_theory.push_back(config.sigma2 > 0.0 ? ht_dof_theoretical(truth, config.sigma2, l)
                                                        : DofBreakdown{});
    }
    for (std::size_t i = 0; i < methods.size(); ++i) {
        MethodCurve curve{methods[i], {}};
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            const Accumulator* a = acc.data() + i * per_method + j * kSweepFields;
            CurvePoint p;
            p.lambda = lambdas[j];
            p.has_sure = methods[i].family != Family::Hard;
            p.risk = a[kRisk].stat();
            p.k_hat = a[kKhat].stat();
            p.empirical_dof = a[kEmpirical].stat();
            if (p.has_sure) {
                p.sure = a[kSure].stat();
                p.dof1 = a[kDof1].stat();
                p.dof2 = a[kDof2].stat();
                p.dof_total = a[kDofTotal].stat();
                p.sure_minus_risk = a[kSureMinusRisk].stat();
                p.empirical_minus_formula = a[kEmpMinusFormula].stat();
            }
            curve.points.push_back(p);
        }
        summary.curves.push_back(std::move(curve));
    }
    return summary;
}

namespace {

enum SelectField : std::size_t { kSelRisk, kSelKhat, kSelErr, kSelLambda, kSelSigma2, kSelectFields };

std::vector<ThresholdRule> selection_candidates(const ExperimentConfig& config, Family family) {
    std::vector<ThresholdRule> out;
    switch (family) {
        case Family::Hard: break;
        case Family::Soft:
        case Family::Garrote:
            for (double l : config.lambda_grid) out.push_back(ThresholdRule::make(family, l));
            break;
        case Family::Firm:
            for (double g : config.gamma_grid) {
                for (double l : config.lambda_grid) out.push_back(ThresholdRule::firm(l, g));
            }
            break;
        case Family::ScaledSoft:
            for (double m : config.m_grid) {
                for (double l : config.lambda_grid) out.push_back(ThresholdRule::make(family, l, m));
            }
            break;
        case Family::AdaptiveLasso:
            for (double g : config.al_gamma_grid) {
                for (double l : config.lambda_grid) {
                    out.push_back(ThresholdRule::adaptive_lasso(std::pow(l, g + 1.0), g));
                }
            }
            break;
    }
    return out;
}

}  // namespace

McSummary run_model_selection(const ExperimentConfig& config, RunOptions options) {
    config.validate();
    const OrthogonalDesign design = OrthogonalDesign::trig(config.n);
    const Coefficients truth = config.truth();
    const IndexSet k_star = config.support();

    std::vector<std::vector<ThresholdRule>> candidates;
    for (Family f : config.methods) candidates.push_back(selection_candidates(config, f));

    const std::size_t methods = config.methods.size();
    const auto acc = run_trials(
        config.trials, methods * kSelectFields, options.threads,
        [&](std::size_t t, std::span<double> out) {
            const Trial trial = draw_trial(config, design, truth, t);
            const double s2 = resolve_sigma2(config, trial.bhat);
            for (std::size_t i = 0; i < methods; ++i) {
                double* v = out.data() + i * kSelectFields;
                std::optional<ThresholdRule> rule;
                if (config.methods[i] == Family::Hard) {
                    rule = ThresholdRule::hard(universal_threshold(s2, config.n));
                } else {
                    rule = grid_select(candidates[i], trial.bhat, s2).rule;
                }
                const Coefficients beta = apply_vector(*rule, trial.bhat);
                const IndexSet active = active_set(trial.bhat, rule->threshold());
                v[kSelRisk] = actual_risk(beta, truth);
                v[kSelKhat] = static_cast<double>(active.size());
                v[kSelErr] = static_cast<double>(selection_error(k_star, active));
                v[kSelLambda] = rule->threshold();
                v[kSelSigma2] = s2;
            }
        });

    McSummary summary;
    summary.config = config;
    summary.trials = config.trials;
    for (std::size_t i = 0; i < methods; ++i) {
        const Accumulator* a = acc.data() + i * kSelectFields;
        summary.selection.push_back({config.methods[i], a[kSelRisk].stat(), a[kSelKhat].stat(),
                                     a[kSelErr].stat(), a[kSelLambda].stat(), a[kSelSigma2].stat()});
    }
    return summary;
}

PairedDof paired_dof(const ExperimentConfig& config, const ThresholdRule& rule, RunOptions options) {
    config.validate();
    const OrthogonalDesign design = OrthogonalDesign::trig(config.n);
    const Coefficients truth = config.truth();
    const bool has_formula = rule.family() != Family::Hard;
    const auto acc = run_trials(config.trials, 3, options.threads, [&](std::size_t t, std::span<double> out) {
        const Trial trial = draw_trial(config, design, truth, t);
        const Coefficients beta = apply_vector(rule, trial.bhat);
        out[0] = covariance_term(beta, trial.bhat, truth);
        if (has_formula) {
            out[1] = dof(rule, trial.bhat, config.sigma2).total;
            out[2] = out[0] - out[1];
        }
    });
    PairedDof result;
    result.empirical = acc[0].stat();
    if (has_formula) {
        result.formula = acc[1].stat();
        result.difference = acc[2].stat();
    }
    return result;
}

double empirical_dof(const ExperimentConfig& config, const ThresholdRule& rule, RunOptions options) {
    return paired_dof(config, rule, options).empirical.mean;
}

}  // namespace sst
