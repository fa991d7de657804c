#include "sst/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "sst/design.hpp"
#include "sst/io.hpp"
#include "sst/montecarlo.hpp"
#include "sst/plot.hpp"
#include "sst/risk.hpp"
#include "sst/select.hpp"
#include "sst/threshold.hpp"

namespace sst {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flag-level problems map to exit code 2.
class FlagError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RuleFlags {
    std::string method;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::optional<double> m;
    std::optional<double> lambda_r;
};

void add_rule_flags(CLI::App& cmd, RuleFlags& f) {
    cmd.add_option("--method", f.method, "ht|st|ng|ft|sst|al")->required();
    cmd.add_option("--lambda", f.lambda, "threshold level");
    cmd.add_option("--gamma", f.gamma, "firm band / adaptive lasso exponent");
    cmd.add_option("--m", f.m, "scaled soft thresholding order (odd)");
    cmd.add_option("--lambda-r", f.lambda_r, "adaptive lasso regularization");
}

Family family_from_flag(const std::string& name) {
    try {
        return parse_family(name);
    } catch (const std::invalid_argument& e) {
        throw FlagError(e.what());
    }
}

ThresholdRule rule_from_flags(const RuleFlags& f) {
    const Family family = family_from_flag(f.method);
    const auto need = [](const std::optional<double>& v, const char* flag) {
        if (!v) throw FlagError(std::string(flag) + " is required for this method");
        return *v;
    };
    try {
        switch (family) {
            case Family::Firm: return ThresholdRule::firm(need(f.lambda, "--lambda"), need(f.gamma, "--gamma"));
            case Family::ScaledSoft: {
                const double m = need(f.m, "--m");
                if (m != std::round(m) || static_cast<long long>(m) % 2 == 0) throw FlagError("m must be odd");
                return ThresholdRule::scaled_soft(need(f.lambda, "--lambda"), static_cast<int>(m));
            }
            case Family::AdaptiveLasso:
                return ThresholdRule::adaptive_lasso(need(f.lambda_r, "--lambda-r"), need(f.gamma, "--gamma"));
            default: return ThresholdRule::make(family, need(f.lambda, "--lambda"));
        }
    } catch (const FlagError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw FlagError(e.what());
    }
}

struct Observation {
    Signal y;
    std::optional<OrthogonalDesign> design;
    Coefficients bhat;
};

Observation load_observation(const std::string& signal_path, const std::string& design_path) {
    Observation obs;
    obs.y = read_vector_csv(signal_path);
    const std::size_t n = obs.y.size();
    if (!design_path.empty()) {
        obs.design = read_design_csv(design_path);
        if (obs.design->size() != n) throw InputError("design size does not match the signal length");
    } else {
        if (n < 4 || n % 2 != 0) throw InputError("signal length must be even and >= 4");
        obs.design = OrthogonalDesign::trig(n);
    }
    obs.bhat = obs.design->analyze(obs.y);
    return obs;
}

// Number, "estimate" (second-half coefficients) or "mad".
double sigma2_from_flag(const std::string& flag, std::span<const double> bhat) {
    const std::size_t n = bhat.size();
    std::vector<std::size_t> noise;
    for (std::size_t k = n / 2; k < n; ++k) noise.push_back(k);
    if (flag == "estimate" || flag == "estimated") return estimate_sigma2(bhat, noise);
    if (flag == "mad") {
        std::vector<double> detail(bhat.begin() + static_cast<std::ptrdiff_t>(n / 2), bhat.end());
        return estimate_sigma2_mad(detail, n);
    }
    double value = 0.0;
    const auto res = std::from_chars(flag.data(), flag.data() + flag.size(), value);
    if (res.ec != std::errc() || res.ptr != flag.data() + flag.size() || !(value >= 0.0) || !std::isfinite(value)) {
        throw FlagError("--sigma2 must be a non-negative number, 'estimate' or 'mad'");
    }
    return value;
}

void write_fit(const fs::path& out_dir, const Observation& obs, const Coefficients& beta) {
    fs::create_directories(out_dir);
    write_vector_csv(out_dir / "denoised.csv", obs.design->synthesize(beta));
    write_vector_csv(out_dir / "coefficients.csv", beta);
}

json rule_json(const ThresholdRule& rule) {
    json j{{"method", std::string(family_name(rule.family()))}, {"threshold", rule.threshold()}};
    switch (rule.family()) {
        case Family::Firm: j["gamma"] = rule.gamma(); j["lambda"] = rule.threshold(); break;
        case Family::ScaledSoft: j["m"] = rule.m(); j["lambda"] = rule.threshold(); break;
        case Family::AdaptiveLasso: j["gamma"] = rule.gamma(); j["lambda_r"] = rule.lambda_r(); break;
        default: j["lambda"] = rule.threshold(); break;
    }
    return j;
}

struct ExperimentFlags {
    std::string config;
    std::string preset;
    std::string out = ".";
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    bool quick = false;
    unsigned threads = 0;
};

void add_experiment_flags(CLI::App& cmd, ExperimentFlags& f) {
    cmd.add_option("--config", f.config, "experiment JSON");
    cmd.add_option("--preset", f.preset, "case1|case2|fig2");
    cmd.add_option("--out", f.out, "output directory");
    cmd.add_option("--trials", f.trials, "Monte Carlo trials");
    cmd.add_option("--seed", f.seed, "master seed");
    cmd.add_flag("--quick", f.quick, "200 trials unless --trials is given");
    cmd.add_option("--threads", f.threads, "worker threads (0: all cores)");
}

ExperimentConfig load_experiment(const ExperimentFlags& f) {
    if (!f.config.empty() && !f.preset.empty()) throw FlagError("use either --config or --preset");
    ExperimentConfig config;
    if (!f.config.empty()) {
        try {
            config = read_config(f.config);
        } catch (const std::invalid_argument& e) {
            throw InputError(f.config + ": " + e.what());
        }
    } else if (!f.preset.empty()) {
        try {
            config = preset_config(f.preset);
        } catch (const std::invalid_argument& e) {
            throw FlagError(e.what());
        }
    } else {
        throw FlagError("--config or --preset is required");
    }
    if (f.quick) config.trials = 200;
    if (f.trials) config.trials = *f.trials;
    if (f.seed) config.master_seed = *f.seed;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw FlagError(e.what());
    }
    return config;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thresholding estimators, SURE and Monte Carlo experiments for orthogonal regression"};
    app.name("sst");
    app.require_subcommand(1);

    // denoise
    auto* denoise = app.add_subcommand("denoise", "threshold one signal under the trig design");
    std::string signal_path, design_path, sigma2_flag = "mad", out_dir = ".";
    RuleFlags rule_flags;
    bool want_sure = false;
    denoise->add_option("--input", signal_path, "single-column signal CSV")->required();
    denoise->add_option("--design", design_path, "n x n design CSV (default: trig basis)");
    denoise->add_option("--sigma2", sigma2_flag, "noise variance: number, estimate, or mad");
    denoise->add_option("--out", out_dir, "output directory");
    denoise->add_flag("--sure", want_sure, "require a SURE report");
    add_rule_flags(*denoise, rule_flags);

    // select
    auto* select = app.add_subcommand("select", "SURE grid search on one signal");
    std::string sel_method;
    std::vector<double> lambda_grid = selection_lambda_grid();
    std::vector<double> hyper_grid;
    select->add_option("--input", signal_path, "single-column signal CSV")->required();
    select->add_option("--design", design_path, "n x n design CSV (default: trig basis)");
    select->add_option("--method", sel_method, "st|ng|ft|sst|al")->required();
    select->add_option("--lambda-grid", lambda_grid, "comma-separated levels")->delimiter(',');
    select->add_option("--hyper-grid", hyper_grid, "gamma or m values")->delimiter(',');
    select->add_option("--sigma2", sigma2_flag, "noise variance: number, estimate, or mad");
    select->add_option("--out", out_dir, "output directory");

    // sweep / montecarlo
    ExperimentFlags sweep_flags, mc_flags;
    auto* sweep = app.add_subcommand("sweep", "risk, SURE and DOF curves over lambda");
    add_experiment_flags(*sweep, sweep_flags);
    auto* montecarlo = app.add_subcommand("montecarlo", "model-selection comparison");
    add_experiment_flags(*montecarlo, mc_flags);

    // plot
    auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
    std::string plot_input, plot_kind = "dof", plot_out;
    plot->add_option("--input", plot_input, "sweep CSV")->required();
    plot->add_option("--kind", plot_kind, "dof|risk");
    plot->add_option("--out", plot_out, "output SVG path")->required();

    // design
    auto* design_cmd = app.add_subcommand("design", "write or check an orthogonal design");
    std::size_t design_n = 0;
    std::string design_out, design_check;
    design_cmd->add_option("--n", design_n, "size of the trig design");
    design_cmd->add_option("--out", design_out, "output CSV");
    design_cmd->add_option("--check", design_check, "validate a design CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitBadFlags;
    }

    try {
        if (*denoise) {
            const ThresholdRule rule = rule_from_flags(rule_flags);
            const Observation obs = load_observation(signal_path, design_path);
            const double s2 = sigma2_from_flag(sigma2_flag, obs.bhat);
            const Coefficients beta = apply_vector(rule, obs.bhat);
            json report{{"rule", rule_json(rule)},
                        {"n", obs.bhat.size()},
                        {"sigma2", s2},
                        {"k_hat", active_set(obs.bhat, rule.threshold()).size()}};
            if (rule.family() != Family::Hard || want_sure) {
                report["sure"] = to_json(sure(rule, obs.bhat, s2));
            } else {
                report["sure"] = nullptr;
            }
            write_fit(out_dir, obs, beta);
            write_text(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
            out << rule.describe() << ": k_hat=" << report["k_hat"].get<std::size_t>() << "\n";
        } else if (*select) {
            const Family family = family_from_flag(sel_method);
            if (family == Family::Hard) throw NoDataDrivenDof();
            const Observation obs = load_observation(signal_path, design_path);
            const double s2 = sigma2_from_flag(sigma2_flag, obs.bhat);
            SelectionResult result = [&] {
                try {
                    return grid_select(family, lambda_grid, hyper_grid, obs.bhat, s2);
                } catch (const std::invalid_argument& e) {
                    throw FlagError(e.what());
                }
            }();
            write_fit(out_dir, obs, apply_vector(result.rule, obs.bhat));
            json doc{{"rule", rule_json(result.rule)},
                     {"sure", to_json(result.report)},
                     {"k_hat", result.k_hat},
                     {"searched", result.searched}};
            json active = json::array();
            for (std::size_t k : result.active) active.push_back(k + 1);
            doc["active_set"] = active;
            write_text(fs::path(out_dir) / "selection.json", doc.dump(2) + "\n");
            out << result.rule.describe() << ": sure=" << format_double(result.sure()) << "\n";
        } else if (*sweep) {
            const ExperimentConfig config = load_experiment(sweep_flags);
            const McSummary summary = run_sweep(config, {sweep_flags.threads});
            fs::create_directories(sweep_flags.out);
            write_text(fs::path(sweep_flags.out) / "sweep.csv", sweep_csv(summary));
            write_text(fs::path(sweep_flags.out) / "sweep.json", to_json(summary).dump(2) + "\n");
            out << "sweep: " << summary.curves.size() << " methods x " << summary.lambdas.size()
                << " lambdas, " << summary.trials << " trials\n";
        } else if (*montecarlo) {
            const ExperimentConfig config = load_experiment(mc_flags);
            const McSummary summary = run_model_selection(config, {mc_flags.threads});
            fs::create_directories(mc_flags.out);
            const std::string csv = selection_csv(summary);
            write_text(fs::path(mc_flags.out) / "selection.csv", csv);
            write_text(fs::path(mc_flags.out) / "selection.json", to_json(summary).dump(2) + "\n");
            out << csv;
        } else if (*plot) {
            PlotKind kind;
            try {
                kind = parse_plot_kind(plot_kind);
            } catch (const std::invalid_argument& e) {
                throw FlagError(e.what());
            }
            const auto series = sweep_series(read_text(plot_input), kind);
            const std::string svg = kind == PlotKind::Dof
                                        ? render_svg(series, "Degrees of freedom", "DOF")
                                        : render_svg(series, "Risk and SURE", "risk");
            write_text(plot_out, svg);
        } else if (*design_cmd) {
            if (!design_check.empty()) {
                const OrthogonalDesign d = read_design_csv(design_check);
                out << "ok: n=" << d.size() << " gram deviation " << format_double(d.gram_deviation()) << "\n";
            } else {
                if (design_out.empty()) throw FlagError("--out or --check is required");
                OrthogonalDesign d = [&] {
                    try {
                        return OrthogonalDesign::trig(design_n);
                    } catch (const std::invalid_argument& e) {
                        throw FlagError(e.what());
                    }
                }();
                write_design_csv(design_out, d);
            }
        }
    } catch (const FlagError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadFlags;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const NoDataDrivenDof& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoSure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace sst
