// Acceptance checks. Prints one PASS/FAIL line per criterion, followed by
// indented detail lines, and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sst/cli.hpp"
#include "sst/design.hpp"
#include "sst/io.hpp"
#include "sst/montecarlo.hpp"
#include "sst/risk.hpp"
#include "sst/select.hpp"
#include "sst/threshold.hpp"

using namespace sst;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kTrials = 5000;

struct Report {
    std::vector<std::string> details;
    bool ok = true;

    void check(bool condition, const std::string& what) {
        if (!condition) ok = false;
        details.push_back(std::string(condition ? "ok   " : "MISS ") + what);
    }
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Case-1 truth with known noise variance.
ExperimentConfig case1_known() {
    ExperimentConfig c = preset_config("fig2");
    c.trials = kTrials;
    return c;
}

Report operator_identities() {
    Report r;
    double ng = 0, al = 0, hsm = 0, ideal = 0;
    bool sandwich = true;
    for (double lambda : {0.0625, 0.3, 1.0, 2.0}) {
        for (int i = -20000; i <= 20000; ++i) {
            const double u = i * 2.5e-4 * 4 * lambda;
            ng = std::max(ng, std::abs(apply(ThresholdRule::garrote(lambda), u) -
                                       apply(ThresholdRule::scaled_soft(lambda, 1), u)));
            for (int m : {1, 3, 5, 21}) {
                const auto a = ThresholdRule::adaptive_lasso(std::pow(lambda, m + 1), m);
                if (std::abs(std::abs(u) - lambda) > 1e-9 * lambda) {
                    al = std::max(al, std::abs(apply(a, u) - apply(ThresholdRule::scaled_soft(lambda, m), u)) /
                                          std::max(1.0, std::abs(u)));
                }
                if (u >= 0) {
                    const double s = apply(ThresholdRule::soft(lambda), u);
                    const double t = apply(ThresholdRule::scaled_soft(lambda, m), u);
                    const double h = apply(ThresholdRule::hard(lambda), u);
                    sandwich = sandwich && s <= t && t <= h;
                }
            }
            hsm = std::max(hsm, std::abs(apply(ThresholdRule::soft(lambda), u) + hard_jump(lambda, u) -
                                         apply(ThresholdRule::hard(lambda), u)));
            if (std::abs(u) > lambda) {
                ideal = std::max(ideal, std::abs(ideal_scaling(lambda, u) * apply(ThresholdRule::soft(lambda), u) - u) /
                                            std::abs(u));
            }
        }
    }
    r.check(ng <= 1e-12, "NG vs SST(m=1) max diff " + num(ng) + " <= 1e-12");
    r.check(al <= 1e-12, "AL(lambda^(m+1), m) vs SST(lambda, m) max rel diff " + num(al) + " <= 1e-12");
    r.check(hsm <= 1e-12, "H = S + M max diff " + num(hsm) + " <= 1e-12");
    r.check(ideal <= 1e-12, "ideal scaling * S = u max rel diff " + num(ideal) + " <= 1e-12");
    r.check(sandwich, "S <= SST <= H on u >= 0");
    return r;
}

Report orthogonality() {
    Report r;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> dist;
    for (std::size_t n : {4u, 8u, 64u, 256u, 1024u}) {
        const auto d = OrthogonalDesign::trig(n);
        const double dev = d.gram_deviation();
        std::vector<double> y(n);
        for (double& v : y) v = dist(rng);
        const auto back = d.synthesize(d.analyze(y));
        double num2 = 0, den = 0;
        for (std::size_t i = 0; i < n; ++i) {
            num2 += (back[i] - y[i]) * (back[i] - y[i]);
            den += y[i] * y[i];
        }
        const double rel = std::sqrt(num2 / den);
        r.check(dev <= 1e-8, "n=" + std::to_string(n) + " max|X'X - nI| " + num(dev) + " <= 1e-8");
        r.check(rel <= 1e-9, "n=" + std::to_string(n) + " round trip rel err " + num(rel) + " <= 1e-9");
    }
    return r;
}

Report stein_identity() {
    Report r;
    const auto c = case1_known();
    for (double lambda : {0.0625, 0.5, 1.0}) {
        for (const auto& rule : {ThresholdRule::soft(lambda), ThresholdRule::garrote(lambda),
                                 ThresholdRule::firm(lambda, 2.0), ThresholdRule::scaled_soft(lambda, 5),
                                 ThresholdRule::scaled_soft(lambda, 21)}) {
            const auto p = paired_dof(c, rule);
            const double gap = std::abs(p.empirical.mean - p.formula.mean);
            const double se = p.difference.se();
            r.check(gap <= 3 * se, rule.describe() + ": empirical " + num(p.empirical.mean) + " formula " +
                                       num(p.formula.mean) + " |diff| " + num(gap) + " <= 3se " + num(3 * se));
        }
    }
    return r;
}

struct SweepRuns {
    McSummary coarse;  // HT, ST, SST(21) on the preset grid
    McSummary fine;    // SST(21) on a 100-point log grid
};

const MethodCurve& curve(const McSummary& s, Family f) {
    for (const auto& c : s.curves) {
        if (c.method.family == f) return c;
    }
    throw std::runtime_error("missing curve");
}

Report sure_unbiased(const SweepRuns& runs) {
    Report r;
    for (Family f : {Family::Soft, Family::ScaledSoft}) {
        const auto& cv = curve(runs.coarse, f);
        int misses = 0;
        double worst = 0;
        for (const auto& p : cv.points) {
            const double z = p.sure_minus_risk.se() > 0 ? std::abs(p.sure_minus_risk.mean) / p.sure_minus_risk.se() : 0;
            worst = std::max(worst, z);
            if (std::abs(p.sure.mean - p.risk.mean) > 3 * p.sure_minus_risk.se()) {
                ++misses;
                r.details.push_back("     " + cv.method.label + " lambda=" + num(p.lambda) + " sure " +
                                    num(p.sure.mean) + " risk " + num(p.risk.mean) + " se " +
                                    num(p.sure_minus_risk.se()));
            }
        }
        r.check(misses == 0, cv.method.label + ": " + std::to_string(cv.points.size()) + " lambdas, " +
                                 std::to_string(misses) + " outside 3se, worst |z| " + num(worst));
    }
    return r;
}

Report dof_curve(const SweepRuns& runs) {
    Report r;
    const auto& sst = curve(runs.coarse, Family::ScaledSoft);
    int misses = 0;
    for (std::size_t j = 0; j < runs.coarse.lambdas.size(); ++j) {
        const double lambda = runs.coarse.lambdas[j];
        if (lambda < 0.01 || lambda > 1.0) continue;
        const double theory = runs.coarse.ht_theory[j].d2;
        const double got = sst.points[j].dof2.mean;
        const double rel = std::abs(got - theory) / theory;
        const bool ok = rel <= 0.10;
        if (!ok) ++misses;
        r.details.push_back(std::string(ok ? "     " : "     off ") + "lambda=" + num(lambda) + " sst_d2 " + num(got) +
                            " ht_d2 " + num(theory) + " rel " + num(rel));
    }
    r.check(misses == 0, "SST(m=21) d2 within 10% of HT d2 on [0.01, 1]: " + std::to_string(misses) + " lambdas off");

    const auto& fine = curve(runs.fine, Family::ScaledSoft);
    std::size_t best = 0;
    for (std::size_t j = 1; j < fine.points.size(); ++j) {
        if (fine.points[j].dof2.mean > fine.points[best].dof2.mean) best = j;
    }
    const double peak = fine.points[best].lambda;
    r.check(peak >= 0.05 && peak <= 0.08, "d2 peak on fine grid at lambda=" + num(peak) + " in [0.05, 0.08]");
    return r;
}

Report risk_shape(const SweepRuns& runs) {
    Report r;
    const auto argmin = [](const MethodCurve& cv) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < cv.points.size(); ++j) {
            if (cv.points[j].risk.mean < cv.points[best].risk.mean) best = j;
        }
        return cv.points[best].lambda;
    };
    const auto& st = curve(runs.coarse, Family::Soft);
    const auto& sst = curve(runs.coarse, Family::ScaledSoft);
    const auto& ht = curve(runs.coarse, Family::Hard);
    const double a_st = argmin(st), a_sst = argmin(sst), a_ht = argmin(ht);
    r.check(a_st < a_sst, "argmin risk ST " + num(a_st) + " < SST " + num(a_sst));
    r.check(a_st < a_ht, "argmin risk ST " + num(a_st) + " < HT " + num(a_ht));
    bool ht_above = false, sst_above = false;
    for (std::size_t j = 0; j < st.points.size(); ++j) {
        const double lambda = st.points[j].lambda;
        if (lambda < 0.05 || lambda > 0.1) continue;
        ht_above = ht_above || ht.points[j].risk.mean > st.points[j].risk.mean;
        sst_above = sst_above || sst.points[j].risk.mean > st.points[j].risk.mean;
        r.details.push_back("     lambda=" + num(lambda) + " risk st " + num(st.points[j].risk.mean) + " sst " +
                            num(sst.points[j].risk.mean) + " ht " + num(ht.points[j].risk.mean));
    }
    r.check(ht_above, "HT risk above ST somewhere in [0.05, 0.1]");
    r.check(sst_above, "SST risk above ST somewhere in [0.05, 0.1]");
    return r;
}

const MethodSelection& selected(const McSummary& s, Family f) {
    for (const auto& m : s.selection) {
        if (m.family == f) return m;
    }
    throw std::runtime_error("missing method");
}

void near_target(Report& r, const std::string& what, const Stat& got, double target, double reference_sd) {
    const double tol = std::max(0.10 * target, 3 * reference_sd / std::sqrt(static_cast<double>(kTrials)));
    r.check(std::abs(got.mean - target) <= tol,
            what + " " + num(got.mean) + " (sd " + num(got.sd) + ") vs " + num(target) + " tol " + num(tol));
}

Report table1() {
    Report r;
    auto c1 = preset_config("case1");
    c1.trials = kTrials;
    const auto s1 = run_model_selection(c1);
    const auto& ht1 = selected(s1, Family::Hard);
    const auto& st1 = selected(s1, Family::Soft);
    const auto& ft1 = selected(s1, Family::Firm);
    const auto& sst1 = selected(s1, Family::ScaledSoft);
    near_target(r, "case1 HT risk", ht1.risk, 0.0300, 0.0257);
    near_target(r, "case1 ST risk", st1.risk, 0.1164, 0.0406);
    near_target(r, "case1 FT risk", ft1.risk, 0.0606, 0.1199);
    near_target(r, "case1 SST risk", sst1.risk, 0.0384, 0.0651);
    near_target(r, "case1 ST k_hat", st1.k_hat, 39.214, 12.6461);
    near_target(r, "case1 SST k_hat", sst1.k_hat, 7.193, 7.1939);
    const double others1 = std::min({st1.risk.mean, ft1.risk.mean, sst1.risk.mean});
    r.check(ht1.risk.mean < others1, "case1 HT has the lowest risk");
    r.check(st1.risk.mean > std::max({ht1.risk.mean, ft1.risk.mean, sst1.risk.mean}), "case1 ST has the highest risk");
    r.details.push_back("     case1 SErr: ht " + num(ht1.serr.mean) + " st " + num(st1.serr.mean) + " ft " +
                        num(ft1.serr.mean) + " sst " + num(sst1.serr.mean));

    auto c2 = preset_config("case2");
    c2.trials = kTrials;
    const auto s2 = run_model_selection(c2);
    const auto& ht2 = selected(s2, Family::Hard);
    const auto& st2 = selected(s2, Family::Soft);
    const auto& ft2 = selected(s2, Family::Firm);
    const auto& sst2 = selected(s2, Family::ScaledSoft);
    near_target(r, "case2 ST risk", st2.risk, 0.5393, 0.0690);
    near_target(r, "case2 SST risk", sst2.risk, 0.5600, 0.1170);
    near_target(r, "case2 HT risk", ht2.risk, 0.7876, 0.1058);
    near_target(r, "case2 ST k_hat", st2.k_hat, 126.768, 20.1387);
    r.check(st2.risk.mean < sst2.risk.mean && sst2.risk.mean < ft2.risk.mean && ft2.risk.mean < ht2.risk.mean,
            "case2 risk order ST " + num(st2.risk.mean) + " < SST " + num(sst2.risk.mean) + " < FT " +
                num(ft2.risk.mean) + " < HT " + num(ht2.risk.mean));
    return r;
}

Report convergence_in_m() {
    Report r;
    auto c = case1_known();
    c.methods = {Family::ScaledSoft};
    c.m_grid = {3, 7, 21, 51};
    c.lambda_grid = {0.0625};
    const auto s = run_sweep(c);
    const double theory = s.ht_theory[0].d2;
    std::vector<double> gaps;
    for (const auto& cv : s.curves) {
        gaps.push_back(std::abs(cv.points[0].dof2.mean - theory));
        r.details.push_back("     " + cv.method.label + " d2 " + num(cv.points[0].dof2.mean) + " (se " +
                            num(cv.points[0].dof2.se()) + ") ht_d2 " + num(theory) + " gap " + num(gaps.back()));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && gaps[i] < gaps[i - 1];
    r.check(decreasing, "gap decreases over m = 3, 7, 21, 51");
    r.check(3 * gaps.back() <= gaps.front(), "gap(m=51) * 3 <= gap(m=3)");
    return r;
}

Report determinism() {
    Report r;
    std::random_device rd;
    const fs::path root = fs::temp_directory_path() / ("sst_accept_" + std::to_string(rd()));
    const auto run = [&](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        return run_cli(args, out, err);
    };
    const std::vector<std::pair<std::string, std::vector<std::string>>> jobs{
        {"fig2", {"sweep.csv", "sweep.json"}},
        {"case1", {"selection.csv", "selection.json"}},
        {"case2", {"selection.csv", "selection.json"}}};
    for (const auto& [preset, files] : jobs) {
        const std::string cmd = preset == "fig2" ? "sweep" : "montecarlo";
        std::vector<std::string> texts;
        for (const char* threads : {"1", "1", "3", "8"}) {
            const fs::path dir = root / (preset + "_" + std::to_string(texts.size()));
            const int code = run({cmd, "--preset", preset, "--trials", "300", "--seed", "99", "--threads", threads,
                                  "--out", dir.string()});
            std::string all;
            if (code == 0) {
                for (const auto& f : files) all += read_text(dir / f) + '\x1f';
            }
            texts.push_back(std::to_string(code) + all);
        }
        const bool same = std::all_of(texts.begin(), texts.end(), [&](const std::string& t) { return t == texts[0]; });
        r.check(same && texts[0].rfind("0", 0) == 0,
                preset + ": CSV and JSON byte-identical over 2 serial runs and 3/8 threads");
    }
    fs::remove_all(root);
    return r;
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    bool all_ok = true;
    SweepRuns runs;
    bool have_runs = false;
    const auto sweep_runs = [&]() -> const SweepRuns& {
        if (!have_runs) {
            runs.coarse = run_sweep(case1_known());
            auto fine = case1_known();
            fine.methods = {Family::ScaledSoft};
            fine.lambda_grid = log_lambda_grid(100, 0.01, 10.0);
            runs.fine = run_sweep(fine);
            have_runs = true;
        }
        return runs;
    };

    const std::vector<std::pair<std::string, std::function<Report()>>> criteria{
        {"1 operator identities", operator_identities},
        {"2 orthogonality", orthogonality},
        {"3 Stein identity", stein_identity},
        {"4 SURE unbiasedness", [&] { return sure_unbiased(sweep_runs()); }},
        {"5 DOF curve vs hard-threshold theory", [&] { return dof_curve(sweep_runs()); }},
        {"6 risk curve shape", [&] { return risk_shape(sweep_runs()); }},
        {"7 model-selection table", table1},
        {"8 convergence in m", convergence_in_m},
        {"9 determinism", determinism},
    };
    for (const auto& [name, fn] : criteria) {
        const auto start = clock::now();
        Report r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(clock::now() - start).count();
        std::printf("%s criterion %s (%.1fs)\n", r.ok ? "PASS" : "FAIL", name.c_str(), secs);
        for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        all_ok = all_ok && r.ok;
    }
    return all_ok ? 0 : 1;
}
