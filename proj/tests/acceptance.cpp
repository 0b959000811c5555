// Copyright 2026 The echobench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line (WARN for the
// soft, hypothesis-dependent ones) together with the measured quantities and its wall
// time against the stated budget. Run with no arguments for all criteria or with a
// criterion number to run one.
//
// Statistical gates use 3 sigma from measured standard errors with a 1e-12 absolute
// floor: depolarizing channels are exact fixed points of the twirl, so their analytic
// runs have zero variance and the floor only absorbs float roundoff.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "echobench/cli_app.hpp"
#include "echobench/fit.hpp"
#include "echobench/haar_lab.hpp"
#include "echobench/protocols.hpp"
#include "echobench/verify.hpp"

using namespace echobench;
namespace fs = std::filesystem;

namespace {

constexpr double kSigmaFloor = 1e-12;

struct Outcome {
    bool pass = true;
    bool soft = false;
    std::string detail;
};

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

// ---------------------------------------------------------------------------
// 1. Analytic identity suite (exact).
Outcome criterion_1() {
    Outcome out;
    Prng rng({1001, 0});
    double worst_identity = 0.0;
    double worst_trace = 0.0;
    const int dims[] = {2, 3, 4, 8};
    for (int rep = 0; rep < 50; ++rep) {
        const int dim = dims[rng.next_u64() % 4];
        const int n_kraus = 1 + static_cast<int>(rng.next_u64() % 4);
        const KrausChannel ch = KrausChannel::random_cp(dim, n_kraus, rng);
        const double p = depolarizing_strength(ch);
        worst_identity = std::max(
            worst_identity, std::abs(average_gate_fidelity(ch) - (p + (1.0 - p) / dim)));
        worst_trace = std::max(
            worst_trace, std::abs(ch.superop_trace() - invariant_two(ch.to_superoperator())));
    }
    out.pass = worst_identity <= 1e-12 && worst_trace <= 1e-9;
    out.detail = "max|F_avg - (p + (1-p)/D)| = " + fmt(worst_identity) +
                 " (<= 1e-12), max|Kraus trace - matrix trace| = " + fmt(worst_trace) +
                 " (<= 1e-9)";
    return out;
}

// ---------------------------------------------------------------------------
// 2. Twirl convergence to the depolarizing form (invariant characterization).
Outcome criterion_2() {
    Outcome out;
    const VerifyReport report = verify_lemma({1002, 0});
    double exponent = 0.0, p_err = 0.0;
    for (const auto& check : report.checks) {
        if (check.name == "distance_scaling") exponent = check.values["exponent"];
        if (check.name == "strength_projection") p_err = check.values["abs_error"];
    }
    out.pass = report.hard_pass();
    out.detail = "distance exponent = " + fmt(exponent) +
                 " (in [-0.6, -0.4]), |p_empirical - p_analytic| = " + fmt(p_err) +
                 " (<= 1e-3)";
    return out;
}

// ---------------------------------------------------------------------------
// 3. Motion-reversal estimator at D = 16 with projective readout.
Outcome criterion_3() {
    Outcome out;
    ExperimentConfig cfg;
    cfg.protocol = Protocol::motion_reversal;
    cfg.dim = 16;
    cfg.channel = KrausChannel::dephasing(4, 0.25);
    cfg.n_unitaries = 200;
    cfg.shots = 200;
    cfg.seed = {1003, 0};
    const EstimateResult result = run_motion_reversal(cfg);
    const double f_bar = average_gate_fidelity(*cfg.channel);
    const double gap = std::abs(result.f_hat - f_bar);
    out.pass = gap <= 3.0 * result.std_error && result.std_error <= 0.01;
    out.detail = "f_hat = " + fmt(result.f_hat) + ", analytic = " + fmt(f_bar) +
                 ", |gap| = " + fmt(gap) + " (<= " + fmt(3.0 * result.std_error) +
                 "), stderr = " + fmt(result.std_error) + " (<= 0.01)";
    return out;
}

// ---------------------------------------------------------------------------
// 4. Universal echo decay law: depolarizing exactly, generic channel statistically.
Outcome criterion_4() {
    Outcome out;
    std::ostringstream detail;

    ExperimentConfig cfg;
    cfg.protocol = Protocol::echo;
    cfg.dim = 8;
    cfg.channel = KrausChannel::depolarizing(8, 0.95);
    cfg.n_unitaries = 50;
    cfg.n_max = 20;
    cfg.analytic_shots = true;
    cfg.seed = {1004, 0};
    const DecayCurve curve = run_loschmidt_echo(cfg);
    double worst_gap = 0.0;
    bool points_ok = true;
    for (const auto& pt : curve.points) {
        const double expected = echo_decay_prediction({0.95, 8, 1.0}, std::lround(pt.x));
        const double gap = std::abs(pt.mean - expected);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 3.0 * pt.std_error + kSigmaFloor) points_ok = false;
    }
    const FitResult fit = fit_decay(curve, 8);
    const bool fit_ok = std::abs(fit.p_hat - 0.95) <= 0.005;
    detail << "depolarizing: max point gap = " << fmt(worst_gap)
           << ", |p_hat - 0.95| = " << fmt(std::abs(fit.p_hat - 0.95)) << " (<= 0.005)";

    // Generic (non-depolarizing) channel with the same analytic strength: mix a random
    // 3-Kraus channel with the identity so that its strength parameter is exactly 0.95.
    Prng rng({1005, 0});
    const KrausChannel base = KrausChannel::random_cp(8, 3, rng);
    const double tr_base = base.superop_trace();
    const double tr_target = 0.95 * 63.0 + 1.0;
    const double lambda = (tr_target - tr_base) / (64.0 - tr_base);
    std::vector<ComplexMatrix> ops = {std::sqrt(lambda) * identity_matrix(8)};
    for (const auto& op : base.kraus_ops()) ops.push_back(std::sqrt(1.0 - lambda) * op);
    const KrausChannel generic = KrausChannel::from_kraus(std::move(ops));
    const double p_generic = depolarizing_strength(generic);

    ExperimentConfig gcfg = cfg;
    gcfg.channel = generic;
    gcfg.seed = {1006, 0};
    const FitResult gfit = fit_decay(run_loschmidt_echo(gcfg), 8);
    const double ggap = std::abs(gfit.p_hat - p_generic);
    const bool generic_ok = ggap <= 3.0 * gfit.std_error + kSigmaFloor;
    detail << "; generic channel (p = " << fmt(p_generic) << "): |p_hat - p| = " << fmt(ggap)
           << " (<= " << fmt(3.0 * gfit.std_error) << ")";

    out.pass = points_ok && fit_ok && generic_ok;
    out.detail = detail.str();
    return out;
}

// ---------------------------------------------------------------------------
// 5. Iterated motion reversal with a mixed initial state.
Outcome criterion_5() {
    Outcome out;
    ExperimentConfig cfg;
    cfg.protocol = Protocol::iterated;
    cfg.dim = 4;
    cfg.channel = KrausChannel::depolarizing(4, 0.9);
    cfg.n_unitaries = 50;
    cfg.shots = 1000;
    cfg.n_max = 60;
    cfg.initial_purity = 0.6;
    cfg.seed = {1007, 0};
    const DecayCurve curve = run_iterated_motion_reversal(cfg);

    bool points_ok = true;
    double worst_gap = 0.0;
    for (const auto& pt : curve.points) {
        const long n = std::lround(pt.x);
        if (n > 10) continue;
        const double expected = echo_decay_prediction({0.9, 4, 0.6}, n);
        const double gap = std::abs(pt.mean - expected);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 3.0 * pt.std_error + kSigmaFloor) points_ok = false;
    }
    const CurvePoint& terminal = curve.points.back();
    const double terminal_gap = std::abs(terminal.mean - 0.25);
    const bool terminal_ok = terminal_gap <= 3.0 * terminal.std_error + kSigmaFloor;

    out.pass = points_ok && terminal_ok;
    out.detail = "max gap to p^n * 0.6 + (1-p^n)/4 over n <= 10: " + fmt(worst_gap) +
                 "; |F(60) - 1/4| = " + fmt(terminal_gap) + " (<= " +
                 fmt(3.0 * terminal.std_error) + ")";
    return out;
}

// ---------------------------------------------------------------------------
// 6. Concentration of measure: Var_U(F) shrinks with D.
Outcome criterion_6() {
    Outcome out;
    const VerifyReport report = verify_concentration({1008, 0});
    double slope = 0.0;
    for (const auto& check : report.checks)
        if (check.name == "variance_slope") slope = check.values["slope"];
    out.pass = report.hard_pass();
    out.detail = "log-log slope of Var_U(F) vs D = " + fmt(slope) + " (in [-1.5, -0.5])";
    return out;
}

// ---------------------------------------------------------------------------
// 7. Continuous-time decay under the ergodic random-walk control.
Outcome criterion_7() {
    Outcome out;
    ComplexMatrix sm(2, 2);
    sm << 0, 1, 0, 0;

    const auto max_deviation = [&](double epsilon) {
        const LindbladGenerator gen(2, ComplexMatrix(), {std::sqrt(0.3) * sm}, epsilon);
        const double gamma = lindblad_rate(gen);
        ExperimentConfig cfg;
        cfg.protocol = Protocol::lindblad_echo;
        cfg.dim = 2;
        cfg.generator = gen;
        cfg.n_unitaries = 24;
        cfg.analytic_shots = true;
        cfg.seed = {1009, 0};
        cfg.lindblad.t_max = 3.0 / gamma; // gamma t in [0, 3]
        cfg.lindblad.n_points = 30;
        cfg.lindblad.control.control_scale = 4.0;
        cfg.lindblad.control.tau_c_factor = 0.1; // tau_c = 0.1 / ||H_C||
        const DecayCurve curve = run_lindblad_echo(cfg);
        double worst = 0.0;
        for (const auto& pt : curve.points)
            worst = std::max(worst, std::abs(pt.mean - continuous_decay_prediction(
                                                            {gamma, 2, 1.0}, pt.x)));
        return worst;
    };

    const double dev_small = max_deviation(0.01);
    const double dev_large = max_deviation(0.05);
    const bool tol_ok = dev_small <= 0.02;
    const bool monotone_ok = dev_large > dev_small;
    out.pass = tol_ok && monotone_ok;
    out.detail = "max|F - prediction| = " + fmt(dev_small) +
                 " at eps = 0.01 (<= 0.02); eps = 0.05 gives " + fmt(dev_large) +
                 " (must be larger)";
    return out;
}

// ---------------------------------------------------------------------------
// 8. Cumulant scaling exponents (soft; ergodic-hypothesis dependent).
Outcome criterion_8() {
    Outcome out;
    out.soft = true;
    const VerifyReport report = verify_cumulants({1010, 0});
    double k1 = 0.0, k2 = 0.0;
    for (const auto& check : report.checks) {
        if (check.name == "k1_deviation_exponent") k1 = check.values["exponent"];
        if (check.name == "k2_growth_exponent") k2 = check.values["exponent"];
    }
    bool all = true;
    for (const auto& check : report.checks) all = all && check.pass;
    out.pass = all;
    out.detail = "||K1 - t L_ave|| exponent = " + fmt(k1) +
                 " (in [0.3, 0.7]), ||K2|| exponent = " + fmt(k2) + " (in [1.2, 1.8])";
    return out;
}

// ---------------------------------------------------------------------------
// 9. Generalized-echo conjecture F_gen(n) ~ F_echo(2n) under weak unitary noise (soft).
Outcome criterion_9() {
    Outcome out;
    out.soft = true;
    const double delta = 0.05;
    const ComplexMatrix z1 = single_qubit_on(pauli_z(), 0, 3);
    const KrausChannel noise = KrausChannel::unitary(matrix_exp(Cplx(0, -delta) * z1));

    ExperimentConfig gen_cfg;
    gen_cfg.protocol = Protocol::generalized_echo;
    gen_cfg.dim = 8;
    gen_cfg.channel = noise;
    gen_cfg.n_unitaries = 100;
    gen_cfg.n_max = 20;
    gen_cfg.analytic_shots = true;
    gen_cfg.seed = {1011, 0};
    const DecayCurve gen_curve = run_generalized_echo(gen_cfg);

    ExperimentConfig echo_cfg = gen_cfg;
    echo_cfg.protocol = Protocol::echo;
    echo_cfg.n_max = 40;
    echo_cfg.seed = {1012, 0};
    const DecayCurve echo_curve = run_loschmidt_echo(echo_cfg);

    double worst = 0.0;
    std::ostringstream csv;
    csv << "n,f_gen,f_echo_2n,abs_diff\n";
    for (int n = 1; n <= 20; ++n) {
        const double f_gen = gen_curve.points[n - 1].mean;
        const double f_echo = echo_curve.points[2 * n - 1].mean;
        const double diff = std::abs(f_gen - f_echo);
        if (n >= 5) worst = std::max(worst, diff);
        csv << n << ',' << format_double(f_gen) << ',' << format_double(f_echo) << ','
            << format_double(diff) << '\n';
    }
    fs::create_directories("acceptance_out");
    write_text_file("acceptance_out/conjecture_gen_vs_echo.csv", csv.str());

    out.pass = worst <= 0.05;
    out.detail = "max |F_gen(n) - F_echo(2n)| over n in [5, 20] = " + fmt(worst) +
                 " (<= 0.05); table in acceptance_out/conjecture_gen_vs_echo.csv";
    if (!out.pass)
        out.detail += "; the gap is systematic: with the same V every step the "
                      "generalized echo picks up a |Tr V^2|^2 coherence and decays at "
                      "~2x the echo rate (nested-twirl closed form, see unit tests)";
    return out;
}

// ---------------------------------------------------------------------------
// 10. Determinism: byte-identical outputs across runs and thread counts.
Outcome criterion_10() {
    Outcome out;
    const fs::path base = fs::temp_directory_path() / "echobench_acceptance_10";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string cfg_path = (base / "cfg.json").string();
    const json cfg = {{"protocol", "echo"},
                      {"dim", 4},
                      {"channel", {{"type", "dephasing"}, {"dim", 4}, {"q", 0.2}}},
                      {"n_unitaries", 24},
                      {"shots", 64},
                      {"n_max", 8},
                      {"seed", 424242}};
    write_json_file(cfg_path, cfg);

    const auto run_with_threads = [&](const std::string& tag, const std::string& threads) {
        const std::string out_dir = (base / tag).string();
        const std::vector<const char*> argv = {"echobench", "echo",      "--config",
                                               cfg_path.c_str(), "--out", out_dir.c_str(),
                                               "--threads",      threads.c_str()};
        std::ostringstream sink; // keep the CLI's summary line out of the criterion output
        auto* old = std::cout.rdbuf(sink.rdbuf());
        const int code = run_cli(static_cast<int>(argv.size()), argv.data());
        std::cout.rdbuf(old);
        return code == 0;
    };
    bool ok = run_with_threads("a", "1") && run_with_threads("b", "2") &&
              run_with_threads("c", "1");

    const auto file_equal = [&](const std::string& x, const std::string& y) {
        return read_text_file((base / x).string()) == read_text_file((base / y).string());
    };
    const auto manifest_equal = [&](const std::string& x, const std::string& y) {
        json a = json::parse(read_text_file((base / x).string()));
        json b = json::parse(read_text_file((base / y).string()));
        for (auto* j : {&a, &b}) {
            j->erase("started_at");
            j->erase("finished_at");
        }
        return a == b;
    };
    const bool curves_ok = ok && file_equal("a/curve.csv", "b/curve.csv") &&
                           file_equal("a/curve.csv", "c/curve.csv");
    const bool fits_ok = ok && file_equal("a/fit.json", "b/fit.json") &&
                         file_equal("a/fit.json", "c/fit.json");
    // Manifests record the thread count, so compare them across identical reruns only.
    const bool manifests_ok = ok && manifest_equal("a/manifest.json", "c/manifest.json");
    fs::remove_all(base);

    out.pass = curves_ok && fits_ok && manifests_ok;
    out.detail = std::string("curve.csv byte-identical across --threads 1/2 and reruns: ") +
                 (curves_ok ? "yes" : "NO") + "; fit.json: " + (fits_ok ? "yes" : "NO") +
                 "; rerun manifest (modulo timestamps): " + (manifests_ok ? "yes" : "NO");
    return out;
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "analytic identity suite", 10, criterion_1},
        {2, "twirl convergence (invariant characterization)", 120, criterion_2},
        {3, "motion-reversal estimator", 60, criterion_3},
        {4, "universal echo decay law", 120, criterion_4},
        {5, "iterated motion reversal, mixed initial state", 60, criterion_5},
        {6, "concentration of measure", 180, criterion_6},
        {7, "continuous-time decay", 120, criterion_7},
        {8, "cumulant scaling (soft)", 240, criterion_8},
        {9, "generalized-echo conjecture (soft)", 120, criterion_9},
        {10, "determinism across thread counts", 60, criterion_10},
    };
    return all;
}

bool run_criterion(const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = c.run();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= c.budget_seconds;
    const bool hard_pass = (outcome.pass || outcome.soft) && in_budget;
    const char* verdict = outcome.pass && in_budget ? "PASS" : (outcome.soft ? "WARN" : "FAIL");
    std::printf("%s  [%2d] %s: %s (%.1f s, budget %.0f s)\n", verdict, c.id, c.title,
                outcome.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
    return hard_pass;
}

} // namespace

int main(int argc, char** argv) {
    bool all_pass = true;
    if (argc > 1) {
        const int wanted = std::atoi(argv[1]);
        bool found = false;
        for (const auto& c : criteria()) {
            if (c.id == wanted) {
                found = true;
                all_pass = run_criterion(c);
            }
        }
        if (!found) {
            std::fprintf(stderr, "unknown criterion %s (expected 1..10)\n", argv[1]);
            return 2;
        }
    } else {
        for (const auto& c : criteria()) all_pass = run_criterion(c) && all_pass;
    }
    return all_pass ? 0 : 1;
}
