// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <sys/wait.h>

#include "rabi/adiabatic.hpp"
#include "rabi/cli.hpp"
#include "rabi/displaced.hpp"
#include "rabi/dynamics.hpp"
#include "rabi/exact_diag.hpp"
#include "rabi/perturbation.hpp"
#include "rabi/special_fn.hpp"

using namespace rabi;

namespace {

int failures = 0;

void verdict_line(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void info(const std::string& text) {
    std::printf("       %s\n", text.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using big = boost::multiprecision::cpp_bin_float_100;

double series_laguerre(int n, int k, double x) {
    big sum = 0, xi = 1, fact = 1;
    for (int i = 0; i <= n; ++i) {
        if (i > 0) {
            xi *= big(x);
            fact *= i;
        }
        big binom = 1;
        for (int j = 1; j <= n - i; ++j) binom = binom * (k + i + j) / j;
        const big term = binom * xi / fact;
        sum += (i % 2 == 0) ? term : big(-term);
    }
    return static_cast<double>(sum);
}

void criterion_1() {
    struct Point {
        int n, k;
        double x, ref;
    };
    std::vector<Point> pts;
    for (int k = 0; k <= 10; ++k)
        for (int n = 0; n <= 30; ++n)
            for (int xi = 0; xi <= 200; ++xi) pts.push_back({n, k, 0.25 * xi, series_laguerre(n, k, 0.25 * xi)});

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> got(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& q = pts[i];
        got[i] = q.k == 0 ? special::laguerre(q.n, q.x) : special::assoc_laguerre(q.n, q.k, q.x);
    }
    const double elapsed = seconds_since(t0);

    int bad = 0;
    double worst_rel = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double err = std::abs(got[i] - pts[i].ref);
        if (!(err <= 1e-9 * std::abs(pts[i].ref) || err <= 1e-12)) ++bad;
        if (std::abs(pts[i].ref) > 1e-3) worst_rel = std::max(worst_rel, err / std::abs(pts[i].ref));
    }
    const int total = static_cast<int>(pts.size());
    verdict_line(1, "special-function oracle", bad == 0 && elapsed < 1.0,
                 std::to_string(total - bad) + "/" + std::to_string(total) +
                     " points within 1e-9 rel / 1e-12 abs, worst rel " + fmt("%.2e", worst_rel) +
                     ", recurrence time " + fmt("%.4f s", elapsed) + " (bound 1 s)");
}

void criterion_2() {
    int bad = 0, total = 0;
    double worst = 0.0;
    for (double beta : {0.1, 0.2, 0.5, 0.7, 1.0}) {
        std::vector<Eigen::VectorXd> plus, minus;
        for (int n = 0; n <= 15; ++n) {
            plus.push_back(displaced_fock_coeffs(n, -beta, 200));
            minus.push_back(displaced_fock_coeffs(n, beta, 200));
        }
        for (int m = 0; m <= 15; ++m) {
            for (int n = 0; n <= 15; ++n) {
                const double err = std::abs(displaced_overlap(m, n, beta) - plus[m].dot(minus[n]));
                worst = std::max(worst, err);
                ++total;
                if (err > 1e-9) ++bad;
            }
        }
    }
    verdict_line(2, "overlap oracle", bad == 0,
           std::to_string(total - bad) + "/" + std::to_string(total) + " entries within 1e-9, max deviation " +
               fmt("%.2e", worst));
}

void criterion_3() {
    ExactOptions no_check;
    no_check.check_convergence = false;
    double worst_res = 0.0, worst_delta = 0.0;
    bool ok = true;
    for (double beta : {0.0, 0.2, 0.4, 0.6, 0.8}) {
        for (double w : {0.05, 0.1, 0.3, 0.5}) {
            const ExactSpectrum a = exact_levels({beta, w}, 80, no_check);
            const ExactSpectrum b = exact_levels({beta, w}, 120, no_check);
            const double rel_res = b.residual_max / b.norm_h;
            const double delta = (a.values.head(8) - b.values.head(8)).cwiseAbs().maxCoeff();
            worst_res = std::max({worst_res, rel_res, a.residual_max / a.norm_h});
            worst_delta = std::max(worst_delta, delta);
            if (rel_res > 1e-10 || a.residual_max > 1e-10 * a.norm_h || !(delta < 1e-8)) ok = false;
        }
    }
    verdict_line(3, "exact-diagonalization self-consistency", ok,
           "max residual/||H|| " + fmt("%.2e", worst_res) + " (bound 1e-10), max lowest-8 change dim 80->120 " +
               fmt("%.2e", worst_delta) + " (bound 1e-8) over beta<=0.8, omega0<=0.5");
}

void criterion_4() {
    double dev_free = 0.0;
    for (double w : {0.1, 0.3, 0.5}) {
        const ModelParams p{0.0, w};
        const OverlapTable t(20, 0.0);
        const ExactSpectrum ex = exact_levels(p, 60);
        std::vector<double> expect;
        for (int n = 0; n <= 20; ++n) {
            for (Branch s : {Branch::plus, Branch::minus}) {
                const double target = n + sign_of(s) * w / 2.0;
                dev_free = std::max(dev_free, std::abs(adiabatic_level(n, s, p).energy - target));
                const CorrectedEnergies ce = corrected_energies(n, p, t);
                dev_free = std::max(dev_free, std::abs((s == Branch::plus ? ce.e_plus : ce.e_minus) - target));
                expect.push_back(target);
            }
        }
        std::sort(expect.begin(), expect.end());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            dev_free = std::max(dev_free, std::abs(ex.values(static_cast<Eigen::Index>(i)) - expect[i]));
        }
    }
    double dev_h0 = 0.0;
    for (double beta : {0.2, 0.5, 0.8}) {
        const ExactSpectrum ex = exact_levels({beta, 0.0}, 120);
        for (int n = 0; n < 20; ++n) {
            dev_h0 = std::max(dev_h0, std::abs(ex.values(2 * n) - (n - beta * beta)));
            dev_h0 = std::max(dev_h0, std::abs(ex.values(2 * n + 1) - (n - beta * beta)));
        }
    }
    verdict_line(4, "limits anchor", dev_free <= 1e-12 && dev_h0 <= 1e-10,
           "beta=0: adiabatic, corrected and exact vs N +- omega0/2 max dev " + fmt("%.2e", dev_free) +
               "; omega0=0: exact vs doubly degenerate N - beta^2 max dev " + fmt("%.2e", dev_h0));
}

struct ImprovementStats {
    int points = 0;
    int improved = 0;
    int excluded = 0;
    double max_err_corrected_02_01 = 0.0;
    double max_err_adiabatic_02_01 = 0.0;
    std::vector<std::string> worse;
};

ImprovementStats improvement(Denominators den) {
    ImprovementStats st;
    PerturbationOptions opts;
    opts.denominators = den;
    const int max_n = 20;
    for (double beta : {0.1, 0.2, 0.3, 0.5, 0.7}) {
        const bool on_grid = beta != 0.2;
        for (double w : {0.05, 0.1, 0.2}) {
            if (!on_grid && w != 0.1) continue;
            const ModelParams p{beta, w};
            const OverlapTable t(max_n, beta);
            const ExactSpectrum ex = exact_levels(p, kDefaultDim);
            std::vector<MatchCandidate> cands;
            std::vector<CorrectedLevel> levels;
            for (int n = 0; n <= 3; ++n) {
                for (Branch s : {Branch::plus, Branch::minus}) {
                    levels.push_back(corrected_eigenvector(n, s, p, t, opts));
                    cands.push_back({n, s, levels.back().eigenvector});
                }
            }
            const auto matches = match_levels(ex, cands, p, MatchMode::lenient);
            for (std::size_t c = 0; c < cands.size(); ++c) {
                const CorrectedLevel& lv = levels[c];
                const double e_exact = ex.values(matches[c].exact_index);
                const double err_a = std::abs(lv.base.energy - e_exact);
                const double err_c = std::abs(lv.corrected_energy - e_exact);
                if (!on_grid) {
                    st.max_err_corrected_02_01 = std::max(st.max_err_corrected_02_01, err_c);
                    st.max_err_adiabatic_02_01 = std::max(st.max_err_adiabatic_02_01, err_a);
                    continue;
                }
                if (std::abs(lv.base.omega_n) < 1e-3) {
                    ++st.excluded;
                    continue;
                }
                ++st.points;
                if (err_c <= err_a) {
                    ++st.improved;
                } else {
                    std::ostringstream os;
                    os << "(b=" << beta << ",w=" << w << ",N=" << lv.base.n << to_string(lv.base.sign) << ")";
                    st.worse.push_back(os.str());
                }
            }
        }
    }
    return st;
}

void criterion_5() {
    const ImprovementStats st = improvement(Denominators::unsplit);
    const double frac = static_cast<double>(st.improved) / st.points;
    const bool grid_ok = frac >= 0.9;
    const bool abs_ok = st.max_err_corrected_02_01 <= 1e-4;
    verdict_line(5, "improvement of corrected over adiabatic energies", grid_ok && abs_ok,
           std::to_string(st.improved) + "/" + std::to_string(st.points) + " grid levels improved (" +
               fmt("%.1f%%", 100.0 * frac) + ", need >= 90%; " + std::to_string(st.excluded) +
               " excluded for |Omega_N| < 1e-3); beta=0.2 omega0=0.1 N<=3 max corrected error " +
               fmt("%.3e", st.max_err_corrected_02_01) + " (need <= 1e-4; adiabatic " +
               fmt("%.3e", st.max_err_adiabatic_02_01) + ")");
    std::string worse = "not improved:";
    for (const auto& w : st.worse) worse += " " + w;
    info(worse);
    const ImprovementStats sp = improvement(Denominators::split);
    info("informational, split denominators: " + std::to_string(sp.improved) + "/" + std::to_string(sp.points) +
         " improved, beta=0.2 omega0=0.1 max corrected error " + fmt("%.3e", sp.max_err_corrected_02_01));
}

void criterion_6() {
    double omega_dev = 0.0;
    for (double w : {0.05, 0.1, 0.3, 0.5}) {
        omega_dev = std::max(omega_dev, std::abs(rabi_frequency(1, {0.5, w})) / w);
    }
    cli::RunConfig cfg;
    cfg.command = cli::Command::dynamics;
    cfg.beta = 0.5;
    cfg.omega0_ratio = 0.1;
    cfg.n = 1;
    const report::Table t = cli::run_command(cfg);
    const std::size_t ia = t.column_index("P_adiabatic");
    const std::size_t ix = t.column_index("P_exact");
    double amin = 1e9, amax = -1e9, xmin = 1e9;
    for (const auto& row : t.rows) {
        const double a = std::get<double>(row[ia]);
        amin = std::min(amin, a);
        amax = std::max(amax, a);
        xmin = std::min(xmin, std::get<double>(row[ix]));
    }
    verdict_line(6, "critical point", omega_dev <= 1e-14 && amax - amin <= 1e-14 && std::abs(amax - 1.0) <= 1e-14,
           "max |Omega_1(0.5)|/omega0 " + fmt("%.1e", omega_dev) + "; adiabatic survival spread " +
               fmt("%.1e", amax - amin) + "; exact engine residual dynamics, min survival " + fmt("%.6f", xmin) +
               " (reported, not thresholded)");
}

void criterion_7() {
    const double beta = 0.7;
    const double v13 = std::abs(displaced_overlap(13, 10, beta));
    const double v10 = std::abs(displaced_overlap(10, 10, beta));
    const bool claim = v13 > v10;
    // Pinned after the first verified computation.
    const double pin13 = 0.035135628537182044;
    const double pin10 = 0.09199045171745615;
    const bool pinned = std::abs(v13 - pin13) <= 1e-12 && std::abs(v10 - pin10) <= 1e-12;

    cli::RunConfig cfg;
    cfg.command = cli::Command::overlaps;
    cfg.fig2 = true;
    cfg.omega0_ratio = 0.3;
    const report::Table t = cli::run_command(cfg);
    const bool flag = t.metadata["claim_13_vs_10"]["holds"].get<bool>();
    const bool flag_beta = t.metadata["claim_13_vs_10"]["holds_net_beta"].get<bool>();
    verdict_line(7, "row N=10 comparison claim at beta=0.7", pinned && flag == claim,
           "|<13_+|10_->| = " + fmt("%.10f", v13) + ", |<10_+|10_->| = " + fmt("%.10f", v10) + ", claim holds: " +
               (claim ? "true" : "false") + " (net displacement beta: " + (flag_beta ? "true" : "false") +
               "); values pinned, report flag consistent");
}

void criterion_8() {
    cli::RunConfig cfg;
    cfg.command = cli::Command::reconcile;
    const report::Table t = cli::run_command(cfg);
    const std::size_t iq = t.column_index("quoted");
    const std::size_t iname = t.column_index("quantity");
    const std::size_t inote = t.column_index("note");
    const std::size_t i2 = t.column_index("value_2beta");
    const std::size_t i1 = t.column_index("value_beta");
    int found = 0;
    for (double q : {0.98099, 0.19604, 0.0277242, 0.00320132, 0.0029406}) {
        for (const auto& row : t.rows) {
            if (const auto* d = std::get_if<double>(&row[iq]); d && *d == q) {
                const bool has_values = std::holds_alternative<double>(row[i2]) && std::holds_alternative<double>(row[i1]);
                if (has_values) ++found;
                break;
            }
        }
    }
    std::string verdict;
    for (const auto& row : t.rows) {
        if (std::get<std::string>(row[iname]) == "overlap_quartet_verdict") verdict = std::get<std::string>(row[inote]);
    }
    verdict_line(8, "worked-example reconciliation", found == 5 && !verdict.empty(),
           std::to_string(found) + "/5 quoted numbers emitted with both conventions; verdict: " + verdict);
    for (const auto& row : t.rows) {
        const std::string name = std::get<std::string>(row[iname]);
        if (name == "b_plus_0_1") {
            info("b_plus_0_1: quoted 0.0029406, 2beta " + fmt("%.7f", std::get<double>(row[i2])) + ", beta " +
                 fmt("%.7f", std::get<double>(row[i1])));
        }
    }
}

void criterion_9() {
    bool ok = true;
    double p0_dev = 0.0, period_dev = 0.0, norm_dev = 0.0, prob_out = 0.0;
    bool collapse = true;
    for (const ModelParams p : {ModelParams{0.2, 0.3}, ModelParams{0.4, 0.1}}) {
        for (int n : {0, 1, 3}) {
            EvolveOptions opts;
            opts.targets = {{0, Branch::plus}, {1, Branch::plus}, {1, Branch::minus}};
            const CompositeState psi0 = CompositeState::displaced_product(n, Branch::plus, p, opts.max_n);
            const auto times = default_time_grid(n, p, 200);
            for (Engine e : {Engine::adiabatic, Engine::corrected, Engine::exact}) {
                const TimeSeries ts = evolve(psi0, e, p, times, opts);
                p0_dev = std::max(p0_dev, std::abs(ts.column("survival")[0] - 1.0));
                for (double v : ts.column("norm")) norm_dev = std::max(norm_dev, std::abs(v - 1.0));
                for (const auto& col : ts.columns)
                    for (double v : col) prob_out = std::max({prob_out, -v, v - 1.0});
            }
            const double period = std::numbers::pi / std::abs(rabi_frequency(n, p));
            std::vector<double> shifted;
            for (double t : times) shifted.push_back(t + period);
            const auto a = evolve(psi0, Engine::adiabatic, p, times, opts).column("survival");
            const auto b = evolve(psi0, Engine::adiabatic, p, shifted, opts).column("survival");
            for (std::size_t i = 0; i < a.size(); ++i) period_dev = std::max(period_dev, std::abs(a[i] - b[i]));

            EvolveOptions empty = opts;
            empty.perturbation.policy = CutoffPolicy::top(0);
            const TimeSeries ad = evolve(psi0, Engine::adiabatic, p, times, empty);
            const TimeSeries co = evolve(psi0, Engine::corrected, p, times, empty);
            if (ad.columns != co.columns) collapse = false;
        }
    }
    ok = p0_dev <= 1e-9 && period_dev <= 1e-12 && norm_dev <= 1e-9 && prob_out <= 1e-9 && collapse;
    verdict_line(9, "dynamics sanity", ok,
           "P(0) dev " + fmt("%.1e", p0_dev) + ", period pi/|Omega_N| dev " + fmt("%.1e", period_dev) +
               ", norm dev " + fmt("%.1e", norm_dev) + ", probability excursion " + fmt("%.1e", std::max(prob_out, 0.0)) +
               ", empty cutoff equals adiabatic: " + (collapse ? "bitwise" : "NO"));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_10() {
    const auto dir = std::filesystem::temp_directory_path() / "rabi_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::string> configs = {
        "overlaps --beta 0.3 --max-n 12",
        "overlaps --fig2 --omega0-ratio 0.3 --format json",
        "spectrum --beta 0.3 --omega0-ratio 0.1 --oracle",
        "dynamics --beta 0.2 --omega0-ratio 0.3 --populations pp:1,mm:1 --samples 200",
        "dynamics --fig1 --omega0-ratio 0.1 --samples 100 --format json",
        "reconcile",
    };
    int same = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::string outputs[2];
        bool ran = true;
        for (int r = 0; r < 2; ++r) {
            const auto path = dir / ("run" + std::to_string(i) + "_" + std::to_string(r));
            const std::string cmd = std::string(RABI_CLI_PATH) + " " + configs[i] + " --out " + path.string();
            const int status = std::system(cmd.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ran = false;
            outputs[r] = slurp(path);
        }
        if (ran && !outputs[0].empty() && outputs[0] == outputs[1]) ++same;
    }
    std::filesystem::remove_all(dir);
    verdict_line(10, "determinism", same == static_cast<int>(configs.size()),
           std::to_string(same) + "/" + std::to_string(configs.size()) + " CLI configurations byte-identical across two runs");
}

} // namespace

int main() {
    const std::vector<std::function<void()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                         criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            verdict_line(static_cast<int>(i + 1), "criterion", false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
