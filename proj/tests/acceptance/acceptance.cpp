// Acceptance suite: one PASS/FAIL line per criterion.
//   gmlab_acceptance            run all
//   gmlab_acceptance --only 5   run one (exit 0 iff it passes)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmlab/analytic.hpp"
#include "gmlab/grid.hpp"
#include "gmlab/solver.hpp"
#include "gmlab/spectrum.hpp"
#include "gmlab/verifier.hpp"
#include "gmlab_cli/commands.hpp"
#include "../support/oracle.hpp"

using namespace gmlab;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1 -------------------------------------------------------------------------
Outcome thresholds_common_source() {
    const char* argv[] = {"gmlab", "thresholds", "-p", "2", "-q", "4", "-r", "2", "-s", "4",
                          "--sigma", "0", "--format", "json"};
    std::ostringstream out, err;
    const int code = cli::run_cli(14, argv, out, err);
    if (code != 0) return {false, "thresholds exited " + std::to_string(code) + ": " + err.str()};
    const auto js = nlohmann::json::parse(out.str());
    const auto& rep = js.at("reports").at(0);
    const double k1 = rep.at("k1").get<double>();
    const double k2 = rep.at("k2").get<double>();
    const double want2 = 11.0 - 4.0 * std::sqrt(6.0);
    const double e1 = std::abs(k1 - 1.0), e2 = std::abs(k2 - want2);
    return {e1 < 1e-10 && e2 < 1e-10, fmt("k1=%.17g (err %.1e), k2=%.17g (err %.1e)", k1, e1, k2, e2)};
}

// 2 -------------------------------------------------------------------------
Outcome critical_lambda_vs_numeric() {
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto e = oracle::random_exps(rng);
        // sign of d/dl [ l(s+1-lr) / (q-l(p-1)) ], numerator of the quotient rule
        auto slope = [&](double l) {
            return (e.s + 1 - 2 * l * e.r) * (e.q - l * (e.p - 1)) + (e.p - 1) * l * (e.s + 1 - l * e.r);
        };
        const double numeric = oracle::bisect(slope, 0.0, (e.s + 1) / e.r);
        const double closed = f0_critical_lambda(ExponentSet::make(e.p, e.q, e.r, e.s));
        worst = std::max(worst, std::abs(numeric - closed));
    }
    return {worst < 1e-8, fmt("50 sets, worst |lambda* - argmax| = %.2e", worst)};
}

// 3 -------------------------------------------------------------------------
Outcome common_source_k_sigma() {
    std::ostringstream d;
    bool ok = true;
    double worst_eq = 0.0;
    const ExponentSet eq = ExponentSet::make(2, 2, 2, 2);
    for (double sg : {0.1, 1.0, 10.0}) {
        const auto k = k_thresholds(eq, sg).k;
        if (!k) return {false, "s=r: k missing"};
        worst_eq = std::max(worst_eq, std::abs(*k - 1.0));
    }
    ok = ok && worst_eq <= 1e-10;
    d << fmt("s=r: max|k-1|=%.1e; ", worst_eq);

    const std::vector<double> sigmas{0.0, 0.01, 0.1, 0.3, 1, 3, 10, 30, 100, 1e3, 1e4, 1e5, 1e6};
    auto sweep = [&](const ExponentSet& e, int direction, double limit, const char* label) {
        double prev = direction > 0 ? -INFINITY : INFINITY;
        bool mono = true;
        double last = 0.0;
        for (double sg : sigmas) {
            const auto k = k_thresholds(e, sg).k;
            if (!k) return false;
            if (direction > 0 ? *k < prev - 1e-12 : *k > prev + 1e-12) mono = false;
            prev = last = *k;
        }
        const bool near = std::abs(last - limit) < 1e-3;
        d << fmt("%s: %s, k(1e6)=%.6f vs %.6f; ", label, mono ? "monotone" : "NOT monotone", last, limit);
        return mono && near;
    };
    ok = sweep(ExponentSet::make(2, 4, 2, 4), +1, 5.0 / 3.0, "s>r (2,4,2,4)") && ok;
    ok = sweep(ExponentSet::make(1.1, 1, 1.1, 1), -1, 0.9, "s<r (1.1,1,1.1,1)") && ok;
    return {ok, d.str()};
}

// 4 -------------------------------------------------------------------------
Outcome uniqueness_regime() {
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    const Grid grid = Grid::interval(1.0, 401);
    int runs = 0, good = 0;
    double worst = 0.0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0, 1);
    for (double d1 : {0.01, 0.1, 1.0}) {
        const auto prm = ModelParams::make(e, d1, 0.9 * d1, 0.0);
        for (int k = 0; k < 25; ++k) {
            GuessOptions go;
            GuessKind kind = GuessKind::Perturbed;
            if (k < 20) {
                go.epsilon = 0.5;
                go.seed = 1000 * static_cast<std::uint64_t>(d1 * 100) + k;
            } else {
                kind = GuessKind::Spike;
                go.amplitude = 2.0 + 8.0 * U(rng);
                go.width = std::max(5 * grid.hx(), std::sqrt(d1) * (0.5 + U(rng)));
                go.center = std::array<double, 2>{U(rng), 0.0};
            }
            const NewtonResult res = find_steady_state(initial_guess(kind, grid, prm, go), prm);
            ++runs;
            if (!res.converged()) continue;
            const double err = std::max((res.field.u.array() - 1).abs().maxCoeff(),
                                        (res.field.v.array() - 1).abs().maxCoeff());
            worst = std::max(worst, err);
            good += err < 1e-8;
        }
    }
    return {good == runs, fmt("%d/%d runs reached (1,1); worst max|u-1|,|v-1| = %.2e", good, runs, worst)};
}

// 5 -------------------------------------------------------------------------
Outcome spike_existence_and_bounds() {
    const auto prm = ModelParams::make(ExponentSet::make(2, 1, 2, 0), 1e-3, 10.0, 0.0);
    std::vector<double> id_u, id_v, umax;
    bool ok = true;
    std::ostringstream d;
    for (int n : {201, 401, 801}) {
        const Grid g = Grid::interval(1.0, n);
        const NewtonResult res = find_steady_state(initial_guess(GuessKind::Spike, g, prm), prm,
                                                   {.newton = {}, .march_first = true});
        if (!res.converged()) return {false, fmt("n=%d: no convergence (%s)", n, res.message.c_str())};
        const auto& f = res.field;
        const double ratio = f.u.maxCoeff() / f.u.minCoeff();
        int failed = 0, total = 0;
        for (const auto& group : {check_pointwise(f, prm), check_integrals(f, prm)})
            for (const auto& en : group) {
                ++total;
                failed += !en.passed;
            }
        ok = ok && ratio > 10 && failed == 0 && !is_constant_solution(f);
        d << fmt("n=%d: u_max/u_min=%.3g, %d/%d checks pass; ", n, ratio, total - failed, total);
        id_u.push_back(identity_defect(f, prm, 1).defect);
        id_v.push_back(identity_defect(f, prm, 4).defect);
        umax.push_back(f.u.maxCoeff());
    }
    auto in_band = [](double r) { return r >= 3.5 && r <= 4.5; };
    const double ru1 = id_u[0] / id_u[1], ru2 = id_u[1] / id_u[2];
    const double rv1 = id_v[0] / id_v[1], rv2 = id_v[1] / id_v[2];
    ok = ok && in_band(ru1) && in_band(ru2) && in_band(rv1) && in_band(rv2);
    d << fmt("identity ratios u: %.3f %.3f, v: %.3f %.3f; ", ru1, ru2, rv1, rv2);
    const double drift = std::abs(umax[1] - umax[2]) / umax[2];
    ok = ok && drift < 0.01;
    d << fmt("u_max drift 401->801 %.2e", drift);
    return {ok, d.str()};
}

// 6 -------------------------------------------------------------------------
Outcome parity_consistency() {
    const ExponentSet e = ExponentSet::make(2, 1, 2, 0);
    const auto geom = DomainGeometry::interval(pi);
    const double d11 = bifurcation_values(e, 0.0, 10.0, geom, 1)[0];
    const double err11 = std::abs(d11 - 9.0 / 11.0);

    // independent values: lambda_i = i^2, d_1i = (1 - 2/(1 + 10 i^2)) / i^2
    std::vector<double> ref;
    for (int i = 1; i <= 20000; ++i) ref.push_back((1.0 - 2.0 / (1.0 + 10.0 * i * i)) / (double(i) * i));
    auto brute = [&](double d1) {
        int n = 0;
        for (double v : ref) n += d1 < v;
        return n;
    };
    int mismatches = 0, bad_jumps = 0, jumps = 0;
    int prev = -1;
    double prev_d1 = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double d1 = std::pow(10.0, -4.0 + 4.0 * k / 999.0);
        const int n = certified_parity(e, 0.0, d1, 10.0, geom).parity_count;
        mismatches += n != brute(d1);
        if (prev >= 0 && n != prev) {
            ++jumps;
            // every change between neighbours must be explained by d_1i in (prev_d1, d1]
            int crossed = 0;
            for (double v : ref) crossed += v >= prev_d1 && v < d1;
            bad_jumps += crossed != prev - n;
        }
        prev = n;
        prev_d1 = d1;
    }
    // and each jump sits exactly at a computed d_1i
    const auto vals = bifurcation_values(e, 0.0, 10.0, geom, 60);
    int off = 0;
    for (double v : vals) {
        if (v < 1e-4) break;
        const int below = certified_parity(e, 0.0, v * (1 - 1e-8), 10.0, geom).parity_count;
        const int above = certified_parity(e, 0.0, v * (1 + 1e-8), 10.0, geom).parity_count;
        off += below - above != 1;
    }
    const bool ok = err11 < 1e-12 && mismatches == 0 && bad_jumps == 0 && off == 0;
    return {ok, fmt("|d11-9/11|=%.1e; 1000-point grid: %d mismatches vs brute force, %d jumps (%d unexplained), "
                    "%d d1i without a unit jump",
                    err11, mismatches, jumps, bad_jumps, off)};
}

// 7 -------------------------------------------------------------------------
Outcome nonexistence_cutoff() {
    const ExponentSet e = ExponentSet::make(2, 1, 2, 0);
    const auto geom = DomainGeometry::interval(1.0);
    std::vector<double> grid;
    for (int k = 0; k < 20; ++k) grid.push_back(std::pow(10.0, -4.0 + 5.0 * k / 19.0));
    ScanOptions opts;
    opts.seeds = 8;
    opts.nodes = 401;
    opts.workers = 0;
    opts.seed = 1;
    const ScanReport rep = nonexistence_scan(e, 0.1, 100.0, grid, geom, opts);
    if (!rep.cutoff) return {false, "no all-constant regime at the top of the grid"};
    const double cut = *rep.cutoff;
    bool below_found = false, parity_ok = true;
    int failed_runs = 0;
    for (const auto& c : rep.cells) {
        failed_runs += c.runs - c.converged;
        if (c.d1 < cut && c.found_nonconstant()) below_found = true;
        // A_d empty must sit inside the all-constant regime
        if (c.parity_count == 0 && c.d1 < cut) parity_ok = false;
    }
    bool above_constant = true;
    for (const auto& c : rep.cells)
        if (c.d1 >= cut && c.found_nonconstant()) above_constant = false;
    const bool ok = below_found && parity_ok && above_constant && cut > grid.front();
    return {ok, fmt("cutoff d1=%.4g; non-constant below: %s; N=0 cells all in the constant regime: %s; "
                    "%d/%d runs unconverged (recorded)",
                    cut, below_found ? "yes" : "no", parity_ok ? "yes" : "no", failed_runs, 20 * 8)};
}

// 8 -------------------------------------------------------------------------
Outcome inhibitor_diffusion_uniformity() {
    // follow the boundary-spike branch from d2 = 1000 down to d2 = 1
    const auto e = ExponentSet::make(2, 3, 2, 4);
    const double d1 = 0.01;
    const Grid g = Grid::interval(1.0, 401);
    auto prm = ModelParams::make(e, d1, 1000.0, 0.0);
    NewtonResult res = find_steady_state(initial_guess(GuessKind::Spike, g, prm), prm,
                                         {.newton = {}, .march_first = true});
    if (!res.converged() || is_constant_solution(res.field)) return {false, "no spike at d2=1000"};
    std::vector<std::pair<double, double>> umax{{1000.0, res.field.u.maxCoeff()}};
    SolutionField cur = res.field;
    const int per_decade = 40;
    for (int k = 1; k <= 3 * per_decade; ++k) {
        const double d2 = 1000.0 * std::pow(10.0, -double(k) / per_decade);
        prm = ModelParams::make(e, d1, d2, 0.0);
        NewtonResult step = newton_solve(cur, prm);
        if (!step.converged()) step = find_steady_state(cur, prm);
        if (!step.converged()) return {false, fmt("branch lost at d2=%.4g", d2)};
        cur = step.field;
        if (k % per_decade == 0) umax.push_back({d2, cur.u.maxCoeff()});
    }
    double lo = INFINITY, hi = 0.0;
    std::ostringstream d;
    for (auto [d2, u] : umax) {
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        d << fmt("d2=%g: u_max=%.4g; ", d2, u);
    }
    d << fmt("spread %.3fx (need < 2)", hi / lo);
    return {hi / lo < 2.0, d.str()};
}

// 9 -------------------------------------------------------------------------
Outcome jacobian_and_order() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0, 1);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double p = 1.5 + U(rng), r = 1 + U(rng), s = 2 * U(rng);
        const double q = (p - 1) / r * (s + 1) * (1.2 + U(rng));
        const auto prm = ModelParams::make(ExponentSet::make(p, q, r, s), 0.01 + U(rng), 0.1 + 10 * U(rng), U(rng));
        const Grid g = t % 5 == 0 ? Grid::rectangle(1, 1, 7, 6) : Grid::interval(1.0, 31);
        const int n = g.size();
        VectorXd u(n), v(n), dir(2 * n);
        for (int i = 0; i < n; ++i) {
            u[i] = 0.5 + 2.5 * U(rng);
            v[i] = 0.5 + 2.5 * U(rng);
        }
        for (int i = 0; i < 2 * n; ++i) dir[i] = 2 * U(rng) - 1;
        const double h = 1e-7 * std::max(u.maxCoeff(), v.maxCoeff());
        const VectorXd fd = (residual(g, u + h * dir.head(n), v + h * dir.tail(n), prm) -
                             residual(g, u - h * dir.head(n), v - h * dir.tail(n), prm)) / (2 * h);
        const VectorXd jd = jacobian(g, u, v, prm) * dir;
        worst = std::max(worst, (fd - jd).norm() / jd.norm());
    }
    // manufactured solution
    const double L = 1.5;
    const auto prm = ModelParams::make(ExponentSet::make(2, 4, 2, 4), 0.3, 2.0, 0.2);
    std::vector<double> errs;
    for (int n : {26, 51, 101, 201, 401}) {
        const Grid g = Grid::interval(L, n);
        VectorXd u(n), v(n), exact(2 * n);
        for (int i = 0; i < n; ++i) {
            const double c = std::cos(pi * g.x(i) / L), lap = -(pi / L) * (pi / L) * c;
            u[i] = 2 + c;
            v[i] = 3 + c;
            const double react = u[i] * u[i] / std::pow(v[i], 4);
            exact[i] = prm.d1 * lap - u[i] + react + prm.sigma;
            exact[n + i] = prm.d2 * lap - v[i] + react;
        }
        errs.push_back((residual(g, u, v, prm) - exact).lpNorm<Eigen::Infinity>());
    }
    bool order_ok = true;
    std::ostringstream d;
    d << fmt("FD Jacobian worst rel err %.2e over 100 states; manufactured ratios", worst);
    for (size_t k = 1; k < errs.size(); ++k) {
        const double ratio = errs[k - 1] / errs[k];
        order_ok = order_ok && ratio >= 3.5 && ratio <= 4.5;
        d << fmt(" %.3f", ratio);
    }
    return {worst < 1e-5 && order_ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }
    const std::vector<Criterion> all{
        {1, "threshold reproduction (2,4,2,4)", 1, thresholds_common_source},
        {2, "lambda* closed form vs numeric maximiser", 5, critical_lambda_vs_numeric},
        {3, "common-source k_sigma behaviour", 10, common_source_k_sigma},
        {4, "uniqueness regime d2/d1 = 0.9", 120, uniqueness_regime},
        {5, "spike existence and bound verification", 120, spike_existence_and_bounds},
        {6, "bifurcation values and parity", 5, parity_consistency},
        {7, "nonexistence scan cutoff", 600, nonexistence_cutoff},
        {8, "d2-uniformity of u_max for (2,3,2,4)", 300, inhibitor_diffusion_uniformity},
        {9, "Jacobian and discretisation order", 60, jacobian_and_order},
    };
    int failures = 0, ran = 0;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("criterion %d: %s  %s  [%.2fs of %.0fs%s]\n    %s\n", c.id, pass ? "PASS" : "FAIL", c.title, secs,
                    c.budget_s, in_time ? "" : ", over budget", o.detail.c_str());
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
