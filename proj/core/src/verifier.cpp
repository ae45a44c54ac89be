#include "gmlab/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "gmlab/analytic.hpp"

namespace gmlab {

namespace {

constexpr int kLambdaGrid = 16;

void require_converged(const SolutionField& sol, const ModelParams& params) {
    const double thr = convergence_threshold(sol.grid, params, sol.u, sol.v);
    const double res = residual(sol, params).cwiseAbs().maxCoeff();
    if (!(res <= thr)) {
        std::ostringstream msg;
        msg << "solution residual " << res << " exceeds solver tolerance " << thr;
        throw Error(ErrorKind::NotConverged, msg.str());
    }
}

double magnitude(double a, double b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

BoundsEntry leq(std::string name, double lhs, double rhs, double rel_tol, std::string anchor) {
    const double tol = rel_tol * magnitude(lhs, rhs);
    const double slack = rhs - lhs;
    return {std::move(name), lhs, rhs, slack, tol, slack >= -tol, std::move(anchor)};
}

BoundsEntry equal(std::string name, double lhs, double rhs, double tol, std::string anchor) {
    const double slack = -std::abs(rhs - lhs);
    return {std::move(name), lhs, rhs, slack, tol, slack >= -tol, std::move(anchor)};
}

// Source terms of the two equations as functions of (u, v).
std::function<double(double, double)> source_of(const ModelParams& prm, int which) {
    const ExponentSet e = prm.exps;
    if (which == 1) {
        const double sigma = prm.sigma;
        return [e, sigma](double u, double v) { return std::pow(u, e.p()) * std::pow(v, -e.q()) + sigma; };
    }
    return [e](double u, double v) { return std::pow(u, e.r()) * std::pow(v, -e.s()); };
}

}  // namespace

Extremes Extremes::of(const SolutionField& sol) {
    return {sol.u.maxCoeff(), sol.u.minCoeff(), sol.v.maxCoeff(), sol.v.minCoeff()};
}

bool BoundsReport::overall() const noexcept {
    return std::all_of(entries.begin(), entries.end(), [](const BoundsEntry& e) { return e.passed; });
}

void BoundsReport::append(const std::vector<BoundsEntry>& more) {
    entries.insert(entries.end(), more.begin(), more.end());
}

Tolerances tolerances_for(const SolutionField& sol) {
    auto curv = [&](const Eigen::VectorXd& w) {
        return sol.grid.apply_laplacian(w).cwiseAbs().maxCoeff() / std::max(1.0, w.cwiseAbs().maxCoeff());
    };
    const double c = std::max(curv(sol.u), curv(sol.v));
    const double h = sol.grid.max_spacing();
    return {c, h, c * h * h + 1e-9, c * h * h + 1e-6};
}

std::vector<BoundsEntry> check_pointwise(const SolutionField& sol, const ModelParams& params) {
    require_converged(sol, params);
    const ExponentSet& e = params.exps;
    const Tolerances tol = tolerances_for(sol);
    const Extremes x = Extremes::of(sol);
    const double tau = e.r() / (e.s() + 1.0);
    const double sigma = params.sigma;
    std::vector<BoundsEntry> out;
    const std::string simple = "simple max-principle inequalities";
    out.push_back(leq("v_max <= u_max^(r/(s+1))", x.v_max, std::pow(x.u_max, tau), tol.pointwise, simple));
    out.push_back(leq("v_min >= u_min^(r/(s+1))", std::pow(x.u_min, tau), x.v_min, tol.pointwise, simple));
    out.push_back(leq("u_min >= u_min^p/v_max^q + sigma",
                      std::pow(x.u_min, e.p()) * std::pow(x.v_max, -e.q()) + sigma, x.u_min,
                      tol.pointwise, simple));
    out.push_back(leq("u_max <= u_max^p/v_min^q + sigma", x.u_max,
                      std::pow(x.u_max, e.p()) * std::pow(x.v_min, -e.q()) + sigma, tol.pointwise,
                      simple));
    if (sigma > 0.0) {
        const std::string trivial = "trivial positive lower bounds for sigma > 0";
        out.push_back(leq("u_min > sigma", sigma, x.u_min, tol.pointwise, trivial));
        out.push_back(leq("v_min > sigma^(r/(s+1))", std::pow(sigma, tau), x.v_min, tol.pointwise, trivial));
    }

    const std::string chain = "u/v^lambda sandwich";
    const double top = e.lambda_max();
    for (int k = 1; k <= kLambdaGrid; ++k) {
        const double lam = top * k / (kLambdaGrid + 1);
        const Eigen::ArrayXd ratio = sol.u.array() * sol.v.array().pow(-lam);
        const double a = 1.0 - tau * lam;
        const double b = 1.0 / tau - lam;
        const double links[6] = {ratio.minCoeff(),       std::pow(x.u_min, a), std::pow(x.v_min, b),
                                 std::pow(x.v_max, b),   std::pow(x.u_max, a), ratio.maxCoeff()};
        static const char* names[6] = {"inf u/v^l", "u_min^(1-rl/(s+1))", "v_min^((s+1)/r-l)",
                                       "v_max^((s+1)/r-l)", "u_max^(1-rl/(s+1))", "sup u/v^l"};
        for (int i = 0; i < 5; ++i) {
            std::ostringstream name;
            name << names[i] << " <= " << names[i + 1] << " [l=" << lam << "]";
            out.push_back(leq(name.str(), links[i], links[i + 1], tol.pointwise, chain));
        }
    }
    return out;
}

IdentityDefect identity_defect(const SolutionField& sol, const ModelParams& params, int which) {
    if (which != 1 && which != 4) throw Error(ErrorKind::InvalidArgument, "identity_defect: which is 1 or 4");
    const auto src = source_of(params, which);
    const Grid& g = sol.grid;
    const Eigen::VectorXd& field = which == 1 ? sol.u : sol.v;
    static const double gx[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

    IdentityDefect out{0.0, g.integrate(field), 0.0, 0.0};
    if (g.dimension() == 1) {
        const double h = g.hx();
        for (int i = 0; i + 1 < g.nx(); ++i) {
            auto at = [&](double t) {
                return src((1 - t) * sol.u(i) + t * sol.u(i + 1), (1 - t) * sol.v(i) + t * sol.v(i + 1));
            };
            double cell = 0.0;
            for (int k = 0; k < 3; ++k) cell += gw[k] * at(gx[k]);
            out.source_integral += h * cell;
            out.estimate += h / 3.0 * std::abs(at(0.0) - 2.0 * at(0.5) + at(1.0));
        }
    } else {
        const double area = g.hx() * g.hy();
        for (int j = 0; j + 1 < g.ny(); ++j) {
            for (int i = 0; i + 1 < g.nx(); ++i) {
                const int n00 = g.index(i, j), n10 = g.index(i + 1, j);
                const int n01 = g.index(i, j + 1), n11 = g.index(i + 1, j + 1);
                auto lerp = [&](const Eigen::VectorXd& w, double s, double t) {
                    return (1 - s) * (1 - t) * w(n00) + s * (1 - t) * w(n10) + (1 - s) * t * w(n01) +
                           s * t * w(n11);
                };
                auto at = [&](double s, double t) { return src(lerp(sol.u, s, t), lerp(sol.v, s, t)); };
                double cell = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) cell += gw[a] * gw[b] * at(gx[a], gx[b]);
                out.source_integral += area * cell;
                const double mx = at(0.0, 0.5) - 2.0 * at(0.5, 0.5) + at(1.0, 0.5);
                const double my = at(0.5, 0.0) - 2.0 * at(0.5, 0.5) + at(0.5, 1.0);
                out.estimate += area / 3.0 * (std::abs(mx) + std::abs(my));
            }
        }
    }
    out.defect = out.source_integral - out.field_integral;
    return out;
}

std::vector<BoundsEntry> check_integrals(const SolutionField& sol, const ModelParams& params) {
    require_converged(sol, params);
    const ExponentSet& e = params.exps;
    const Grid& g = sol.grid;
    const Tolerances tol = tolerances_for(sol);
    const double omega = g.geometry().measure();
    const double sigma = params.sigma;
    const Eigen::ArrayXd u = sol.u.array();
    const Eigen::ArrayXd v = sol.v.array();
    auto I = [&](const Eigen::ArrayXd& f) { return g.integrate(f.matrix()); };
    const double scale = std::max({1.0, sol.u.cwiseAbs().maxCoeff(), sol.v.cwiseAbs().maxCoeff()}) * omega;
    const std::string anchor = "integral estimates from testing the equations";
    std::vector<BoundsEntry> out;

    const IdentityDefect id1 = identity_defect(sol, params, 1);
    out.push_back(equal("int u^p/v^q + sigma|Omega| = int u", id1.source_integral, id1.field_integral,
                        2.0 * id1.estimate + 1e-9 * scale, anchor));
    out.push_back(leq("int u^(p-1)/v^q + sigma int 1/u <= |Omega|",
                      I(u.pow(e.p() - 1.0) * v.pow(-e.q())) + sigma * I(u.inverse()), omega,
                      tol.pointwise, anchor));
    out.push_back(leq("int v^-q + sigma int u^-p <= int u^(1-p)",
                      I(v.pow(-e.q())) + sigma * I(u.pow(-e.p())), I(u.pow(1.0 - e.p())), tol.pointwise,
                      anchor));
    const IdentityDefect id4 = identity_defect(sol, params, 4);
    out.push_back(equal("int u^r/v^s = int v", id4.source_integral, id4.field_integral,
                        2.0 * id4.estimate + 1e-9 * scale, anchor));
    out.push_back(leq("int u^r/v^(s+1) <= |Omega|", I(u.pow(e.r()) * v.pow(-e.s() - 1.0)), omega,
                      tol.pointwise, anchor));
    out.push_back(leq("int v^(s+1) <= int u^r", I(v.pow(e.s() + 1.0)), I(u.pow(e.r())), tol.pointwise,
                      anchor));
    return out;
}

std::vector<BoundsEntry> check_theorem_bounds(const SolutionField& sol, const ModelParams& params) {
    require_converged(sol, params);
    const Tolerances tol = tolerances_for(sol);
    const Extremes x = Extremes::of(sol);
    const ConstantState cs = constant_state(params.exps, params.sigma);
    const BoundCertificate cert = optimal_bound_certificate(params);
    std::vector<BoundsEntry> out;
    const std::string main = "optimal bounds by the constant state when d2/d1 <= k";
    if (cert.upper_holds) {
        out.push_back(leq("u_max <= u*", x.u_max, cs.u_star, tol.theorem, main));
        out.push_back(leq("v_max <= v*", x.v_max, cs.v_star, tol.theorem, main));
    }
    if (cert.lower_holds) {
        out.push_back(leq("u_min >= u*", cs.u_star, x.u_min, tol.theorem, main));
        out.push_back(leq("v_min >= v*", cs.v_star, x.v_min, tol.theorem, main));
    }
    if (auto up = best_explicit_upper_bound(params)) {
        std::ostringstream name;
        name << "u_max <= explicit upper bound [l=" << up->lambda << "]";
        out.push_back(leq(name.str(), x.u_max, up->bound, tol.theorem, "explicit upper bound, sigma = 0"));
    }
    if (auto lo = best_explicit_lower_bound(params)) {
        std::ostringstream name;
        name << "u_min >= explicit lower bound [l=" << lo->lambda << "]";
        out.push_back(leq(name.str(), lo->bound, x.u_min, tol.theorem, "explicit lower bound, sigma = 0"));
    }
    return out;
}

BoundsReport verify_solution(const SolutionField& sol, const ModelParams& params) {
    BoundsReport rep;
    rep.tolerances = tolerances_for(sol);
    rep.append(check_pointwise(sol, params));
    rep.append(check_integrals(sol, params));
    rep.append(check_theorem_bounds(sol, params));
    const Grid& g = sol.grid;
    const double omega = g.geometry().measure();
    rep.measurements["u_min_over_mean"] = sol.u.minCoeff() / (g.integrate(sol.u) / omega);
    rep.measurements["v_min_over_mean"] = sol.v.minCoeff() / (g.integrate(sol.v) / omega);
    rep.measurements["identity_u_defect"] = identity_defect(sol, params, 1).defect;
    rep.measurements["identity_v_defect"] = identity_defect(sol, params, 4).defect;
    const Eigen::VectorXd r = residual(sol, params);
    const Eigen::Index n = sol.u.size();
    rep.measurements["identity_u_discrete_defect"] = g.integrate(r.head(n));
    rep.measurements["identity_v_discrete_defect"] = g.integrate(r.tail(n));
    rep.measurements["residual_norm"] = r.cwiseAbs().maxCoeff();
    return rep;
}

std::vector<ScanCell> solve_cells(const ExponentSet& exps, const std::vector<CellSpec>& cells,
                                  const DomainGeometry& geom, const ScanOptions& opts) {
    if (opts.seeds < 1) throw Error(ErrorKind::InvalidArgument, "solve_cells: seeds >= 1");
    const Grid grid = Grid::on(geom, opts.nodes);

    struct Run {
        bool converged = false;
        bool nonconstant = false;
        Extremes ext{};
        std::string error;
    };
    const std::size_t ncell = cells.size();
    const std::size_t nseed = static_cast<std::size_t>(opts.seeds);
    std::vector<Run> runs(ncell * nseed);

    auto work = [&](std::size_t task) {
        const CellSpec& spec = cells[task / nseed];
        const std::size_t k = task % nseed;
        Run& out = runs[task];
        try {
            const ModelParams prm = ModelParams::make(exps, spec.d1, spec.d2, spec.sigma);
            const double u_star = constant_state(exps, spec.sigma).u_star;
            std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ull + task);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            GuessOptions go;
            go.seed = rng();
            SolutionField start = [&] {
                if (k % 2 == 0) {
                    go.epsilon = 0.5;
                    return initial_guess(GuessKind::Perturbed, grid, prm, go);
                }
                go.amplitude = (2.0 + 8.0 * unit(rng)) * u_star;
                go.width = std::max(5.0 * grid.min_spacing(), (0.5 + unit(rng)) * std::sqrt(spec.d1));
                go.center = {unit(rng) * geom.lx, grid.dimension() == 2 ? unit(rng) * geom.ly : 0.0};
                return initial_guess(GuessKind::Spike, grid, prm, go);
            }();
            const NewtonResult r = find_steady_state(start, prm, opts.steady);
            out.converged = r.converged();
            if (out.converged) {
                out.nonconstant = !is_constant_solution(r.field);
                out.ext = Extremes::of(r.field);
            } else {
                out.error = r.message;
            }
        } catch (const std::exception& ex) {
            out.error = ex.what();
        }
    };

    const std::size_t total = runs.size();
    unsigned workers = opts.workers > 0 ? static_cast<unsigned>(opts.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(total, 1)));
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t t = next++; t < total; t = next++) work(t);
    };
    if (workers <= 1) {
        loop();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
    }

    std::vector<ScanCell> out;
    out.reserve(ncell);
    for (std::size_t c = 0; c < ncell; ++c) {
        const CellSpec& spec = cells[c];
        ScanCell cell{spec.d1, spec.d2, spec.sigma, opts.seeds, 0, 0, {}, 0, false, "ok"};
        try {
            const ConstantState cs = constant_state(exps, spec.sigma);
            cell.extremes = {cs.u_star, cs.u_star, cs.v_star, cs.v_star};
        } catch (const Error&) {
            cell.extremes = {0.0, 0.0, 0.0, 0.0};
        }
        double spread = 1.0;
        std::string first_error;
        int failures = 0;
        for (std::size_t k = 0; k < nseed; ++k) {
            const Run& r = runs[c * nseed + k];
            if (!r.converged) {
                if (failures++ == 0) first_error = r.error;
                continue;
            }
            ++cell.converged;
            if (r.nonconstant) {
                ++cell.nonconstant;
                const double s = r.ext.u_max / r.ext.u_min;
                if (s > spread) {
                    spread = s;
                    cell.extremes = r.ext;
                }
            }
        }
        if (failures > 0) {
            std::ostringstream st;
            st << failures << "/" << opts.seeds << " runs failed (" << first_error << ")";
            cell.status = st.str();
        }
        try {
            const ExistencePrediction pred =
                existence_prediction(exps, spec.sigma, spec.d1, spec.d2, geom, geom.dimension());
            cell.parity_count = pred.parity_count;
            cell.predicted = pred.predicted;
        } catch (const Error& ex) {
            cell.parity_count = -1;
            cell.status += std::string("; parity: ") + ex.what();
        }
        out.push_back(std::move(cell));
    }
    return out;
}

ScanReport nonexistence_scan(const ExponentSet& exps, double sigma, double ratio,
                             const std::vector<double>& d1_grid, const DomainGeometry& geom,
                             const ScanOptions& opts) {
    if (!(ratio > 0.0)) throw Error(ErrorKind::InvalidArgument, "nonexistence_scan: d2/d1 must be positive");
    if (!std::is_sorted(d1_grid.begin(), d1_grid.end())) {
        throw Error(ErrorKind::InvalidArgument, "nonexistence_scan: d1 grid must be increasing");
    }
    std::vector<CellSpec> cells;
    for (double d1 : d1_grid) cells.push_back({d1, ratio * d1, sigma});
    ScanReport rep;
    rep.cells = solve_cells(exps, cells, geom, opts);
    for (std::size_t c = rep.cells.size(); c-- > 0;) {
        if (rep.cells[c].found_nonconstant()) break;
        rep.cutoff = rep.cells[c].d1;
    }
    return rep;
}

}  // namespace gmlab
