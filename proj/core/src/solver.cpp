#include "gmlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/SparseLU>

#include "gmlab/analytic.hpp"

namespace gmlab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Lu = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

constexpr double kMarchFloor = 1e-12;
constexpr double kBlowUp = 1e12;
constexpr double kCollapsed = 1e3 * kMarchFloor;

void require_positive(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double lo = std::min(u.minCoeff(), v.minCoeff());
    if (!(lo > 0.0)) {
        std::ostringstream msg;
        msg << "field component not strictly positive (min " << lo << ")";
        throw Error(ErrorKind::NonPositiveField, msg.str());
    }
}

// Reaction terms with the homotopy weights folded in.
struct Sources {
    Eigen::VectorXd fu;  // tau (u^p/v^q + sigma) + (1-tau) rho
    Eigen::VectorXd fv;  // tau u^r/v^s + (1-chi) rho
};

Sources sources(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const ModelParams& prm,
                const std::optional<HomotopyParams>& hom) {
    const ExponentSet& e = prm.exps;
    const double tau = hom ? hom->tau : 1.0;
    const double rho = hom ? hom->rho : 0.0;
    const double chi = hom ? hom->chi() : 1.0;
    const auto ua = u.array();
    const auto va = v.array();
    Sources s;
    s.fu = (tau * (ua.pow(e.p()) * va.pow(-e.q()) + prm.sigma) + (1.0 - tau) * rho).matrix();
    s.fv = (tau * ua.pow(e.r()) * va.pow(-e.s()) + (1.0 - chi) * rho).matrix();
    return s;
}

double max_abs(const Eigen::VectorXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd residual_with(const SpMat& lap, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v, const ModelParams& prm,
                              const std::optional<HomotopyParams>& hom) {
    require_positive(u, v);
    const Sources s = sources(u, v, prm, hom);
    const Eigen::Index n = u.size();
    Eigen::VectorXd out(2 * n);
    out.head(n) = prm.d1 * (lap * u) - u + s.fu;
    out.tail(n) = prm.d2 * (lap * v) - v + s.fv;
    return out;
}

SpMat jacobian_with(const SpMat& lap, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                    const ModelParams& prm, const std::optional<HomotopyParams>& hom) {
    require_positive(u, v);
    const ExponentSet& e = prm.exps;
    const double tau = hom ? hom->tau : 1.0;
    const int n = static_cast<int>(u.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(2 * lap.nonZeros() + 4 * n));
    for (int k = 0; k < lap.outerSize(); ++k) {
        for (SpMat::InnerIterator it(lap, k); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            trip.emplace_back(i, j, prm.d1 * it.value());
            trip.emplace_back(n + i, n + j, prm.d2 * it.value());
        }
    }
    for (int i = 0; i < n; ++i) {
        const double ui = u(i);
        const double vi = v(i);
        const double act = std::pow(ui, e.p()) * std::pow(vi, -e.q());
        const double inh = std::pow(ui, e.r()) * std::pow(vi, -e.s());
        trip.emplace_back(i, i, -1.0 + tau * e.p() * act / ui);
        trip.emplace_back(i, n + i, -tau * e.q() * act / vi);
        trip.emplace_back(n + i, i, tau * e.r() * inh / ui);
        trip.emplace_back(n + i, n + i, -1.0 - tau * e.s() * inh / vi);
    }
    SpMat jac(2 * n, 2 * n);
    jac.setFromTriplets(trip.begin(), trip.end());
    jac.makeCompressed();
    return jac;
}

}  // namespace

Eigen::VectorXd residual(const Grid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const ModelParams& params, const std::optional<HomotopyParams>& hom) {
    require_positive(u, v);
    const Sources s = sources(u, v, params, hom);
    const Eigen::Index n = u.size();
    Eigen::VectorXd out(2 * n);
    out.head(n) = params.d1 * grid.apply_laplacian(u) - u + s.fu;
    out.tail(n) = params.d2 * grid.apply_laplacian(v) - v + s.fv;
    return out;
}

Eigen::VectorXd residual(const SolutionField& sol, const ModelParams& params,
                         const std::optional<HomotopyParams>& hom) {
    return residual(sol.grid, sol.u, sol.v, params, hom);
}

SpMat jacobian(const Grid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
               const ModelParams& params, const std::optional<HomotopyParams>& hom) {
    return jacobian_with(grid.laplacian(), u, v, params, hom);
}

double convergence_threshold(const Grid& grid, const ModelParams& params, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v) {
    const double scale = std::max(max_abs(u), max_abs(v));
    double stiff = 4.0 / (grid.hx() * grid.hx());
    if (grid.dimension() == 2) stiff += 4.0 / (grid.hy() * grid.hy());
    stiff *= std::max(params.d1, params.d2);
    return 1e-10 * (1.0 + scale) + 4.0 * std::numeric_limits<double>::epsilon() * scale * stiff;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::NoConvergence: return "no_convergence";
        case SolveStatus::LinearSolveFailure: return "linear_solve_failure";
    }
    return "unknown";
}

NewtonResult newton_solve(const SolutionField& initial, const ModelParams& params,
                          const std::optional<HomotopyParams>& hom, const NewtonOptions& opts) {
    const SpMat lap = initial.grid.laplacian();
    const Eigen::Index n = initial.u.size();
    Eigen::VectorXd x(2 * n);
    x << initial.u, initial.v;
    Eigen::VectorXd f = residual_with(lap, initial.u, initial.v, params, hom);

    NewtonResult res{initial, SolveStatus::NoConvergence, 0, {}, {}};
    res.field.params = params;
    auto finish = [&](SolveStatus st, std::string msg) {
        res.field.u = x.head(n);
        res.field.v = x.tail(n);
        res.field.residual_norm = max_abs(f);
        res.status = st;
        res.message = std::move(msg);
        return res;
    };

    Lu lu;
    bool analysed = false;
    res.residual_history.push_back(max_abs(f));
    for (int it = 0;; ++it) {
        res.iterations = it;
        if (max_abs(f) <= convergence_threshold(initial.grid, params, x.head(n), x.tail(n))) {
            return finish(SolveStatus::Converged, "converged");
        }
        if (it == opts.max_iter) break;

        const SpMat jac = jacobian_with(lap, x.head(n), x.tail(n), params, hom);
        if (!analysed) {
            lu.analyzePattern(jac);
            analysed = true;
        }
        lu.factorize(jac);
        if (lu.info() != Eigen::Success) {
            return finish(SolveStatus::LinearSolveFailure, "singular Jacobian: " + lu.lastErrorMessage());
        }
        const Eigen::VectorXd dx = lu.solve(-f);
        if (lu.info() != Eigen::Success || !dx.allFinite()) {
            return finish(SolveStatus::LinearSolveFailure, "linear solve produced non-finite step");
        }

        // fraction-to-boundary cap
        double alpha = 1.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (dx(i) < 0.0) alpha = std::min(alpha, (1.0 - opts.boundary_fraction) * x(i) / -dx(i));
        }
        const double merit = f.norm();
        bool accepted = false;
        for (int k = 0; k <= opts.max_halvings; ++k, alpha *= 0.5) {
            const Eigen::VectorXd trial = x + alpha * dx;
            if (!(trial.minCoeff() > 0.0)) continue;
            Eigen::VectorXd ft = residual_with(lap, trial.head(n), trial.tail(n), params, hom);
            if (ft.allFinite() && ft.norm() < merit) {
                x = trial;
                f = std::move(ft);
                accepted = true;
                break;
            }
        }
        res.residual_history.push_back(max_abs(f));
        if (!accepted) {
            res.iterations = it + 1;
            return finish(SolveStatus::NoConvergence, "line search failed to reduce the residual");
        }
    }
    std::ostringstream msg;
    msg << "no convergence after " << opts.max_iter << " iterations";
    return finish(SolveStatus::NoConvergence, msg.str());
}

SolutionField pseudo_time_march(const SolutionField& initial, const ModelParams& params,
                                const std::optional<HomotopyParams>& hom, double dt, int steps,
                                double inhibitor_rate) {
    if (!(dt > 0.0) || steps < 0 || !(inhibitor_rate > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "march: dt > 0, steps >= 0, inhibitor_rate > 0");
    }
    const double dtv = dt * inhibitor_rate;
    const SpMat lap = initial.grid.laplacian();
    const Eigen::Index n = initial.u.size();
    SpMat eye(n, n);
    eye.setIdentity();
    const SpMat au = (1.0 + dt) * eye - (dt * params.d1) * lap;
    const SpMat av = (1.0 + dtv) * eye - (dtv * params.d2) * lap;
    Lu lu_u;
    Lu lu_v;
    lu_u.compute(au);
    lu_v.compute(av);
    if (lu_u.info() != Eigen::Success || lu_v.info() != Eigen::Success) {
        throw Error(ErrorKind::LinearSolveFailure, "march: factorisation failed");
    }
    SolutionField out = initial;
    out.params = params;
    for (int k = 0; k < steps; ++k) {
        const Sources s = sources(out.u, out.v, params, hom);
        out.u = lu_u.solve(out.u + dt * s.fu).cwiseMax(kMarchFloor);
        out.v = lu_v.solve(out.v + dtv * s.fv).cwiseMax(kMarchFloor);
        const double top = std::max(out.u.maxCoeff(), out.v.maxCoeff());
        if (!std::isfinite(top) || top > kBlowUp || !out.u.allFinite() || !out.v.allFinite()) {
            std::ostringstream msg;
            msg << "pseudo-time march blew up at step " << k << " (dt " << dt << ")";
            throw Error(ErrorKind::BlowUp, msg.str());
        }
    }
    out.residual_norm = max_abs(residual_with(lap, out.u, out.v, params, hom));
    return out;
}

HomotopyPath homotopy_continuation(const Grid& grid, const ModelParams& params, double rho,
                                   int steps, int max_refinements, const NewtonOptions& opts) {
    if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "homotopy: rho must be positive");
    if (steps < 1) throw Error(ErrorKind::InvalidArgument, "homotopy: steps >= 1");
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(grid.size(), rho);
    SolutionField current{grid, flat, flat, 0.0, params};
    HomotopyPath path;
    path.tau.push_back(0.0);
    path.fields.push_back(current);

    auto advance = [&](auto&& self, double t1, int depth) -> void {
        NewtonResult r = newton_solve(current, params, HomotopyParams{t1, rho}, opts);
        if (r.converged()) {
            current = std::move(r.field);
            path.tau.push_back(t1);
            path.fields.push_back(current);
            return;
        }
        if (depth >= max_refinements) {
            std::ostringstream msg;
            msg << "homotopy path failed at tau = " << t1 << ": " << r.message;
            throw PathFailure(t1, msg.str());
        }
        const double t0 = path.tau.back();
        self(self, 0.5 * (t0 + t1), depth + 1);
        self(self, t1, depth + 1);
    };
    for (int k = 1; k <= steps; ++k) {
        advance(advance, k == steps ? 1.0 : static_cast<double>(k) / steps, 0);
    }
    return path;
}

SolutionField initial_guess(GuessKind kind, const Grid& grid, const ModelParams& params,
                            const GuessOptions& opts) {
    const ConstantState cs = constant_state(params.exps, params.sigma);
    const int n = grid.size();
    SolutionField out{grid, Eigen::VectorXd::Constant(n, cs.u_star),
                      Eigen::VectorXd::Constant(n, cs.v_star), 0.0, params};
    switch (kind) {
        case GuessKind::Constant: break;
        case GuessKind::Perturbed: {
            std::mt19937_64 rng(opts.seed);
            std::uniform_real_distribution<double> unit(-1.0, 1.0);
            for (int i = 0; i < n; ++i) out.u(i) *= 1.0 + opts.epsilon * unit(rng);
            for (int i = 0; i < n; ++i) out.v(i) *= 1.0 + opts.epsilon * unit(rng);
            break;
        }
        case GuessKind::Spike: {
            const double amp = opts.amplitude.value_or(10.0 * cs.u_star);
            const double w = opts.width.value_or(5.0 * grid.min_spacing());
            const std::array<double, 2> c = opts.center.value_or(std::array<double, 2>{0.0, 0.0});
            for (int j = 0; j < grid.ny(); ++j) {
                for (int i = 0; i < grid.nx(); ++i) {
                    double r2 = std::pow(grid.x(i) - c[0], 2.0);
                    if (grid.dimension() == 2) r2 += std::pow(grid.y(j) - c[1], 2.0);
                    out.u(grid.index(i, j)) += amp * std::exp(-r2 / (w * w));
                }
            }
            break;
        }
    }
    return out;
}

bool is_constant_solution(const SolutionField& sol, double rtol) {
    auto flat = [rtol](const Eigen::VectorXd& f) {
        return f.maxCoeff() - f.minCoeff() <= rtol * std::abs(f.mean());
    };
    return flat(sol.u) && flat(sol.v);
}

NewtonResult find_steady_state(const SolutionField& initial, const ModelParams& params,
                               const SteadyStateOptions& opts) {
    std::optional<NewtonResult> last;
    if (!opts.march_first) {
        last = newton_solve(initial, params, std::nullopt, opts.newton);
        if (last->converged()) return *last;
    }
    SolutionField start = initial;
    double dt = opts.dt;
    for (int round = 0; round < opts.max_rounds; ++round) {
        try {
            start = pseudo_time_march(start, params, std::nullopt, dt, opts.march_steps, opts.inhibitor_rate);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BlowUp) throw;
            dt *= 0.5;
            start = initial;
            continue;
        }
        if (start.u.maxCoeff() <= kCollapsed) {
            // the clamp keeps a dead state positive, but it is not a solution
            last = NewtonResult{start, SolveStatus::NoConvergence, 0, {}, "pseudo-time march collapsed to zero"};
            break;
        }
        last = newton_solve(start, params, std::nullopt, opts.newton);
        if (last->converged()) return *last;
    }
    if (!last) {
        NewtonResult r{start, SolveStatus::NoConvergence, 0, {}, "pseudo-time march never completed"};
        return r;
    }
    return *last;
}

}  // namespace gmlab
