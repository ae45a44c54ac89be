#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gmlab/errors.hpp"
#include "gmlab/exponents.hpp"
#include "gmlab/grid.hpp"

namespace gmlab {

struct SolutionField {
    Grid grid;
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    double residual_norm = 0.0;
    ModelParams params;
};

/// Deformation parameter for the degree argument: tau = 1 is the model,
/// tau = 0 a linear problem with the constant solution (rho, rho).
struct HomotopyParams {
    double tau;
    double rho;
    double chi() const noexcept { return tau < 0.5 ? 2.0 * tau : 1.0; }
};

/// Residual of both equations stacked as [F_u; F_v]; NonPositiveField when
/// any component of u or v is not strictly positive.
Eigen::VectorXd residual(const Grid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const ModelParams& params,
                         const std::optional<HomotopyParams>& hom = std::nullopt);
Eigen::VectorXd residual(const SolutionField& sol, const ModelParams& params,
                         const std::optional<HomotopyParams>& hom = std::nullopt);

/// Jacobian of residual() with unknowns ordered [u; v].
Eigen::SparseMatrix<double> jacobian(const Grid& grid, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& v, const ModelParams& params,
                                     const std::optional<HomotopyParams>& hom = std::nullopt);

/// 1e-10 (1 + scale) plus the roundoff floor 4 eps scale |d Delta_h|, where
/// scale = max(|u|_inf, |v|_inf) and |d Delta_h| = max(d1, d2) sum 4/h^2.
/// Without the second term fine grids with large d2 can never converge.
double convergence_threshold(const Grid& grid, const ModelParams& params, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v);

struct NewtonOptions {
    int max_iter = 100;
    int max_halvings = 30;
    // A step may shrink any component to at most this fraction of its
    // current value; steep spike tails legitimately reach 1e-13.
    double boundary_fraction = 0.01;
};

enum class SolveStatus { Converged, NoConvergence, LinearSolveFailure };
std::string to_string(SolveStatus status);

struct NewtonResult {
    SolutionField field;
    SolveStatus status;
    int iterations;
    std::vector<double> residual_history;
    std::string message;

    bool converged() const noexcept { return status == SolveStatus::Converged; }
};

NewtonResult newton_solve(const SolutionField& initial, const ModelParams& params,
                          const std::optional<HomotopyParams>& hom = std::nullopt,
                          const NewtonOptions& opts = {});

/// Semi-implicit pseudo-time stepping: diffusion and the linear decay are
/// implicit, the nonlinear sources explicit. Fields are clamped at 1e-12;
/// throws BlowUp when any value exceeds 1e12. The inhibitor is relaxed
/// `inhibitor_rate` times faster; steady states do not depend on it, but a
/// fast inhibitor suppresses the oscillatory instability of spikes.
SolutionField pseudo_time_march(const SolutionField& initial, const ModelParams& params,
                                const std::optional<HomotopyParams>& hom, double dt, int steps,
                                double inhibitor_rate = 1.0);

struct HomotopyPath {
    std::vector<double> tau;
    std::vector<SolutionField> fields;
};

/// Thrown by homotopy_continuation; carries the tau where the path broke.
class PathFailure : public Error {
public:
    PathFailure(double tau, const std::string& what)
        : Error(ErrorKind::PathFailure, what), tau_(tau) {}
    double tau() const noexcept { return tau_; }

private:
    double tau_;
};

HomotopyPath homotopy_continuation(const Grid& grid, const ModelParams& params, double rho,
                                   int steps = 40, int max_refinements = 4,
                                   const NewtonOptions& opts = {});

enum class GuessKind { Constant, Perturbed, Spike };

struct GuessOptions {
    double epsilon = 0.1;
    std::uint64_t seed = 0;
    std::optional<double> amplitude;            // default 10 u*
    std::optional<double> width;                // default 5 h
    std::optional<std::array<double, 2>> center;  // default: the origin corner
};

SolutionField initial_guess(GuessKind kind, const Grid& grid, const ModelParams& params,
                            const GuessOptions& opts = {});

/// Both fields vary by at most rtol relative to their mean.
bool is_constant_solution(const SolutionField& sol, double rtol = 1e-6);

struct SteadyStateOptions {
    NewtonOptions newton;
    bool march_first = false;
    double dt = 0.05;
    int march_steps = 2000;
    double inhibitor_rate = 10.0;
    int max_rounds = 4;
};

/// Newton, falling back to pseudo-time marching followed by Newton. With
/// march_first the dynamics pick the basin.
NewtonResult find_steady_state(const SolutionField& initial, const ModelParams& params,
                               const SteadyStateOptions& opts = {});

}  // namespace gmlab
