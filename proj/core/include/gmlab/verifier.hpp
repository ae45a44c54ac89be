#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmlab/solver.hpp"
#include "gmlab/spectrum.hpp"

namespace gmlab {

struct Extremes {
    double u_max;
    double u_min;
    double v_max;
    double v_min;

    static Extremes of(const SolutionField& sol);
};

/// One checked inequality, stored as lhs <= rhs (identities: lhs == rhs).
struct BoundsEntry {
    std::string check_name;
    double lhs;
    double rhs;
    double slack;      // rhs - lhs; for identities -|rhs - lhs|
    double tolerance;
    bool passed;       // slack >= -tolerance
    std::string anchor;
};

struct Tolerances {
    double curvature;  // C_h: max |Delta_h w| / max(1, |w|_inf) over w = u, v
    double h;          // largest grid spacing
    double pointwise;  // C_h h^2 + 1e-9, relative
    double theorem;    // C_h h^2 + 1e-6, relative
};

struct BoundsReport {
    std::vector<BoundsEntry> entries;
    Tolerances tolerances{};
    std::map<std::string, double> measurements;  // informational, not pass/fail

    bool overall() const noexcept;
    void append(const std::vector<BoundsEntry>& more);
};

Tolerances tolerances_for(const SolutionField& sol);

/// Max-principle inequalities, the sigma > 0 trivial bounds and the
/// u/v^lambda sandwich chain on a lambda grid in (0, (s+1)/r).
/// NotConverged unless the residual is below the solver threshold.
std::vector<BoundsEntry> check_pointwise(const SolutionField& sol, const ModelParams& params);

/// The integral identities and inequalities obtained by integrating the
/// equations against 1, u^-1, u^-p, v^-1 and v^s.
std::vector<BoundsEntry> check_integrals(const SolutionField& sol, const ModelParams& params);

/// Bounds granted by optimal_bound_certificate, plus the explicit
/// sigma = 0 bounds optimised over lambda where their hypotheses hold.
std::vector<BoundsEntry> check_theorem_bounds(const SolutionField& sol, const ModelParams& params);

/// All three groups plus min/mean ratios and discrete quadrature defects.
BoundsReport verify_solution(const SolutionField& sol, const ModelParams& params);

/// Continuum defect of an integral identity: the Gauss-integrated source of
/// the piecewise (bi)linear reconstruction minus the integral of the
/// reconstructed field, with an O(h^2) estimate of its size.
struct IdentityDefect {
    double source_integral;
    double field_integral;
    double defect;
    double estimate;
};

/// which = 1: u^p/v^q + sigma vs u; which = 4: u^r/v^s vs v.
IdentityDefect identity_defect(const SolutionField& sol, const ModelParams& params, int which);

struct ScanOptions {
    int seeds = 8;
    int nodes = 201;     // per axis
    int workers = 1;     // 0 = hardware concurrency
    std::uint64_t seed = 0;
    SteadyStateOptions steady{.newton = {}, .march_first = true};
};

struct CellSpec {
    double d1;
    double d2;
    double sigma;
};

struct ScanCell {
    double d1;
    double d2;
    double sigma;
    int runs;
    int converged;
    int nonconstant;
    Extremes extremes;  // most non-uniform converged run, else the constant state
    int parity_count;
    bool predicted;
    std::string status;

    bool found_nonconstant() const noexcept { return nonconstant > 0; }
};

struct ScanReport {
    std::vector<ScanCell> cells;
    // Smallest grid d1 from which every later cell produced only constant
    // solutions; empty when the largest d1 still has a non-constant one.
    std::optional<double> cutoff;
};

/// Solves every cell from `opts.seeds` guesses: perturbed constant states
/// for even seeds, randomly placed spikes for odd ones. Runs are spread over
/// worker threads; results come back in cell order. Failures are recorded
/// in the cell, never thrown.
std::vector<ScanCell> solve_cells(const ExponentSet& exps, const std::vector<CellSpec>& cells,
                                  const DomainGeometry& geom, const ScanOptions& opts = {});

/// solve_cells over d2 = ratio * d1 for an increasing d1 grid.
ScanReport nonexistence_scan(const ExponentSet& exps, double sigma, double ratio,
                             const std::vector<double>& d1_grid, const DomainGeometry& geom,
                             const ScanOptions& opts = {});

void write_report_text(std::ostream& os, const BoundsReport& report);
std::string report_to_json(const BoundsReport& report, int indent = 2);

}  // namespace gmlab
