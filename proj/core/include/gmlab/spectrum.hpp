#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gmlab/exponents.hpp"

namespace gmlab {

/// Model domains with closed-form Neumann spectra: [0, lx] or [0, lx] x [0, ly].
struct DomainGeometry {
    enum class Kind { Interval, Rectangle };

    Kind kind;
    double lx;
    double ly;  // unused for intervals

    /// Throw InvalidGeometry unless the lengths are positive and finite.
    static DomainGeometry interval(double length);
    static DomainGeometry rectangle(double lx, double ly);

    int dimension() const noexcept { return kind == Kind::Interval ? 1 : 2; }
    double measure() const noexcept { return kind == Kind::Interval ? lx : lx * ly; }

    bool operator==(const DomainGeometry&) const = default;
};

std::string to_string(DomainGeometry::Kind kind);

struct SpectrumEntry {
    int index;
    double lambda;
    int multiplicity;
};

/// First `count` distinct eigenvalues of -Laplacian with Neumann conditions,
/// lambda_0 = 0 first. Rectangle modes (i pi/lx)^2 + (j pi/ly)^2 are merged
/// into one entry when equal to relative 1e-12.
std::vector<SpectrumEntry> neumann_eigenvalues(const DomainGeometry& geom, int count);

/// p (u*)^{p-1-qr/(s+1)}, the activator self-coupling at the constant state.
double activator_gain(const ExponentSet& exps, double sigma);

/// d_{1i} for the eigenvalue lambda_i > 0:
///     (1/lambda_i) [ P - 1 - (q r/p) P / (s+1 + d2 lambda_i) ],  P = activator_gain.
double bifurcation_value(const ExponentSet& exps, double sigma, double d2, double lambda_i);

/// d_{1i} for i = 1..count.
std::vector<double> bifurcation_values(const ExponentSet& exps, double sigma, double d2,
                                       const DomainGeometry& geom, int count);

/// Linearisation of the reaction-diffusion system at the constant state on
/// the eigenmode with eigenvalue lambda_i, row-major
/// {f_u - d1 lambda, f_v, g_u, g_v - d2 lambda}.
std::array<double, 4> linearization_matrix(const ModelParams& params, double lambda_i);

struct BifurcationEntry {
    int index;
    double lambda;
    int multiplicity;
    double d1i;
};

struct BifurcationSet {
    std::vector<BifurcationEntry> entries;  // i = 1..count
    std::vector<int> active;                // A_d = { i >= 1 : d1 < d1i }
    int parity_count;                       // N_d = sum of multiplicities over A_d
    double d1;
    double d2;
    bool is_resonant;                       // d1 within 1e-9 relative of some d1i
    double nearest_gap;                     // min_i |d1 - d1i|
};

/// Throws TruncationUnsafe when count < 50 or the tail bound
/// max(0, P-1)/lambda_count is not below d1.
BifurcationSet parity(const ExponentSet& exps, double sigma, double d1, double d2,
                      const DomainGeometry& geom, int count);

/// parity() with the eigenvalue count doubled from 50 until the tail is certified.
BifurcationSet certified_parity(const ExponentSet& exps, double sigma, double d1, double d2,
                                const DomainGeometry& geom);

struct DeltaFeasibility {
    bool feasible;
    std::optional<double> delta;  // first feasible grid point in (0, 1]
};

/// Scans delta = k/10^4, k = 1..10^4, for the sigma = 0 uniform lower-bound
/// conditions in dimension n.
DeltaFeasibility delta_condition_feasible(const ExponentSet& exps, int n);

struct ExistencePrediction {
    bool predicted;
    int parity_count;
    bool parity_odd;
    bool resonant;
    bool sigma_positive;
    bool activator_ratio_below_one;  // (p-1)/r < 1
    bool delta_feasible;
    std::optional<double> delta;
    bool uniqueness_certified;       // d2/d1 <= k: the constant state is the only solution
    std::vector<std::string> reasons;
};

ExistencePrediction existence_prediction(const ExponentSet& exps, double sigma, double d1,
                                         double d2, const DomainGeometry& geom, int n);

}  // namespace gmlab
