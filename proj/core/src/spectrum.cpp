#include "gmlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gmlab/analytic.hpp"
#include "gmlab/errors.hpp"

namespace gmlab {

namespace {

constexpr int kMinParityCount = 50;
constexpr double kResonanceWindow = 1e-9;
constexpr double kMergeTol = 1e-12;

void check_length(double len, const char* name) {
    if (!std::isfinite(len) || !(len > 0.0)) {
        std::ostringstream msg;
        msg << "geometry length " << name << " = " << len << " must be positive";
        throw Error(ErrorKind::InvalidGeometry, msg.str());
    }
}

}  // namespace

DomainGeometry DomainGeometry::interval(double length) {
    check_length(length, "L");
    return {Kind::Interval, length, 0.0};
}

DomainGeometry DomainGeometry::rectangle(double lx, double ly) {
    check_length(lx, "Lx");
    check_length(ly, "Ly");
    return {Kind::Rectangle, lx, ly};
}

std::string to_string(DomainGeometry::Kind kind) {
    return kind == DomainGeometry::Kind::Interval ? "interval" : "rectangle";
}

std::vector<SpectrumEntry> neumann_eigenvalues(const DomainGeometry& geom, int count) {
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "neumann_eigenvalues: count >= 1");
    const double pi = std::numbers::pi;
    std::vector<SpectrumEntry> out;
    out.reserve(static_cast<std::size_t>(count));
    if (geom.kind == DomainGeometry::Kind::Interval) {
        for (int i = 0; i < count; ++i) {
            const double k = i * pi / geom.lx;
            out.push_back({i, k * k, 1});
        }
        return out;
    }
    // The axis modes (i pi/lx)^2, i < count, are already `count` distinct
    // values, so the count-th eigenvalue cannot exceed the smaller of the two
    // axis caps.
    const double cap = std::min(std::pow((count - 1) * pi / geom.lx, 2.0),
                                std::pow((count - 1) * pi / geom.ly, 2.0));
    const double limit = cap * (1.0 + 4.0 * kMergeTol);
    const int imax = static_cast<int>(std::floor(std::sqrt(limit) * geom.lx / pi)) + 1;
    const int jmax = static_cast<int>(std::floor(std::sqrt(limit) * geom.ly / pi)) + 1;
    std::vector<double> values;
    for (int i = 0; i <= imax; ++i) {
        const double ax = std::pow(i * pi / geom.lx, 2.0);
        if (ax > limit) break;
        for (int j = 0; j <= jmax; ++j) {
            const double val = ax + std::pow(j * pi / geom.ly, 2.0);
            if (val > limit) break;
            values.push_back(val);
        }
    }
    std::sort(values.begin(), values.end());
    std::size_t k = 0;
    while (k < values.size() && static_cast<int>(out.size()) < count) {
        const double head = values[k];
        int mult = 0;
        while (k < values.size() && values[k] - head <= kMergeTol * std::max(1.0, head)) {
            ++mult;
            ++k;
        }
        out.push_back({static_cast<int>(out.size()), head, mult});
    }
    return out;
}

double activator_gain(const ExponentSet& exps, double sigma) {
    const double u = constant_state(exps, sigma).u_star;
    return exps.p() * std::pow(u, exps.p() - 1.0 - exps.q() * exps.r() / (exps.s() + 1.0));
}

double bifurcation_value(const ExponentSet& exps, double sigma, double d2, double lambda_i) {
    const double gain = activator_gain(exps, sigma);
    const double coupling = exps.q() * exps.r() * gain / exps.p();
    return (gain - 1.0 - coupling / (exps.s() + 1.0 + d2 * lambda_i)) / lambda_i;
}

std::vector<double> bifurcation_values(const ExponentSet& exps, double sigma, double d2,
                                       const DomainGeometry& geom, int count) {
    const auto spec = neumann_eigenvalues(geom, count + 1);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) {
        out.push_back(bifurcation_value(exps, sigma, d2, spec[static_cast<std::size_t>(i)].lambda));
    }
    return out;
}

std::array<double, 4> linearization_matrix(const ModelParams& params, double lambda_i) {
    const ExponentSet& e = params.exps;
    const double u = constant_state(e, params.sigma).u_star;
    const double qr = e.q() * e.r() / (e.s() + 1.0);
    const double fu = e.p() * std::pow(u, e.p() - 1.0 - qr) - 1.0;
    const double fv = -e.q() * std::pow(u, e.p() - (e.q() + 1.0) * e.r() / (e.s() + 1.0));
    const double gu = e.r() * std::pow(u, e.r() / (e.s() + 1.0) - 1.0);
    const double gv = -e.s() - 1.0;
    return {fu - params.d1 * lambda_i, fv, gu, gv - params.d2 * lambda_i};
}

BifurcationSet parity(const ExponentSet& exps, double sigma, double d1, double d2,
                      const DomainGeometry& geom, int count) {
    const double gain = activator_gain(exps, sigma);
    const auto spec = neumann_eigenvalues(geom, count + 1);
    BifurcationSet out{{}, {}, 0, d1, d2, false, std::numeric_limits<double>::infinity()};
    out.entries.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) {
        const SpectrumEntry& se = spec[static_cast<std::size_t>(i)];
        const double d1i = bifurcation_value(exps, sigma, d2, se.lambda);
        out.entries.push_back({se.index, se.lambda, se.multiplicity, d1i});
        if (d1 < d1i) {
            out.active.push_back(se.index);
            out.parity_count += se.multiplicity;
        }
        out.nearest_gap = std::min(out.nearest_gap, std::abs(d1 - d1i));
    }
    // d_{1i} <= (P - 1)/lambda_i for every i, so this bounds the whole tail.
    const double tail = std::max(0.0, gain - 1.0) / spec.back().lambda;
    if (count < kMinParityCount || !(tail < d1)) {
        std::ostringstream msg;
        msg << "parity: tail not certified with " << count << " eigenvalues (tail bound " << tail
            << ", d1 " << d1 << ")";
        throw Error(ErrorKind::TruncationUnsafe, msg.str());
    }
    out.is_resonant = out.nearest_gap < kResonanceWindow * std::max(1.0, d1);
    return out;
}

BifurcationSet certified_parity(const ExponentSet& exps, double sigma, double d1, double d2,
                                const DomainGeometry& geom) {
    const double gain = activator_gain(exps, sigma);
    int count = kMinParityCount;
    for (int round = 0; round < 40; ++round) {
        const auto top = neumann_eigenvalues(geom, count + 1).back().lambda;
        if (std::max(0.0, gain - 1.0) / top < d1) {
            return parity(exps, sigma, d1, d2, geom, count);
        }
        count *= 2;
    }
    throw Error(ErrorKind::TruncationUnsafe, "certified_parity: d1 too small to certify the tail");
}

DeltaFeasibility delta_condition_feasible(const ExponentSet& exps, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
    const bool sobolev_unbounded = n <= 2;
    const double critical = sobolev_unbounded ? std::numeric_limits<double>::infinity()
                                              : static_cast<double>(n) / (n - 2);
    if (!(exps.r() < critical)) return {false, std::nullopt};
    const double p = exps.p();
    const double q = exps.q();
    const double r = exps.r();
    const double s = exps.s();
    constexpr int kSteps = 10000;
    for (int k = 1; k <= kSteps; ++k) {
        const double delta = static_cast<double>(k) / kSteps;
        const double mix = (1.0 - delta) / r + delta / p;
        if (!(mix > 0.0 && mix < 1.0)) continue;
        // (r-1+delta)/r - delta/p == 1 - mix
        const double ratio = ((1.0 - delta) * s / r + delta * q / p) / (1.0 - mix);
        if (ratio < critical || ratio <= s + 1.0) return {true, delta};
    }
    return {false, std::nullopt};
}

ExistencePrediction existence_prediction(const ExponentSet& exps, double sigma, double d1,
                                         double d2, const DomainGeometry& geom, int n) {
    ExistencePrediction out{};
    const BifurcationSet set = certified_parity(exps, sigma, d1, d2, geom);
    out.parity_count = set.parity_count;
    out.parity_odd = set.parity_count % 2 == 1;
    out.resonant = set.is_resonant;
    out.sigma_positive = sigma > 0.0;
    out.activator_ratio_below_one = (exps.p() - 1.0) / exps.r() < 1.0;
    if (!out.sigma_positive) {
        const DeltaFeasibility df = delta_condition_feasible(exps, n);
        out.delta_feasible = df.feasible;
        out.delta = df.delta;
    }
    const bool lower_bounds = out.sigma_positive || out.delta_feasible;
    out.predicted = out.parity_odd && !out.resonant && out.activator_ratio_below_one && lower_bounds;
    out.uniqueness_certified =
        optimal_bound_certificate(ModelParams::make(exps, d1, d2, sigma)).unique_constant;

    auto yes = [](bool b) { return b ? "yes" : "no"; };
    std::ostringstream os;
    os << "N_d = " << out.parity_count << (out.parity_odd ? " (odd)" : " (even)");
    out.reasons.push_back(os.str());
    out.reasons.push_back(std::string("d1 away from every d1i: ") + yes(!out.resonant));
    out.reasons.push_back(std::string("(p-1)/r < 1: ") + yes(out.activator_ratio_below_one));
    if (out.sigma_positive) {
        out.reasons.push_back("uniform lower bounds: sigma > 0");
    } else {
        std::ostringstream d;
        d << "uniform lower bounds (delta condition, n = " << n << "): " << yes(out.delta_feasible);
        if (out.delta) d << " at delta = " << *out.delta;
        out.reasons.push_back(d.str());
    }
    out.reasons.push_back(std::string("uniqueness certified by d2/d1 <= k: ") +
                          yes(out.uniqueness_certified));
    return out;
}

}  // namespace gmlab
