#pragma once

// Reference computations for the tests. Nothing here calls into gmlab's
// numerics, so agreement is a genuine cross-check.

#include <cmath>
#include <functional>
#include <random>
#include <utility>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Dense scan followed by repeated local zoom; returns (argmax, max).
inline std::pair<double, double> scan_max(const std::function<double(double)>& f, double lo, double hi,
                                          int n = 2001, int zooms = 8) {
    double best_x = lo;
    double best = -INFINITY;
    for (int z = 0; z < zooms; ++z) {
        const double step = (hi - lo) / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = lo + i * step;
            const double v = f(x);
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        const double nlo = std::max(lo, best_x - 2 * step);
        const double nhi = std::min(hi, best_x + 2 * step);
        lo = nlo;
        hi = nhi;
    }
    return {best_x, best};
}

/// u* straight from its defining equation, bisection on [0, big].
inline double u_star(double p, double q, double r, double s, double sigma) {
    const double e = p - q * r / (s + 1.0);
    auto g = [&](double u) { return -u + std::pow(u, e) + sigma; };
    double hi = 2.0 + 2.0 * sigma;
    while (g(hi) > 0) hi *= 2;
    return bisect(g, 1e-300, hi);
}

inline double f_sigma(double p, double q, double r, double s, double sigma, double lam) {
    const double u = u_star(p, q, r, s, sigma);
    const double kappa = q * r - (p - 1) * (s + 1);
    return lam * (s + 1 - lam * r) / ((q - lam * (p - 1)) * std::pow(u, -kappa / (s + 1)) + lam * sigma / u);
}

/// Random valid exponent set: p in (1, 4), r in (0.5, 3), s in [0, 4), and
/// q drawn so that (p-1)/r < q/(s+1) with margin.
struct Exps {
    double p, q, r, s;
};

inline Exps random_exps(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double p = 1.1 + 2.9 * U(rng);
    const double r = 0.5 + 2.5 * U(rng);
    const double s = 4.0 * U(rng);
    const double lo = (p - 1) / r * (s + 1);
    const double q = lo * (1.05 + 1.5 * U(rng));
    return {p, q, r, s};
}

}  // namespace oracle
