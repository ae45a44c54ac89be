#pragma once

#include <cmath>
#include <utility>

namespace gmlab {

struct Extremum {
    double x;
    double value;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than `tol` (absolute) or after
/// `max_iter` reductions.
template <class F>
Extremum golden_section_maximize(F&& f, double lo, double hi, double tol = 1e-12,
                                 int max_iter = 500) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

template <class F>
Extremum golden_section_minimize(F&& f, double lo, double hi, double tol = 1e-12,
                                 int max_iter = 500) {
    auto neg = [&f](double x) { return -f(x); };
    Extremum e = golden_section_maximize(neg, lo, hi, tol, max_iter);
    return {e.x, -e.value};
}

}  // namespace gmlab
