#include "gmlab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gmlab/errors.hpp"
#include "gmlab/optimize.hpp"

namespace gmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (s+1-q)/(r-(p-1)); only meaningful (and positive) when q < s+1.
double upper_corner(const ExponentSet& e) {
    return (e.s() + 1.0 - e.q()) / (e.r() - (e.p() - 1.0));
}

void require_upper_hypothesis(const ExponentSet& e) {
    if (!(e.q() < e.s() + 1.0)) {
        throw Error(ErrorKind::AssumptionViolated, "upper-bound sets need q < s+1");
    }
}

void require_lower_hypothesis(const ExponentSet& e) {
    if (!(e.r() < e.s() + 1.0)) {
        throw Error(ErrorKind::AssumptionViolated, "lower-bound sets need r < s+1");
    }
}

// {lambda in [1, (s+1)/r) : (s+1 - lambda r)/(q - lambda(p-1)) <= 1}
Interval lambda2_interval(const ExponentSet& e) {
    Interval base{1.0, e.lambda_max(), true, false};
    const double slope = e.r() - (e.p() - 1.0);
    const double rhs = e.s() + 1.0 - e.q();
    // b <= 1  <=>  rhs <= lambda * slope   (denominator q - lambda(p-1) > 0)
    if (slope > 0.0) {
        return base.intersect(Interval{rhs / slope, kInf, true, false});
    }
    if (slope < 0.0) {
        return base.intersect(Interval{-kInf, rhs / slope, false, true});
    }
    return rhs <= 0.0 ? base : Interval{1.0, 1.0, false, false};
}

double young_ratio(double t, double tau) {
    // t^t (1-t)^{1-t} / (tau^t (1-tau)^{1-t}), with 0^0 = 1
    return std::pow(1.0 - t, 1.0 - t) * std::pow(t, t) /
           (std::pow(1.0 - tau, 1.0 - t) * std::pow(tau, t));
}

}  // namespace

ConstantState constant_state(const ExponentSet& exps, double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "sigma must be nonnegative and finite");
    }
    if (sigma == 0.0) {
        return {1.0, 1.0, 0.0};
    }
    const double e = exps.reduced_power();
    auto g = [&](double u) { return -u + std::pow(u, e) + sigma; };

    // g > 0 below the root and g < 0 above it.
    double lo = std::min(1.0, sigma);
    double hi = std::max({1.0, 1.0 + sigma, (1.0 + sigma) * (1.0 + sigma)});
    int guard = 0;
    while (!(g(lo) > 0.0)) {
        lo *= 0.5;
        if (++guard > 200) throw Error(ErrorKind::NoConvergence, "constant_state: lower bracket");
    }
    guard = 0;
    while (!(g(hi) < 0.0)) {
        hi *= 2.0;
        if (++guard > 200) throw Error(ErrorKind::NoConvergence, "constant_state: upper bracket");
    }
    for (int it = 0; it < 400 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    if (hi - lo > 1e-14 * hi) {
        throw Error(ErrorKind::NoConvergence, "constant_state: bisection budget exhausted");
    }
    double u = 0.5 * (lo + hi);
    for (int k = 0; k < 3; ++k) {
        const double dg = -1.0 + e * std::pow(u, e - 1.0);
        const double next = u - g(u) / dg;
        if (!(next >= lo && next <= hi)) break;
        u = next;
    }
    return {u, std::pow(u, exps.r() / (exps.s() + 1.0)), sigma};
}

double du_star_dsigma(const ExponentSet& exps, double sigma) {
    const double u = constant_state(exps, sigma).u_star;
    const double qr = exps.q() * exps.r() / (exps.s() + 1.0);
    return 1.0 / (1.0 + (qr - exps.p()) * std::pow(u, exps.p() - 1.0 - qr));
}

ThresholdFunction::ThresholdFunction(const ExponentSet& exps, double sigma)
    : exps_(exps), sigma_(sigma), u_star_(constant_state(exps, sigma).u_star) {
    weight_ = std::pow(u_star_, -exps.excess() / (exps.s() + 1.0));
}

double ThresholdFunction::operator()(double lambda) const {
    const double top = exps_.lambda_max();
    if (!(lambda >= 0.0 && lambda <= top)) {
        std::ostringstream msg;
        msg << "f_sigma: lambda = " << lambda << " outside [0, " << top << "]";
        throw Error(ErrorKind::DomainError, msg.str());
    }
    if (lambda == 0.0 || lambda == top) return 0.0;
    const double num = lambda * (exps_.s() + 1.0 - lambda * exps_.r());
    const double den = (exps_.q() - lambda * (exps_.p() - 1.0)) * weight_ + lambda * sigma_ / u_star_;
    return num / den;
}

double f_sigma(const ExponentSet& exps, double sigma, double lambda) {
    return ThresholdFunction(exps, sigma)(lambda);
}

double f0_critical_lambda(const ExponentSet& exps) {
    if (exps.p() == 1.0) {
        throw Error(ErrorKind::DegenerateP, "f0_critical_lambda: p = 1");
    }
    // Rationalised form of (q/(p-1))(1 - sqrt(1 - (p-1)(s+1)/(qr))); no cancellation.
    const double disc = 1.0 - (exps.p() - 1.0) * (exps.s() + 1.0) / (exps.q() * exps.r());
    return exps.lambda_max() / (1.0 + std::sqrt(disc));
}

AuxiliaryQuantities auxiliary_quantities(const ExponentSet& exps, double lambda) {
    const double head = exps.s() + 1.0 - lambda * exps.r();
    const double a = (exps.q() - lambda * (exps.p() - 1.0)) / head;
    const double a0 = lambda / head;
    return {a, 1.0 / a, a0, 1.0 / a0};
}

bool Interval::empty() const noexcept {
    if (lo < hi) return false;
    return !(lo == hi && lo_closed && hi_closed);
}

bool Interval::contains(double x) const noexcept {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

Interval Interval::intersect(const Interval& o) const noexcept {
    Interval out{};
    if (lo > o.lo) {
        out.lo = lo;
        out.lo_closed = lo_closed;
    } else if (o.lo > lo) {
        out.lo = o.lo;
        out.lo_closed = o.lo_closed;
    } else {
        out.lo = lo;
        out.lo_closed = lo_closed && o.lo_closed;
    }
    if (hi < o.hi) {
        out.hi = hi;
        out.hi_closed = hi_closed;
    } else if (o.hi < hi) {
        out.hi = o.hi;
        out.hi_closed = o.hi_closed;
    } else {
        out.hi = hi;
        out.hi_closed = hi_closed && o.hi_closed;
    }
    return out;
}

std::string Interval::to_string() const {
    std::ostringstream os;
    os.precision(12);
    os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
    return os.str();
}

std::string to_string(LambdaKind kind) {
    switch (kind) {
        case LambdaKind::Lambda1: return "Lambda1";
        case LambdaKind::Lambda2: return "Lambda2";
        case LambdaKind::Lambda3: return "Lambda3";
        case LambdaKind::Lambda4: return "Lambda4";
    }
    return "?";
}

std::string LambdaSet::to_string() const {
    if (intervals.empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (i) out += " U ";
        out += intervals[i].to_string();
    }
    return out;
}

LambdaSet lambda_set(const ExponentSet& exps, LambdaKind kind) {
    Interval set{};
    switch (kind) {
        case LambdaKind::Lambda1:
            require_upper_hypothesis(exps);
            set = Interval{0.0, std::min(1.0, upper_corner(exps)), false, true};
            break;
        case LambdaKind::Lambda3:
            require_upper_hypothesis(exps);
            set = Interval{0.0,
                           std::min({1.0, upper_corner(exps), (exps.s() + 1.0) / (exps.r() + 1.0)}),
                           false, true};
            break;
        case LambdaKind::Lambda2:
            require_lower_hypothesis(exps);
            set = lambda2_interval(exps);
            break;
        case LambdaKind::Lambda4:
            require_lower_hypothesis(exps);
            set = lambda2_interval(exps).intersect(
                Interval{(exps.s() + 1.0) / (exps.r() + 1.0), kInf, true, false});
            break;
    }
    LambdaSet out{kind, {}};
    if (!set.empty()) out.intervals.push_back(set);
    return out;
}

Supremum supremum_over(const ThresholdFunction& f, const LambdaSet& set) {
    Supremum best{-kInf, 0.0, false};
    auto consider = [&best](double x, double value, bool attained) {
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value));
        if (value > best.value + slack || (attained && !best.attained && value >= best.value - slack)) {
            best = {value, x, attained};
        }
    };
    for (const Interval& iv : set.intervals) {
        if (iv.hi > iv.lo) {
            const double tol = 1e-12 * std::max(1.0, iv.hi);
            const Extremum e = golden_section_maximize([&f](double x) { return f(x); }, iv.lo, iv.hi, tol);
            consider(e.x, e.value, iv.contains(e.x));
        }
        consider(iv.lo, f(iv.lo), iv.lo_closed);
        consider(iv.hi, f(iv.hi), iv.hi_closed);
    }
    if (best.value == -kInf) {
        throw Error(ErrorKind::DomainError, "supremum over an empty lambda set");
    }
    return best;
}

ThresholdReport k_thresholds(const ExponentSet& exps, double sigma) {
    const ThresholdFunction f(exps, sigma);
    ThresholdReport rep{exps, sigma, {}, {}, {}, f0_critical_lambda(exps), {}, {}, {}, {}};
    const bool positive = sigma > 0.0;
    if (exps.q() < exps.s() + 1.0) {
        rep.upper_set = lambda_set(exps, positive ? LambdaKind::Lambda3 : LambdaKind::Lambda1);
        rep.upper_sup = supremum_over(f, *rep.upper_set);
        rep.k1 = rep.upper_sup->value;
    }
    if (exps.r() < exps.s() + 1.0) {
        rep.lower_set = lambda_set(exps, positive ? LambdaKind::Lambda4 : LambdaKind::Lambda2);
        if (!rep.lower_set->intervals.empty()) {
            rep.lower_sup = supremum_over(f, *rep.lower_set);
            rep.k2 = rep.lower_sup->value;
        }
    }
    if (rep.k1 && rep.k2) {
        rep.k = std::min(*rep.k1, *rep.k2);
    } else if (rep.k1) {
        rep.k = rep.k1;
    } else if (rep.k2) {
        rep.k = rep.k2;
    }
    return rep;
}

double explicit_upper_bound(const ModelParams& params, double lambda) {
    const ExponentSet& e = params.exps;
    auto fail = [&](const char* why) {
        std::ostringstream msg;
        msg << "explicit_upper_bound(lambda = " << lambda << "): " << why;
        throw Error(ErrorKind::PreconditionViolated, msg.str());
    };
    if (params.sigma != 0.0) fail("requires sigma = 0");
    if (!(e.q() < e.s() + 1.0)) fail("requires q < s+1");
    if (!(lambda > 0.0 && lambda <= 1.0)) fail("requires 0 < lambda <= 1");
    if (!(lambda < upper_corner(e))) fail("requires lambda < (s+1-q)/(r-(p-1))");
    const double tau = lambda / params.ratio();
    if (!(tau < 1.0)) fail("requires lambda < d2/d1");
    const double a = auxiliary_quantities(e, lambda).a;
    return std::pow(young_ratio(a, tau), (e.s() + 1.0) / e.excess());
}

double explicit_lower_bound(const ModelParams& params, double lambda) {
    const ExponentSet& e = params.exps;
    auto fail = [&](const char* why) {
        std::ostringstream msg;
        msg << "explicit_lower_bound(lambda = " << lambda << "): " << why;
        throw Error(ErrorKind::PreconditionViolated, msg.str());
    };
    if (params.sigma != 0.0) fail("requires sigma = 0");
    if (!(e.r() < e.s() + 1.0)) fail("requires r < s+1");
    if (!(lambda >= 1.0 && lambda < e.lambda_max())) fail("requires 1 <= lambda < (s+1)/r");
    const double b = auxiliary_quantities(e, lambda).b;
    if (!(b < 1.0)) fail("requires b < 1");
    const double tau = params.ratio() / lambda;
    if (!(tau < 1.0)) fail("requires lambda > d2/d1");
    return std::pow(1.0 / young_ratio(b, tau), (1.0 / b) * (e.s() + 1.0) / e.excess());
}

std::optional<BoundChoice> best_explicit_upper_bound(const ModelParams& params) {
    const ExponentSet& e = params.exps;
    if (params.sigma != 0.0 || !(e.q() < e.s() + 1.0)) return std::nullopt;
    const double corner = upper_corner(e);
    double hi = std::min({1.0, corner, params.ratio()});
    // lambda = 1 itself is admissible when it is the binding end.
    const bool hi_admissible = hi == 1.0 && 1.0 < corner && 1.0 < params.ratio();
    if (!hi_admissible) hi *= 1.0 - 1e-9;
    const double lo = 1e-9 * hi;
    auto bound = [&](double l) { return explicit_upper_bound(params, l); };
    Extremum m = golden_section_minimize(bound, lo, hi, 1e-8 * hi);
    const double at_hi = bound(hi);
    if (at_hi < m.value) m = {hi, at_hi};
    return BoundChoice{m.x, m.value};
}

std::optional<BoundChoice> best_explicit_lower_bound(const ModelParams& params) {
    const ExponentSet& e = params.exps;
    if (params.sigma != 0.0 || !(e.r() < e.s() + 1.0)) return std::nullopt;
    const LambdaSet set = lambda_set(e, LambdaKind::Lambda2);
    if (set.intervals.empty()) return std::nullopt;
    const Interval& iv = set.intervals.front();
    const double top = e.lambda_max();
    double lo = std::max(iv.lo, params.ratio());
    if (!(lo < top)) return std::nullopt;
    // Strict b < 1 and lambda > d2/d1 unless lambda = 1 is both closed and admissible.
    const bool lo_admissible = lo == 1.0 && params.ratio() < 1.0 &&
                               auxiliary_quantities(e, 1.0).b < 1.0;
    const double width = top - lo;
    if (!lo_admissible) lo += 1e-9 * width;
    const double hi = top - 1e-9 * width;
    auto bound = [&](double l) { return explicit_lower_bound(params, l); };
    Extremum m = golden_section_maximize(bound, lo, hi, 1e-8 * std::max(1.0, top));
    const double at_lo = bound(lo);
    if (at_lo > m.value) m = {lo, at_lo};
    return BoundChoice{m.x, m.value};
}

BoundCertificate optimal_bound_certificate(const ModelParams& params) {
    const ThresholdReport rep = k_thresholds(params.exps, params.sigma);
    const double ratio = params.ratio();
    auto within = [ratio](const std::optional<double>& k) {
        return k.has_value() && ratio <= *k + 1e-12 * std::max(1.0, *k);
    };
    const bool upper = within(rep.k1);
    const bool lower = within(rep.k2);
    return {upper, lower, upper && lower};
}

double sigma_no_bifurcation_threshold(const ExponentSet& exps) {
    const double p = exps.p();
    return (p - 1.0) * std::pow(p, (exps.s() + 1.0) / exps.excess() - 1.0);
}

}  // namespace gmlab
