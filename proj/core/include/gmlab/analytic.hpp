#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmlab/exponents.hpp"

namespace gmlab {

/// The unique spatially homogeneous steady state for a given source sigma.
struct ConstantState {
    double u_star;
    double v_star;
    double sigma;
};

/// Solves -u + u^{p - qr/(s+1)} + sigma = 0 for u > 0 (bracketing bisection,
/// then Newton polish) and sets v* = (u*)^{r/(s+1)}. sigma = 0 gives (1, 1)
/// exactly. Throws NoConvergence only if the iteration budget is exhausted.
ConstantState constant_state(const ExponentSet& exps, double sigma);

/// du*/dsigma = 1 / (1 + (qr/(s+1) - p) (u*)^{p-1-qr/(s+1)}), always > 0.
double du_star_dsigma(const ExponentSet& exps, double sigma);

/// The threshold family
///
///     f_sigma(lambda) = lambda (s+1 - lambda r)
///                       / [ (q - lambda(p-1)) (u*)^{-excess/(s+1)} + lambda sigma / u* ]
///
/// on [0, (s+1)/r]. Caches u* so repeated evaluation is cheap.
class ThresholdFunction {
public:
    ThresholdFunction(const ExponentSet& exps, double sigma);

    /// Throws DomainError outside [0, (s+1)/r]. Both endpoints map to 0 exactly.
    double operator()(double lambda) const;

    const ExponentSet& exponents() const noexcept { return exps_; }
    double sigma() const noexcept { return sigma_; }
    double u_star() const noexcept { return u_star_; }

private:
    ExponentSet exps_;
    double sigma_;
    double u_star_;
    double weight_;  // (u*)^{-excess/(s+1)}
};

double f_sigma(const ExponentSet& exps, double sigma, double lambda);

/// Interior maximiser of f_0,
/// lambda* = ((s+1)/r) / (1 + sqrt(1 - (p-1)(s+1)/(qr))).
double f0_critical_lambda(const ExponentSet& exps);

struct AuxiliaryQuantities {
    double a;   // (q - lambda(p-1)) / (s+1 - lambda r)
    double b;   // 1/a
    double a0;  // lambda / (s+1 - lambda r)
    double b0;  // 1/a0
};

AuxiliaryQuantities auxiliary_quantities(const ExponentSet& exps, double lambda);

struct Interval {
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;

    bool empty() const noexcept;
    bool contains(double x) const noexcept;
    Interval intersect(const Interval& other) const noexcept;
    std::string to_string() const;

    bool operator==(const Interval&) const = default;
};

/// Admissible lambda sets. Lambda1/Lambda2 drive the optimal upper/lower
/// bounds at sigma = 0, Lambda3/Lambda4 the same bounds at sigma > 0.
enum class LambdaKind { Lambda1, Lambda2, Lambda3, Lambda4 };

std::string to_string(LambdaKind kind);

struct LambdaSet {
    LambdaKind kind;
    std::vector<Interval> intervals;  // disjoint, sorted, inside [0, (s+1)/r]

    std::string to_string() const;
};

/// Throws AssumptionViolated if q >= s+1 (Lambda1, Lambda3) or r >= s+1
/// (Lambda2, Lambda4).
LambdaSet lambda_set(const ExponentSet& exps, LambdaKind kind);

struct Supremum {
    double value;
    double argmax;
    bool attained;  // false when the maximiser sits on an excluded endpoint
};

/// sup of f_sigma over a lambda set: golden-section on each closed hull plus
/// explicit endpoint evaluation.
Supremum supremum_over(const ThresholdFunction& f, const LambdaSet& set);

struct ThresholdReport {
    ExponentSet exps;
    double sigma;
    std::optional<double> k1;
    std::optional<double> k2;
    std::optional<double> k;
    double lambda_star;
    std::optional<LambdaSet> upper_set;  // Lambda1 (sigma = 0) or Lambda3
    std::optional<LambdaSet> lower_set;  // Lambda2 (sigma = 0) or Lambda4
    std::optional<Supremum> upper_sup;
    std::optional<Supremum> lower_sup;
};

/// k1 = sup f_sigma over the upper-bound set, k2 over the lower-bound set,
/// k = min of whichever exist. A threshold whose hypothesis fails is absent.
ThresholdReport k_thresholds(const ExponentSet& exps, double sigma);

/// Explicit sigma = 0 upper bound for max u, valid for 0 < lambda <= 1,
/// lambda < (s+1-q)/(r-(p-1)) and lambda < d2/d1. Throws PreconditionViolated.
double explicit_upper_bound(const ModelParams& params, double lambda);

/// Explicit sigma = 0 lower bound for min u, valid for 1 <= lambda < (s+1)/r,
/// b < 1 and lambda > d2/d1. Throws PreconditionViolated.
double explicit_lower_bound(const ModelParams& params, double lambda);

struct BoundChoice {
    double lambda;
    double bound;
};

/// Smallest explicit upper bound over the admissible lambda range, or nullopt
/// when sigma > 0 or q >= s+1.
std::optional<BoundChoice> best_explicit_upper_bound(const ModelParams& params);

/// Largest explicit lower bound over the admissible lambda range, or nullopt
/// when sigma > 0, r >= s+1 or the range is empty.
std::optional<BoundChoice> best_explicit_lower_bound(const ModelParams& params);

struct BoundCertificate {
    bool upper_holds;      // u <= u*, v <= v*
    bool lower_holds;      // u >= u*, v >= v*
    bool unique_constant;  // both: the constant state is the only solution
};

BoundCertificate optimal_bound_certificate(const ModelParams& params);

/// (p-1) p^{(s+1)/excess - 1}: for sigma at or above this value every
/// bifurcation value d_{1i} is negative.
double sigma_no_bifurcation_threshold(const ExponentSet& exps);

}  // namespace gmlab
