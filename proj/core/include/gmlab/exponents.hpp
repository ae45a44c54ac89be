#pragma once

namespace gmlab {

/// Reaction exponents (p, q, r, s) of the activator-inhibitor kinetics
/// u^p/v^q and u^r/v^s. Only constructible through `make`, which enforces
///
///     p, q, r, s >= 0,  r > 0,  0 < (p-1)/r < q/(s+1).
class ExponentSet {
public:
    /// Throws gmlab::Error with kind NonFinite, NegativeExponent, ZeroR,
    /// NonPositiveLeft or NonStrictRight.
    static ExponentSet make(double p, double q, double r, double s);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double r() const noexcept { return r_; }
    double s() const noexcept { return s_; }

    /// qr - (p-1)(s+1); strictly positive for a valid set.
    double excess() const noexcept { return q_ * r_ - (p_ - 1.0) * (s_ + 1.0); }

    /// Right end of the admissible lambda range, (s+1)/r.
    double lambda_max() const noexcept { return (s_ + 1.0) / r_; }

    /// Exponent of u* in the constant-state equation, p - qr/(s+1).
    double reduced_power() const noexcept { return p_ - q_ * r_ / (s_ + 1.0); }

    bool common_source() const noexcept { return p_ == r_ && q_ == s_; }

    bool operator==(const ExponentSet&) const = default;

private:
    ExponentSet(double p, double q, double r, double s) : p_(p), q_(q), r_(r), s_(s) {}

    double p_;
    double q_;
    double r_;
    double s_;
};

/// Exponents together with the diffusion constants and the source term.
struct ModelParams {
    ExponentSet exps;
    double d1;
    double d2;
    double sigma;

    /// Throws InvalidArgument unless d1, d2 > 0 and sigma >= 0 (all finite).
    static ModelParams make(const ExponentSet& exps, double d1, double d2, double sigma);

    double ratio() const noexcept { return d2 / d1; }

    bool operator==(const ModelParams&) const = default;
};

}  // namespace gmlab
