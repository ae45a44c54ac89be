#include "gmlab/exponents.hpp"

#include <cmath>
#include <sstream>

#include "gmlab/errors.hpp"

namespace gmlab {

ExponentSet ExponentSet::make(double p, double q, double r, double s) {
    if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(r) || !std::isfinite(s)) {
        throw Error(ErrorKind::NonFinite, "exponents must be finite");
    }
    if (p < 0.0 || q < 0.0 || r < 0.0 || s < 0.0) {
        throw Error(ErrorKind::NegativeExponent, "exponents p, q, r, s must be nonnegative");
    }
    if (r == 0.0) {
        throw Error(ErrorKind::ZeroR, "r must be positive: (p-1)/r is undefined for r = 0");
    }
    const double left = (p - 1.0) / r;
    const double right = q / (s + 1.0);
    if (!(left > 0.0)) {
        std::ostringstream msg;
        msg << "strict inequality 0 < (p-1)/r fails: (p-1)/r = " << left << " (requires p > 1)";
        throw Error(ErrorKind::NonPositiveLeft, msg.str());
    }
    // Compare in the cross-multiplied form so that the excess qr-(p-1)(s+1)
    // used everywhere downstream is guaranteed positive.
    if (!(q * r - (p - 1.0) * (s + 1.0) > 0.0)) {
        std::ostringstream msg;
        msg << "strict inequality (p-1)/r < q/(s+1) fails: " << left << " >= " << right;
        throw Error(ErrorKind::NonStrictRight, msg.str());
    }
    return ExponentSet(p, q, r, s);
}

ModelParams ModelParams::make(const ExponentSet& exps, double d1, double d2, double sigma) {
    if (!std::isfinite(d1) || !(d1 > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "d1 must be positive and finite");
    }
    if (!std::isfinite(d2) || !(d2 > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "d2 must be positive and finite");
    }
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "sigma must be nonnegative and finite");
    }
    return ModelParams{exps, d1, d2, sigma};
}

}  // namespace gmlab
