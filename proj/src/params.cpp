#include "ddwave/params.hpp"

#include <cmath>

namespace ddw {

std::string_view to_string(Regime regime)
{
    switch (regime) {
    case Regime::Below: return "below";
    case Regime::Equal: return "equal";
    case Regime::Above: return "above";
    }
    return "unknown";
}

ModelParams validate_params(double a, double b, double rho, double theta)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(rho) || !std::isfinite(theta))
        throw ValidationError("parameters must be finite");
    if (a <= 0.0) throw ValidationError("a must be positive (a > 0)");
    if (b <= a) throw ValidationError("b must exceed a (b > a)");
    if (rho < 0.0) throw ValidationError("rho must be nonnegative (rho >= 0)");
    if (rho >= 0.5) throw ValidationError("rho must be below 1/2 (rho < 1/2)");
    if (theta <= 0.5) throw ValidationError("theta must exceed 1/2 (theta > 1/2)");
    if (theta > 1.0) throw ValidationError("theta must not exceed 1 (theta <= 1)");

    ModelParams p;
    p.a = a;
    p.b = b;
    p.rho = rho;
    p.theta = theta;
    const double excess = rho + theta - 1.0;
    if (std::abs(excess) <= kRegimeTolerance)
        p.regime = Regime::Equal;
    else
        p.regime = excess < 0.0 ? Regime::Below : Regime::Above;
    return p;
}

}  // namespace ddw
