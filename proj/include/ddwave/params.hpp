#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddw {

/// Raised when user-supplied parameters or configuration violate a constraint.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical certificate that the theory guarantees does not hold.
class CheckFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Position of rho + theta relative to the diffusion threshold 1.
enum class Regime { Below, Equal, Above };

std::string_view to_string(Regime regime);

inline constexpr double kRegimeTolerance = 1e-12;

/// Wave speeds and dissipation exponents of
///   u_tt - a^2 Lap u - (b^2 - a^2) grad div u + (-Lap)^rho u_t + (-Lap)^theta u_t = 0.
///
/// Only `validate_params` produces instances, so every ModelParams satisfies
/// b > a > 0 and 0 <= rho < 1/2 < theta <= 1.
struct ModelParams {
    double a = 0.0;
    double b = 0.0;
    double rho = 0.0;
    double theta = 0.0;
    Regime regime = Regime::Equal;
    double regime_tolerance = kRegimeTolerance;

    /// 2 - 2 rho, the small-frequency diffusion order.
    double kappa() const { return 2.0 - 2.0 * rho; }
};

ModelParams validate_params(double a, double b, double rho, double theta);

}  // namespace ddw
