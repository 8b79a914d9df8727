#include "ddwave/symbol.hpp"

#include <algorithm>

namespace ddw {

StiffnessRotation stiffness_and_rotation(const ModelParams& p, const Eigen::Vector2d& eta)
{
    if (!(std::abs(eta.norm() - 1.0) <= 1e-12))
        throw ValidationError("eta must be a unit vector (|eta| = 1 within 1e-12)");
    const double a2 = p.a * p.a;
    const double b2 = p.b * p.b;
    StiffnessRotation out;
    out.A = a2 * Eigen::Matrix2d::Identity() + (b2 - a2) * eta * eta.transpose();
    out.M << eta(0), eta(1),
             eta(1), -eta(0);
    return out;
}

const char* branch_label(int j)
{
    static constexpr const char* labels[] = {"b-minus", "a-minus", "b-plus", "a-plus"};
    return (j >= 0 && j < 4) ? labels[j] : "invalid";
}

double predicted_remainder_exponent(const ModelParams& p, FrequencyRegime regime)
{
    const double rho = p.rho, theta = p.theta;
    if (regime == FrequencyRegime::Small) {
        switch (p.regime) {
        case Regime::Below: return 1.0 + 2.0 * theta - 2.0 * rho;
        case Regime::Equal: return 3.0 - 4.0 * rho;
        case Regime::Above: return std::min(3.0 - 4.0 * rho, 2.0 * theta);
        }
    } else {
        switch (p.regime) {
        case Regime::Below: return std::min(3.0 - 4.0 * theta, 2.0 * rho);
        case Regime::Equal: return 3.0 - 4.0 * theta;
        case Regime::Above: return 1.0 + 2.0 * rho - 2.0 * theta;
        }
    }
    return 0.0;
}

}  // namespace ddw
