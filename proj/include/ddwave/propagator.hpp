#pragma once

// Exact per-frequency evolution W(t) = exp(-t B(r)) W0 through closed-form
// 2x2 block exponentials, the (u, u_t) <-> W change of variables and the
// diagonal reference systems used for the diffusion comparison.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ddwave/field.hpp"
#include "ddwave/symbol.hpp"
#include "ddwave/zones.hpp"

namespace ddw {

/// How phi(z) = sinh(z)/z (and cosh z) are evaluated near the double root.
enum class PhiEvaluation { Auto, Series, Closed };

inline constexpr double kPhiSeriesThreshold = 1e-4;

namespace detail {

/// Coefficients (c, s) with exp(-t block) = c I - s C, where
/// C = block - (sigma/2) I satisfies C^2 = delta^2 I, delta^2 = sigma^2/4 - (k r)^2.
/// c = e^{-sigma t/2} cosh(delta t), s = e^{-sigma t/2} t phi(delta t).
template <typename Real>
std::array<Real, 2> block_exponential_coefficients(Real sigma, Real kr, Real t,
                                                   PhiEvaluation mode = PhiEvaluation::Auto)
{
    const Real half = sigma / 2;
    const Real delta2 = half * half - kr * kr;
    if (delta2 >= Real(0)) {
        const Real delta = std::sqrt(delta2);
        const Real z = delta * t;
        const bool series = mode == PhiEvaluation::Series || delta == Real(0)
                            || (mode == PhiEvaluation::Auto && z < Real(kPhiSeriesThreshold));
        if (series) {
            const Real z2 = z * z;
            const Real damp = std::exp(-half * t);
            const Real cosh_z = 1 + z2 / 2 + z2 * z2 / 24 + z2 * z2 * z2 / 720;
            const Real phi = 1 + z2 / 6 + z2 * z2 / 120 + z2 * z2 * z2 / 5040;
            return {damp * cosh_z, damp * t * phi};
        }
        // Written through the two real roots so nothing overflows at large t.
        const Real lam_plus = half + delta;
        const Real lam_minus = lam_plus > Real(0) ? kr * kr / lam_plus : Real(0);
        const Real e_minus = std::exp(-lam_minus * t);
        const Real e_plus = std::exp(-lam_plus * t);
        return {(e_minus + e_plus) / 2, (e_minus - e_plus) / (2 * delta)};
    }
    const Real omega = std::sqrt(-delta2);
    const Real z = omega * t;
    const Real damp = std::exp(-half * t);
    const bool series = mode == PhiEvaluation::Series
                        || (mode == PhiEvaluation::Auto && z < Real(kPhiSeriesThreshold));
    if (series) {
        const Real z2 = z * z;
        const Real cos_z = 1 - z2 / 2 + z2 * z2 / 24 - z2 * z2 * z2 / 720;
        const Real sinc = 1 - z2 / 6 + z2 * z2 / 120 - z2 * z2 * z2 / 5040;
        return {damp * cos_z, damp * t * sinc};
    }
    return {damp * std::cos(z), damp * std::sin(z) / omega};
}

}  // namespace detail

/// exp(-t * symbol_block(sigma, k, r)).
template <typename Real>
Matrix2c<Real> block_exponential(Real sigma, Real k, Real r, Real t,
                                 PhiEvaluation mode = PhiEvaluation::Auto)
{
    const auto [c, s] = detail::block_exponential_coefficients(sigma, k * r, t, mode);
    const Complex<Real> i(0, 1);
    Matrix2c<Real> centered;
    centered << -i * k * r, sigma / 2,
                sigma / 2, i * k * r;
    Matrix2c<Real> out = -s * centered;
    out(0, 0) += c;
    out(1, 1) += c;
    return out;
}

template <typename Real>
struct PropagatorBlock {
    Real r{};
    Real t{};
    Matrix2c<Real> block_b;
    Matrix2c<Real> block_a;

    Matrix4c<Real> matrix() const
    {
        Matrix4c<Real> m = Matrix4c<Real>::Zero();
        for (int row = 0; row < 2; ++row) {
            for (int col = 0; col < 2; ++col) {
                m(2 * row, 2 * col) = block_b(row, col);
                m(2 * row + 1, 2 * col + 1) = block_a(row, col);
            }
        }
        return m;
    }

    Vector4c<Real> apply(const Vector4c<Real>& w) const
    {
        Vector4c<Real> out;
        out(0) = block_b(0, 0) * w(0) + block_b(0, 1) * w(2);
        out(2) = block_b(1, 0) * w(0) + block_b(1, 1) * w(2);
        out(1) = block_a(0, 0) * w(1) + block_a(0, 1) * w(3);
        out(3) = block_a(1, 0) * w(1) + block_a(1, 1) * w(3);
        return out;
    }
};

/// exp(-t B(r)). Exact for every r >= 0 (at r = 0 it reduces to exp(-t sigma(0) B0 / 2)).
template <typename Real>
PropagatorBlock<Real> block_propagator(const ModelParams& p, Real r, Real t,
                                       PhiEvaluation mode = PhiEvaluation::Auto)
{
    const Real sigma = dissipation_sigma(p, r);
    PropagatorBlock<Real> out;
    out.r = r;
    out.t = t;
    out.block_b = block_exponential(sigma, Real(p.b), r, t, mode);
    out.block_a = block_exponential(sigma, Real(p.a), r, t, mode);
    return out;
}

/// Largest singular value of a complex 2x2 matrix.
template <typename Real>
Real spectral_norm2(const Matrix2c<Real>& m)
{
    // Scaled by the largest entry so that fro2^2 neither underflows nor overflows.
    const Real scale = m.cwiseAbs().maxCoeff();
    if (!(scale > Real(0)) || !std::isfinite(scale)) return scale;
    const Matrix2c<Real> u = m / scale;
    const Real fro2 = u.squaredNorm();
    const Real det = std::abs(u.determinant());
    const Real disc = std::max(Real(0), fro2 * fro2 - 4 * det * det);
    return scale * std::sqrt((fro2 + std::sqrt(disc)) / 2);
}

template <typename Real>
Real operator_norm(const PropagatorBlock<Real>& block)
{
    return std::max(spectral_norm2(block.block_b), spectral_norm2(block.block_a));
}

// ---------------------------------------------------------------------------
// Change of variables between (u_hat, u_t_hat) and the first-order unknown W.

/// Raised when the displacement is requested at xi = 0, where W only carries u_t.
class ZeroModeError : public std::domain_error {
public:
    ZeroModeError() : std::domain_error("zero-mode: displacement tracked separately") {}
};

/// Unit direction xi/|xi|, with (1, 0) at the origin.
Eigen::Vector2d frequency_direction(const Eigen::Vector2d& xi);

Eigen::Vector4cd u_to_W(const Eigen::Vector2cd& u0_hat, const Eigen::Vector2cd& u1_hat,
                        const Eigen::Vector2d& xi, const ModelParams& p);

struct DisplacementVelocity {
    Eigen::Vector2cd u_hat;
    Eigen::Vector2cd ut_hat;
};

/// Inverse of u_to_W. Throws ZeroModeError at xi = 0.
DisplacementVelocity W_to_u(const Eigen::Vector4cd& W, const Eigen::Vector2d& xi, const ModelParams& p);

/// Velocity part of the inverse map; defined at every xi including 0.
Eigen::Vector2cd W_to_velocity(const Eigen::Vector4cd& W, const Eigen::Vector2d& xi);

/// Exact solution of u_tt + sigma(0) u_t = 0 at xi = 0.
DisplacementVelocity zero_mode_evolution(const Eigen::Vector2cd& u0_hat0, const Eigen::Vector2cd& u1_hat0,
                                         const ModelParams& p, double t);

/// Closed-form initial W at one frequency for the given data description.
Eigen::Vector4cd initial_W_at(const InitialDataSpec& spec, const Eigen::Vector2d& xi, const ModelParams& p);

/// Spectral four-component W0 on the lattice, with the closed-form profile attached.
FourierField initial_W(const InitialData& data, const ModelParams& p);

// ---------------------------------------------------------------------------
// Field-level evolution.

struct Trajectory {
    std::vector<double> times;
    std::vector<FourierField> fields;
};

/// W(t_k) = exp(-t_k B) W0 nodewise for every requested time.
/// Throws ValidationError unless times are nonnegative and increasing.
Trajectory evolve(const FourierField& W0, const std::vector<double>& times, const ModelParams& p);

FourierField evolve_to(const FourierField& W0, double t, const ModelParams& p);

/// Diagonal rates of the reference system for the regime of p:
/// (b^2 r^{2-2rho}, a^2 r^{2-2rho}, fast_b, fast_a).
/// Throws CheckFailure if any rate is not strictly positive.
std::array<double, 4> reference_rates(const ModelParams& p, double r);

/// T1 diag(exp(-rates t)) T1^{-1} at a single radius (r = 0 uses (0, 0, sigma(0), sigma(0))).
Eigen::Matrix4cd reference_propagator(const ModelParams& p, double r, double t);

/// T1 W_tilde(t) nodewise on the support of chi_int; zero elsewhere.
FourierField reference_evolve(const FourierField& W0, double t, const ModelParams& p, const ZoneConfig& zone);

}  // namespace ddw
