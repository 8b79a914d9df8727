#pragma once

// Fourier symbol of the first-order system W_t + B(|xi|) W = 0,
//   B(r) = (sigma(r)/2) B0 + i r B1,  sigma(r) = r^{2 rho} + r^{2 theta},
// its closed-form spectrum and the asymptotic (principal) eigenvalues.
//
// Index grouping: components {0, 2} form the b-block, {1, 3} the a-block.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "ddwave/params.hpp"

namespace ddw {

template <typename Real> using Complex = std::complex<Real>;
template <typename Real> using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real> using Matrix4c = Eigen::Matrix<std::complex<Real>, 4, 4>;
template <typename Real> using Matrix4r = Eigen::Matrix<Real, 4, 4>;
template <typename Real> using Vector4c = Eigen::Matrix<std::complex<Real>, 4, 1>;

/// Which asymptotic expansion applies: |xi| -> 0 or |xi| -> infinity.
enum class FrequencyRegime { Small, Large };

/// r^exponent with the convention r^0 == 1 for every r, including r = 0.
template <typename Real>
Real radial_power(Real r, Real exponent)
{
    if (exponent == Real(0)) return Real(1);
    if (r == Real(0)) return exponent > Real(0) ? Real(0) : std::numeric_limits<Real>::infinity();
    return std::pow(r, exponent);
}

template <typename Real>
Real dissipation_sigma(const ModelParams& p, Real r)
{
    return radial_power(r, Real(2 * p.rho)) + radial_power(r, Real(2 * p.theta));
}

/// Stiffness A(eta) and the symmetric orthogonal rotation M(eta) with
/// M^{-1} A M = diag(b^2, a^2).
struct StiffnessRotation {
    Eigen::Matrix2d A;
    Eigen::Matrix2d M;
};

StiffnessRotation stiffness_and_rotation(const ModelParams& p, const Eigen::Vector2d& eta);

template <typename Real>
struct SpectralSymbol {
    Real r{};
    Real sigma{};
    Matrix4c<Real> full;
    Matrix2c<Real> block_b;
    Matrix2c<Real> block_a;
};

/// 2x2 block [[sigma/2 - i k r, sigma/2], [sigma/2, sigma/2 + i k r]].
template <typename Real>
Matrix2c<Real> symbol_block(Real sigma, Real k, Real r)
{
    const Complex<Real> i(0, 1);
    const Real half = sigma / 2;
    Matrix2c<Real> m;
    m << half - i * k * r, half,
         half, half + i * k * r;
    return m;
}

template <typename Real>
SpectralSymbol<Real> assemble_symbol(const ModelParams& p, Real r)
{
    SpectralSymbol<Real> s;
    s.r = r;
    s.sigma = dissipation_sigma(p, r);
    s.block_b = symbol_block(s.sigma, Real(p.b), r);
    s.block_a = symbol_block(s.sigma, Real(p.a), r);
    s.full.setZero();
    for (int row = 0; row < 2; ++row) {
        for (int col = 0; col < 2; ++col) {
            s.full(2 * row, 2 * col) = s.block_b(row, col);
            s.full(2 * row + 1, 2 * col + 1) = s.block_a(row, col);
        }
    }
    return s;
}

/// Eigenvalues in the order (lambda1, lambda2, lambda3, lambda4) =
/// (b-minus, a-minus, b-plus, a-plus).
template <typename Real>
struct EigenQuadruple {
    enum Branch { BMinus = 0, AMinus = 1, BPlus = 2, APlus = 3 };
    std::array<Complex<Real>, 4> lambda{};

    const Complex<Real>& operator[](int j) const { return lambda[static_cast<std::size_t>(j)]; }
    Complex<Real>& operator[](int j) { return lambda[static_cast<std::size_t>(j)]; }
};

const char* branch_label(int j);

/// Roots of lambda^2 - sigma lambda + k^2 r^2. Returns {minus, plus}.
/// With a negative discriminant "minus" is the root with negative imaginary part.
template <typename Real>
std::array<Complex<Real>, 2> block_roots(Real sigma, Real k, Real r)
{
    const Real kr2 = k * k * r * r;
    const Real disc = sigma * sigma - 4 * kr2;
    if (disc > Real(0)) {
        const Real root = std::sqrt(disc);
        const Real plus = (sigma + root) / 2;
        // Vieta form for the small root avoids cancellation when 4 k^2 r^2 << sigma^2.
        const Real minus = plus > Real(0) ? kr2 / plus : Real(0);
        return {Complex<Real>(minus, 0), Complex<Real>(plus, 0)};
    }
    if (disc == Real(0)) return {Complex<Real>(sigma / 2, 0), Complex<Real>(sigma / 2, 0)};
    const Real im = std::sqrt(-disc) / 2;
    return {Complex<Real>(sigma / 2, -im), Complex<Real>(sigma / 2, im)};
}

template <typename Real>
EigenQuadruple<Real> exact_eigenvalues(const ModelParams& p, Real r)
{
    const Real sigma = dissipation_sigma(p, r);
    const auto rb = block_roots(sigma, Real(p.b), r);
    const auto ra = block_roots(sigma, Real(p.a), r);
    EigenQuadruple<Real> q;
    q.lambda = {rb[0], ra[0], rb[1], ra[1]};
    return q;
}

/// Leading terms of the eigenvalue expansions for |xi| -> 0 (Small) or
/// |xi| -> infinity (Large), one formula set per position of rho + theta.
template <typename Real>
EigenQuadruple<Real> principal_eigenvalues(const ModelParams& p, Real r, FrequencyRegime regime)
{
    const Real a2 = Real(p.a * p.a);
    const Real b2 = Real(p.b * p.b);
    const Real pr = radial_power(r, Real(2 * p.rho));
    const Real pt = radial_power(r, Real(2 * p.theta));

    // The dominant damping exponent and its partner swap between the two zones.
    const bool small = regime == FrequencyRegime::Small;
    const Real slow = small ? radial_power(r, Real(2 - 2 * p.rho)) : radial_power(r, Real(2 - 2 * p.theta));
    const Real lead = small ? pr : pt;
    const Real other = small ? pt : pr;

    Real fast_b = 0, fast_a = 0;
    const bool three_terms = small ? p.regime == Regime::Below : p.regime == Regime::Above;
    if (p.regime == Regime::Equal) {
        fast_b = lead + (1 - b2) * slow;
        fast_a = lead + (1 - a2) * slow;
    } else if (three_terms) {
        fast_b = lead + other - b2 * slow;
        fast_a = lead + other - a2 * slow;
    } else {
        fast_b = lead - b2 * slow;
        fast_a = lead - a2 * slow;
    }

    EigenQuadruple<Real> q;
    q.lambda = {Complex<Real>(b2 * slow, 0), Complex<Real>(a2 * slow, 0),
                Complex<Real>(fast_b, 0), Complex<Real>(fast_a, 0)};
    return q;
}

/// Order of the remainder lambda_exact - lambda_principal as stated for the
/// given zone and position of rho + theta.
double predicted_remainder_exponent(const ModelParams& p, FrequencyRegime regime);

template <typename Real>
struct StructureMatrices {
    Matrix4r<Real> B0, B1, T1, T1_inverse, M1, M2;
    Matrix4c<Real> N2, N3;
};

/// Fixed off-diagonal pattern shared by N2 and N3 (before the i r^{...} factor).
template <typename Real>
Matrix4r<Real> mixing_pattern(const ModelParams& p)
{
    Matrix4r<Real> m = Matrix4r<Real>::Zero();
    m(0, 2) = Real(p.b);
    m(1, 3) = Real(p.a);
    m(2, 0) = -Real(p.b);
    m(3, 1) = -Real(p.a);
    return m;
}

template <typename Real>
Matrix4r<Real> t1_matrix()
{
    Matrix4r<Real> t;
    t << -1, 0, 1, 0,
          0, -1, 0, 1,
          1, 0, 1, 0,
          0, 1, 0, 1;
    return t;
}

template <typename Real>
StructureMatrices<Real> structure_matrices(const ModelParams& p, Real r)
{
    StructureMatrices<Real> s;
    s.B0 << 1, 0, 1, 0,
            0, 1, 0, 1,
            1, 0, 1, 0,
            0, 1, 0, 1;
    s.B1 = Eigen::Matrix<Real, 4, 1>(-Real(p.b), -Real(p.a), Real(p.b), Real(p.a)).asDiagonal();
    s.T1 = t1_matrix<Real>();
    // T1^2 = 2 I.
    s.T1_inverse = s.T1 / Real(2);
    const Real a2 = Real(p.a * p.a), b2 = Real(p.b * p.b);
    s.M1 = Eigen::Matrix<Real, 4, 1>(b2, a2, -b2, -a2).asDiagonal();
    s.M2 = Eigen::Matrix<Real, 4, 1>(0, 0, 1, 1).asDiagonal();

    const Matrix4r<Real> pattern = mixing_pattern<Real>(p);
    const Complex<Real> i(0, 1);
    s.N2 = (i * radial_power(r, Real(1 - 2 * p.rho))) * pattern.template cast<Complex<Real>>();
    // N3 scales like r^{1 - 2 theta}, which diverges at r = 0; it is left zero there.
    const Real n3_scale = r > Real(0) ? radial_power(r, Real(1 - 2 * p.theta)) : Real(0);
    s.N3 = (i * n3_scale) * pattern.template cast<Complex<Real>>();
    return s;
}

}  // namespace ddw
