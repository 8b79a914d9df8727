#pragma once

// Radial partition of unity chi_int + chi_bdd + chi_ext = 1, the dissipative
// structure eta(r), and sample-based certificates for the bounded-zone
// spectral gap and the pointwise estimate |exp(-tB)| <= C exp(-c eta t).

#include <cstddef>
#include <span>

#include "ddwave/params.hpp"

namespace ddw {

struct ZoneConfig {
    double eps = 0.1;    ///< small-zone radius
    double N = 10.0;     ///< large-zone radius
    double w_int = 0.5;  ///< chi_int falls from 1 to 0 on [eps (1 - w_int), eps]
    double w_ext = 0.5;  ///< chi_ext rises from 0 to 1 on [N, N (1 + w_ext)]

    /// Throws ValidationError unless 0 < eps (1 - w_int) < eps < N < N (1 + w_ext).
    void validate() const;
};

struct ZoneWeights {
    double chi_int = 0.0;
    double chi_bdd = 0.0;
    double chi_ext = 0.0;
};

/// 6x^5 - 15x^4 + 10x^3 on [0, 1], clamped outside.
double smoothstep5(double x);

ZoneWeights zone_weights(const ZoneConfig& z, double r);

/// eta(r) = r^{2-2rho} / (1 + r^{2theta-2rho}).
double eta(const ModelParams& p, double r);

/// Positive gap 2(a^2+b^2) sigma^2 + (b^2-a^2)^2 r^2; a purely imaginary
/// eigenvalue of B(r) would force it to vanish.
double imaginary_root_certificate(const ModelParams& p, double r);

struct GapCertificate {
    double min_real_part = 0.0;
    double argmin_r = 0.0;
    std::size_t samples = 0;
    double identity_margin = 0.0;
};

/// min over log-spaced r in [eps, N] of min_j Re lambda_j(r).
/// Throws CheckFailure if any sample has min Re lambda <= 0 or a nonpositive margin.
GapCertificate spectral_gap_scan(const ModelParams& p, const ZoneConfig& z, std::size_t samples);

struct PointwiseConstants {
    double C = 1.0;
    double c = 0.0;
};

inline constexpr double kPointwiseMaxConstant = 100.0;

/// Smallest C for a given c: max(1, max over samples of |exp(-tB(r))| e^{c eta(r) t}).
double pointwise_envelope(const ModelParams& p, std::span<const double> r_samples,
                          std::span<const double> t_samples, double c);

/// Largest c > 0 whose envelope constant stays <= 100 on the sample grid,
/// located by golden-section search. Throws CheckFailure if no c > 0 qualifies.
PointwiseConstants pointwise_constants_fit(const ModelParams& p, std::span<const double> r_samples,
                                           std::span<const double> t_samples);

}  // namespace ddw
