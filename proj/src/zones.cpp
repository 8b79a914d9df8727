#include "ddwave/zones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ddwave/propagator.hpp"
#include "ddwave/symbol.hpp"

namespace ddw {

void ZoneConfig::validate() const
{
    if (!(w_int > 0.0 && w_int < 1.0)) throw ValidationError("zone: w_int must lie in (0, 1)");
    if (!(w_ext > 0.0)) throw ValidationError("zone: w_ext must be positive");
    if (!(eps > 0.0)) throw ValidationError("zone: eps must be positive");
    if (!(eps < N)) throw ValidationError("zone: eps must be smaller than N");
    if (!std::isfinite(N * (1.0 + w_ext))) throw ValidationError("zone: N must be finite");
}

double smoothstep5(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

ZoneWeights zone_weights(const ZoneConfig& z, double r)
{
    ZoneWeights w;
    const double int_lo = z.eps * (1.0 - z.w_int);
    w.chi_int = 1.0 - smoothstep5((r - int_lo) / (z.eps - int_lo));
    w.chi_ext = smoothstep5((r - z.N) / (z.N * z.w_ext));
    w.chi_bdd = 1.0 - w.chi_int - w.chi_ext;
    return w;
}

double eta(const ModelParams& p, double r)
{
    if (r <= 0.0) return 0.0;
    // Same quotient in two forms so neither power overflows.
    if (r <= 1.0) return std::pow(r, 2.0 - 2.0 * p.rho) / (1.0 + std::pow(r, 2.0 * p.theta - 2.0 * p.rho));
    return radial_power(r, 2.0 - 2.0 * p.theta) / (std::pow(r, 2.0 * p.rho - 2.0 * p.theta) + 1.0);
}

double imaginary_root_certificate(const ModelParams& p, double r)
{
    const double sigma = dissipation_sigma(p, r);
    const double a2 = p.a * p.a, b2 = p.b * p.b;
    return 2.0 * (a2 + b2) * sigma * sigma + (b2 - a2) * (b2 - a2) * r * r;
}

GapCertificate spectral_gap_scan(const ModelParams& p, const ZoneConfig& z, std::size_t samples)
{
    z.validate();
    if (samples < 2) throw ValidationError("spectral_gap_scan: need at least 2 samples");

    GapCertificate cert;
    cert.samples = samples;
    cert.min_real_part = std::numeric_limits<double>::infinity();
    cert.identity_margin = std::numeric_limits<double>::infinity();
    const double log_lo = std::log(z.eps), log_hi = std::log(z.N);
    for (std::size_t k = 0; k < samples; ++k) {
        const double r = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) / static_cast<double>(samples - 1));
        const auto q = exact_eigenvalues(p, r);
        double min_re = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 4; ++j) min_re = std::min(min_re, q[j].real());
        if (!(min_re > 0.0))
            throw CheckFailure("spectral_gap_scan: nonpositive real part " + std::to_string(min_re)
                               + " at r = " + std::to_string(r));
        if (min_re < cert.min_real_part) {
            cert.min_real_part = min_re;
            cert.argmin_r = r;
        }
        const double margin = imaginary_root_certificate(p, r);
        if (!(margin > 0.0))
            throw CheckFailure("spectral_gap_scan: imaginary-root identity margin vanishes at r = " + std::to_string(r));
        cert.identity_margin = std::min(cert.identity_margin, margin);
    }
    return cert;
}

double pointwise_envelope(const ModelParams& p, std::span<const double> r_samples,
                          std::span<const double> t_samples, double c)
{
    double worst_log = 0.0;  // log C, with C >= 1 always
    for (double r : r_samples) {
        const double e = eta(p, r);
        for (double t : t_samples) {
            const double norm = operator_norm(block_propagator(p, r, t));
            if (norm <= 0.0) continue;
            worst_log = std::max(worst_log, std::log(norm) + c * e * t);
        }
    }
    return std::exp(worst_log);
}

PointwiseConstants pointwise_constants_fit(const ModelParams& p, std::span<const double> r_samples,
                                           std::span<const double> t_samples)
{
    if (r_samples.empty() || t_samples.empty())
        throw ValidationError("pointwise_constants_fit: sample sets must be nonempty");
    for (double r : r_samples)
        if (!(r > 0.0)) throw ValidationError("pointwise_constants_fit: r samples must be positive");
    for (double t : t_samples)
        if (!(t >= 0.0)) throw ValidationError("pointwise_constants_fit: t samples must be nonnegative");

    const double log_cap = std::log(kPointwiseMaxConstant);
    if (pointwise_envelope(p, r_samples, t_samples, 0.0) > kPointwiseMaxConstant)
        throw CheckFailure("pointwise_constants_fit: propagator norm exceeds 100 even with c = 0");

    // Any feasible c satisfies e^{(c eta - min Re lambda) t} <= C <= 100 at every sample.
    double c_hi = std::numeric_limits<double>::infinity();
    double slowest_ratio = std::numeric_limits<double>::infinity();
    for (double r : r_samples) {
        const double e = eta(p, r);
        const auto q = exact_eigenvalues(p, r);
        double min_re = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 4; ++j) min_re = std::min(min_re, q[j].real());
        slowest_ratio = std::min(slowest_ratio, min_re / e);
        for (double t : t_samples)
            if (t > 0.0) c_hi = std::min(c_hi, min_re / e + log_cap / (e * t));
    }
    if (!std::isfinite(c_hi)) {
        // Only t = 0 samples: every c is admissible; report the slowest-mode ratio.
        return {pointwise_envelope(p, r_samples, t_samples, slowest_ratio), slowest_ratio};
    }
    c_hi *= 1.0 + 1e-9;

    auto feasible = [&](double c) { return pointwise_envelope(p, r_samples, t_samples, c) <= kPointwiseMaxConstant; };
    // Unimodal objective: c on the feasible interval [0, c*], -1 beyond it.
    auto objective = [&](double c) { return feasible(c) ? c : -1.0; };

    constexpr double inv_phi = 0.6180339887498949;
    double lo = 0.0, hi = c_hi;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    double best = 0.0;
    if (f1 > best) best = f1;
    if (f2 > best) best = f2;
    while (hi - lo > 1e-7 * std::max(1.0, c_hi)) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
            best = std::max(best, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
            best = std::max(best, f2);
        }
    }
    if (!(best > 0.0))
        throw CheckFailure("pointwise_constants_fit: no c > 0 admits C <= 100 on the samples");
    return {pointwise_envelope(p, r_samples, t_samples, best), best};
}

}  // namespace ddw
