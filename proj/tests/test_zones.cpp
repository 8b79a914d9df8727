#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ddwave/analysis.hpp"
#include "ddwave/propagator.hpp"
#include "ddwave/zones.hpp"
#include "test_support.hpp"

using namespace ddw;

TEST(Zones, ConfigValidation)
{
    EXPECT_NO_THROW(ZoneConfig{}.validate());
    EXPECT_THROW((ZoneConfig{0.1, 0.05, 0.5, 0.5}.validate()), ValidationError);
    EXPECT_THROW((ZoneConfig{0.1, 10, 1.0, 0.5}.validate()), ValidationError);
    EXPECT_THROW((ZoneConfig{0.1, 10, 0.5, 0.0}.validate()), ValidationError);
    EXPECT_THROW((ZoneConfig{-0.1, 10, 0.5, 0.5}.validate()), ValidationError);
}

TEST(Zones, WeightExamples)
{
    const ZoneConfig z;
    const auto low = zone_weights(z, z.eps * 0.4);
    EXPECT_EQ(low.chi_int, 1.0);
    EXPECT_EQ(low.chi_bdd, 0.0);
    EXPECT_EQ(low.chi_ext, 0.0);
    EXPECT_NEAR(zone_weights(z, z.eps * 0.75).chi_int, 0.5, 1e-14);
    EXPECT_EQ(zone_weights(z, 1.0).chi_bdd, 1.0);
    EXPECT_EQ(zone_weights(z, 100.0).chi_ext, 1.0);
}

TEST(Zones, PartitionOfUnityAndMonotonicity)
{
    const ZoneConfig z;
    std::mt19937_64 rng(test::kSeed);
    std::uniform_real_distribution<double> log_r(-4.0, 4.0);
    for (int k = 0; k < 10000; ++k) {
        const double r = std::pow(10.0, log_r(rng));
        const auto w = zone_weights(z, r);
        EXPECT_NEAR(w.chi_int + w.chi_bdd + w.chi_ext, 1.0, 1e-12);
        for (double v : {w.chi_int, w.chi_bdd, w.chi_ext}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
    double prev_int = 1.0, prev_ext = 0.0;
    for (double r : log_spaced(1e-3, 1e3, 2000)) {
        const auto w = zone_weights(z, r);
        EXPECT_LE(w.chi_int, prev_int);
        EXPECT_GE(w.chi_ext, prev_ext);
        prev_int = w.chi_int;
        prev_ext = w.chi_ext;
    }
}

TEST(Zones, Smoothstep)
{
    EXPECT_EQ(smoothstep5(-1.0), 0.0);
    EXPECT_EQ(smoothstep5(2.0), 1.0);
    EXPECT_DOUBLE_EQ(smoothstep5(0.5), 0.5);
}

TEST(Zones, EtaExamplesAndLimits)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    EXPECT_DOUBLE_EQ(eta(p, 1.0), 0.5);
    EXPECT_NEAR(eta(p, 4.0), 1.6, 1e-14);
    EXPECT_NEAR(eta(p, 0.1), 0.02875, 1e-5);
    EXPECT_NEAR(eta(p, 1e-8) / std::pow(1e-8, 1.5), 1.0, 1e-7);
    EXPECT_NEAR(eta(p, 1e8) / std::pow(1e8, 0.5), 1.0, 1e-7);
    EXPECT_TRUE(std::isfinite(eta(p, 1e300)));
}

TEST(Zones, ImaginaryRootCertificate)
{
    EXPECT_NEAR(imaginary_root_certificate(validate_params(1, 2, 0.25, 0.75), 1.0), 49.0, 1e-12);
    test::for_random_params([](const ModelParams& p, double r) { EXPECT_GT(imaginary_root_certificate(p, r), 0.0); });
}

TEST(Zones, SpectralGapScan)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto cert = spectral_gap_scan(p, ZoneConfig{}, 100000);
    EXPECT_NEAR(cert.min_real_part, std::sqrt(1e-3), 1e-6);
    EXPECT_NEAR(cert.argmin_r, 0.1, 1e-9);
    EXPECT_EQ(cert.samples, 100000u);
    EXPECT_GT(cert.identity_margin, 0.0);

    EXPECT_GT(spectral_gap_scan(validate_params(1, 2, 0, 1), ZoneConfig{}, 1000).min_real_part, 0.0);
}

TEST(Zones, MinRealPartIsOneOfTheClosedForms)
{
    test::for_random_params([](const ModelParams& p, double r) {
        const auto q = exact_eigenvalues(p, r);
        double min_re = INFINITY;
        for (int j = 0; j < 4; ++j) min_re = std::min(min_re, q[j].real());
        const double sigma = dissipation_sigma(p, r);
        const double disc = sigma * sigma - 4 * p.a * p.a * r * r;
        const double expected = disc > 0 ? (sigma - std::sqrt(disc)) / 2 : sigma / 2;
        EXPECT_NEAR(min_re, expected, 1e-9 * sigma);
    });
}

TEST(Zones, PointwiseFitOnAcceptanceGrid)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto r = log_spaced(1e-3, 1e3, 31);
    const std::vector<double> t{0, 1, 10, 100};
    const auto fit = pointwise_constants_fit(p, r, t);
    EXPECT_GT(fit.c, 0.5);
    EXPECT_LT(fit.c, 2.0);
    EXPECT_GE(fit.C, 1.0);
    EXPECT_LE(fit.C, kPointwiseMaxConstant);
    for (double rr : r)
        for (double tt : t)
            EXPECT_LE(operator_norm(block_propagator(p, rr, tt)), fit.C * std::exp(-fit.c * eta(p, rr) * tt) * (1 + 1e-12));
}

TEST(Zones, PointwiseFitRespectsSlowestMode)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    for (double r : {0.1, 1.0, 10.0}) {
        const std::vector<double> rs{r};
        const std::vector<double> ts{0, 1, 10, 100, 1000};
        const auto fit = pointwise_constants_fit(p, rs, ts);
        const auto q = exact_eigenvalues(p, r);
        double min_re = INFINITY;
        for (int j = 0; j < 4; ++j) min_re = std::min(min_re, q[j].real());
        // A decay rate faster than the slowest mode would eventually exceed any C <= 100.
        EXPECT_LE(fit.c, min_re / eta(p, r) + std::log(kPointwiseMaxConstant) / (eta(p, r) * 1000) + 1e-9);
    }
}

TEST(Zones, PointwiseEnvelopeAtTimeZero)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const std::vector<double> rs{0.01, 1.0, 100.0};
    const std::vector<double> ts{0.0};
    EXPECT_NEAR(pointwise_envelope(p, rs, ts, 3.0), 1.0, 1e-14);
}

TEST(Zones, PointwiseFitRejectsBadSamples)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const std::vector<double> empty;
    const std::vector<double> ts{1.0};
    const std::vector<double> bad_r{0.0};
    EXPECT_THROW(pointwise_constants_fit(p, empty, ts), ValidationError);
    EXPECT_THROW(pointwise_constants_fit(p, bad_r, ts), ValidationError);
}
