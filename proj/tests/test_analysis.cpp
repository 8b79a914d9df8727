#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ddwave/analysis.hpp"
#include "ddwave/propagator.hpp"
#include "ddwave/quadrature.hpp"

using namespace ddw;

namespace {

StudyConfig polar(const ModelParams& p, std::vector<double> times)
{
    StudyConfig cfg;
    cfg.params = p;
    cfg.data.target = DataTarget::FirstOrder;
    cfg.times = std::move(times);
    return cfg;
}

std::vector<NormPoint> power_series(double exponent, double scale = 1.0)
{
    std::vector<NormPoint> out;
    for (double t : log_spaced(1e2, 1e4, 25)) out.push_back({t, scale * std::pow(1 + t, exponent)});
    return out;
}

}  // namespace

TEST(Quadrature, IntegratesSmoothAndPeakedFunctions)
{
    const auto cubic = integrate_adaptive([](double x) { return x * x * x; }, {0.0, 2.0});
    EXPECT_NEAR(cubic.value, 4.0, 1e-14);
    EXPECT_TRUE(cubic.converged);

    const auto peaked = integrate_adaptive([](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); }, {0.0, 1.0});
    EXPECT_NEAR(peaked.value, std::sqrt(std::numbers::pi / 1e4), 1e-10);

    const auto singular = integrate_adaptive([](double x) { return std::pow(x, -0.5); }, log_panels(1e-12, 1.0, 4));
    EXPECT_NEAR(singular.value, 2.0 - 2e-6, 1e-8);
}

TEST(Quadrature, LogPanelsIncludeExtraBreakpoints)
{
    const auto b = log_panels(1e-3, 1e3, 4, {0.05, 0.1, 5e3});
    EXPECT_DOUBLE_EQ(b.front(), 1e-3);
    EXPECT_DOUBLE_EQ(b.back(), 1e3);
    EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
    EXPECT_NE(std::find(b.begin(), b.end(), 0.05), b.end());
    EXPECT_EQ(std::find(b.begin(), b.end(), 5e3), b.end());
    EXPECT_GE(b.size(), 25u);
}

TEST(LogSpaced, Endpoints)
{
    const auto v = log_spaced(1e2, 1e4, 25);
    ASSERT_EQ(v.size(), 25u);
    EXPECT_DOUBLE_EQ(v.front(), 1e2);
    EXPECT_DOUBLE_EQ(v.back(), 1e4);
    EXPECT_NEAR(v[12], 1e3, 1e-9);
}

TEST(FitDecay, ExactPowerLawAndConstant)
{
    const auto fit = fit_decay(power_series(-0.5, 3.0), 1e2, 1e4);
    EXPECT_NEAR(fit.slope, -0.5, 1e-12);
    EXPECT_LT(fit.std_error, 1e-12);
    EXPECT_EQ(fit.n_points, 25u);
    EXPECT_NEAR(fit_decay(power_series(0.0, 2.0), 1e2, 1e4).slope, 0.0, 1e-14);
}

TEST(FitDecay, RejectsThinWindows)
{
    const auto s = power_series(-1.0);
    EXPECT_THROW(fit_decay(s, 1e2, 1.2e2), ValidationError);
    EXPECT_THROW(fit_decay(s, 1e3, 1e2), ValidationError);
    std::vector<NormPoint> bad = s;
    bad[3].norm = 0.0;
    EXPECT_THROW(fit_decay(bad, 1e2, 1e4), ValidationError);
}

TEST(TheoreticalRates, Examples)
{
    const auto equal = validate_params(1, 2, 0.25, 0.75);
    const auto r = theoretical_rates(equal, 0, DataClass::Lm, 1);
    EXPECT_NEAR(r.base_rate, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(r.refinement_q, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(refinement_exponent(validate_params(1, 2, 0.2, 0.7)), 0.25, 1e-15);
    EXPECT_NEAR(refinement_exponent(validate_params(1, 2, 0.3, 0.9)), 0.4 / 1.4, 1e-15);
    EXPECT_NEAR(theoretical_rates(equal, 0, DataClass::Lm, 2).base_rate, 0.0, 1e-15);
    EXPECT_NEAR(theoretical_rates(equal, 1, DataClass::Lm, 1).base_rate, 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(theoretical_rates(equal, 0, DataClass::WeightedL1, 1).base_rate, 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(theoretical_rates(equal, 0, DataClass::WeightedL1, 1, false).base_rate, 2.0 / 3.0, 1e-15);
    EXPECT_THROW(theoretical_rates(equal, 0, DataClass::Lm, 3), ValidationError);
    EXPECT_THROW(theoretical_rates(equal, 0, DataClass::WeightedL1, 0), ValidationError);
}

TEST(TheoreticalRates, RefinementIsContinuousAcrossTheThreshold)
{
    for (double rho : {0.0, 0.1, 0.25, 0.4}) {
        const double theta = 1.0 - rho;
        const double below = refinement_exponent(validate_params(1, 2, rho, theta - 1e-9));
        const double on = refinement_exponent(validate_params(1, 2, rho, theta));
        EXPECT_NEAR(below, on, 1e-8);
        if (theta + 0.05 <= 1.0) {
            EXPECT_EQ(refinement_exponent(validate_params(1, 2, rho, theta + 0.05)), on);
        }
    }
}

TEST(ResidualOrders, SmallFrequencyBands)
{
    const auto below = residual_order_fit(validate_params(1, 2, 0.2, 0.7), FrequencyRegime::Small, 1e-4, 1e-2, 40);
    EXPECT_NEAR(below.predicted, 2.0, 1e-14);
    for (const auto& b : below.branch) {
        EXPECT_FALSE(b.exact_to_precision);
        EXPECT_GE(b.slope, 1.85);
    }
    EXPECT_TRUE(residual_orders_consistent(below, 0.15));

    // With a = 1 on the threshold the principal a-branch terms are the exact roots.
    const auto equal = residual_order_fit(validate_params(1, 2, 0.25, 0.75), FrequencyRegime::Small, 1e-4, 1e-2, 40);
    EXPECT_TRUE(equal.branch[1].exact_to_precision);
    EXPECT_TRUE(equal.branch[3].exact_to_precision);
    EXPECT_GE(equal.branch[0].slope, 1.85);
}

TEST(ResidualOrders, LargeFrequencyAboveThreshold)
{
    const auto above = residual_order_fit(validate_params(1, 2, 0.3, 0.9), FrequencyRegime::Large, 1e2, 1e4, 40);
    EXPECT_NEAR(above.predicted, -0.2, 1e-14);
    for (const auto& b : above.branch) EXPECT_LE(b.slope, -0.2 + 0.15);
    EXPECT_TRUE(residual_orders_consistent(above, 0.15));
}

TEST(ResidualOrders, BandValidation)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    EXPECT_THROW(residual_order_fit(p, FrequencyRegime::Small, 1e-4, 1.0, 40), ValidationError);
    EXPECT_THROW(residual_order_fit(p, FrequencyRegime::Large, 1.0, 1e4, 40), ValidationError);
    EXPECT_THROW(residual_order_fit(p, FrequencyRegime::Small, 1e-4, 1e-2, 10), ValidationError);
}

TEST(NormSeries, TimeZeroMatchesDataNorm)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto series = norm_series(polar(p, {0.0}), NormTarget::Solution);
    const GridSpec g{256, 40};
    InitialDataSpec spec;
    spec.target = DataTarget::FirstOrder;
    const auto W0 = initial_W(make_initial_data(spec, g), p);
    EXPECT_NEAR(series[0].norm, sobolev_norm(W0, 0.0), 1e-6 * series[0].norm);
}

TEST(NormSeries, DiffusionGapVanishesAtTimeZero)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    EXPECT_LT(norm_series(polar(p, {0.0}), NormTarget::DiffusionGap)[0].norm, 1e-14);
}

TEST(NormSeries, PolarAndLatticeAgree)
{
    const auto p = validate_params(1, 2, 0, 1);
    StudyConfig cfg = polar(p, {10.0});
    cfg.grid = GridSpec{512, 200};
    const double polar_norm = norm_series(cfg, NormTarget::Solution)[0].norm;
    cfg.pipeline = Pipeline::Lattice;
    const double lattice_norm = norm_series(cfg, NormTarget::Solution)[0].norm;
    EXPECT_NEAR(lattice_norm / polar_norm, 1.0, 1e-4);
}

TEST(NormSeries, LocalizedNormGrowsWithTheSmallZone)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    double prev = 0.0;
    for (double eps : {0.02, 0.05, 0.1, 0.2}) {
        StudyConfig cfg = polar(p, {1.0, 100.0});
        cfg.zone.eps = eps;
        const auto series = norm_series(cfg, NormTarget::LocalizedSolution);
        EXPECT_GE(series[1].norm, prev);
        prev = series[1].norm;
    }
}

TEST(NormSeries, GaussianDecayRateMatchesTheory)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto fit = fit_decay(norm_series(polar(p, log_spaced(1e2, 1e4, 25)), NormTarget::Solution), 1e2, 1e4);
    EXPECT_NEAR(fit.slope, -2.0 / 3.0, 0.1);
}

TEST(NormSeries, VelocityOnlyDataDecaysFaster)
{
    // u1 alone couples to the slow branches only through the r^{1 - 2 rho}
    // mixing, which adds (1 - 2 rho)/(2 - 2 rho) to the rate: 1 + s/(2 - 2 rho) in total.
    const auto p = validate_params(1, 2, 0.25, 0.75);
    for (double s : {0.0, 1.0}) {
        StudyConfig cfg = polar(p, log_spaced(1e2, 1e4, 25));
        cfg.data.target = DataTarget::U1;
        cfg.s = s;
        const auto fit = fit_decay(norm_series(cfg, NormTarget::Solution), 1e2, 1e4);
        EXPECT_NEAR(fit.slope, -(1.0 + s / p.kappa()), 0.1) << "s=" << s;
    }
}

TEST(NormSeries, ConfigValidation)
{
    StudyConfig cfg;
    cfg.times = {2.0, 1.0};
    EXPECT_THROW(cfg.validate(), ValidationError);
    cfg.times = {1.0};
    cfg.m = 3.0;
    EXPECT_THROW(cfg.validate(), ValidationError);
    cfg.m = 1.0;
    cfg.angles = 2;
    EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Gevrey, BoundedAndUnboundedCases)
{
    const auto samples = log_spaced(10, 1e4, 200);
    const auto smooth = validate_params(1, 2, 0.25, 0.75);
    EXPECT_EQ(gevrey_weight_exponent(smooth), 0.5);
    const double coeff = exterior_gap_coefficient(smooth, samples);
    EXPECT_GT(coeff, 0.0);
    EXPECT_LE(gevrey_indicator(smooth, 1.0, 0.5 * coeff, samples), 2.0);

    const auto rough = validate_params(1, 2, 0.25, 1.0);
    EXPECT_EQ(gevrey_weight_exponent(rough), 0.1);
    const std::vector<double> far{1e4};
    EXPECT_GT(gevrey_indicator(rough, 1.0, 4.0, far), 1e3);

    EXPECT_NEAR(gevrey_indicator(smooth, 0.0, 1.0, samples), 1.0, 1e-14);
}
