#pragma once

// Norm time series of the evolved first-order unknown, decay-slope fits and
// the theoretical exponents they are compared against, residual orders of the
// principal eigenvalues, and the exterior-zone Gevrey indicator.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ddwave/field.hpp"
#include "ddwave/params.hpp"
#include "ddwave/symbol.hpp"
#include "ddwave/zones.hpp"

namespace ddw {

enum class Pipeline { Polar, Lattice };
enum class NormTarget { Solution, LocalizedSolution, DiffusionGap };
enum class DataClass { Lm, WeightedL1 };

std::string to_string(Pipeline pipeline);
std::string to_string(NormTarget target);
std::string to_string(DataClass data_class);
Pipeline parse_pipeline(const std::string& name);
DataClass parse_data_class(const std::string& name);

/// n points spaced uniformly in log between lo and hi (both included).
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

struct StudyConfig {
    ModelParams params = validate_params(1.0, 2.0, 0.25, 0.75);
    InitialDataSpec data;
    double s = 0.0;
    DataClass data_class = DataClass::Lm;
    double m = 1.0;
    double gamma = 1.0;
    Pipeline pipeline = Pipeline::Polar;
    std::vector<double> times = log_spaced(1e2, 1e4, 25);
    ZoneConfig zone;
    GridSpec grid;
    std::size_t angles = 64;
    double rel_tol = 1e-8;
    /// Panels per decade of the radial quadrature.
    double panels_per_decade = 4.0;
    /// Lower radial cutoff of the polar pipeline.
    double r_floor = 1e-12;

    /// Throws ValidationError on an inconsistent configuration.
    void validate() const;
};

struct NormPoint {
    double t = 0.0;
    double norm = 0.0;
};

/// ||W(t)||_{H^s} (Solution), ||chi_int W(t)|| (LocalizedSolution) or
/// ||chi_int (W(t) - T1 W_ref(t))|| (DiffusionGap) at every configured time.
std::vector<NormPoint> norm_series(const StudyConfig& cfg, NormTarget target);

/// Radial integrand of the polar pipeline before the (2 pi)^{-2} factor:
/// r^{2s+1} w(r)^2 int |X(r, t) W0_hat(r, phi)|^2 dphi on the uniform angular rule.
double polar_integrand(const StudyConfig& cfg, NormTarget target, double r, double t);

struct DecayFit {
    double slope = 0.0;
    double std_error = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t n_points = 0;
};

/// OLS slope of log(norm) against log(1 + t) over points with t in [t_min, t_max].
/// Throws ValidationError with fewer than 5 points in the window or a nonpositive norm.
DecayFit fit_decay(std::span<const NormPoint> series, double t_min, double t_max);

struct TheoreticalRates {
    double base_rate = 0.0;
    double refinement_q = 0.0;
};

/// q = (2 theta - 1)/(2 - 2 rho) below the threshold, (1 - 2 rho)/(2 - 2 rho) on and above it.
double refinement_exponent(const ModelParams& p);

/// For DataClass::Lm the selector is m in [1, 2]; for WeightedL1 it is gamma in (0, 1].
/// Weighted data with nonzero mean falls back to the L^1 rate.
TheoreticalRates theoretical_rates(const ModelParams& p, double s, DataClass data_class, double selector,
                                   bool zero_mean = true);

struct BranchOrder {
    double slope = 0.0;
    double std_error = 0.0;
    bool exact_to_precision = false;
};

struct ResidualOrders {
    FrequencyRegime regime = FrequencyRegime::Small;
    double predicted = 0.0;
    std::vector<double> r;
    std::array<std::vector<double>, 4> residual;
    std::array<BranchOrder, 4> branch;
};

inline constexpr double kResidualUnderflow = 1e-300;
/// Residuals within this many ulps of the eigenvalue are treated as rounding noise.
inline constexpr double kResidualNoiseUlps = 64.0;

/// Log-log slope of |lambda_exact - lambda_principal| against r for every branch.
/// A branch whose residual sits at underflow or rounding level on at least half
/// of the band is reported as exact to precision.
/// Throws ValidationError if n < 20 or the band leaves the asymptotic zone
/// (r_max <= 1e-2 for Small, r_min >= 1e2 for Large).
ResidualOrders residual_order_fit(const ModelParams& p, FrequencyRegime regime, double r_min, double r_max,
                                  std::size_t n);

/// A remainder O(r^k) bounds the slope from below as r -> 0 and from above as
/// r -> infinity; true when every non-exact branch respects that direction within tol.
bool residual_orders_consistent(const ResidualOrders& orders, double tol);

/// Exponent of the Gevrey weight exp(c' r^w t): 2 - 2 theta, or 0.1 when theta = 1.
double gevrey_weight_exponent(const ModelParams& p);

/// min over samples of min_j Re lambda_j(r) / r^{2 - 2 theta}.
double exterior_gap_coefficient(const ModelParams& p, std::span<const double> r_samples);

/// sup over samples of exp(c' r^w t) ||exp(-t B(r))||, evaluated in log space.
double gevrey_indicator(const ModelParams& p, double t, double c_prime, std::span<const double> r_samples);

}  // namespace ddw
