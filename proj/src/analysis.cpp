#include "ddwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ddwave/propagator.hpp"
#include "ddwave/quadrature.hpp"

namespace ddw {

namespace {

using cd = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Radius beyond which the data spectrum is negligible (or identically zero).
double data_cutoff(const InitialDataSpec& spec)
{
    if (spec.kind == DataKind::Ring) return 3.0 / spec.width;
    return 12.0 / spec.width;
}

double radial_weight(const StudyConfig& cfg, NormTarget target, double r)
{
    if (target == NormTarget::Solution) return 1.0;
    return zone_weights(cfg.zone, r).chi_int;
}

}  // namespace

std::string to_string(Pipeline pipeline)
{
    return pipeline == Pipeline::Polar ? "polar" : "lattice";
}

std::string to_string(NormTarget target)
{
    switch (target) {
    case NormTarget::Solution: return "solution";
    case NormTarget::LocalizedSolution: return "localized-solution";
    case NormTarget::DiffusionGap: return "diffusion-gap";
    }
    return "solution";
}

std::string to_string(DataClass data_class)
{
    return data_class == DataClass::Lm ? "Lm" : "L1gamma";
}

Pipeline parse_pipeline(const std::string& name)
{
    if (name == "polar") return Pipeline::Polar;
    if (name == "lattice") return Pipeline::Lattice;
    throw ValidationError("study.pipeline must be polar or lattice (got '" + name + "')");
}

DataClass parse_data_class(const std::string& name)
{
    if (name == "Lm") return DataClass::Lm;
    if (name == "L1gamma") return DataClass::WeightedL1;
    throw ValidationError("study.class must be Lm or L1gamma (got '" + name + "')");
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0 && hi >= lo)) throw ValidationError("log_spaced: need 0 < lo <= hi");
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> out(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) out[k] = lo * std::exp(step * static_cast<double>(k));
    out.front() = lo;
    out.back() = hi;
    return out;
}

void StudyConfig::validate() const
{
    zone.validate();
    data.validate();
    if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("study: s must be nonnegative");
    if (data_class == DataClass::Lm && !(m >= 1.0 && m <= 2.0)) throw ValidationError("study: m must lie in [1, 2]");
    if (data_class == DataClass::WeightedL1 && !(gamma > 0.0 && gamma <= 1.0))
        throw ValidationError("study: gamma must lie in (0, 1]");
    if (times.empty()) throw ValidationError("study: times must be nonempty");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0) || !std::isfinite(times[k])) throw ValidationError("study: times must be nonnegative");
        if (k > 0 && !(times[k] > times[k - 1])) throw ValidationError("study: times must be strictly increasing");
    }
    if (angles < 4) throw ValidationError("study: at least 4 angles are required");
    if (!(rel_tol > 0.0)) throw ValidationError("study: rel_tol must be positive");
    if (!(panels_per_decade > 0.0)) throw ValidationError("study: panels_per_decade must be positive");
    if (!(r_floor > 0.0 && r_floor < data_cutoff(data))) throw ValidationError("study: r_floor out of range");
    if (pipeline == Pipeline::Lattice) grid.validate();
}

double polar_integrand(const StudyConfig& cfg, NormTarget target, double r, double t)
{
    const double w = radial_weight(cfg, target, r);
    if (w == 0.0) return 0.0;
    const ModelParams& p = cfg.params;
    Eigen::Matrix4cd X = block_propagator(p, r, t).matrix();
    if (target == NormTarget::DiffusionGap) X -= reference_propagator(p, r, t);

    const double dphi = kTwoPi / static_cast<double>(cfg.angles);
    double angular = 0.0;
    for (std::size_t k = 0; k < cfg.angles; ++k) {
        const double phi = dphi * static_cast<double>(k);
        const Eigen::Vector2d xi(r * std::cos(phi), r * std::sin(phi));
        angular += (X * initial_W_at(cfg.data, xi, p)).squaredNorm();
    }
    angular *= dphi;
    const double riesz = cfg.s == 0.0 ? 1.0 : std::pow(r, 2.0 * cfg.s);
    return riesz * w * w * r * angular;
}

namespace {

std::vector<NormPoint> polar_series(const StudyConfig& cfg, NormTarget target)
{
    double r_max = data_cutoff(cfg.data);
    if (target != NormTarget::Solution) r_max = std::min(r_max, cfg.zone.eps);
    std::vector<double> extra{cfg.zone.eps * (1.0 - cfg.zone.w_int), cfg.zone.eps, cfg.zone.N,
                              cfg.zone.N * (1.0 + cfg.zone.w_ext)};
    if (cfg.data.kind == DataKind::Ring) extra.push_back(1.0 / cfg.data.width);
    const std::vector<double> breaks = log_panels(cfg.r_floor, r_max, cfg.panels_per_decade, extra);

    QuadratureOptions opts;
    opts.rel_tol = cfg.rel_tol;
    std::vector<NormPoint> out(cfg.times.size());
    const auto count = static_cast<std::ptrdiff_t>(cfg.times.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const double t = cfg.times[static_cast<std::size_t>(k)];
        const auto integrand = [&](double r) { return polar_integrand(cfg, target, r, t); };
        const QuadratureResult q = integrate_adaptive(integrand, breaks, opts);
        out[static_cast<std::size_t>(k)] = {t, std::sqrt(std::max(0.0, q.value) / (kTwoPi * kTwoPi))};
    }
    return out;
}

std::vector<NormPoint> lattice_series(const StudyConfig& cfg, NormTarget target)
{
    const InitialData data = make_initial_data(cfg.data, cfg.grid);
    const FourierField W0 = initial_W(data, cfg.params);
    RadialWeight weight;
    if (target != NormTarget::Solution) {
        const ZoneConfig zone = cfg.zone;
        weight = [zone](double r) { return zone_weights(zone, r).chi_int; };
    }
    std::vector<NormPoint> out;
    out.reserve(cfg.times.size());
    for (double t : cfg.times) {
        FourierField Wt = evolve_to(W0, t, cfg.params);
        if (target == NormTarget::DiffusionGap) {
            const FourierField ref = reference_evolve(W0, t, cfg.params, cfg.zone);
            Wt = FourierField(Wt.grid(), Domain::Spectral, Wt.data() - ref.data());
        }
        out.push_back({t, sobolev_norm(Wt, cfg.s, weight)});
    }
    return out;
}

}  // namespace

std::vector<NormPoint> norm_series(const StudyConfig& cfg, NormTarget target)
{
    cfg.validate();
    return cfg.pipeline == Pipeline::Polar ? polar_series(cfg, target) : lattice_series(cfg, target);
}

DecayFit fit_decay(std::span<const NormPoint> series, double t_min, double t_max)
{
    if (!(t_min > 0.0 && t_max > t_min)) throw ValidationError("fit_decay: window must satisfy 0 < t_min < t_max");
    std::vector<double> x, y;
    for (const NormPoint& pt : series) {
        if (pt.t < t_min || pt.t > t_max) continue;
        if (!(pt.norm > 0.0) || !std::isfinite(pt.norm))
            throw ValidationError("fit_decay: norms inside the window must be positive and finite");
        x.push_back(std::log1p(pt.t));
        y.push_back(std::log(pt.norm));
    }
    if (x.size() < 5) throw ValidationError("fit_decay: fewer than 5 points inside the window");

    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    DecayFit fit;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double res = y[k] - intercept - fit.slope * x[k];
        ssr += res * res;
    }
    fit.std_error = std::sqrt(ssr / (n - 2.0) / sxx);
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.n_points = x.size();
    return fit;
}

double refinement_exponent(const ModelParams& p)
{
    if (p.regime == Regime::Below) return (2.0 * p.theta - 1.0) / p.kappa();
    return (1.0 - 2.0 * p.rho) / p.kappa();
}

TheoreticalRates theoretical_rates(const ModelParams& p, double s, DataClass data_class, double selector,
                                   bool zero_mean)
{
    if (!(s >= 0.0)) throw ValidationError("theoretical_rates: s must be nonnegative");
    const double kappa = p.kappa();
    TheoreticalRates out;
    out.refinement_q = refinement_exponent(p);
    if (data_class == DataClass::Lm) {
        const double m = selector;
        if (!(m >= 1.0 && m <= 2.0)) throw ValidationError("theoretical_rates: m must lie in [1, 2]");
        out.base_rate = s / kappa + (2.0 - m) / (m * kappa);
    } else {
        const double gamma = selector;
        if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("theoretical_rates: gamma must lie in (0, 1]");
        out.base_rate = zero_mean ? (s + gamma) / kappa + 1.0 / kappa : s / kappa + 1.0 / kappa;
    }
    return out;
}

ResidualOrders residual_order_fit(const ModelParams& p, FrequencyRegime regime, double r_min, double r_max,
                                  std::size_t n)
{
    if (n < 20) throw ValidationError("residual_order_fit: need at least 20 points");
    if (!(r_min > 0.0 && r_max > r_min)) throw ValidationError("residual_order_fit: need 0 < r_min < r_max");
    if (regime == FrequencyRegime::Small && r_max > 1e-2)
        throw ValidationError("residual_order_fit: small-frequency band must satisfy r_max <= 1e-2");
    if (regime == FrequencyRegime::Large && r_min < 1e2)
        throw ValidationError("residual_order_fit: large-frequency band must satisfy r_min >= 1e2");

    ResidualOrders out;
    out.regime = regime;
    out.predicted = predicted_remainder_exponent(p, regime);
    out.r = log_spaced(r_min, r_max, n);
    for (auto& v : out.residual) v.resize(n);
    std::array<std::vector<double>, 4> noise;
    for (auto& v : noise) v.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double r = out.r[k];
        const auto exact = exact_eigenvalues(p, r);
        const auto principal = principal_eigenvalues(p, r, regime);
        for (std::size_t j = 0; j < 4; ++j) {
            const int jj = static_cast<int>(j);
            out.residual[j][k] = std::abs(exact[jj] - principal[jj]);
            noise[j][k] = kResidualNoiseUlps * std::numeric_limits<double>::epsilon()
                          * std::max(std::abs(exact[jj]), std::abs(principal[jj]));
        }
    }
    for (std::size_t j = 0; j < 4; ++j) {
        // Residuals at rounding level carry no order information (e.g. a = 1 on the
        // threshold, where the principal terms are the exact roots).
        std::vector<NormPoint> pts;
        for (std::size_t k = 0; k < n; ++k)
            if (out.residual[j][k] > std::max(kResidualUnderflow, noise[j][k]))
                pts.push_back({out.r[k], out.residual[j][k]});
        BranchOrder& b = out.branch[j];
        if (pts.size() < 5 || 2 * pts.size() < n) {
            b.exact_to_precision = true;
            continue;
        }
        double mx = 0.0, my = 0.0;
        for (const auto& pt : pts) {
            mx += std::log(pt.t);
            my += std::log(pt.norm);
        }
        const auto m = static_cast<double>(pts.size());
        mx /= m;
        my /= m;
        double sxx = 0.0, sxy = 0.0;
        for (const auto& pt : pts) {
            sxx += (std::log(pt.t) - mx) * (std::log(pt.t) - mx);
            sxy += (std::log(pt.t) - mx) * (std::log(pt.norm) - my);
        }
        b.slope = sxy / sxx;
        double ssr = 0.0;
        for (const auto& pt : pts) {
            const double res = std::log(pt.norm) - my - b.slope * (std::log(pt.t) - mx);
            ssr += res * res;
        }
        b.std_error = std::sqrt(ssr / (m - 2.0) / sxx);
    }
    return out;
}

bool residual_orders_consistent(const ResidualOrders& orders, double tol)
{
    for (const BranchOrder& b : orders.branch) {
        if (b.exact_to_precision) continue;
        if (orders.regime == FrequencyRegime::Small && b.slope < orders.predicted - tol) return false;
        if (orders.regime == FrequencyRegime::Large && b.slope > orders.predicted + tol) return false;
    }
    return true;
}

double gevrey_weight_exponent(const ModelParams& p)
{
    return p.theta == 1.0 ? 0.1 : 2.0 - 2.0 * p.theta;
}

double exterior_gap_coefficient(const ModelParams& p, std::span<const double> r_samples)
{
    if (r_samples.empty()) throw ValidationError("exterior_gap_coefficient: samples must be nonempty");
    double coeff = std::numeric_limits<double>::infinity();
    for (double r : r_samples) {
        if (!(r > 0.0)) throw ValidationError("exterior_gap_coefficient: samples must be positive");
        const auto q = exact_eigenvalues(p, r);
        double min_re = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 4; ++j) min_re = std::min(min_re, q[j].real());
        coeff = std::min(coeff, min_re / radial_power(r, 2.0 - 2.0 * p.theta));
    }
    return coeff;
}

double gevrey_indicator(const ModelParams& p, double t, double c_prime, std::span<const double> r_samples)
{
    if (!(t >= 0.0)) throw ValidationError("gevrey_indicator: t must be nonnegative");
    if (!(c_prime > 0.0)) throw ValidationError("gevrey_indicator: c_prime must be positive");
    if (r_samples.empty()) throw ValidationError("gevrey_indicator: samples must be nonempty");
    const double w = gevrey_weight_exponent(p);
    double worst = -std::numeric_limits<double>::infinity();
    for (double r : r_samples) {
        if (!(r > 0.0)) throw ValidationError("gevrey_indicator: samples must be positive");
        const double norm = operator_norm(block_propagator(p, r, t));
        const double log_norm = norm > 0.0 ? std::log(norm) : -std::numeric_limits<double>::infinity();
        worst = std::max(worst, c_prime * std::pow(r, w) * t + log_norm);
    }
    return std::exp(worst);
}

}  // namespace ddw
