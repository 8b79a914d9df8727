#include "ddwave/propagator.hpp"

#include <string>

namespace ddw {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd rotation(const Eigen::Vector2d& eta)
{
    Eigen::Matrix2cd m;
    m << eta(0), eta(1),
         eta(1), -eta(0);
    return m;
}

// Any orthogonal frame diagonalizes the stiffness at xi = 0; the identity keeps W(0) = (u1, u1).
Eigen::Matrix2cd frame(const Eigen::Vector2d& xi)
{
    if (xi.squaredNorm() == 0.0) return Eigen::Matrix2cd::Identity();
    return rotation(frequency_direction(xi));
}

}  // namespace

Eigen::Vector2d frequency_direction(const Eigen::Vector2d& xi)
{
    const double r = xi.norm();
    if (r == 0.0) return {1.0, 0.0};
    return xi / r;
}

Eigen::Vector4cd u_to_W(const Eigen::Vector2cd& u0_hat, const Eigen::Vector2cd& u1_hat,
                        const Eigen::Vector2d& xi, const ModelParams& p)
{
    const double r = xi.norm();
    const Eigen::Matrix2cd m = frame(xi);
    const Eigen::Vector2cd v = m * u0_hat;
    const Eigen::Vector2cd vt = m * u1_hat;
    const cd ir(0.0, r);
    const Eigen::Vector2cd stiff(ir * p.b * v(0), ir * p.a * v(1));
    Eigen::Vector4cd w;
    w << vt + stiff, vt - stiff;
    return w;
}

DisplacementVelocity W_to_u(const Eigen::Vector4cd& W, const Eigen::Vector2d& xi, const ModelParams& p)
{
    const double r = xi.norm();
    if (r == 0.0) throw ZeroModeError();
    const Eigen::Matrix2cd m = frame(xi);
    const Eigen::Vector2cd plus = W.head<2>(), minus = W.tail<2>();
    const Eigen::Vector2cd vt = (plus + minus) / 2.0;
    const Eigen::Vector2cd diff = (plus - minus) / cd(0.0, 2.0 * r);
    const Eigen::Vector2cd v(diff(0) / p.b, diff(1) / p.a);
    return {m * v, m * vt};
}

Eigen::Vector2cd W_to_velocity(const Eigen::Vector4cd& W, const Eigen::Vector2d& xi)
{
    return frame(xi) * ((W.head<2>() + W.tail<2>()) / 2.0);
}

DisplacementVelocity zero_mode_evolution(const Eigen::Vector2cd& u0_hat0, const Eigen::Vector2cd& u1_hat0,
                                         const ModelParams& p, double t)
{
    if (!(t >= 0.0)) throw ValidationError("zero_mode_evolution: t must be nonnegative");
    if (p.rho > 0.0) return {u0_hat0 + t * u1_hat0, u1_hat0};
    const double decay = std::exp(-t);
    return {u0_hat0 + (-std::expm1(-t)) * u1_hat0, decay * u1_hat0};
}

Eigen::Vector4cd initial_W_at(const InitialDataSpec& spec, const Eigen::Vector2d& xi, const ModelParams& p)
{
    const cd s = profile_transform(spec, xi);
    if (spec.target == DataTarget::FirstOrder) return s * spec.direction.cast<cd>();
    const Eigen::Vector2cd u = s * spec.direction.head<2>().cast<cd>();
    const Eigen::Vector2cd zero = Eigen::Vector2cd::Zero();
    return spec.target == DataTarget::U0 ? u_to_W(u, zero, xi, p) : u_to_W(zero, u, xi, p);
}

FourierField initial_W(const InitialData& data, const ModelParams& p)
{
    const InitialDataSpec spec = data.spec;
    SpectralProfile profile = [spec, p](const Eigen::Vector2d& xi) -> Eigen::VectorXcd {
        return initial_W_at(spec, xi, p);
    };
    if (data.U0) {
        const FourierField spectral = transform(*data.U0, Direction::Forward);
        return FourierField(spectral.grid(), Domain::Spectral, spectral.data(), std::move(profile));
    }
    const FourierField u0 = transform(data.u0, Direction::Forward);
    const FourierField u1 = transform(data.u1, Direction::Forward);
    const GridSpec& g = u0.grid();
    const auto nodes = static_cast<std::ptrdiff_t>(g.nodes());
    Eigen::MatrixXcd w(nodes, 4);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nodes; ++k) {
        const Eigen::Vector2d xi = g.xi_at(static_cast<std::size_t>(k));
        w.row(k) = u_to_W(u0.data().row(k).transpose(), u1.data().row(k).transpose(), xi, p).transpose();
    }
    return FourierField(g, Domain::Spectral, std::move(w), std::move(profile));
}

namespace {

void check_evolution_input(const FourierField& W0)
{
    if (W0.domain() != Domain::Spectral || W0.components() != 4)
        throw ValidationError("evolve: W0 must be a spectral four-component field");
}

// At the zero node the block propagator reduces to exp(-t sigma(0) B0 / 2),
// which on data with W+ = W- is exactly the zero-mode ODE for the velocity.
Eigen::MatrixXcd evolve_data(const FourierField& W0, double t, const ModelParams& p)
{
    const GridSpec& g = W0.grid();
    const auto nodes = static_cast<std::ptrdiff_t>(g.nodes());
    Eigen::MatrixXcd out(nodes, 4);
    const auto& in = W0.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nodes; ++k) {
        const double r = g.xi_at(static_cast<std::size_t>(k)).norm();
        const auto block = block_propagator(p, r, t);
        out.row(k) = block.apply(in.row(k).transpose()).transpose();
    }
    return out;
}

}  // namespace

Trajectory evolve(const FourierField& W0, const std::vector<double>& times, const ModelParams& p)
{
    check_evolution_input(W0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0) || !std::isfinite(times[k])) throw ValidationError("evolve: times must be nonnegative");
        if (k > 0 && !(times[k] > times[k - 1])) throw ValidationError("evolve: times must be strictly increasing");
    }
    Trajectory traj;
    traj.times = times;
    traj.fields.reserve(times.size());
    for (double t : times) {
        if (t == 0.0)
            traj.fields.push_back(W0);
        else
            traj.fields.emplace_back(W0.grid(), Domain::Spectral, evolve_data(W0, t, p));
    }
    return traj;
}

FourierField evolve_to(const FourierField& W0, double t, const ModelParams& p)
{
    check_evolution_input(W0);
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("evolve: t must be nonnegative");
    if (t == 0.0) return W0;
    return FourierField(W0.grid(), Domain::Spectral, evolve_data(W0, t, p));
}

std::array<double, 4> reference_rates(const ModelParams& p, double r)
{
    if (!(r > 0.0)) throw ValidationError("reference_rates: r must be positive");
    const double slow = radial_power(r, 2.0 - 2.0 * p.rho);
    const double low = radial_power(r, 2.0 * p.rho);
    const double a2 = p.a * p.a, b2 = p.b * p.b;
    std::array<double, 4> rates{b2 * slow, a2 * slow, 0.0, 0.0};
    switch (p.regime) {
    case Regime::Below: {
        const double high = radial_power(r, 2.0 * p.theta);
        rates[2] = low + high - b2 * slow;
        rates[3] = low + high - a2 * slow;
        break;
    }
    case Regime::Equal:
        rates[2] = low + (1.0 - b2) * slow;
        rates[3] = low + (1.0 - a2) * slow;
        break;
    case Regime::Above:
        rates[2] = low - b2 * slow;
        rates[3] = low - a2 * slow;
        break;
    }
    for (int j = 0; j < 4; ++j) {
        if (!(rates[static_cast<std::size_t>(j)] > 0.0))
            throw CheckFailure("reference_rates: rate " + std::to_string(j + 1) + " is not positive at r = "
                               + std::to_string(r) + "; restrict to the small-frequency zone");
    }
    return rates;
}

Eigen::Matrix4cd reference_propagator(const ModelParams& p, double r, double t)
{
    std::array<double, 4> rates{};
    if (r == 0.0) {
        const double s0 = dissipation_sigma(p, 0.0);
        rates = {0.0, 0.0, s0, s0};
    } else {
        rates = reference_rates(p, r);
    }
    Eigen::Vector4cd decay;
    for (int j = 0; j < 4; ++j) decay(j) = std::exp(-rates[static_cast<std::size_t>(j)] * t);
    const Eigen::Matrix4cd T1 = t1_matrix<double>().cast<cd>();
    return T1 * decay.asDiagonal() * (T1 / 2.0);
}

FourierField reference_evolve(const FourierField& W0, double t, const ModelParams& p, const ZoneConfig& zone)
{
    check_evolution_input(W0);
    zone.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("reference_evolve: t must be nonnegative");
    const GridSpec& g = W0.grid();
    const auto nodes = static_cast<std::ptrdiff_t>(g.nodes());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nodes, 4);
    const auto& in = W0.data();
    // Cheap reject before the per-node test.
    const double support = zone.eps;
    bool failed = false;
    std::string message;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nodes; ++k) {
        const double r = g.xi_at(static_cast<std::size_t>(k)).norm();
        if (r >= support || zone_weights(zone, r).chi_int <= 0.0) continue;
        try {
            out.row(k) = (reference_propagator(p, r, t) * in.row(k).transpose()).transpose();
        } catch (const CheckFailure& e) {
#pragma omp critical
            {
                failed = true;
                message = e.what();
            }
        }
    }
    if (failed) throw CheckFailure(message);
    return FourierField(g, Domain::Spectral, std::move(out));
}

}  // namespace ddw
