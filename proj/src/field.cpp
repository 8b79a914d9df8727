#include "ddwave/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace ddw {

namespace {

using cd = std::complex<double>;
using CVec = std::vector<cd>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One axis of the centered lattice transform. The (-1)^i factors move the
// origin to index n/2 on both sides (n/2 is even for n >= 8).
void forward_line(Eigen::FFT<double>& fft, const CVec& in, CVec& scratch, CVec& out, double dx)
{
    const std::size_t n = in.size();
    fft.fwd(scratch, in);
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        out[i] = sign * dx * scratch[(i + n / 2) % n];
    }
}

void inverse_line(Eigen::FFT<double>& fft, const CVec& in, CVec& scratch, CVec& out, double dx)
{
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        scratch[(i + n / 2) % n] = sign * in[i];
    }
    fft.inv(out, scratch);
    for (auto& v : out) v /= dx;
}

// Applies `line` along rows, then along columns, of one component laid out row-major.
template <typename LineOp>
void transform_2d(Eigen::Ref<Eigen::VectorXcd> column, std::size_t n, double dx, LineOp line)
{
    const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
    {
        Eigen::FFT<double> fft;
        CVec in(n), scratch(n), out(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < ni; ++i) {
            const std::size_t base = static_cast<std::size_t>(i) * n;
            for (std::size_t j = 0; j < n; ++j) in[j] = column(static_cast<Eigen::Index>(base + j));
            line(fft, in, scratch, out, dx);
            for (std::size_t j = 0; j < n; ++j) column(static_cast<Eigen::Index>(base + j)) = out[j];
        }
#pragma omp for schedule(static)
        for (std::ptrdiff_t j = 0; j < ni; ++j) {
            for (std::size_t i = 0; i < n; ++i) in[i] = column(static_cast<Eigen::Index>(i * n + static_cast<std::size_t>(j)));
            line(fft, in, scratch, out, dx);
            for (std::size_t i = 0; i < n; ++i) column(static_cast<Eigen::Index>(i * n + static_cast<std::size_t>(j))) = out[i];
        }
    }
}

Eigen::MatrixXcd lattice_transform(const Eigen::MatrixXcd& data, const GridSpec& grid, Direction direction)
{
    Eigen::MatrixXcd out = data;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        if (direction == Direction::Forward)
            transform_2d(out.col(c), grid.n, grid.dx(), forward_line);
        else
            transform_2d(out.col(c), grid.n, grid.dx(), inverse_line);
    }
    return out;
}

// Deterministic sum of per-row partial sums.
template <typename RowSum>
double row_reduce(std::size_t n, RowSum row_sum)
{
    std::vector<double> partial(n, 0.0);
    const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < ni; ++i) partial[static_cast<std::size_t>(i)] = row_sum(static_cast<std::size_t>(i));
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

}  // namespace

void GridSpec::validate() const
{
    if (n < 8 || !std::has_single_bit(n)) throw ValidationError("grid: n must be a power of two and at least 8");
    if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("grid: box length L must be positive");
}

FourierField::FourierField(GridSpec grid, Domain domain, Eigen::MatrixXcd data, SpectralProfile profile)
    : grid_(grid), domain_(domain), data_(std::move(data)), profile_(std::move(profile))
{
    grid_.validate();
    if (data_.cols() != 2 && data_.cols() != 4)
        throw ValidationError("field: component count must be 2 or 4");
    if (static_cast<std::size_t>(data_.rows()) != grid_.nodes())
        throw ValidationError("field: data rows do not match the grid (expected n^2 nodes)");
    if (profile_) {
        const double mismatch = profile_mismatch();
        if (!(mismatch <= kProfileTolerance))
            throw ValidationError("field: attached spectrum deviates from lattice data by "
                                  + std::to_string(mismatch) + " (relative)");
    }
}

FourierField FourierField::zeros(GridSpec grid, Domain domain, int components)
{
    grid.validate();
    return FourierField(grid, domain, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid.nodes()), components));
}

double FourierField::profile_mismatch() const
{
    if (!profile_) return 0.0;
    const Eigen::MatrixXcd spectrum =
        domain_ == Domain::Spectral ? data_ : lattice_transform(data_, grid_, Direction::Forward);
    const auto nodes = static_cast<std::ptrdiff_t>(grid_.nodes());
    Eigen::MatrixXcd expected(spectrum.rows(), spectrum.cols());
    for (std::ptrdiff_t k = 0; k < nodes; ++k) {
        const Eigen::VectorXcd v = profile_(grid_.xi_at(static_cast<std::size_t>(k)));
        if (v.size() != spectrum.cols()) throw ValidationError("field: profile component count mismatch");
        expected.row(k) = v.transpose();
    }
    const double peak = expected.cwiseAbs().maxCoeff();
    const double err = (expected - spectrum).cwiseAbs().maxCoeff();
    if (peak == 0.0) return err;
    return err / peak;
}

FourierField transform(const FourierField& field, Direction direction)
{
    const bool forward = direction == Direction::Forward;
    if (forward != (field.domain() == Domain::Physical))
        throw ValidationError(forward ? "transform: forward direction needs a physical field"
                                      : "transform: inverse direction needs a spectral field");
    // The profile was already checked at construction; skip the second check.
    FourierField out(field.grid(), forward ? Domain::Spectral : Domain::Physical,
                     lattice_transform(field.data(), field.grid(), direction));
    if (!field.has_profile()) return out;
    return FourierField(out.grid(), out.domain(), out.data(), field.profile());
}

double sobolev_norm(const FourierField& field, double s, const RadialWeight& weight)
{
    if (field.domain() != Domain::Spectral) throw ValidationError("sobolev_norm: field must be spectral");
    if (!(s >= 0.0)) throw ValidationError("sobolev_norm: s must be nonnegative");
    const GridSpec& g = field.grid();
    const std::size_t n = g.n;
    const auto& data = field.data();
    const double total = row_reduce(n, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t node = i * n + j;
            const double r = g.xi_at(node).norm();
            double mult = s == 0.0 ? 1.0 : (r == 0.0 ? 0.0 : std::pow(r, 2.0 * s));
            if (weight) {
                const double w = weight(r);
                mult *= w * w;
            }
            if (mult == 0.0) continue;
            acc += mult * data.row(static_cast<Eigen::Index>(node)).squaredNorm();
        }
        return acc;
    });
    const double cell = g.dxi() * g.dxi();
    return std::sqrt(total * cell / (kTwoPi * kTwoPi));
}

PhysicalNorms physical_norms(const FourierField& field, double m, double gamma)
{
    if (field.domain() != Domain::Physical) throw ValidationError("physical_norms: field must be physical");
    if (!(m >= 1.0 && m <= 2.0)) throw ValidationError("physical_norms: m must lie in [1, 2]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("physical_norms: gamma must lie in (0, 1]");
    const GridSpec& g = field.grid();
    const std::size_t n = g.n;
    const auto& data = field.data();
    const double cell = g.dx() * g.dx();

    PhysicalNorms out;
    const double lm_sum = row_reduce(n, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += std::pow(data.row(static_cast<Eigen::Index>(i * n + j)).norm(), m);
        return acc;
    });
    out.lm = std::pow(lm_sum * cell, 1.0 / m);
    out.l1gamma = cell * row_reduce(n, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t node = i * n + j;
            acc += std::pow(1.0 + g.x_at(node).norm(), gamma) * data.row(static_cast<Eigen::Index>(node)).norm();
        }
        return acc;
    });
    out.integral = Eigen::VectorXcd::Zero(data.cols());
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        const double re = row_reduce(n, [&](std::size_t i) {
            return data.col(c).segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n)).real().sum();
        });
        const double im = row_reduce(n, [&](std::size_t i) {
            return data.col(c).segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n)).imag().sum();
        });
        out.integral(c) = cd(re, im) * cell;
    }
    return out;
}

std::string to_string(DataKind kind)
{
    switch (kind) {
    case DataKind::Gaussian: return "gaussian";
    case DataKind::GaussianDerivative: return "gaussian-derivative";
    case DataKind::Ring: return "ring";
    }
    return "gaussian";
}

std::string to_string(DataTarget target)
{
    switch (target) {
    case DataTarget::U0: return "u0";
    case DataTarget::U1: return "u1";
    case DataTarget::FirstOrder: return "U0";
    }
    return "u1";
}

DataKind parse_data_kind(const std::string& name)
{
    if (name == "gaussian") return DataKind::Gaussian;
    if (name == "gaussian-derivative") return DataKind::GaussianDerivative;
    if (name == "ring") return DataKind::Ring;
    throw ValidationError("data.kind must be one of gaussian, gaussian-derivative, ring (got '" + name + "')");
}

DataTarget parse_data_target(const std::string& name)
{
    if (name == "u0") return DataTarget::U0;
    if (name == "u1") return DataTarget::U1;
    if (name == "U0") return DataTarget::FirstOrder;
    throw ValidationError("data.target must be one of u0, u1, U0 (got '" + name + "')");
}

void InitialDataSpec::validate() const
{
    if (!(width > 0.0) || !std::isfinite(width)) throw ValidationError("data: width must be positive");
    if (!std::isfinite(amplitude)) throw ValidationError("data: amplitude must be finite");
    if (!direction.allFinite()) throw ValidationError("data: direction must be finite");
    const double used = target == DataTarget::FirstOrder ? direction.norm() : direction.head<2>().norm();
    if (!(used > 0.0)) throw ValidationError("data: direction must be nonzero");
}

std::complex<double> profile_transform(const InitialDataSpec& spec, const Eigen::Vector2d& xi)
{
    const double w = spec.width;
    const double r2 = xi.squaredNorm();
    switch (spec.kind) {
    case DataKind::Gaussian:
        return spec.amplitude * kTwoPi * w * w * std::exp(-0.5 * w * w * r2);
    case DataKind::GaussianDerivative:
        return cd(0.0, xi(0)) * (spec.amplitude * kTwoPi * w * w * std::exp(-0.5 * w * w * r2));
    case DataKind::Ring: {
        const double s = w * std::sqrt(r2) - 2.0;
        if (std::abs(s) >= 1.0) return 0.0;
        return spec.amplitude * std::exp(-1.0 / (1.0 - s * s));
    }
    }
    return 0.0;
}

namespace {

double physical_profile(const InitialDataSpec& spec, const Eigen::Vector2d& x)
{
    const double w = spec.width;
    const double g = spec.amplitude * std::exp(-0.5 * x.squaredNorm() / (w * w));
    if (spec.kind == DataKind::GaussianDerivative) return -x(0) / (w * w) * g;
    return g;
}

void check_resolution(const InitialDataSpec& spec, const GridSpec& grid)
{
    const double w = spec.width;
    const double nyquist = std::numbers::pi * static_cast<double>(grid.n) / grid.L;
    if (spec.kind == DataKind::Ring) {
        if (!(3.0 / w < nyquist))
            throw ValidationError("data: ring annulus exceeds the lattice Nyquist frequency (width too small)");
        if (!(2.0 / w >= 4.0 * grid.dxi()))
            throw ValidationError("data: ring annulus spans fewer than 4 lattice frequencies (width too large)");
        return;
    }
    // Relative size of the spectrum at the Nyquist frequency and of the profile at the box edge.
    const double spectral_tail = std::exp(-0.5 * w * w * nyquist * nyquist);
    const double half_box = grid.L / 2.0;
    const double physical_tail = std::exp(-0.5 * half_box * half_box / (w * w));
    const double slack = spec.kind == DataKind::GaussianDerivative ? std::max(1.0, nyquist * w) : 1.0;
    if (!(spectral_tail * slack <= 1e-12))
        throw ValidationError("data: width too small for the grid (spectrum not resolved at the Nyquist frequency)");
    if (!(physical_tail * std::max(1.0, half_box / w) <= 1e-12))
        throw ValidationError("data: width too large for the box (profile does not decay before the box edge)");
}

}  // namespace

InitialData make_initial_data(const InitialDataSpec& spec, const GridSpec& grid)
{
    spec.validate();
    grid.validate();
    check_resolution(spec, grid);

    const auto nodes = static_cast<Eigen::Index>(grid.nodes());
    Eigen::VectorXcd scalar(nodes);
    if (spec.kind == DataKind::Ring) {
        // Only the spectrum is closed-form; the physical field is its lattice inverse.
        Eigen::MatrixXcd spectrum(nodes, 2);
        for (Eigen::Index k = 0; k < nodes; ++k) {
            spectrum(k, 0) = profile_transform(spec, grid.xi_at(static_cast<std::size_t>(k)));
            spectrum(k, 1) = 0.0;
        }
        scalar = lattice_transform(spectrum, grid, Direction::Inverse).col(0);
    } else {
        for (Eigen::Index k = 0; k < nodes; ++k) scalar(k) = physical_profile(spec, grid.x_at(static_cast<std::size_t>(k)));
    }

    const InitialDataSpec captured = spec;
    auto vector_field = [&](const Eigen::VectorXd& dir) {
        Eigen::MatrixXcd data(nodes, dir.size());
        for (Eigen::Index c = 0; c < dir.size(); ++c) data.col(c) = scalar * dir(c);
        SpectralProfile profile = [captured, dir](const Eigen::Vector2d& xi) -> Eigen::VectorXcd {
            return profile_transform(captured, xi) * dir.cast<cd>();
        };
        return FourierField(grid, Domain::Physical, std::move(data), std::move(profile));
    };

    const Eigen::VectorXd u_dir = spec.direction.head<2>();
    const FourierField zero = FourierField::zeros(grid, Domain::Physical, 2);
    switch (spec.target) {
    case DataTarget::U0:
        return {spec, vector_field(u_dir), zero, std::nullopt};
    case DataTarget::U1:
        return {spec, zero, vector_field(u_dir), std::nullopt};
    case DataTarget::FirstOrder:
        return {spec, zero, zero, vector_field(spec.direction)};
    }
    return {spec, zero, zero, std::nullopt};
}

MomentBound moment_bound_check(const FourierField& f, double gamma)
{
    if (f.domain() != Domain::Physical) throw ValidationError("moment_bound_check: field must be physical");
    const PhysicalNorms norms = physical_norms(f, 1.0, gamma);
    MomentBound out;
    if (norms.l1gamma == 0.0) {
        out.holds = true;
        return out;
    }
    const double mean = norms.integral.norm();
    const Eigen::MatrixXcd spectrum = lattice_transform(f.data(), f.grid(), Direction::Forward);
    const GridSpec& g = f.grid();
    double worst = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        if (k == g.origin()) continue;
        const double r = g.xi_at(k).norm();
        const double excess = spectrum.row(static_cast<Eigen::Index>(k)).norm() - mean;
        worst = std::max(worst, excess / (std::pow(r, gamma) * norms.l1gamma));
    }
    out.C_gamma = worst;
    out.holds = std::isfinite(worst);
    return out;
}

namespace {

constexpr char kMagic[4] = {'D', 'D', 'W', 'F'};
constexpr std::uint32_t kSnapshotVersion = 1;

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in)
{
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw ValidationError("snapshot: truncated input");
    return value;
}

}  // namespace

void write_snapshot(const FourierField& field, std::ostream& out)
{
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kSnapshotVersion);
    put<std::uint64_t>(out, field.grid().n);
    put<double>(out, field.grid().L);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.components()));
    put<std::uint32_t>(out, field.domain() == Domain::Physical ? 0u : 1u);
    const auto& data = field.data();
    for (Eigen::Index k = 0; k < data.rows(); ++k) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            put<double>(out, data(k, c).real());
            put<double>(out, data(k, c).imag());
        }
    }
}

void write_snapshot(const FourierField& field, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("snapshot: cannot open '" + path + "' for writing");
    write_snapshot(field, out);
}

FourierField read_snapshot(std::istream& in)
{
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("snapshot: bad magic");
    if (get<std::uint32_t>(in) != kSnapshotVersion) throw ValidationError("snapshot: unsupported version");
    GridSpec grid;
    grid.n = static_cast<std::size_t>(get<std::uint64_t>(in));
    grid.L = get<double>(in);
    grid.validate();
    const auto components = static_cast<Eigen::Index>(get<std::uint32_t>(in));
    if (components != 2 && components != 4) throw ValidationError("snapshot: component count must be 2 or 4");
    const std::uint32_t domain = get<std::uint32_t>(in);
    if (domain > 1) throw ValidationError("snapshot: unknown domain tag");
    Eigen::MatrixXcd data(static_cast<Eigen::Index>(grid.nodes()), components);
    for (Eigen::Index k = 0; k < data.rows(); ++k) {
        for (Eigen::Index c = 0; c < components; ++c) {
            const double re = get<double>(in);
            const double im = get<double>(in);
            data(k, c) = cd(re, im);
        }
    }
    return FourierField(grid, domain == 0 ? Domain::Physical : Domain::Spectral, std::move(data));
}

FourierField read_snapshot(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("snapshot: cannot open '" + path + "'");
    return read_snapshot(in);
}

void write_field_csv(const FourierField& field, std::ostream& out)
{
    const GridSpec& g = field.grid();
    if (g.n > kCsvMaxGrid) throw ValidationError("field csv: grid too large (n > 64); use the binary snapshot");
    const bool physical = field.domain() == Domain::Physical;
    out << "i,j," << (physical ? "x1,x2" : "xi1,xi2");
    for (int c = 0; c < field.components(); ++c) out << ",re_c" << c << ",im_c" << c;
    out << "\r\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        const Eigen::Vector2d pos = physical ? g.x_at(k) : g.xi_at(k);
        out << k / g.n << ',' << k % g.n << ',' << pos(0) << ',' << pos(1);
        for (int c = 0; c < field.components(); ++c) {
            const cd v = field.data()(static_cast<Eigen::Index>(k), c);
            out << ',' << v.real() << ',' << v.imag();
        }
        out << "\r\n";
    }
}

}  // namespace ddw
