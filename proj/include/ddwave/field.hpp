#pragma once

// Periodic Fourier lattice on a square box, with the convention
//   f_hat(xi) = int exp(-i x.xi) f(x) dx,   f(x) = (2 pi)^{-2} int exp(i x.xi) f_hat(xi) dxi.
//
// Storage: node = i * n + j (row-major), i along the first axis. Physical
// nodes sit at x = (i - n/2, j - n/2) dx, spectral nodes at xi = 2 pi (i - n/2, j - n/2) / L.

#include <cstddef>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ddwave/params.hpp"

namespace ddw {

struct GridSpec {
    std::size_t n = 512;
    double L = 200.0;

    /// Throws ValidationError unless n >= 8 is a power of two and L > 0.
    void validate() const;

    double dx() const { return L / static_cast<double>(n); }
    double dxi() const { return 2.0 * std::numbers::pi / L; }
    std::size_t nodes() const { return n * n; }
    /// Signed lattice index i - n/2.
    double offset(std::size_t i) const { return static_cast<double>(i) - static_cast<double>(n / 2); }
    double x(std::size_t i) const { return offset(i) * dx(); }
    double xi(std::size_t i) const { return offset(i) * dxi(); }
    Eigen::Vector2d x_at(std::size_t node) const { return {x(node / n), x(node % n)}; }
    Eigen::Vector2d xi_at(std::size_t node) const { return {xi(node / n), xi(node % n)}; }
    /// Index of the zero frequency (and of the physical origin).
    std::size_t origin() const { return (n / 2) * n + n / 2; }
};

enum class Domain { Physical, Spectral };

/// Closed-form spectrum: xi -> one complex value per component.
using SpectralProfile = std::function<Eigen::VectorXcd(const Eigen::Vector2d&)>;

/// Relative tolerance (to the peak spectral magnitude) for attached profiles.
inline constexpr double kProfileTolerance = 1e-10;

class FourierField {
public:
    /// Throws ValidationError on a dimension mismatch, on a component count other
    /// than 2 or 4, or when an attached profile disagrees with the lattice spectrum.
    FourierField(GridSpec grid, Domain domain, Eigen::MatrixXcd data, SpectralProfile profile = {});

    static FourierField zeros(GridSpec grid, Domain domain, int components);

    const GridSpec& grid() const { return grid_; }
    Domain domain() const { return domain_; }
    int components() const { return static_cast<int>(data_.cols()); }
    const Eigen::MatrixXcd& data() const { return data_; }
    bool has_profile() const { return static_cast<bool>(profile_); }
    const SpectralProfile& profile() const { return profile_; }

    /// Largest deviation between the profile and the lattice spectrum, relative to the peak.
    double profile_mismatch() const;

private:
    GridSpec grid_;
    Domain domain_;
    Eigen::MatrixXcd data_;
    SpectralProfile profile_;
};

enum class Direction { Forward, Inverse };

/// Forward maps a physical field to its spectrum, Inverse the reverse. The
/// closed-form profile travels with the field.
FourierField transform(const FourierField& field, Direction direction);

/// Nodewise spectral multiplier of the zone cutoffs.
using RadialWeight = std::function<double(double)>;

/// ((2 pi)^{-2} sum |xi|^{2s} w(|xi|)^2 |data|^2 dxi^2)^{1/2}. The zero node
/// contributes nothing when s > 0. Throws ValidationError on a physical field.
double sobolev_norm(const FourierField& field, double s, const RadialWeight& weight = {});

struct PhysicalNorms {
    double lm = 0.0;
    double l1gamma = 0.0;
    Eigen::VectorXcd integral;
};

/// Lattice quadrature of ||f||_{L^m}, int (1 + |x|)^gamma |f| dx and int f dx,
/// with |f| the Euclidean norm over components.
PhysicalNorms physical_norms(const FourierField& field, double m, double gamma);

enum class DataKind { Gaussian, GaussianDerivative, Ring };
enum class DataTarget { U0, U1, FirstOrder };

std::string to_string(DataKind kind);
std::string to_string(DataTarget target);
DataKind parse_data_kind(const std::string& name);
DataTarget parse_data_target(const std::string& name);

struct InitialDataSpec {
    DataKind kind = DataKind::Gaussian;
    double width = 1.0;
    double amplitude = 1.0;
    /// u0 / u1 fill one displacement slot; "U0" prescribes the first-order unknown directly.
    DataTarget target = DataTarget::U1;
    /// Vector carried by the scalar profile; u targets use the first two entries.
    Eigen::Vector4d direction = Eigen::Vector4d(1.0, 1.0, 0.0, 0.0);

    void validate() const;
};

/// Scalar closed-form transform of the profile shape:
///   gaussian             A 2 pi w^2 exp(-w^2 |xi|^2 / 2)
///   gaussian-derivative  i xi_1 times the gaussian transform
///   ring                 A exp(-1 / (1 - s^2)), s = w |xi| - 2, on 1/w < |xi| < 3/w
std::complex<double> profile_transform(const InitialDataSpec& spec, const Eigen::Vector2d& xi);

struct InitialData {
    InitialDataSpec spec;
    FourierField u0;
    FourierField u1;
    /// Present only for the first-order target.
    std::optional<FourierField> U0;
};

/// Physical fields with their closed-form spectra attached. Throws
/// ValidationError when the grid cannot represent the profile: the spectrum
/// must fall below 1e-12 of its peak at the Nyquist frequency, the physical
/// profile below 1e-12 at the box edge, and a ring must fit strictly inside
/// the frequency lattice.
InitialData make_initial_data(const InitialDataSpec& spec, const GridSpec& grid);

struct MomentBound {
    double C_gamma = 0.0;
    bool holds = false;
};

/// max over nonzero lattice xi of (|f_hat| - |int f|) / (|xi|^gamma ||f||_{L^{1,gamma}}), clamped at 0.
MomentBound moment_bound_check(const FourierField& f, double gamma);

// Snapshot I/O: "DDWF", uint32 version, uint64 n, float64 L, uint32 components,
// uint32 domain, then little-endian float64 (re, im) pairs, node-major.
void write_snapshot(const FourierField& field, std::ostream& out);
void write_snapshot(const FourierField& field, const std::string& path);
FourierField read_snapshot(std::istream& in);
FourierField read_snapshot(const std::string& path);

inline constexpr std::size_t kCsvMaxGrid = 64;

/// One row per node: i, j, coordinates, then (re, im) per component. Grids above 64 are rejected.
void write_field_csv(const FourierField& field, std::ostream& out);

}  // namespace ddw
