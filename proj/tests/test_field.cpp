#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ddwave/field.hpp"
#include "test_support.hpp"

using namespace ddw;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

FourierField random_physical(const GridSpec& g, int components, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    Eigen::MatrixXcd data(static_cast<Eigen::Index>(g.nodes()), components);
    for (Eigen::Index k = 0; k < data.size(); ++k) data.data()[k] = cd(n01(rng), n01(rng));
    return FourierField(g, Domain::Physical, data);
}

FourierField gaussian_physical(const GridSpec& g)
{
    Eigen::MatrixXcd data(static_cast<Eigen::Index>(g.nodes()), 2);
    for (std::size_t node = 0; node < g.nodes(); ++node) {
        const double v = std::exp(-g.x_at(node).squaredNorm() / 2);
        data(static_cast<Eigen::Index>(node), 0) = v;
        data(static_cast<Eigen::Index>(node), 1) = v;
    }
    return FourierField(g, Domain::Physical, data);
}

}  // namespace

TEST(Grid, Validation)
{
    EXPECT_NO_THROW(GridSpec{}.validate());
    EXPECT_THROW((GridSpec{100, 10}.validate()), ValidationError);
    EXPECT_THROW((GridSpec{4, 10}.validate()), ValidationError);
    EXPECT_THROW((GridSpec{64, 0}.validate()), ValidationError);
    const GridSpec g{64, 2 * kPi};
    EXPECT_DOUBLE_EQ(g.dxi(), 1.0);
    EXPECT_EQ(g.xi_at(g.origin()), Eigen::Vector2d::Zero());
}

TEST(Field, RejectsMalformedData)
{
    const GridSpec g{16, 4};
    EXPECT_THROW(FourierField(g, Domain::Physical, Eigen::MatrixXcd::Zero(10, 2)), ValidationError);
    EXPECT_THROW(FourierField(g, Domain::Physical, Eigen::MatrixXcd::Zero(256, 3)), ValidationError);
    const SpectralProfile wrong = [](const Eigen::Vector2d&) { return Eigen::VectorXcd::Ones(2); };
    EXPECT_THROW(FourierField(g, Domain::Spectral, Eigen::MatrixXcd::Zero(256, 2), wrong), ValidationError);
}

TEST(Field, TransformRoundTrip)
{
    const GridSpec g{32, 12};
    const auto f = random_physical(g, 4, test::kSeed);
    const auto back = transform(transform(f, Direction::Forward), Direction::Inverse);
    EXPECT_EQ(back.domain(), Domain::Physical);
    EXPECT_LT((back.data() - f.data()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Field, GaussianTransformMatchesClosedForm)
{
    const GridSpec g{256, 40};
    const auto spec = transform(gaussian_physical(g), Direction::Forward);
    double worst = 0.0;
    for (std::size_t node = 0; node < g.nodes(); ++node) {
        const double expected = 2 * kPi * std::exp(-g.xi_at(node).squaredNorm() / 2);
        worst = std::max(worst, std::abs(spec.data()(static_cast<Eigen::Index>(node), 0) - expected));
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(Field, ConstantFieldHasOnlyTheZeroMode)
{
    const GridSpec g{32, 10};
    const FourierField c(g, Domain::Physical, Eigen::MatrixXcd::Constant(static_cast<Eigen::Index>(g.nodes()), 2, 3.0));
    const auto spec = transform(c, Direction::Forward);
    const auto origin = static_cast<Eigen::Index>(g.origin());
    for (Eigen::Index node = 0; node < spec.data().rows(); ++node) {
        if (node == origin) {
            EXPECT_NEAR(std::abs(spec.data()(node, 0)), 3.0 * g.L * g.L, 1e-9);
        } else {
            EXPECT_LT(spec.data().row(node).norm(), 1e-10);
        }
    }
}

TEST(Field, SobolevNormOfGaussian)
{
    const GridSpec g{256, 40};
    Eigen::MatrixXcd one(static_cast<Eigen::Index>(g.nodes()), 2);
    one.col(0) = gaussian_physical(g).data().col(0);
    one.col(1).setZero();
    const FourierField phys(g, Domain::Physical, one);
    const auto spec = transform(phys, Direction::Forward);
    EXPECT_NEAR(sobolev_norm(spec, 0.0), std::sqrt(kPi), 1e-8);
    EXPECT_NEAR(sobolev_norm(spec, 0.0), physical_norms(phys, 2.0, 1.0).lm, 1e-8);
    EXPECT_THROW(sobolev_norm(phys, 0.0), ValidationError);
}

TEST(Field, SobolevNormOfPureMode)
{
    const GridSpec g{64, 2 * kPi};
    auto data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(g.nodes()), 2).eval();
    const std::size_t node = (g.n / 2 + 2) * g.n + g.n / 2;
    ASSERT_NEAR(g.xi_at(node).norm(), 2.0, 1e-14);
    data(static_cast<Eigen::Index>(node), 0) = 2 * kPi / g.dxi();
    const FourierField mode(g, Domain::Spectral, data);
    EXPECT_NEAR(sobolev_norm(mode, 0.0), 1.0, 1e-14);
    EXPECT_NEAR(sobolev_norm(mode, 1.0), 2.0, 1e-14);
}

TEST(Field, PhysicalNormsOfGaussians)
{
    const GridSpec g{256, 40};
    const auto n = physical_norms(gaussian_physical(g), 1.0, 1.0);
    EXPECT_NEAR(n.integral(0).real(), 2 * kPi, 1e-9);
    EXPECT_NEAR(n.integral(1).real(), 2 * kPi, 1e-9);

    InitialDataSpec deriv;
    deriv.kind = DataKind::GaussianDerivative;
    const auto data = make_initial_data(deriv, g);
    const auto dn = physical_norms(data.u1, 1.0, 1.0);
    EXPECT_LT(dn.integral.norm(), 1e-12);
    EXPECT_TRUE(std::isfinite(dn.l1gamma));
    EXPECT_GT(dn.l1gamma, 0.0);
}

TEST(Field, InitialDataKinds)
{
    const GridSpec g{256, 40};
    const auto gauss = make_initial_data(InitialDataSpec{}, g);
    EXPECT_NEAR(physical_norms(gauss.u1, 1.0, 1.0).integral(0).real(), 2 * kPi, 1e-9);
    EXPECT_LT(gauss.u0.data().norm(), 1e-300);
    EXPECT_FALSE(gauss.U0.has_value());
    EXPECT_TRUE(transform(gauss.u1, Direction::Forward).has_profile());

    InitialDataSpec ring;
    ring.kind = DataKind::Ring;
    ring.width = 1.0;
    const auto rd = make_initial_data(ring, g);
    const auto spec = transform(rd.u1, Direction::Forward);
    for (std::size_t node = 0; node < g.nodes(); ++node) {
        const double r = g.xi_at(node).norm();
        if (r <= 1.0 || r >= 3.0) {
            EXPECT_LT(spec.data().row(static_cast<Eigen::Index>(node)).norm(), 1e-10);
        }
    }

    InitialDataSpec first;
    first.target = DataTarget::FirstOrder;
    EXPECT_TRUE(make_initial_data(first, g).U0.has_value());
}

TEST(Field, UnresolvedDataIsRejected)
{
    InitialDataSpec narrow;
    narrow.width = 0.05;
    EXPECT_THROW(make_initial_data(narrow, GridSpec{64, 40}), ValidationError);
    InitialDataSpec wide;
    wide.width = 20;
    EXPECT_THROW(make_initial_data(wide, GridSpec{64, 40}), ValidationError);
    InitialDataSpec bad;
    bad.width = -1;
    EXPECT_THROW(bad.validate(), ValidationError);
    EXPECT_THROW(parse_data_kind("square"), ValidationError);
}

TEST(Field, MomentBound)
{
    const GridSpec g{256, 40};
    for (DataKind kind : {DataKind::Gaussian, DataKind::GaussianDerivative, DataKind::Ring}) {
        InitialDataSpec spec;
        spec.kind = kind;
        const auto data = make_initial_data(spec, g);
        const auto mb = moment_bound_check(data.u1, 1.0);
        EXPECT_TRUE(mb.holds) << to_string(kind);
        EXPECT_TRUE(std::isfinite(mb.C_gamma));
    }
    const auto zero = FourierField::zeros(g, Domain::Physical, 2);
    EXPECT_EQ(moment_bound_check(zero, 1.0).C_gamma, 0.0);
}

TEST(Field, SnapshotRoundTrip)
{
    const GridSpec g{16, 5};
    const auto f = random_physical(g, 4, 7);
    std::stringstream buf;
    write_snapshot(f, buf);
    const std::string bytes = buf.str();
    const auto back = read_snapshot(buf);
    EXPECT_EQ(back.grid().n, g.n);
    EXPECT_EQ(back.grid().L, g.L);
    EXPECT_EQ(back.domain(), Domain::Physical);
    EXPECT_EQ(back.data(), f.data());

    std::stringstream again;
    write_snapshot(back, again);
    EXPECT_EQ(again.str(), bytes);

    std::stringstream bad("XXXX0000");
    EXPECT_THROW(read_snapshot(bad), ValidationError);
}

TEST(Field, CsvExport)
{
    std::ostringstream small;
    write_field_csv(random_physical(GridSpec{8, 2}, 2, 1), small);
    EXPECT_EQ(small.str().substr(0, 2), "i,");
    std::ostringstream big;
    EXPECT_THROW(write_field_csv(FourierField::zeros(GridSpec{128, 2}, Domain::Physical, 2), big), ValidationError);
}
