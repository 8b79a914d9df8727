#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "ddwave/symbol.hpp"
#include "test_support.hpp"

using namespace ddw;
using cd = std::complex<double>;

TEST(Params, RegimeClassification)
{
    EXPECT_EQ(validate_params(1, 2, 0.25, 0.75).regime, Regime::Equal);
    EXPECT_EQ(validate_params(1, 2, 0.2, 0.7).regime, Regime::Below);
    EXPECT_EQ(validate_params(1, 2, 0.3, 0.9).regime, Regime::Above);
    EXPECT_EQ(to_string(Regime::Equal), "equal");
}

TEST(Params, RejectsOutOfRangeValues)
{
    try {
        validate_params(2, 1, 0.25, 0.75);
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("b must exceed a"), std::string::npos);
    }
    EXPECT_THROW(validate_params(0, 1, 0.25, 0.75), ValidationError);
    EXPECT_THROW(validate_params(1, 2, 0.5, 0.75), ValidationError);
    EXPECT_THROW(validate_params(1, 2, -0.1, 0.75), ValidationError);
    EXPECT_THROW(validate_params(1, 2, 0.25, 0.5), ValidationError);
    EXPECT_THROW(validate_params(1, 2, 0.25, 1.01), ValidationError);
    EXPECT_THROW(validate_params(1, NAN, 0.25, 0.75), ValidationError);
    EXPECT_NO_THROW(validate_params(1, 2, 0.0, 1.0));
}

TEST(Symbol, DissipationSigma)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    EXPECT_DOUBLE_EQ(dissipation_sigma(p, 1.0), 2.0);
    EXPECT_NEAR(dissipation_sigma(p, 0.01), 0.101, 1e-15);
    EXPECT_DOUBLE_EQ(dissipation_sigma(validate_params(1, 2, 0, 1), 0.0), 1.0);
}

TEST(Symbol, StiffnessAndRotation)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto axis = stiffness_and_rotation(p, Eigen::Vector2d(1, 0));
    EXPECT_TRUE(axis.A.isApprox(Eigen::Vector2d(4, 1).asDiagonal().toDenseMatrix(), 1e-14));
    Eigen::Matrix2d m_expected;
    m_expected << 1, 0, 0, -1;
    EXPECT_TRUE(axis.M.isApprox(m_expected, 1e-14));

    const double h = 1.0 / std::sqrt(2.0);
    const auto diag = stiffness_and_rotation(p, Eigen::Vector2d(h, h));
    Eigen::Matrix2d a_expected;
    a_expected << 2.5, 1.5, 1.5, 2.5;
    EXPECT_TRUE(diag.A.isApprox(a_expected, 1e-14));

    std::mt19937_64 rng(test::kSeed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 100; ++k) {
        const double phi = angle(rng);
        const auto sr = stiffness_and_rotation(p, Eigen::Vector2d(std::cos(phi), std::sin(phi)));
        EXPECT_LT((sr.M * sr.M - Eigen::Matrix2d::Identity()).norm(), 1e-14);
        EXPECT_LT((sr.M * sr.A * sr.M - Eigen::Vector2d(4, 1).asDiagonal().toDenseMatrix()).norm(), 1e-13);
    }
}

TEST(Symbol, AssembledMatrices)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    EXPECT_EQ(assemble_symbol(p, 0.0).full.norm(), 0.0);

    const auto s1 = assemble_symbol(p, 1.0);
    Eigen::Matrix2cd expected;
    expected << cd(1, -2), 1, 1, cd(1, 2);
    EXPECT_LT((s1.block_b - expected).norm(), 1e-15);

    const auto q = validate_params(1, 2, 0, 1);
    const auto s0 = assemble_symbol(q, 0.0);
    const auto sm = structure_matrices(q, 0.0);
    EXPECT_LT((s0.full - 0.5 * sm.B0.cast<cd>()).norm(), 1e-15);
}

TEST(Symbol, FullMatrixMatchesStructureMatrices)
{
    test::for_random_params([](const ModelParams& p, double r) {
        const auto s = assemble_symbol(p, r);
        const auto sm = structure_matrices(p, r);
        const Eigen::Matrix4cd rebuilt = (s.sigma / 2) * sm.B0.cast<cd>() + cd(0, r) * sm.B1.cast<cd>();
        EXPECT_LT((s.full - rebuilt).norm(), 1e-13 * (1 + s.full.norm()));
    });
}

TEST(Symbol, StructureMatrixEntries)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto sm = structure_matrices(p, 1.0);
    EXPECT_EQ(sm.T1.row(0), Eigen::RowVector4d(-1, 0, 1, 0));
    EXPECT_EQ(sm.N2(0, 2), cd(0, 2));
    EXPECT_EQ(sm.M2.diagonal(), Eigen::Vector4d(0, 0, 1, 1));
    EXPECT_TRUE((sm.T1 * sm.T1_inverse).isIdentity(1e-15));
}

TEST(Symbol, ExactEigenvalueExamples)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto q1 = exact_eigenvalues(p, 1.0);
    EXPECT_LT(std::abs(q1[0] - cd(1, -std::sqrt(3.0))), 1e-14);
    EXPECT_LT(std::abs(q1[2] - cd(1, std::sqrt(3.0))), 1e-14);
    EXPECT_LT(std::abs(q1[1] - 1.0), 1e-14);
    EXPECT_LT(std::abs(q1[3] - 1.0), 1e-14);

    const auto q = exact_eigenvalues(p, 0.01);
    EXPECT_NEAR(q[0].real(), 0.004129, 5e-7);
    EXPECT_EQ(q[0].imag(), 0.0);
}

TEST(Symbol, VietaRelationsOnRandomDraws)
{
    test::for_random_params([](const ModelParams& p, double r) {
        const auto q = exact_eigenvalues(p, r);
        const double sigma = dissipation_sigma(p, r);
        cd sum = 0, prod = 1;
        for (int j = 0; j < 4; ++j) {
            sum += q[j];
            prod *= q[j];
        }
        const double expected_prod = p.a * p.a * p.b * p.b * std::pow(r, 4);
        EXPECT_LT(std::abs(sum - 2 * sigma), 1e-12 * (1 + 2 * sigma));
        EXPECT_LT(std::abs(prod - expected_prod), 1e-10 * expected_prod + 1e-300);
    });
}

TEST(Symbol, ExactEigenvaluesMatchDenseSolver)
{
    test::for_random_params([](const ModelParams& p, double r) {
        const auto q = exact_eigenvalues(p, r);
        const Eigen::Matrix4cd full = assemble_symbol(p, r).full;
        const Eigen::Vector4cd dense = Eigen::ComplexEigenSolver<Eigen::Matrix4cd>(full).eigenvalues();
        const double scale = std::max(1.0, dense.cwiseAbs().maxCoeff());
        for (int j = 0; j < 4; ++j) {
            double nearest = INFINITY;
            for (int k = 0; k < 4; ++k) nearest = std::min(nearest, std::abs(q[j] - dense(k)));
            EXPECT_LT(nearest, 1e-10 * scale) << "r=" << r << " branch " << branch_label(j);
        }
    });
}

TEST(Symbol, PrincipalEigenvalueExamples)
{
    const auto p = validate_params(1, 2, 0.25, 0.75);
    const auto small = principal_eigenvalues(p, 0.01, FrequencyRegime::Small);
    EXPECT_NEAR(small[0].real(), 0.004, 1e-15);
    EXPECT_NEAR(small[1].real(), 0.001, 1e-15);
    EXPECT_NEAR(small[2].real(), 0.097, 1e-15);
    // a = 1 removes the correction term of the a-branch: r^{1/2} + (1 - a^2) r^{3/2} = 0.1.
    EXPECT_NEAR(small[3].real(), 0.1, 1e-15);

    const auto large = principal_eigenvalues(p, 100.0, FrequencyRegime::Large);
    EXPECT_NEAR(large[0].real(), 40.0, 1e-12);

    const auto below = validate_params(1, 2, 0.2, 0.7);
    const auto pb = principal_eigenvalues(below, 0.01, FrequencyRegime::Small);
    EXPECT_NEAR(pb[2].real(), std::pow(0.01, 0.4) + std::pow(0.01, 1.4) - 4 * std::pow(0.01, 1.6), 1e-15);
}

TEST(Symbol, PredictedRemainderExponents)
{
    EXPECT_NEAR(predicted_remainder_exponent(validate_params(1, 2, 0.2, 0.7), FrequencyRegime::Small), 2.0, 1e-14);
    EXPECT_NEAR(predicted_remainder_exponent(validate_params(1, 2, 0.25, 0.75), FrequencyRegime::Small), 2.0, 1e-14);
    EXPECT_NEAR(predicted_remainder_exponent(validate_params(1, 2, 0.3, 0.9), FrequencyRegime::Large), -0.2, 1e-14);
}

TEST(Symbol, PrincipalSlowBranchesAreAsymptotic)
{
    test::for_random_params([](const ModelParams& p, double) {
        for (double r : {1e-6, 1e-7}) {
            const auto exact = exact_eigenvalues(p, r);
            const auto principal = principal_eigenvalues(p, r, FrequencyRegime::Small);
            // Relative corrections come from the partner dissipation and from k^2 r^2 / sigma^2.
            const double tol = 4 * p.b * p.b * (std::pow(r, 2 * (p.theta - p.rho)) + std::pow(r, 2 - 4 * p.rho));
            EXPECT_NEAR(exact[0].real() / principal[0].real(), 1.0, tol);
            EXPECT_NEAR(exact[1].real() / principal[1].real(), 1.0, tol);
        }
    });
}
