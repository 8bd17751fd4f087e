#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qfa/linalg.hpp"
#include "qfa/random.hpp"

using namespace qfa;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a.data()[i] = complex(g(rng), g(rng));
    return a + a.adjoint();
}

} // namespace

TEST(Linalg, UnitaryChecks)
{
    EXPECT_TRUE(validate_unitary(ComplexMatrix::Identity(3, 3), 1e-10));

    const double h = std::sqrt(2.0) / 2;
    ComplexMatrix rot(2, 2);
    rot << h, -h, h, h;
    EXPECT_TRUE(validate_unitary(rot, 1e-10));

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 2;
    EXPECT_FALSE(validate_unitary(d, 1e-10));

    EXPECT_THROW(validate_unitary(ComplexMatrix::Zero(2, 3)), dimension_error);
}

TEST(Linalg, ProjectorFamilies)
{
    EXPECT_TRUE(validate_projector_family(ProjectorFamily::identity(2)));
    const ProjectorFamily coords{{basis_projector(0, 2), basis_projector(1, 2)}, {}};
    EXPECT_TRUE(validate_projector_family(coords));
    const ProjectorFamily doubled{{basis_projector(0, 2), basis_projector(0, 2)}, {}};
    EXPECT_FALSE(validate_projector_family(doubled));

    const ProjectorFamily mismatched{{basis_projector(0, 2), basis_projector(0, 3)}, {}};
    EXPECT_THROW(validate_projector_family(mismatched), dimension_error);

    const auto problems = projector_family_problems(ProjectorFamily{{basis_projector(0, 2)}, {}});
    ASSERT_EQ(problems.size(), 1u);
    EXPECT_EQ(problems[0], "projectors do not sum to identity");
}

TEST(Linalg, RankOneFamiliesFromRandomVectors)
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 4;
        ComplexVector psi(n);
        for (auto& z : psi)
            z = complex(g(rng), g(rng));
        psi.normalize();
        const ComplexMatrix p = psi * psi.adjoint();
        const ProjectorFamily f{{p, ComplexMatrix::Identity(n, n) - p}, {}};
        EXPECT_TRUE(validate_projector_family(f, 1e-10));
    }
}

TEST(Linalg, BasisDimensionOne)
{
    const auto b = hermitian_basis(1);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0](0, 0), complex(1.0, 0.0));
    EXPECT_THROW(hermitian_basis(0), domain_error);
}

TEST(Linalg, BasisDimensionTwoIsScaledPaulis)
{
    const auto b = hermitian_basis(2);
    ASSERT_EQ(b.size(), 4u);
    const double r = 1 / std::sqrt(2.0);
    ComplexMatrix i2 = ComplexMatrix::Identity(2, 2), x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, complex(0, -1), complex(0, 1), 0;
    z << 1, 0, 0, -1;
    const ComplexMatrix expected[] = {r * i2, r * x, r * y, r * z};
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_LE(max_abs(b[k] - expected[k]), 1e-15) << k;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_NEAR(std::abs((b[i].adjoint() * b[j]).trace()), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(Linalg, GramMatrixIsIdentityUpToEight)
{
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto b = hermitian_basis(n);
        ASSERT_EQ(b.size(), n * n);
        for (std::size_t i = 0; i < b.size(); ++i) {
            EXPECT_TRUE(is_hermitian(b[i], 1e-15));
            for (std::size_t j = 0; j < b.size(); ++j) {
                const complex ip = (b[i].adjoint() * b[j]).trace();
                EXPECT_LE(std::abs(ip - complex(i == j ? 1.0 : 0.0)), 1e-12) << n << " " << i << " " << j;
            }
        }
    }
}

TEST(Linalg, VectorizeExamples)
{
    const auto b = hermitian_basis(2);
    const RealVector v = vectorize(ComplexMatrix::Identity(2, 2) / 2.0, b);
    EXPECT_NEAR(v(0), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(v.tail(3).cwiseAbs().maxCoeff(), 0.0, 1e-15);

    EXPECT_EQ(vectorize(ComplexMatrix::Zero(2, 2), b), RealVector::Zero(4));

    ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    EXPECT_THROW(vectorize(skew, b), validation_error);
    EXPECT_THROW(vectorize(ComplexMatrix::Identity(3, 3), b), dimension_error);
}

TEST(Linalg, DevectorizeExamples)
{
    const auto b = hermitian_basis(2);
    EXPECT_LE(max_abs(devectorize(RealVector::Unit(4, 0), b) - ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)),
              1e-15);
    EXPECT_EQ(devectorize(RealVector::Zero(4), b), ComplexMatrix::Zero(2, 2));
    EXPECT_THROW(devectorize(RealVector::Zero(3), b), dimension_error);
}

TEST(Linalg, RoundTripsAndTraceRecovery)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto b = hermitian_basis(n);
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexMatrix h = random_hermitian(n, rng);
            const ComplexVector raw = b.coordinates(h);
            EXPECT_LE(raw.imag().cwiseAbs().maxCoeff(), 1e-12);
            const RealVector v = vectorize(h, b);
            EXPECT_LE(max_abs(devectorize(v, b) - h), 1e-12);
            EXPECT_NEAR(h.trace().real(), std::sqrt(static_cast<double>(n)) * v(0), 1e-12);

            RealVector r(static_cast<Eigen::Index>(n * n));
            for (auto& x : r)
                x = g(rng);
            EXPECT_LE((vectorize(devectorize(r, b), b) - r).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Linalg, DensityLikeChecks)
{
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = 0.5;
    EXPECT_TRUE(is_density_like(rho));
    rho(1, 1) = -0.1;
    EXPECT_FALSE(is_density_like(rho));
    EXPECT_FALSE(is_density_like(ComplexMatrix::Identity(2, 2)));
}
