#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "hsframe/hs_core.hpp"
#include "hsframe/random.hpp"

namespace {

using namespace hsframe;

CVector unit(std::size_t n, std::size_t k)
{
    CVector e = CVector::Zero(static_cast<Eigen::Index>(n));
    e(static_cast<Eigen::Index>(k)) = 1.0;
    return e;
}

// trace(S^* T) by explicit double loop: sum_j sum_k conj(S_kj) T_kj.
Complex trace_oracle(const CMatrix& t, const CMatrix& s)
{
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        Complex diag = 0.0;
        for (Eigen::Index k = 0; k < t.rows(); ++k) diag += std::conj(s(k, j)) * t(k, j);
        acc += diag;
    }
    return acc;
}

TEST(HsInner, IdentityGivesTrace)
{
    const CMatrix i2 = CMatrix::Identity(2, 2);
    EXPECT_EQ(hs_inner(i2, i2), Complex(2.0, 0.0));
}

TEST(HsInner, UnitRankOneHasUnitNorm)
{
    const CMatrix e12 = rank_one(unit(2, 0), unit(2, 1));
    EXPECT_EQ(hs_inner(e12, e12), Complex(1.0, 0.0));
}

TEST(HsInner, MatchesTraceOracle)
{
    Rng rng(11);
    const CMatrix t = random_cmatrix(3, 3, rng);
    const CMatrix s = random_cmatrix(3, 3, rng);
    const Complex expected = trace_oracle(t, s);
    EXPECT_NEAR(std::abs(hs_inner(t, s) - expected), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(hs_inner(t, s) - std::conj(hs_inner(s, t))), 0.0, 1e-13);
}

TEST(HsInner, DimensionMismatchThrows)
{
    EXPECT_THROW(hs_inner(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)), DimensionError);
    EXPECT_THROW(hs_inner(CMatrix::Zero(2, 3), CMatrix::Zero(2, 3)), DimensionError);
}

TEST(HsInner, Sesquilinear)
{
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const CMatrix a = random_cmatrix(3, 3, rng), b = random_cmatrix(3, 3, rng), c = random_cmatrix(3, 3, rng);
        const Complex alpha(0.3, -1.2), beta(-0.7, 0.4);
        const Complex lhs1 = hs_inner(alpha * a + beta * b, c);
        const Complex rhs1 = alpha * hs_inner(a, c) + beta * hs_inner(b, c);
        EXPECT_LT(std::abs(lhs1 - rhs1), 1e-12 * (1.0 + std::abs(rhs1)));
        const Complex lhs2 = hs_inner(c, alpha * a + beta * b);
        const Complex rhs2 = std::conj(alpha) * hs_inner(c, a) + std::conj(beta) * hs_inner(c, b);
        EXPECT_LT(std::abs(lhs2 - rhs2), 1e-12 * (1.0 + std::abs(rhs2)));
    }
}

TEST(HsNorm, TrivialValues)
{
    EXPECT_DOUBLE_EQ(hs_norm(CMatrix::Identity(2, 2)), std::sqrt(2.0));
    EXPECT_EQ(hs_norm(CMatrix::Zero(3, 3)), 0.0);
}

TEST(HsNorm, MatchesEntrywiseSum)
{
    Rng rng(13);
    const CMatrix t = random_cmatrix(4, 4, rng);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) sum += std::norm(t(i, j));
    EXPECT_NEAR(hs_norm(t), std::sqrt(sum), 1e-13);
}

TEST(RankOne, CanonicalPlacement)
{
    const CMatrix m11 = rank_one(unit(2, 0), unit(2, 0));
    EXPECT_EQ(m11(0, 0), Complex(1.0));
    EXPECT_EQ(m11.cwiseAbs().sum(), 1.0);

    const CMatrix m21 = rank_one(unit(2, 1), unit(2, 0));
    EXPECT_EQ(m21(1, 0), Complex(1.0));
    EXPECT_EQ(m21.cwiseAbs().sum(), 1.0);
}

TEST(RankOne, AppliesDefiningIdentity)
{
    Rng rng(14);
    const CVector x = random_cvector(4, rng), y = random_cvector(4, rng), u = random_cvector(4, rng);
    // (x (x) y)(u) = <u, y> x with <u, y> = sum u_k conj(y_k)
    Complex uy = 0.0;
    for (Eigen::Index k = 0; k < 4; ++k) uy += u(k) * std::conj(y(k));
    const CVector expected = uy * x;
    EXPECT_LT((rank_one(x, y) * u - expected).norm(), 1e-12);
}

TEST(RankOne, MismatchThrows)
{
    EXPECT_THROW(rank_one(CVector::Ones(2), CVector::Ones(3)), DimensionError);
}

TEST(RankOne, TensorIdentityAndNorm)
{
    Rng rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 5;
        const CVector x = random_cvector(m, rng), y = random_cvector(m, rng);
        const CVector u = random_cvector(m, rng), v = random_cvector(m, rng);
        const Complex lhs = hs_inner(rank_one(x, y), rank_one(u, v));
        const Complex rhs = inner(x, u) * inner(v, y);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(rhs)));
        EXPECT_NEAR(hs_norm(rank_one(x, y)), x.norm() * y.norm(), 1e-12 * (1.0 + x.norm() * y.norm()));
    }
}

TEST(Inner, LinearInFirstArgument)
{
    const CVector x = CVector::Constant(2, Complex(0.0, 1.0));
    const CVector y = CVector::Ones(2);
    EXPECT_EQ(inner(x, y), Complex(0.0, 2.0));
    EXPECT_EQ(inner(y, x), Complex(0.0, -2.0));
}

TEST(HSMap, ColumnsAndFlattenedAgree)
{
    Rng rng(16);
    const HSMap map = random_map(3, 2, rng);
    for (std::size_t j = 0; j < 3; ++j) {
        CVector e = unit(3, j);
        EXPECT_EQ(hsframe::apply(map, e), map.column(j));
    }
    EXPECT_EQ(HSMap::from_columns(map.columns()), map);
}

TEST(HSMap, RejectsBadShapes)
{
    EXPECT_THROW(HSMap(2, CMatrix::Zero(3, 2)), DimensionError);
    EXPECT_THROW(HSMap::from_columns({CMatrix::Zero(2, 2), CMatrix::Zero(3, 3)}), DimensionError);
    CMatrix bad = CMatrix::Zero(4, 1);
    bad(0, 0) = Complex(std::nan(""), 0.0);
    EXPECT_THROW(HSMap(2, bad), SpecError);
}

TEST(Apply, ZeroVectorGivesZero)
{
    Rng rng(17);
    const HSMap map = random_map(4, 3, rng);
    EXPECT_TRUE(hsframe::apply(map, CVector::Zero(4)).isZero(0.0));
    EXPECT_THROW(hsframe::apply(map, CVector::Zero(3)), DimensionError);
}

TEST(Apply, MatchesColumnExpansion)
{
    Rng rng(18);
    const HSMap map = random_map(4, 3, rng);
    const auto cols = map.columns();
    const CVector x = random_cvector(4, rng);
    CMatrix expected = CMatrix::Zero(3, 3);
    for (std::size_t j = 0; j < 4; ++j) expected += x(static_cast<Eigen::Index>(j)) * cols[j];
    EXPECT_LT((hsframe::apply(map, x) - expected).norm(), 1e-13);
}

TEST(Apply, VectorizationIsometry)
{
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const HSMap map = random_map(1 + trial % 4, 1 + trial % 3, rng);
        const CVector x = random_cvector(map.dim_h(), rng);
        const double lhs = hs_norm(hsframe::apply(map, x));
        const double rhs = (map.flattened() * x).norm();
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * rhs);
    }
}

TEST(OpNorm, TrivialValues)
{
    EXPECT_EQ(op_norm(HSMap(3, 2)), 0.0);
    const HSMap e11 = HSMap::from_columns({rank_one(unit(2, 0), unit(2, 0))});
    EXPECT_NEAR(op_norm(e11), 1.0, 1e-15);
}

TEST(OpNorm, DominatesAndApproachesRayleighSampling)
{
    Rng rng(20);
    for (std::size_t n = 1; n <= 4; ++n) {
        const HSMap map = random_map(n, 2, rng);
        const double norm = op_norm(map);
        double best = 0.0;
        CVector best_x;
        for (int s = 0; s < 10000; ++s) {
            const CVector x = random_unit_vector(n, rng);
            const double v = hs_norm(hsframe::apply(map, x));
            EXPECT_LE(v, norm * (1.0 + 1e-12));
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        // Uniform sampling concentrates poorly near the top direction once n >= 3,
        // so refine the best sample by power iteration on the quadratic form.
        CVector x = best_x;
        for (int it = 0; it < 200; ++it) {
            CVector y = map.flattened().adjoint() * (map.flattened() * x);
            x = y / y.norm();
        }
        const double refined = hs_norm(hsframe::apply(map, x));
        EXPECT_LE(refined, norm * (1.0 + 1e-12));
        EXPECT_NEAR(refined, norm, 1e-3) << "n = " << n;
    }
}

}  // namespace
