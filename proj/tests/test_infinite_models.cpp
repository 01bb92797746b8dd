#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hsframe/certificates.hpp"
#include "hsframe/infinite_models.hpp"
#include "hsframe/weaving.hpp"

namespace {

using namespace hsframe;

TEST(ShiftFrame, BoundsIndependentOfTruncation)
{
    for (std::size_t big_m : {2U, 4U, 8U, 16U}) {
        const HSFrame g = shift_frame(big_m);
        EXPECT_EQ(g.size(), big_m);
        EXPECT_EQ(g.dim_h(), big_m);
        EXPECT_EQ(g.dim_k(), big_m + 1);
        const auto b = optimal_bounds(g);
        EXPECT_NEAR(b.lower, 1.0, 1e-12) << big_m;
        EXPECT_NEAR(b.upper, 2.0, 1e-12) << big_m;
    }
    EXPECT_THROW(shift_frame(1), SpecError);
}

TEST(ShiftFrame, DiagonalFrameOperator)
{
    const CMatrix s = frame_operator(shift_frame(5));
    RVector expected = RVector::Ones(5);
    expected(0) = 2.0;
    EXPECT_LT((s - expected.cast<Complex>().asDiagonal().toDenseMatrix()).norm(), 1e-15);
}

TEST(ParsevalPair, BothParseval)
{
    for (std::size_t big_m : {2U, 6U, 9U}) {
        const auto [f, g] = parseval_pair(big_m);
        const auto bf = optimal_bounds(f), bg = optimal_bounds(g);
        EXPECT_NEAR(bf.lower, 1.0, 1e-10);
        EXPECT_NEAR(bf.upper, 1.0, 1e-10);
        EXPECT_NEAR(bg.lower, 1.0, 1e-12);
        EXPECT_NEAR(bg.upper, 1.0, 1e-12);
        const auto c = certify_parseval(f, g);
        EXPECT_NEAR(c.diagnostics.at("delta_min"), 0.005, 1e-12);
    }
    EXPECT_THROW(parseval_pair(1), SpecError);
}

TEST(Zeta, BracketsBaselProblem)
{
    const auto z = zeta_partial(1.0, 1'000'000);
    const double basel = std::numbers::pi * std::numbers::pi / 6.0;
    EXPECT_TRUE(z.brackets(basel));
    EXPECT_LE(z.tail_upper, 1e-6);
    EXPECT_NEAR(z.tail_upper, 1e-6, 1e-18);
}

TEST(Zeta, SingleTerm)
{
    const auto z = zeta_partial(1.0, 1);
    EXPECT_EQ(z.partial, 1.0);
    EXPECT_EQ(z.tail_upper, 1.0);
    EXPECT_TRUE(z.brackets(std::numbers::pi * std::numbers::pi / 6.0));
}

TEST(Zeta, ThreeQuarters)
{
    // sum i^{-3/2} = zeta(3/2) = 2.612375348685488...
    const auto z = zeta_partial(0.75, 10'000);
    EXPECT_TRUE(z.brackets(2.6123753486854883));
    EXPECT_NEAR(z.tail_upper, 0.02, 1e-15);
}

TEST(Zeta, Diverges)
{
    EXPECT_THROW(zeta_partial(0.5, 10), DivergenceError);
    EXPECT_THROW(zeta_partial(0.2, 10), DivergenceError);
    EXPECT_THROW(zeta_partial(1.0, 0), SpecError);
}

TEST(Geometric, ClosedForms)
{
    EXPECT_NEAR(geometric_weight_sum(std::numbers::ln2), 1.0 / 3.0, 1e-15);
    const double e1 = std::exp(-1.0);
    EXPECT_NEAR(geometric_weight_sum(0.5), e1 / (1.0 - e1), 1e-15);

    double partial = 0.0;
    for (int i = 1'000'000; i >= 1; --i) partial += std::exp(-1.0 * i);
    EXPECT_NEAR(geometric_weight_sum(0.5), partial, 1e-12);
}

TEST(Geometric, DecreasingInRate)
{
    double prev = geometric_weight_sum(0.05);
    for (double c = 0.1; c < 5.0; c += 0.05) {
        const double v = geometric_weight_sum(c);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_THROW(geometric_weight_sum(0.0), DivergenceError);
    EXPECT_THROW(geometric_weight_sum(-1.0), DivergenceError);
}

TEST(Regimes, WeightsAndSums)
{
    const auto poly = regime_weights(PolyDecay{2.0}, 5);
    EXPECT_EQ(poly.weights(), (std::vector<double>{1, 4, 9, 16, 25}));
    // at 1e6 terms the p = 2 tail (3e-19) is below one ulp of zeta(4); 1e3 terms keep it visible
    EXPECT_TRUE(zeta_partial(2.0, 1000).brackets(std::pow(std::numbers::pi, 4) / 90.0));
    EXPECT_GE(poly.sum_inv_sq(), std::pow(std::numbers::pi, 4) / 90.0);

    const auto ex = regime_weights(ExpDecay{0.5}, 3);
    EXPECT_DOUBLE_EQ(ex.weights()[2], std::exp(1.5));
    EXPECT_EQ(ex.sum_inv_sq(), geometric_weight_sum(0.5));
}

TEST(Feasible, SatisfiesStrictConditionAndIsMaximal)
{
    for (const DecayRegime& regime :
         {DecayRegime{PolyDecay{1.0}}, DecayRegime{PolyDecay{0.75}}, DecayRegime{ExpDecay{0.5}},
          DecayRegime{ExpDecay{2.0}}}) {
        const double w = regime_weight_sum(regime);
        const double eps = feasible_epsilon(regime);
        EXPECT_GT(eps, 0.0);
        EXPECT_LT(decay_condition_lhs(eps, w, 2.0), 1.0 - 1e-12);
        EXPECT_GE(decay_condition_lhs(eps + 1e-9, w, 2.0), 1.0 - 1e-12);
    }
}

TEST(Feasible, Errors)
{
    EXPECT_THROW(feasible_epsilon(ExpDecay{0.5}, 0.0, 2.0), SpecError);
    EXPECT_THROW(feasible_epsilon(ExpDecay{0.5}, 3.0, 2.0), SpecError);
    EXPECT_THROW(feasible_epsilon(PolyDecay{0.5}), DivergenceError);
}

TEST(Feasible, PerturbationsAreAcceptedAndSound)
{
    // Truncations at M = 10 so each trial sweeps 1024 weavings.
    int trial = 0;
    for (const DecayRegime& regime : {DecayRegime{PolyDecay{1.0}}, DecayRegime{ExpDecay{0.5}}}) {
        const double eps = feasible_epsilon(regime);
        const HSFrame g = shift_frame(10);
        const auto weights = regime_weights(regime, 10);
        for (int k = 0; k < 20; ++k, ++trial) {
            const HSFrame f = decay_perturbation(g, regime, eps, 100 + static_cast<std::uint64_t>(trial));
            const auto devs = pairwise_deviations(f, g);
            for (std::size_t i = 0; i < devs.size(); ++i)
                EXPECT_NEAR(devs[i], eps / weights.weights()[i], 1e-14);
            const auto c = certify_decay(f, g, weights, eps);
            ASSERT_TRUE(c.accepted) << trial;
            EXPECT_TRUE(soundness_check(c, f, g).pass) << trial;
        }
    }
}

TEST(DecayPerturbation, Deterministic)
{
    const HSFrame g = shift_frame(4);
    EXPECT_EQ(decay_perturbation(g, ExpDecay{}, 0.1, 9), decay_perturbation(g, ExpDecay{}, 0.1, 9));
    EXPECT_FALSE(decay_perturbation(g, ExpDecay{}, 0.1, 9) == decay_perturbation(g, ExpDecay{}, 0.1, 10));
}

}  // namespace
