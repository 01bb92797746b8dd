#pragma once

// Finite truncations of the infinite-index model families: the shift frame on
// l2, the 199/200 Parseval pair, and the polynomial/exponential weight sums
// used by decaying perturbations, with rigorous tail control.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "hsframe/certificates.hpp"
#include "hsframe/frame_analysis.hpp"

namespace hsframe {

struct ShiftFrameParams {
    std::size_t truncation = 2;  // M, number of elements
};

namespace detail {

/// The m x m matrix e_k (x) e_k (0-based k).
inline CMatrix diagonal_unit(std::size_t m, std::size_t k)
{
    CMatrix t = CMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    t(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    return t;
}

/// Flattened map sending e_col to coef * e_k (x) e_k.
inline void set_diagonal_image(CMatrix& flat, std::size_t m, std::size_t col, std::size_t k, Complex coef)
{
    flat(static_cast<Eigen::Index>(k * m + k), static_cast<Eigen::Index>(col)) += coef;
}

}  // namespace detail

/// Truncated shift frame G_1(x) = <x, e_1> e_1 (x) e_1, G_i(x) = <x, e_{i-1}> e_i (x) e_i.
///
/// H = C^M, K = C^(M+1), M elements. The last element also carries the
/// tail term <x, e_M> e_{M+1} (x) e_{M+1}, so every coordinate of H is seen
/// once by G_2..G_M and e_1 twice; the optimal bounds are exactly (1, 2).
inline HSFrame shift_frame(const ShiftFrameParams& params)
{
    const std::size_t big_m = params.truncation;
    if (big_m < 2) throw SpecError("shift_frame: truncation must be >= 2");
    const std::size_t n = big_m;
    const std::size_t m = big_m + 1;
    std::vector<HSMap> elements;
    elements.reserve(big_m);
    for (std::size_t i = 0; i < big_m; ++i) {
        CMatrix flat = CMatrix::Zero(static_cast<Eigen::Index>(m * m), static_cast<Eigen::Index>(n));
        if (i == 0)
            detail::set_diagonal_image(flat, m, 0, 0, 1.0);
        else
            detail::set_diagonal_image(flat, m, i - 1, i, 1.0);
        if (i + 1 == big_m) detail::set_diagonal_image(flat, m, big_m - 1, big_m, 1.0);
        elements.emplace_back(m, std::move(flat));
    }
    return HSFrame(std::move(elements));
}

inline HSFrame shift_frame(std::size_t truncation) { return shift_frame(ShiftFrameParams{truncation}); }

/// Parseval pair with G_i(x) = <x, e_i> e_i (x) e_i and
/// F_i(x) = (199/200) <x, e_i> e_i (x) e_i + (sqrt(399)/200) <x, e_i> e_{i+1} (x) e_{i+1}.
/// H = C^M, K = C^(M+1) so the e_{M+1} term of F_M stays inside K.
inline std::pair<HSFrame, HSFrame> parseval_pair(std::size_t big_m)
{
    if (big_m < 2) throw SpecError("parseval_pair: M must be >= 2");
    const std::size_t n = big_m;
    const std::size_t m = big_m + 1;
    const double a = 199.0 / 200.0;
    const double b = std::sqrt(399.0) / 200.0;
    std::vector<HSMap> fs, gs;
    for (std::size_t i = 0; i < big_m; ++i) {
        CMatrix g = CMatrix::Zero(static_cast<Eigen::Index>(m * m), static_cast<Eigen::Index>(n));
        detail::set_diagonal_image(g, m, i, i, 1.0);
        CMatrix f = CMatrix::Zero(g.rows(), g.cols());
        detail::set_diagonal_image(f, m, i, i, a);
        detail::set_diagonal_image(f, m, i, i + 1, b);
        fs.emplace_back(m, std::move(f));
        gs.emplace_back(m, std::move(g));
    }
    return {HSFrame(std::move(fs)), HSFrame(std::move(gs))};
}

/// partial <= true value <= partial + tail_upper for a nonnegative series.
struct TailBoundedSum {
    double partial = 0.0;
    double tail_upper = 0.0;

    double total_upper() const { return partial + tail_upper; }
    bool brackets(double value) const { return partial <= value && value <= total_upper(); }
};

/// sum_{i=1}^{M} i^(-2p) with the integral-test tail M^(1-2p) / (2p - 1).
inline TailBoundedSum zeta_partial(double p, std::uint64_t big_m)
{
    if (!(p > 0.5)) throw DivergenceError("zeta_partial: sum of i^(-2p) diverges for p <= 1/2");
    if (big_m < 1) throw SpecError("zeta_partial: M must be >= 1");
    double partial = 0.0;
    // smallest terms first
    for (std::uint64_t i = big_m; i >= 1; --i) partial += std::pow(static_cast<double>(i), -2.0 * p);
    const double tail = std::pow(static_cast<double>(big_m), 1.0 - 2.0 * p) / (2.0 * p - 1.0);
    return {partial, tail};
}

/// sum_{i>=1} e^(-2ci) = e^(-2c) / (1 - e^(-2c)).
inline double geometric_weight_sum(double c)
{
    if (!(c > 0.0)) throw DivergenceError("geometric_weight_sum: diverges for c <= 0");
    return 1.0 / std::expm1(2.0 * c);
}

/// Polynomial weights w_i = i^p. The weight sum is the upper bracket of
/// zeta(2p) from `bracket_terms` terms.
struct PolyDecay {
    double p = 1.0;
    std::uint64_t bracket_terms = 1'000'000;
};

/// Exponential weights w_i = e^(ci).
struct ExpDecay {
    double c = 0.5;
};

using DecayRegime = std::variant<PolyDecay, ExpDecay>;

inline double regime_weight_sum(const DecayRegime& regime)
{
    if (const auto* poly = std::get_if<PolyDecay>(&regime))
        return zeta_partial(poly->p, poly->bracket_terms).total_upper();
    return geometric_weight_sum(std::get<ExpDecay>(regime).c);
}

/// Weight of 1-based index i.
inline double regime_weight(const DecayRegime& regime, std::size_t i)
{
    if (const auto* poly = std::get_if<PolyDecay>(&regime))
        return std::pow(static_cast<double>(i), poly->p);
    return std::exp(std::get<ExpDecay>(regime).c * static_cast<double>(i));
}

/// Weights for indices 1..count with the regime's infinite weight sum.
inline DecayWeights regime_weights(const DecayRegime& regime, std::size_t count)
{
    std::vector<double> w(count);
    double partial = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        w[i] = regime_weight(regime, i + 1);
        partial += 1.0 / (w[i] * w[i]);
    }
    double total = regime_weight_sum(regime);
    if (std::holds_alternative<PolyDecay>(regime) && std::get<PolyDecay>(regime).bracket_terms < count)
        total = zeta_partial(std::get<PolyDecay>(regime).p, count).total_upper();
    return DecayWeights(std::move(w), std::max(total, partial));
}

/// eps sqrt(W) (sqrt(2 (B_G + eps^2 W)) + sqrt(B_G)), the decay condition
/// with the Bessel bound B_F = 2 (B_G + eps^2 W) of G + E.
inline double decay_condition_lhs(double eps, double weight_sum, double b_g)
{
    return eps * std::sqrt(weight_sum) * (std::sqrt(2.0 * (b_g + eps * eps * weight_sum)) + std::sqrt(b_g));
}

/// Largest eps (to 1e-10) with decay_condition_lhs(eps) < A_G, keeping a
/// margin of at least 1e-12 below A_G.
inline double feasible_epsilon(const DecayRegime& regime, double a_g = 1.0, double b_g = 2.0)
{
    if (!(a_g > 0.0) || !(b_g >= a_g)) throw SpecError("feasible_epsilon: need 0 < A_G <= B_G");
    const double w = regime_weight_sum(regime);
    if (!(w > 0.0) || !std::isfinite(w)) throw InfeasibleError("feasible_epsilon: weight sum not positive");
    constexpr double margin = 1e-12;
    auto ok = [&](double e) { return decay_condition_lhs(e, w, b_g) < a_g - margin; };

    double lo = 0.0;
    double hi = 1.0;
    while (ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw InfeasibleError("feasible_epsilon: bracket diverged");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    if (!(lo > 0.0)) throw InfeasibleError("feasible_epsilon: no positive epsilon satisfies the condition");
    return lo;
}

/// F_i = G_i + E_i with E_i a random rank-one map of operator norm exactly
/// eps / w_i, drawn from a seeded generator.
inline HSFrame decay_perturbation(const HSFrame& g, const DecayRegime& regime, double eps, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const auto rows = static_cast<Eigen::Index>(g.dim_k() * g.dim_k());
    const auto cols = static_cast<Eigen::Index>(g.dim_h());
    std::vector<HSMap> out;
    out.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        CVector u(rows), v(cols);
        for (Eigen::Index k = 0; k < rows; ++k) u(k) = Complex(normal(rng), normal(rng));
        for (Eigen::Index k = 0; k < cols; ++k) v(k) = Complex(normal(rng), normal(rng));
        u.normalize();
        v.normalize();
        const double s = eps / regime_weight(regime, i + 1);
        out.push_back(g[i] + HSMap(g.dim_k(), s * u * v.adjoint()));
    }
    return HSFrame(std::move(out));
}

}  // namespace hsframe
