#pragma once

// Seeded random frames: plain Gaussian (Bessel) families, well-conditioned
// frames, Parseval frames, and per-index perturbations with a prescribed
// operator-norm profile.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <variant>
#include <vector>

#include "hsframe/frame_analysis.hpp"

namespace hsframe {

using Rng = std::mt19937_64;

inline CVector random_cvector(std::size_t n, Rng& rng)
{
    std::normal_distribution<double> normal;
    CVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(normal(rng), normal(rng));
    return v;
}

inline CVector random_unit_vector(std::size_t n, Rng& rng)
{
    CVector v = random_cvector(n, rng);
    while (v.norm() == 0.0) v = random_cvector(n, rng);
    return v / v.norm();
}

inline CMatrix random_cmatrix(std::size_t rows, std::size_t cols, Rng& rng)
{
    std::normal_distribution<double> normal;
    CMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = Complex(normal(rng), normal(rng));
    return a;
}

inline HSMap random_map(std::size_t dim_h, std::size_t dim_k, Rng& rng)
{
    return HSMap(dim_k, random_cmatrix(dim_k * dim_k, dim_h, rng));
}

/// Vertical stack of the flattened elements, (m^2 L) x n.
inline CMatrix stacked_analysis(const HSFrame& frame)
{
    const auto block = static_cast<Eigen::Index>(frame.dim_k() * frame.dim_k());
    CMatrix s(block * static_cast<Eigen::Index>(frame.size()), static_cast<Eigen::Index>(frame.dim_h()));
    for (std::size_t i = 0; i < frame.size(); ++i)
        s.middleRows(block * static_cast<Eigen::Index>(i), block) = frame[i].flattened();
    return s;
}

inline HSFrame unstack_analysis(const CMatrix& stacked, std::size_t dim_k, std::size_t count)
{
    const auto block = static_cast<Eigen::Index>(dim_k * dim_k);
    if (stacked.rows() != block * static_cast<Eigen::Index>(count))
        throw DimensionError("unstack_analysis: row count does not match m^2 L");
    std::vector<HSMap> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(dim_k, CMatrix(stacked.middleRows(block * static_cast<Eigen::Index>(i), block)));
    return HSFrame(std::move(out));
}

/// Gaussian entries scaled by 1/sqrt(m^2 L) so bounds stay O(1).
inline HSFrame random_bessel(std::size_t dim_h, std::size_t dim_k, std::size_t count, Rng& rng)
{
    if (dim_h == 0 || dim_k == 0 || count == 0) throw SpecError("random frame: dimensions and count must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim_k * dim_k * count));
    std::vector<HSMap> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(Complex(scale) * random_map(dim_h, dim_k, rng));
    return HSFrame(std::move(out));
}

namespace detail {

inline void require_frame_possible(std::size_t dim_h, std::size_t dim_k, std::size_t count)
{
    if (dim_k * dim_k * count < dim_h)
        throw SpecError("random frame: m^2 L = " + std::to_string(dim_k * dim_k * count) + " < n = " +
                        std::to_string(dim_h) + ", no frame exists");
}

}  // namespace detail

/// Gaussian family whose frame-operator spectrum is remapped into
/// [min_ratio * lambda_max, lambda_max].
inline HSFrame random_frame(std::size_t dim_h, std::size_t dim_k, std::size_t count, Rng& rng,
                            double min_ratio = 0.1)
{
    detail::require_frame_possible(dim_h, dim_k, count);
    const HSFrame base = random_bessel(dim_h, dim_k, count, rng);
    const CMatrix a = stacked_analysis(base);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RVector s = svd.singularValues();
    const double top = s(0) * s(0);
    for (Eigen::Index k = 0; k < s.size(); ++k)
        s(k) = std::sqrt(top * (min_ratio + (1.0 - min_ratio) * (s(k) * s(k) / top)));
    const CMatrix conditioned = svd.matrixU() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
    return unstack_analysis(conditioned, dim_k, count);
}

/// Gaussian family right-normalized so the frame operator is the identity.
inline HSFrame random_parseval(std::size_t dim_h, std::size_t dim_k, std::size_t count, Rng& rng)
{
    detail::require_frame_possible(dim_h, dim_k, count);
    const CMatrix a = stacked_analysis(random_bessel(dim_h, dim_k, count, rng));
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return unstack_analysis(svd.matrixU() * svd.matrixV().adjoint(), dim_k, count);
}

/// |E_i| = eps for every index.
struct ConstantProfile {
    double eps;
};
/// |E_i| = eps / i^p (1-based i).
struct PolyProfile {
    double eps;
    double p;
};
/// |E_i| = eps / e^(ci).
struct ExpProfile {
    double eps;
    double c;
};

using PerturbationProfile = std::variant<ConstantProfile, PolyProfile, ExpProfile>;

/// Target operator norm for 1-based index i.
inline double profile_norm(const PerturbationProfile& profile, std::size_t i)
{
    const double x = static_cast<double>(i);
    return std::visit(
        [x](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantProfile>)
                return p.eps;
            else if constexpr (std::is_same_v<P, PolyProfile>)
                return p.eps / std::pow(x, p.p);
            else
                return p.eps / std::exp(p.c * x);
        },
        profile);
}

/// base + E_i where each E_i is Gaussian, rescaled to op_norm profile(i).
inline HSFrame perturb(const HSFrame& base, const PerturbationProfile& profile, Rng& rng)
{
    const double eps = std::visit([](const auto& p) { return p.eps; }, profile);
    if (!(eps > 0.0) || !std::isfinite(eps)) throw SpecError("perturb: profile epsilon must be positive");
    std::vector<HSMap> out;
    out.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        HSMap e = random_map(base.dim_h(), base.dim_k(), rng);
        double norm = op_norm(e);
        while (norm == 0.0) {
            e = random_map(base.dim_h(), base.dim_k(), rng);
            norm = op_norm(e);
        }
        // rounding in the rescale and the sum can land the measured deviation
        // an ulp or two above target; shrink until it does not
        const double target = profile_norm(profile, i + 1);
        double scale = target / norm;
        HSMap fi = base[i] + Complex(scale) * e;
        while (op_norm(fi - base[i]) > target) {
            scale *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
            fi = base[i] + Complex(scale) * e;
        }
        out.push_back(std::move(fi));
    }
    return HSFrame(std::move(out));
}

}  // namespace hsframe
