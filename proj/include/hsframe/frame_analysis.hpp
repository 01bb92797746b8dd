#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hsframe/hs_core.hpp"

namespace hsframe {

/// A finite indexed family {Theta_i} of HS maps sharing one (n, m).
class HSFrame {
public:
    explicit HSFrame(std::vector<HSMap> elements) : elements_(std::move(elements))
    {
        if (elements_.empty()) throw SpecError("HSFrame: a frame needs at least one element");
        const HSMap& first = elements_.front();
        for (std::size_t i = 1; i < elements_.size(); ++i)
            if (!elements_[i].same_shape(first))
                throw DimensionError("HSFrame: element " + std::to_string(i) +
                                     " has a different (n, m) than element 0");
    }

    std::size_t dim_h() const noexcept { return elements_.front().dim_h(); }
    std::size_t dim_k() const noexcept { return elements_.front().dim_k(); }
    std::size_t size() const noexcept { return elements_.size(); }

    const HSMap& operator[](std::size_t i) const { return elements_[i]; }
    const std::vector<HSMap>& elements() const noexcept { return elements_; }

    auto begin() const noexcept { return elements_.begin(); }
    auto end() const noexcept { return elements_.end(); }

    bool compatible(const HSFrame& o) const noexcept
    {
        return dim_h() == o.dim_h() && dim_k() == o.dim_k() && size() == o.size();
    }

    /// Every element multiplied by c.
    HSFrame scaled(Complex c) const
    {
        std::vector<HSMap> out;
        out.reserve(size());
        for (const auto& e : elements_) out.push_back(c * e);
        return HSFrame(std::move(out));
    }

    friend bool operator==(const HSFrame& a, const HSFrame& b) { return a.elements_ == b.elements_; }

private:
    std::vector<HSMap> elements_;
};

inline void require_compatible(const HSFrame& f, const HSFrame& g, const char* who)
{
    if (!f.compatible(g))
        throw DimensionError(std::string(who) + ": frames have (n, m, L) = (" +
                             std::to_string(f.dim_h()) + ", " + std::to_string(f.dim_k()) + ", " +
                             std::to_string(f.size()) + ") and (" + std::to_string(g.dim_h()) +
                             ", " + std::to_string(g.dim_k()) + ", " + std::to_string(g.size()) +
                             ")");
}

/// Optimal lower/upper frame bounds, 0 <= lower <= upper.
struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;

    friend bool operator==(const FrameBounds&, const FrameBounds&) = default;
};

enum class FrameClass { Frame, BesselOnly, ParsevalFrame };

inline const char* to_string(FrameClass c)
{
    switch (c) {
    case FrameClass::Frame: return "FRAME";
    case FrameClass::BesselOnly: return "BESSEL_ONLY";
    case FrameClass::ParsevalFrame: return "PARSEVAL_FRAME";
    }
    return "?";
}

struct Classification {
    FrameClass kind;
    double tolerance;

    bool is_frame() const noexcept { return kind != FrameClass::BesselOnly; }
};

inline constexpr double default_parseval_tolerance = 1e-9;

/// sum_i |Theta_i(x)|_2^2, accumulated in index order.
inline double frame_sum(const HSFrame& frame, const CVector& x)
{
    if (static_cast<std::size_t>(x.size()) != frame.dim_h())
        throw DimensionError("frame_sum: vector of size " + std::to_string(x.size()) +
                             " for a frame on C^" + std::to_string(frame.dim_h()));
    double total = 0.0;
    for (const auto& e : frame) total += (e.flattened() * x).squaredNorm();
    return total;
}

/// S = sum_i Theta_i^* Theta_i over the flattened maps; <S x, x> = frame_sum(x).
inline CMatrix frame_operator(const HSFrame& frame)
{
    const auto n = static_cast<Eigen::Index>(frame.dim_h());
    CMatrix s = CMatrix::Zero(n, n);
    for (const auto& e : frame) s += e.gram();
    return s;
}

/// Eigen-decomposition of a Hermitian matrix, ascending eigenvalues.
struct HermitianSpectrum {
    RVector values;
    CMatrix vectors;

    double min() const { return values(0); }
    double max() const { return values(values.size() - 1); }
};

inline HermitianSpectrum hermitian_spectrum(const CMatrix& s)
{
    if (s.rows() != s.cols() || s.rows() == 0)
        throw DimensionError("hermitian_spectrum: matrix must be square and nonempty");
    // Only the lower triangle is read; symmetrize so rounding in the upper
    // half is not silently dropped.
    const CMatrix h = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline FrameBounds bounds_of_operator(const CMatrix& s)
{
    const auto spec = hermitian_spectrum(s);
    const double lo = std::max(0.0, spec.min());
    const double hi = std::max(lo, spec.max());
    return {lo, hi};
}

/// Tightest (A, B): the extreme eigenvalues of the frame operator.
inline FrameBounds optimal_bounds(const HSFrame& frame)
{
    return bounds_of_operator(frame_operator(frame));
}

inline Classification classify(const FrameBounds& b, double tolerance = default_parseval_tolerance)
{
    if (!(tolerance > 0.0)) throw SpecError("classify: tolerance must be positive");
    if (std::abs(b.lower - 1.0) <= tolerance && std::abs(b.upper - 1.0) <= tolerance)
        return {FrameClass::ParsevalFrame, tolerance};
    if (b.lower > tolerance) return {FrameClass::Frame, tolerance};
    return {FrameClass::BesselOnly, tolerance};
}

inline Classification classify(const HSFrame& frame, double tolerance = default_parseval_tolerance)
{
    return classify(optimal_bounds(frame), tolerance);
}

/// B / A; infinity when the family is not a frame.
inline double condition_number(const FrameBounds& b)
{
    if (b.lower <= 0.0) return std::numeric_limits<double>::infinity();
    return b.upper / b.lower;
}

/// Per-index op_norm(F_i - G_i).
inline std::vector<double> pairwise_deviations(const HSFrame& f, const HSFrame& g)
{
    require_compatible(f, g, "pairwise_deviations");
    std::vector<double> out;
    out.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out.push_back(op_norm(f[i] - g[i]));
    return out;
}

/// max_i |F_i - G_i|.
inline double max_pairwise_deviation(const HSFrame& f, const HSFrame& g)
{
    const auto d = pairwise_deviations(f, g);
    return *std::max_element(d.begin(), d.end());
}

}  // namespace hsframe
