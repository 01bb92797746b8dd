#pragma once

// Complex vector/operator arithmetic and the Hilbert-Schmidt calculus.
//
// Finite-dimensional model: H = C^n, K = C^m, and the HS class C2(K) is the
// space of m x m complex matrices under the trace inner product. A map
// Theta : H -> C2(K) is stored as its vectorized (m*m) x n matrix, so the
// HS norm of Theta(x) is the Euclidean norm of flattened * x.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hsframe/errors.hpp"

namespace hsframe {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Default comparison tolerances.
namespace tol {
inline constexpr double relative = 1e-10;
inline constexpr double absolute = 1e-12;
}  // namespace tol

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a)
{
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const auto v = a(i, j);
            if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) return false;
        }
    return true;
}

/// <x, y>, linear in the first argument and conjugate-linear in the second.
inline Complex inner(const CVector& x, const CVector& y)
{
    if (x.size() != y.size())
        throw DimensionError("inner: vector sizes " + std::to_string(x.size()) + " and " +
                             std::to_string(y.size()) + " differ");
    // Eigen's dot conjugates its left operand.
    return y.dot(x);
}

inline void require_square(const CMatrix& t, const char* who)
{
    if (t.rows() != t.cols() || t.rows() == 0)
        throw DimensionError(std::string(who) + ": operator must be square and nonempty, got " +
                             std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
}

/// Trace inner product [T, S]_tr = trace(S^* T).
inline Complex hs_inner(const CMatrix& t, const CMatrix& s)
{
    require_square(t, "hs_inner");
    require_square(s, "hs_inner");
    if (t.rows() != s.rows())
        throw DimensionError("hs_inner: operators of order " + std::to_string(t.rows()) + " and " +
                             std::to_string(s.rows()));
    // trace(S^* T) = sum_jk conj(S_jk) T_jk
    return s.reshaped().dot(t.reshaped());
}

/// Hilbert-Schmidt (Frobenius) norm.
inline double hs_norm(const CMatrix& t)
{
    require_square(t, "hs_norm");
    return t.norm();
}

/// x (x) y : u -> <u, y> x, i.e. the matrix x y^*.
inline CMatrix rank_one(const CVector& x, const CVector& y)
{
    if (x.size() != y.size() || x.size() == 0)
        throw DimensionError("rank_one: vector sizes " + std::to_string(x.size()) + " and " +
                             std::to_string(y.size()));
    return x * y.adjoint();
}

/// A bounded linear map from C^n into the m x m Hilbert-Schmidt operators.
///
/// The flattened (m*m) x n matrix is the single source of truth; column j is
/// the column-major vectorization of the image of the j-th canonical basis
/// vector of H.
class HSMap {
public:
    HSMap(std::size_t dim_h, std::size_t dim_k)
        : dim_k_(dim_k), flat_(CMatrix::Zero(static_cast<Eigen::Index>(dim_k * dim_k),
                                             static_cast<Eigen::Index>(dim_h)))
    {
        if (dim_h == 0 || dim_k == 0) throw DimensionError("HSMap: dimensions must be positive");
    }

    HSMap(std::size_t dim_k, CMatrix flattened) : dim_k_(dim_k), flat_(std::move(flattened))
    {
        if (dim_k == 0 || flat_.cols() == 0)
            throw DimensionError("HSMap: dimensions must be positive");
        if (flat_.rows() != static_cast<Eigen::Index>(dim_k * dim_k))
            throw DimensionError("HSMap: flattened matrix has " + std::to_string(flat_.rows()) +
                                 " rows, expected " + std::to_string(dim_k * dim_k));
        if (!all_finite(flat_)) throw SpecError("HSMap: non-finite entry");
    }

    /// Builds the map from the images of the canonical basis of H.
    static HSMap from_columns(const std::vector<CMatrix>& columns)
    {
        if (columns.empty()) throw DimensionError("HSMap: no columns");
        const auto m = columns.front().rows();
        CMatrix flat(m * m, static_cast<Eigen::Index>(columns.size()));
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const CMatrix& c = columns[j];
            if (c.rows() != m || c.cols() != m)
                throw DimensionError("HSMap: column " + std::to_string(j) + " is " +
                                     std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                                     ", expected " + std::to_string(m) + "x" + std::to_string(m));
            flat.col(static_cast<Eigen::Index>(j)) = c.reshaped();
        }
        return HSMap(static_cast<std::size_t>(m), std::move(flat));
    }

    std::size_t dim_h() const noexcept { return static_cast<std::size_t>(flat_.cols()); }
    std::size_t dim_k() const noexcept { return dim_k_; }
    const CMatrix& flattened() const noexcept { return flat_; }

    /// Image of the j-th canonical basis vector, as an m x m operator.
    CMatrix column(std::size_t j) const
    {
        if (j >= dim_h()) throw SpecError("HSMap::column: index out of range");
        const auto m = static_cast<Eigen::Index>(dim_k_);
        return flat_.col(static_cast<Eigen::Index>(j)).reshaped(m, m);
    }

    std::vector<CMatrix> columns() const
    {
        std::vector<CMatrix> out;
        out.reserve(dim_h());
        for (std::size_t j = 0; j < dim_h(); ++j) out.push_back(column(j));
        return out;
    }

    /// Theta^* Theta, the n x n Gram matrix of the vectorized map.
    CMatrix gram() const { return flat_.adjoint() * flat_; }

    bool same_shape(const HSMap& o) const noexcept
    {
        return dim_k_ == o.dim_k_ && flat_.cols() == o.flat_.cols();
    }

    friend HSMap operator-(const HSMap& a, const HSMap& b)
    {
        a.require_same_shape(b, "HSMap::operator-");
        return HSMap(a.dim_k_, a.flat_ - b.flat_);
    }

    friend HSMap operator+(const HSMap& a, const HSMap& b)
    {
        a.require_same_shape(b, "HSMap::operator+");
        return HSMap(a.dim_k_, a.flat_ + b.flat_);
    }

    friend HSMap operator*(Complex c, const HSMap& a) { return HSMap(a.dim_k_, c * a.flat_); }

    friend bool operator==(const HSMap& a, const HSMap& b)
    {
        return a.same_shape(b) && a.flat_ == b.flat_;
    }

private:
    void require_same_shape(const HSMap& o, const char* who) const
    {
        if (!same_shape(o))
            throw DimensionError(std::string(who) + ": maps have shapes (n=" +
                                 std::to_string(dim_h()) + ", m=" + std::to_string(dim_k_) +
                                 ") and (n=" + std::to_string(o.dim_h()) +
                                 ", m=" + std::to_string(o.dim_k_) + ")");
    }

    std::size_t dim_k_;
    CMatrix flat_;
};

/// Theta(x) = sum_j x_j * columns[j].
inline CMatrix apply(const HSMap& map, const CVector& x)
{
    if (static_cast<std::size_t>(x.size()) != map.dim_h())
        throw DimensionError("apply: vector of size " + std::to_string(x.size()) +
                             " for a map on C^" + std::to_string(map.dim_h()));
    const auto m = static_cast<Eigen::Index>(map.dim_k());
    CVector v = map.flattened() * x;
    return v.reshaped(m, m);
}

/// Operator norm from (H, |.|) into (C2, |.|_2): the largest singular value
/// of the flattened matrix.
inline double op_norm(const HSMap& map)
{
    const CMatrix& a = map.flattened();
    if (a.isZero(0.0)) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

}  // namespace hsframe
