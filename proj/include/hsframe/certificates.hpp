#pragma once

// Stability certificates for weavings of HS-frames.
//
// Each checker validates the hypotheses of one sufficient condition on a
// concrete pair (F, G) and, when they hold, emits frame bounds that are
// licensed for a whole class of weavings. soundness_check enumerates that
// class and compares the licensed bounds with the exact ones.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsframe/frame_analysis.hpp"
#include "hsframe/weaving.hpp"

namespace hsframe {

enum class TheoremId { Finite, Quadratic, Relative, Decay, Parseval };

inline const char* to_string(TheoremId t)
{
    switch (t) {
    case TheoremId::Finite: return "FINITE";
    case TheoremId::Quadratic: return "QUADRATIC";
    case TheoremId::Relative: return "RELATIVE";
    case TheoremId::Decay: return "DECAY";
    case TheoremId::Parseval: return "PARSEVAL";
    }
    return "?";
}

/// Accepts "finite", "FINITE", ... .
inline TheoremId parse_theorem_id(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "finite") return TheoremId::Finite;
    if (s == "quadratic") return TheoremId::Quadratic;
    if (s == "relative") return TheoremId::Relative;
    if (s == "decay") return TheoremId::Decay;
    if (s == "parseval") return TheoremId::Parseval;
    throw SpecError("unknown theorem '" + std::string(name) + "'");
}

/// The class of weavings a certificate speaks about.
struct Quantifier {
    enum class Kind { AllSigma, SigmaUpToN };
    Kind kind = Kind::AllSigma;
    std::size_t n = 0;

    static Quantifier all() { return {Kind::AllSigma, 0}; }
    static Quantifier up_to(std::size_t n) { return {Kind::SigmaUpToN, n}; }

    std::optional<std::size_t> max_sigma() const
    {
        if (kind == Kind::AllSigma) return std::nullopt;
        return n;
    }

    std::string describe() const
    {
        return kind == Kind::AllSigma ? "ALL_SIGMA" : "SIGMA_UP_TO_N(" + std::to_string(n) + ")";
    }
};

/// The inequality that decided a rejection, with both sides evaluated.
struct FailedInequality {
    std::string statement;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct Certificate {
    TheoremId theorem = TheoremId::Finite;
    bool accepted = false;
    std::optional<FrameBounds> predicted;
    Quantifier quantifier;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;
    std::optional<FailedInequality> failed;
};

struct CertifyTolerances {
    /// A_G must exceed this for G to count as a frame.
    double frame = 1e-9;
    double parseval = default_parseval_tolerance;
    /// Strict inequalities are tested against rhs - slack (reject borderline).
    double hypothesis_slack = 1e-12;
    /// Allowed |(F_i - G_i) v| on kernel directions v of G_i.
    double kernel = 1e-10;
    /// Eigenvalues of G_i^* G_i below kernel_rank * max are treated as kernel.
    double kernel_rank = 1e-12;
    /// Pointwise decay check |F_i - G_i| <= eps / w_i + slack.
    double decay_pointwise = 1e-12;
};

/// Lower bound clamp used when the Parseval closeness constant is <= 0.
inline constexpr double parseval_delta_floor = 1e-12;

/// Closed-form bound expressions, shared by the checkers and the tests.
namespace formula {

inline double finite_margin(std::size_t n, double eps, double b_f, double b_g)
{
    return 2.0 * static_cast<double>(n) * eps * std::max(std::sqrt(b_f), std::sqrt(b_g));
}

inline FrameBounds finite_bounds(double a_g, double b_g, double b_f, std::size_t n, double eps)
{
    const double t = finite_margin(n, eps, b_f, b_g);
    return {a_g - t, b_g + t};
}

inline double quadratic_margin(std::size_t n, double eps, double b_g)
{
    const double nn = static_cast<double>(n);
    return nn * eps * eps + 2.0 * eps * std::sqrt(nn) * std::sqrt(b_g);
}

inline FrameBounds quadratic_bounds(double a_g, double b_g, double b_f, std::size_t n, double eps)
{
    return {a_g - quadratic_margin(n, eps, b_g), b_f + b_g};
}

inline FrameBounds relative_bounds(double a_g, double b_g, double delta)
{
    const double r = 1.0 - std::sqrt(delta);
    return {r * r * a_g, 2.0 * (delta + 1.0) * b_g};
}

inline double decay_margin(double eps, double weight_sum, double b_f, double b_g)
{
    return eps * std::sqrt(weight_sum) * (std::sqrt(b_f) + std::sqrt(b_g));
}

inline FrameBounds decay_bounds(double a_g, double b_g, double b_f, double weight_sum, double eps)
{
    return {a_g - decay_margin(eps, weight_sum, b_f, b_g), b_f + b_g};
}

inline FrameBounds parseval_bounds(double delta)
{
    const double t = 2.0 * std::sqrt(2.0 * delta);
    return {1.0 - t, 1.0 + t};
}

}  // namespace formula

/// Positive per-index weights w_i and an upper estimate of sum 1/w_i^2.
class DecayWeights {
public:
    DecayWeights(std::vector<double> weights, double sum_inv_sq)
        : weights_(std::move(weights)), sum_inv_sq_(sum_inv_sq)
    {
        if (weights_.empty()) throw SpecError("DecayWeights: no weights");
        double partial = 0.0;
        for (double w : weights_) {
            if (!(w > 0.0) || !std::isfinite(w))
                throw SpecError("DecayWeights: weights must be positive and finite");
            partial += 1.0 / (w * w);
        }
        if (!std::isfinite(sum_inv_sq_)) throw SpecError("DecayWeights: weight sum must be finite");
        if (sum_inv_sq_ < partial)
            throw SpecError("DecayWeights: weight sum is below the partial sum of 1/w_i^2");
    }

    /// Exact finite sum over the given weights.
    static DecayWeights from_weights(std::vector<double> weights)
    {
        double s = 0.0;
        for (double w : weights) {
            if (!(w > 0.0)) throw SpecError("DecayWeights: weights must be positive");
            s += 1.0 / (w * w);
        }
        return DecayWeights(std::move(weights), s);
    }

    const std::vector<double>& weights() const noexcept { return weights_; }
    double sum_inv_sq() const noexcept { return sum_inv_sq_; }
    std::size_t size() const noexcept { return weights_.size(); }

private:
    std::vector<double> weights_;
    double sum_inv_sq_;
};

namespace detail {

struct PairBounds {
    FrameBounds f;
    FrameBounds g;
};

inline PairBounds require_g_frame(const HSFrame& f, const HSFrame& g, const CertifyTolerances& tol)
{
    require_compatible(f, g, "certify");
    PairBounds b{optimal_bounds(f), optimal_bounds(g)};
    if (!(b.g.lower > tol.frame))
        throw HypothesisError("G is not a frame: A_G = " + std::to_string(b.g.lower) +
                              " is not > " + std::to_string(tol.frame));
    return b;
}

inline void put_pair_bounds(Certificate& c, const PairBounds& b)
{
    c.diagnostics["A_G"] = b.g.lower;
    c.diagnostics["B_G"] = b.g.upper;
    c.diagnostics["A_F"] = b.f.lower;
    c.diagnostics["B_F"] = b.f.upper;
}

inline void reject(Certificate& c, std::string statement, double lhs, double rhs)
{
    c.accepted = false;
    c.predicted.reset();
    c.failed = FailedInequality{std::move(statement), lhs, rhs};
}

inline std::size_t resolve_n(std::optional<std::size_t> n, std::size_t size)
{
    if (n && *n == 0) throw SpecError("N must be >= 1");
    return n.value_or(size);
}

inline double resolve_eps(std::optional<double> eps, double automatic, Certificate& c)
{
    if (eps) {
        if (!(*eps > 0.0) || !std::isfinite(*eps))
            throw SpecError("epsilon must be a positive finite number");
        c.diagnostics["eps_auto"] = 0.0;
        return *eps;
    }
    c.diagnostics["eps_auto"] = 1.0;
    return automatic;
}

template <typename Margin, typename Bounds>
Certificate certify_uniform(TheoremId id, const HSFrame& f, const HSFrame& g, std::optional<std::size_t> n_opt,
                            std::optional<double> eps_opt, const CertifyTolerances& tol,
                            const char* statement, Margin margin_of, Bounds bounds_of)
{
    const auto pb = require_g_frame(f, g, tol);
    Certificate c;
    c.theorem = id;
    const std::size_t n = resolve_n(n_opt, f.size());
    c.quantifier = Quantifier::up_to(n);
    put_pair_bounds(c, pb);

    const double max_dev = max_pairwise_deviation(f, g);
    const double eps = resolve_eps(eps_opt, max_dev, c);
    c.diagnostics["N"] = static_cast<double>(n);
    c.diagnostics["eps"] = eps;
    c.diagnostics["max_deviation"] = max_dev;
    c.notes.push_back("deviation bound is checked on every index, although only indices in sigma "
                      "enter the estimate");

    if (max_dev > eps) {
        reject(c, "max_i |F_i - G_i| <= eps", max_dev, eps);
        return c;
    }
    const double margin = margin_of(n, eps, pb.f.upper, pb.g.upper);
    c.diagnostics["margin"] = margin;
    c.diagnostics["slack"] = pb.g.lower - margin;
    if (!(margin < pb.g.lower - tol.hypothesis_slack)) {
        reject(c, statement, margin, pb.g.lower);
        return c;
    }
    c.accepted = true;
    c.predicted = bounds_of(pb.g.lower, pb.g.upper, pb.f.upper, n, eps);
    return c;
}

}  // namespace detail

/// Finite weaving: |sigma| <= N and |F_i - G_i| <= eps give
/// (A_G - 2 N eps max(sqrt B_F, sqrt B_G), B_G + 2 N eps max(...)).
/// eps = nullopt measures it as max_i |F_i - G_i|; N = nullopt means N = L.
inline Certificate certify_finite(const HSFrame& f, const HSFrame& g, std::optional<std::size_t> n = std::nullopt,
                                  std::optional<double> eps = std::nullopt, const CertifyTolerances& tol = {})
{
    auto c = detail::certify_uniform(TheoremId::Finite, f, g, n, eps, tol,
                                     "2 N eps max(sqrt(B_F), sqrt(B_G)) < A_G", formula::finite_margin,
                                     formula::finite_bounds);
    if (c.diagnostics.count("margin")) {
        const double root = std::max(std::sqrt(c.diagnostics["B_F"]), std::sqrt(c.diagnostics["B_G"]));
        c.diagnostics["eps_threshold"] = c.diagnostics["A_G"] / (2.0 * c.diagnostics["N"] * root);
    }
    return c;
}

/// Quadratic variant: N eps^2 + 2 eps sqrt(N) sqrt(B_G) < A_G gives
/// (A_G - N eps^2 - 2 eps sqrt(N B_G), B_F + B_G).
inline Certificate certify_quadratic(const HSFrame& f, const HSFrame& g, std::optional<std::size_t> n = std::nullopt,
                                     std::optional<double> eps = std::nullopt, const CertifyTolerances& tol = {})
{
    return detail::certify_uniform(
        TheoremId::Quadratic, f, g, n, eps, tol, "N eps^2 + 2 eps sqrt(N) sqrt(B_G) < A_G",
        [](std::size_t nn, double e, double, double b_g) { return formula::quadratic_margin(nn, e, b_g); },
        formula::quadratic_bounds);
}

/// Smallest delta with |(F_i - G_i) x|^2 <= delta |G_i x|^2 for one index,
/// or nullopt when F_i - G_i does not vanish on the kernel of G_i.
inline std::optional<double> relative_delta(const HSMap& f_i, const HSMap& g_i, const CertifyTolerances& tol = {})
{
    const CMatrix d = (f_i - g_i).flattened();
    const auto spec = hermitian_spectrum(g_i.gram());
    const double top = std::max(spec.max(), 0.0);
    const double cutoff = tol.kernel_rank * top;
    const double kernel_allow = tol.kernel * std::max(1.0, std::sqrt(top));

    std::vector<Eigen::Index> range;
    for (Eigen::Index k = 0; k < spec.values.size(); ++k) {
        if (top > 0.0 && spec.values(k) > cutoff) {
            range.push_back(k);
        } else if ((d * spec.vectors.col(k)).norm() > kernel_allow) {
            return std::nullopt;
        }
    }
    if (range.empty()) return 0.0;

    // Whiten against G_i^* G_i on its range: delta = sigma_max(D U diag(1/sqrt(lambda)))^2.
    CMatrix w(spec.vectors.rows(), static_cast<Eigen::Index>(range.size()));
    for (std::size_t r = 0; r < range.size(); ++r)
        w.col(static_cast<Eigen::Index>(r)) = spec.vectors.col(range[r]) / std::sqrt(spec.values(range[r]));
    const CMatrix dw = d * w;
    if (dw.isZero(0.0)) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(dw);
    const double s = svd.singularValues()(0);
    return s * s;
}

/// Relative bound: sum_J |(F_i - G_i) x|^2 <= delta sum_J |G_i x|^2 with
/// delta < 1 gives ((1 - sqrt delta)^2 A_G, 2 (delta + 1) B_G) for every sigma.
/// The all-J hypothesis is checked through the per-index inequalities.
inline Certificate certify_relative(const HSFrame& f, const HSFrame& g, const CertifyTolerances& tol = {})
{
    const auto pb = detail::require_g_frame(f, g, tol);
    Certificate c;
    c.theorem = TheoremId::Relative;
    c.quantifier = Quantifier::all();
    detail::put_pair_bounds(c, pb);

    double delta = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto d = relative_delta(f[i], g[i], tol);
        if (!d) {
            c.diagnostics["kernel_violation_index"] = static_cast<double>(i);
            c.notes.push_back("KERNEL_VIOLATION: F_" + std::to_string(i) + " - G_" + std::to_string(i) +
                              " is nonzero on the kernel of G_" + std::to_string(i));
            detail::reject(c, "(F_i - G_i) x = 0 whenever G_i x = 0", 1.0, 0.0);
            return c;
        }
        if (*d > delta) {
            delta = *d;
            worst = i;
        }
    }
    c.diagnostics["delta_min"] = delta;
    c.diagnostics["delta_argmax"] = static_cast<double>(worst);
    if (!(delta < 1.0 - tol.hypothesis_slack)) {
        detail::reject(c, "delta < 1", delta, 1.0);
        return c;
    }
    c.accepted = true;
    c.predicted = formula::relative_bounds(pb.g.lower, pb.g.upper, delta);
    return c;
}

/// Decaying perturbations: |F_i - G_i| <= eps / w_i and
/// eps sqrt(sum 1/w_i^2) (sqrt B_F + sqrt B_G) < A_G give
/// (A_G - eps sqrt(sum 1/w_i^2)(sqrt B_F + sqrt B_G), B_F + B_G) for every sigma.
/// eps = nullopt uses max_i w_i |F_i - G_i|.
inline Certificate certify_decay(const HSFrame& f, const HSFrame& g, const DecayWeights& weights,
                                 std::optional<double> eps_opt = std::nullopt, const CertifyTolerances& tol = {})
{
    require_compatible(f, g, "certify_decay");
    if (weights.size() != f.size())
        throw DimensionError("certify_decay: " + std::to_string(weights.size()) + " weights for " +
                             std::to_string(f.size()) + " frame elements");
    const auto pb = detail::require_g_frame(f, g, tol);
    Certificate c;
    c.theorem = TheoremId::Decay;
    c.quantifier = Quantifier::all();
    detail::put_pair_bounds(c, pb);

    const auto devs = pairwise_deviations(f, g);
    const auto& w = weights.weights();
    double automatic = 0.0;
    for (std::size_t i = 0; i < devs.size(); ++i) automatic = std::max(automatic, w[i] * devs[i]);
    const double eps = detail::resolve_eps(eps_opt, automatic, c);
    c.diagnostics["eps"] = eps;
    c.diagnostics["weight_sum"] = weights.sum_inv_sq();

    for (std::size_t i = 0; i < devs.size(); ++i) {
        if (devs[i] > eps / w[i] + tol.decay_pointwise) {
            c.diagnostics["decay_violation_index"] = static_cast<double>(i);
            detail::reject(c, "|F_i - G_i| <= eps / w_i at i = " + std::to_string(i), devs[i], eps / w[i]);
            return c;
        }
    }
    const double margin = formula::decay_margin(eps, weights.sum_inv_sq(), pb.f.upper, pb.g.upper);
    c.diagnostics["margin"] = margin;
    c.diagnostics["slack"] = pb.g.lower - margin;
    if (!(margin < pb.g.lower - tol.hypothesis_slack)) {
        detail::reject(c, "eps sqrt(sum 1/w_i^2) (sqrt(B_F) + sqrt(B_G)) < A_G", margin, pb.g.lower);
        return c;
    }
    c.accepted = true;
    c.predicted = formula::decay_bounds(pb.g.lower, pb.g.upper, pb.f.upper, weights.sum_inv_sq(), eps);
    return c;
}

/// sum_i G_i^* F_i over the flattened maps; its Hermitian part is the
/// quadratic form x -> Re sum_i [F_i x, G_i x]_tr.
inline CMatrix cross_operator(const HSFrame& f, const HSFrame& g)
{
    require_compatible(f, g, "cross_operator");
    const auto n = static_cast<Eigen::Index>(f.dim_h());
    CMatrix c = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < f.size(); ++i) c += g[i].flattened().adjoint() * f[i].flattened();
    return c;
}

/// Parseval weaving: F, G Parseval and Re sum [F_i x, G_i x]_tr >= (1 - delta)|x|^2
/// with delta < 1/8 give (1 - 2 sqrt(2 delta), 1 + 2 sqrt(2 delta)) for every sigma.
inline Certificate certify_parseval(const HSFrame& f, const HSFrame& g, const CertifyTolerances& tol = {})
{
    require_compatible(f, g, "certify_parseval");
    const FrameBounds bf = optimal_bounds(f);
    const FrameBounds bg = optimal_bounds(g);
    for (const auto& [name, b] : {std::pair{"F", bf}, std::pair{"G", bg}}) {
        if (classify(b, tol.parseval).kind != FrameClass::ParsevalFrame)
            throw HypothesisError(std::string(name) + " is not a Parseval frame: |A - 1| = " +
                                  std::to_string(std::abs(b.lower - 1.0)) + ", |B - 1| = " +
                                  std::to_string(std::abs(b.upper - 1.0)) + " (tolerance " +
                                  std::to_string(tol.parseval) + ")");
    }
    Certificate c;
    c.theorem = TheoremId::Parseval;
    c.quantifier = Quantifier::all();
    detail::put_pair_bounds(c, {bf, bg});

    const double cross_min = hermitian_spectrum(cross_operator(f, g)).min();
    const double delta = 1.0 - cross_min;
    const double used = std::max(delta, parseval_delta_floor);
    c.diagnostics["cross_lambda_min"] = cross_min;
    c.diagnostics["delta_min"] = delta;
    c.diagnostics["delta_used"] = used;
    if (delta < parseval_delta_floor)
        c.notes.push_back("delta_min below " + std::to_string(parseval_delta_floor) +
                          " is clamped to it for the bound formula");
    if (!(delta < 0.125 - tol.hypothesis_slack)) {
        detail::reject(c, "delta < 1/8", delta, 0.125);
        return c;
    }
    c.accepted = true;
    c.predicted = formula::parseval_bounds(used);
    return c;
}

struct SoundnessOptions {
    std::size_t max_size = default_max_weaving_size;
    double tolerance = 1e-9;
    unsigned threads = 1;
};

struct SoundnessReport {
    bool pass = false;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::optional<std::uint64_t> first_violation;
    double worst_lower = 0.0;
    double worst_upper = 0.0;
    /// actual worst / predicted
    double lower_tightness = 0.0;
    double upper_tightness = 0.0;
};

/// Exhaustively checks an accepted certificate against the exact optimal
/// bounds of every weaving in its quantifier class.
inline SoundnessReport soundness_check(const Certificate& cert, const HSFrame& f, const HSFrame& g,
                                       const SoundnessOptions& opts = {})
{
    if (!cert.accepted || !cert.predicted)
        throw SpecError("soundness_check: certificate was not accepted");
    SweepOptions so;
    so.max_size = opts.max_size;
    so.max_sigma = cert.quantifier.max_sigma();
    so.threads = opts.threads;
    const auto sweep = worst_case_bounds(f, g, so);
    const FrameBounds& p = *cert.predicted;

    SoundnessReport r;
    r.checked = sweep.records.size();
    r.worst_lower = sweep.worst_lower;
    r.worst_upper = sweep.worst_upper;
    for (const auto& rec : sweep.records) {
        if (rec.bounds.lower < p.lower - opts.tolerance || rec.bounds.upper > p.upper + opts.tolerance) {
            if (!r.first_violation) r.first_violation = rec.mask;
            ++r.violations;
        }
    }
    r.pass = r.violations == 0;
    r.lower_tightness = p.lower != 0.0 ? r.worst_lower / p.lower : 0.0;
    r.upper_tightness = p.upper != 0.0 ? r.worst_upper / p.upper : 0.0;
    return r;
}

}  // namespace hsframe
