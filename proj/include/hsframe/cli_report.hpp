#pragma once

// Command implementations behind the hsframe CLI. Every command returns a
// Report whose `result` payload depends only on the inputs, so two identical
// invocations produce identical payloads; wall time is kept outside it.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hsframe/certificates.hpp"
#include "hsframe/frame_io.hpp"
#include "hsframe/infinite_models.hpp"
#include "hsframe/random.hpp"
#include "hsframe/weaving.hpp"

namespace hsframe {

inline constexpr const char* tool_version = "0.1.0";

/// Process exit codes.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int rejected = 2;
}  // namespace exit_code

using nlohmann::json;

struct Report {
    std::string command;
    json arguments = json::object();
    std::optional<std::uint64_t> seed;
    json result = json::object();
    double wall_time = 0.0;
    std::string status = "ok";
    int exit = exit_code::ok;

    json to_json() const
    {
        json inv = {{"command", command}, {"arguments", arguments}, {"version", tool_version}};
        inv["seed"] = seed ? json(*seed) : json(nullptr);
        return {{"invocation", inv}, {"result", result}, {"status", status}, {"wall_time_s", wall_time}};
    }
};

namespace detail {

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace detail

inline json to_json(const FrameBounds& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

inline json to_json(const Certificate& c)
{
    json j = {{"theorem", to_string(c.theorem)},
              {"accepted", c.accepted},
              {"quantifier", c.quantifier.describe()},
              {"diagnostics", json::object()},
              {"notes", c.notes}};
    j["predicted"] = c.predicted ? to_json(*c.predicted) : json(nullptr);
    for (const auto& [k, v] : c.diagnostics) j["diagnostics"][k] = detail::number_or_null(v);
    if (c.failed)
        j["failed_inequality"] = {{"statement", c.failed->statement}, {"lhs", c.failed->lhs}, {"rhs", c.failed->rhs}};
    return j;
}

inline json to_json(const SoundnessReport& r)
{
    json j = {{"verdict", r.pass ? "PASS" : "FAIL"},
              {"checked", r.checked},
              {"violations", r.violations},
              {"worst_lower", r.worst_lower},
              {"worst_upper", r.worst_upper},
              {"lower_tightness", r.lower_tightness},
              {"upper_tightness", r.upper_tightness}};
    j["first_violation_mask"] = r.first_violation ? json(*r.first_violation) : json(nullptr);
    return j;
}

inline json to_json(const WeavingSweep& s, bool with_records)
{
    json j = {{"size", s.size},
              {"weavings", s.records.size()},
              {"exhaustive", s.exhaustive},
              {"worst_lower", s.worst_lower},
              {"worst_upper", s.worst_upper}};
    j["max_sigma"] = s.max_sigma ? json(*s.max_sigma) : json(nullptr);
    if (with_records) {
        json recs = json::array();
        for (const auto& r : s.records)
            recs.push_back({{"mask", r.mask}, {"lower", r.bounds.lower}, {"upper", r.bounds.upper}});
        j["records"] = std::move(recs);
    }
    return j;
}

/// Sweep records as CSV: mask,sigma,lower,upper with sigma as '|'-joined indices.
inline std::string sweep_csv(const WeavingSweep& s)
{
    std::ostringstream out;
    out.precision(17);
    out << "mask,sigma,lower,upper\n";
    for (const auto& r : s.records) {
        out << r.mask << ',';
        bool first = true;
        for (std::size_t i = 0; i < s.size; ++i)
            if ((r.mask >> i) & 1U) {
                out << (first ? "" : "|") << i;
                first = false;
            }
        out << ',' << r.bounds.lower << ',' << r.bounds.upper << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------- analyze

inline Report cmd_analyze(const HSFrame& frame, double tol_parseval = default_parseval_tolerance)
{
    detail::Stopwatch clock;
    Report r;
    r.command = "analyze";
    r.arguments = {{"tol_parseval", tol_parseval}};
    const FrameBounds b = optimal_bounds(frame);
    const Classification cls = classify(b, tol_parseval);
    r.result = {{"dim_h", frame.dim_h()},
                {"dim_k", frame.dim_k()},
                {"count", frame.size()},
                {"bounds", to_json(b)},
                {"class", to_string(cls.kind)}};
    r.result["condition_number"] = detail::number_or_null(condition_number(b));
    r.wall_time = clock.seconds();
    return r;
}

// ---------------------------------------------------------------- certify

/// Parses "poly:p=1[,terms=K]", "exp:c=0.5" or "list:w1,w2,...".
inline DecayWeights parse_weights(std::string_view spec, std::size_t count)
{
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw SpecError("weights: expected 'poly:p=..', 'exp:c=..' or 'list:..'");
    const std::string kind(spec.substr(0, colon));
    const std::string body(spec.substr(colon + 1));
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<double> values;
    std::stringstream ss(body);
    std::string item;
    auto to_double = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw SpecError("weights: '" + s + "' is not a number");
        }
    };
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            values.push_back(to_double(item));
        else
            fields.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    auto field = [&](const std::string& key) -> std::optional<double> {
        for (const auto& [k, v] : fields)
            if (k == key) return to_double(v);
        return std::nullopt;
    };
    if (kind == "poly") {
        const auto p = field("p");
        if (!p) throw SpecError("weights: poly needs p=<value>");
        PolyDecay regime{*p};
        if (const auto t = field("terms")) regime.bracket_terms = static_cast<std::uint64_t>(*t);
        return regime_weights(regime, count);
    }
    if (kind == "exp") {
        const auto c = field("c");
        if (!c) throw SpecError("weights: exp needs c=<value>");
        return regime_weights(ExpDecay{*c}, count);
    }
    if (kind == "list") {
        if (values.size() != count)
            throw DimensionError("weights: " + std::to_string(values.size()) + " weights for " +
                                 std::to_string(count) + " frame elements");
        return DecayWeights::from_weights(values);
    }
    throw SpecError("weights: unknown kind '" + kind + "'");
}

struct CertifyArgs {
    std::optional<std::size_t> n;
    std::optional<double> eps;
    std::string weights = "poly:p=1";
    CertifyTolerances tol;
};

inline Certificate run_certificate(TheoremId id, const HSFrame& f, const HSFrame& g, const CertifyArgs& a)
{
    switch (id) {
    case TheoremId::Finite: return certify_finite(f, g, a.n, a.eps, a.tol);
    case TheoremId::Quadratic: return certify_quadratic(f, g, a.n, a.eps, a.tol);
    case TheoremId::Relative: return certify_relative(f, g, a.tol);
    case TheoremId::Decay:
        require_compatible(f, g, "certify");
        return certify_decay(f, g, parse_weights(a.weights, f.size()), a.eps, a.tol);
    case TheoremId::Parseval: return certify_parseval(f, g, a.tol);
    }
    throw SpecError("unknown theorem");
}

inline json certify_arguments(TheoremId id, const CertifyArgs& a)
{
    json j = {{"theorem", to_string(id)}};
    j["N"] = a.n ? json(*a.n) : json("L");
    j["eps"] = a.eps ? json(*a.eps) : json("auto");
    if (id == TheoremId::Decay) j["weights"] = a.weights;
    return j;
}

/// Embeds the certificate; a rejected certificate or a failed precondition
/// is a valid run with exit code 2.
inline Report cmd_certify(TheoremId id, const HSFrame& f, const HSFrame& g, const CertifyArgs& a = {})
{
    detail::Stopwatch clock;
    Report r;
    r.command = "certify";
    r.arguments = certify_arguments(id, a);
    try {
        const Certificate c = run_certificate(id, f, g, a);
        r.result["certificate"] = to_json(c);
        r.status = c.accepted ? "accepted" : "rejected";
        r.exit = c.accepted ? exit_code::ok : exit_code::rejected;
    } catch (const HypothesisError& e) {
        r.result["hypothesis_error"] = e.what();
        r.status = "rejected";
        r.exit = exit_code::rejected;
    }
    r.wall_time = clock.seconds();
    return r;
}

// ---------------------------------------------------------------- weave

inline Report cmd_weave(const HSFrame& f, const HSFrame& g, const WeavingSpec& spec, HSFrame* woven_out = nullptr)
{
    detail::Stopwatch clock;
    Report r;
    r.command = "weave";
    r.arguments = {{"sigma", spec.indices()}, {"mask", spec.mask()}};
    const HSFrame h = weave(f, g, spec);
    const FrameBounds b = optimal_bounds(h);
    r.result = {{"bounds", to_json(b)}, {"class", to_string(classify(b).kind)}};
    if (woven_out) *woven_out = h;
    r.wall_time = clock.seconds();
    return r;
}

// ---------------------------------------------------------------- brute

struct BruteArgs {
    std::size_t max_size = default_max_weaving_size;
    std::optional<std::size_t> restrict_n;
    unsigned threads = 1;
    std::optional<std::size_t> sample;
    std::uint64_t seed = 0;
    bool records = true;
    std::optional<TheoremId> check;
    CertifyArgs certify;
    double tol_sound = 1e-9;
};

inline Report cmd_brute(const HSFrame& f, const HSFrame& g, const BruteArgs& a, WeavingSweep* sweep_out = nullptr)
{
    detail::Stopwatch clock;
    Report r;
    r.command = "brute";
    r.arguments = {{"max_size", a.max_size}, {"threads", a.threads}};
    r.arguments["restrict_n"] = a.restrict_n ? json(*a.restrict_n) : json(nullptr);
    r.arguments["sample"] = a.sample ? json(*a.sample) : json(nullptr);
    if (a.sample) r.seed = a.seed;

    WeavingSweep sweep;
    if (a.sample) {
        sweep = sample_weavings(f, g, *a.sample, a.seed, a.threads);
    } else {
        SweepOptions so;
        so.max_size = a.max_size;
        so.max_sigma = a.restrict_n;
        so.threads = a.threads;
        sweep = worst_case_bounds(f, g, so);
    }
    r.result["sweep"] = to_json(sweep, a.records);

    if (a.check) {
        r.arguments["check"] = certify_arguments(*a.check, a.certify);
        const Certificate c = run_certificate(*a.check, f, g, a.certify);
        r.result["certificate"] = to_json(c);
        if (!c.accepted) {
            r.status = "rejected";
            r.exit = exit_code::rejected;
        } else {
            SoundnessOptions so;
            so.max_size = a.max_size;
            so.tolerance = a.tol_sound;
            so.threads = a.threads;
            const SoundnessReport s = soundness_check(c, f, g, so);
            r.result["soundness"] = to_json(s);
            r.status = s.pass ? "PASS" : "FAIL";
            r.exit = s.pass ? exit_code::ok : exit_code::rejected;
        }
    }
    if (sweep_out) *sweep_out = std::move(sweep);
    r.wall_time = clock.seconds();
    return r;
}

// ---------------------------------------------------------------- paper-example

/// Synthetic pair with bounds (1, 2) for G and B_F = 2: G is the truncated
/// shift frame and F_i = e^{i theta} G_i with |e^{i theta} - 1| <= deviation.
inline std::pair<HSFrame, HSFrame> finite_example_pair(std::size_t big_m, double deviation)
{
    const HSFrame g = shift_frame(big_m);
    double theta = 2.0 * std::asin(0.5 * deviation);
    auto dev_of = [](double t) { return std::abs(std::polar(1.0, t) - Complex(1.0)); };
    while (dev_of(theta) > deviation) theta = std::nextafter(theta, 0.0);
    return {g.scaled(std::polar(1.0, theta)), g};
}

struct PaperExampleArgs {
    std::size_t truncation = 0;  // 0 = per-example default
    double p = 1.0;
    double c = 0.5;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

namespace detail {

inline json comparison(const std::string& quantity, double paper, double recomputed)
{
    return {{"quantity", quantity}, {"paper", paper}, {"recomputed", recomputed}, {"abs_diff", std::abs(paper - recomputed)}};
}

inline json decay_example(const DecayRegime& regime, std::size_t big_m, std::uint64_t seed, unsigned threads,
                          Report& r)
{
    const HSFrame g = shift_frame(big_m);
    const FrameBounds bg = optimal_bounds(g);
    const double w = regime_weight_sum(regime);
    const double eps = feasible_epsilon(regime, 1.0, 2.0);
    const HSFrame f = decay_perturbation(g, regime, eps, seed);
    const DecayWeights weights = regime_weights(regime, big_m);
    const Certificate cert = certify_decay(f, g, weights);
    json out = {{"truncation", big_m},
                {"weight_sum", w},
                {"feasible_eps", eps},
                {"condition_lhs", decay_condition_lhs(eps, w, 2.0)},
                {"B_F_formula", 2.0 * (2.0 + eps * eps * w)},
                {"B_F_measured", optimal_bounds(f).upper},
                {"G_bounds", to_json(bg)},
                {"certificate", to_json(cert)}};
    if (cert.accepted) {
        SoundnessOptions so;
        so.threads = threads;
        const auto s = soundness_check(cert, f, g, so);
        out["soundness"] = to_json(s);
        r.status = s.pass ? "PASS" : "FAIL";
        r.exit = s.pass ? exit_code::ok : exit_code::rejected;
    } else {
        r.status = "rejected";
        r.exit = exit_code::rejected;
    }
    return out;
}

}  // namespace detail

/// Rebuilds one worked example end-to-end: "finite", "decay-poly",
/// "decay-exp" or "parseval".
inline Report cmd_paper_example(std::string_view name, const PaperExampleArgs& a = {})
{
    detail::Stopwatch clock;
    Report r;
    r.command = "paper-example";
    r.arguments = {{"name", name}};
    json& out = r.result;

    if (name == "finite") {
        const std::size_t big_m = a.truncation ? a.truncation : 6;
        constexpr std::size_t n = 3;
        constexpr double eps = 0.1;
        const double formula_margin = formula::finite_margin(n, eps, 2.0, 2.0);
        const auto [f, g] = finite_example_pair(big_m, eps);
        const Certificate cert = certify_finite(f, g, n, eps);
        const double margin = cert.diagnostics.count("margin") ? cert.diagnostics.at("margin") : NAN;
        out = {{"A_G", 1.0}, {"B_G", 2.0}, {"B_F", 2.0}, {"N", n}, {"eps", eps}, {"truncation", big_m}};
        out["margin_formula"] = formula_margin;
        out["verdict"] = formula_margin < 1.0 ? "accepted" : "rejected";
        out["instance_certificate"] = to_json(cert);
        out["comparisons"] = json::array({detail::comparison("2 N eps max(sqrt B_F, sqrt B_G)", 0.8485, formula_margin),
                                          detail::comparison("instance margin", 0.8485, margin)});
        if (cert.accepted) {
            SoundnessOptions so;
            so.threads = a.threads;
            const auto s = soundness_check(cert, f, g, so);
            out["soundness"] = to_json(s);
            r.status = s.pass ? "PASS" : "FAIL";
            r.exit = s.pass ? exit_code::ok : exit_code::rejected;
        } else {
            r.status = "rejected";
            r.exit = exit_code::rejected;
        }
    } else if (name == "parseval") {
        const std::size_t big_m = a.truncation ? a.truncation : 6;
        const auto [f, g] = parseval_pair(big_m);
        const Certificate cert = certify_parseval(f, g);
        out = {{"truncation", big_m},
               {"F_bounds", to_json(optimal_bounds(f))},
               {"G_bounds", to_json(optimal_bounds(g))},
               {"certificate", to_json(cert)}};
        const double delta = cert.diagnostics.at("delta_min");
        json cmp = json::array({detail::comparison("cross lambda_min", 199.0 / 200.0, cert.diagnostics.at("cross_lambda_min")),
                                detail::comparison("delta", 0.005, delta)});
        if (cert.predicted) {
            cmp.push_back(detail::comparison("A = 1 - 2 sqrt(2 delta)", 0.8, cert.predicted->lower));
            cmp.push_back(detail::comparison("B = 1 + 2 sqrt(2 delta)", 1.2, cert.predicted->upper));
        }
        out["comparisons"] = std::move(cmp);
        if (cert.accepted) {
            SoundnessOptions so;
            so.threads = a.threads;
            const auto s = soundness_check(cert, f, g, so);
            out["soundness"] = to_json(s);
            r.status = s.pass ? "PASS" : "FAIL";
            r.exit = s.pass ? exit_code::ok : exit_code::rejected;
        } else {
            r.status = "rejected";
            r.exit = exit_code::rejected;
        }
    } else if (name == "decay-poly") {
        const std::size_t big_m = a.truncation ? a.truncation : 12;
        r.arguments["p"] = a.p;
        r.seed = a.seed;
        const PolyDecay regime{a.p};
        out = detail::decay_example(regime, big_m, a.seed, a.threads, r);
        const auto bracket = zeta_partial(a.p, regime.bracket_terms);
        out["zeta_bracket"] = {{"partial", bracket.partial}, {"total_upper", bracket.total_upper()}};
        if (a.p == 1.0)
            out["comparisons"] = json::array({detail::comparison("zeta(2) = pi^2/6", std::numbers::pi * std::numbers::pi / 6.0,
                                                                 bracket.total_upper())});
    } else if (name == "decay-exp") {
        const std::size_t big_m = a.truncation ? a.truncation : 12;
        r.arguments["c"] = a.c;
        r.seed = a.seed;
        out = detail::decay_example(ExpDecay{a.c}, big_m, a.seed, a.threads, r);
        const double closed = geometric_weight_sum(a.c);
        out["comparisons"] = json::array(
            {detail::comparison("e^{-2c} / (1 - e^{-2c})", std::exp(-2.0 * a.c) / (1.0 - std::exp(-2.0 * a.c)), closed)});
    } else {
        throw SpecError("paper-example: unknown example '" + std::string(name) +
                        "' (expected finite, decay-poly, decay-exp or parseval)");
    }
    r.wall_time = clock.seconds();
    return r;
}

// ---------------------------------------------------------------- gen

enum class GenMode { Bessel, Frame, Parseval, Perturb };

inline GenMode parse_gen_mode(std::string_view s)
{
    if (s == "bessel") return GenMode::Bessel;
    if (s == "frame") return GenMode::Frame;
    if (s == "parseval") return GenMode::Parseval;
    if (s == "perturb") return GenMode::Perturb;
    throw SpecError("gen: unknown mode '" + std::string(s) + "'");
}

/// "const", "poly:p=1" or "exp:c=0.5" with the given epsilon.
inline PerturbationProfile parse_profile(std::string_view spec, double eps)
{
    if (!(eps > 0.0)) throw SpecError("gen: perturbation epsilon must be positive");
    auto value_after = [&](std::string_view key) {
        const auto pos = spec.find(key);
        if (pos == std::string_view::npos) throw SpecError("gen: profile '" + std::string(spec) + "' lacks " + std::string(key));
        const std::string text(spec.substr(pos + key.size()));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() || !std::isfinite(v))
            throw SpecError("gen: profile '" + std::string(spec) + "' has a malformed " + std::string(key) + " value");
        return v;
    };
    if (spec == "const" || spec == "constant") return ConstantProfile{eps};
    if (spec.starts_with("poly:")) return PolyProfile{eps, value_after("p=")};
    if (spec.starts_with("exp:")) return ExpProfile{eps, value_after("c=")};
    throw SpecError("gen: unknown profile '" + std::string(spec) + "'");
}

struct GenArgs {
    std::uint64_t seed = 0;
    std::size_t dim_h = 2;
    std::size_t dim_k = 2;
    std::size_t count = 4;
    GenMode mode = GenMode::Frame;
    std::optional<HSFrame> base;  // perturb mode
    double eps = 0.0;
    std::string profile = "const";
};

inline HSFrame generate_frame(const GenArgs& a)
{
    Rng rng(a.seed);
    switch (a.mode) {
    case GenMode::Bessel: return random_bessel(a.dim_h, a.dim_k, a.count, rng);
    case GenMode::Frame: return random_frame(a.dim_h, a.dim_k, a.count, rng);
    case GenMode::Parseval: return random_parseval(a.dim_h, a.dim_k, a.count, rng);
    case GenMode::Perturb:
        if (!a.base) throw SpecError("gen: perturb mode needs a base frame");
        return perturb(*a.base, parse_profile(a.profile, a.eps), rng);
    }
    throw SpecError("gen: unknown mode");
}

}  // namespace hsframe
