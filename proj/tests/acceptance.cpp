// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Criterion ids given on the command line restrict the run to those.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fuzz_instances.hpp"
#include "hsframe/hsframe.hpp"

namespace {

using namespace hsframe;

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
};

// Checks accumulate into one outcome; the first failure message is kept.
class Checks {
public:
    void expect(bool cond, const std::string& what)
    {
        if (!cond && ok_) {
            ok_ = false;
            first_ = what;
        }
    }
    Outcome done(std::string summary) const { return {ok_, ok_ ? std::move(summary) : first_}; }

private:
    bool ok_ = true;
    std::string first_;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome finite_example()
{
    Checks c;
    const auto r = cmd_paper_example("finite");
    const double margin = r.result["margin_formula"].get<double>();
    c.expect(std::abs(margin - 2.0 * 3.0 * 0.1 * std::sqrt(2.0)) <= 1e-15, "margin is not 2*3*0.1*sqrt(2)");
    c.expect(std::abs(margin - 0.8485) <= 5e-5, fmt("margin %.17g vs 0.8485", margin));
    c.expect(r.result["verdict"] == "accepted", "verdict is not accepted");
    c.expect(margin < 1.0, "margin not below A_G = 1");
    c.expect(r.result["instance_certificate"]["accepted"] == true, "instance certificate rejected");
    c.expect(r.status == "PASS", "instance soundness sweep did not pass");
    return c.done(fmt("margin=%.17g |diff|=%.2e verdict=accepted", margin, std::abs(margin - 0.8485)));
}

Outcome parseval_example()
{
    Checks c;
    const auto [f, g] = parseval_pair(6);
    const auto cert = certify_parseval(f, g);
    c.expect(cert.accepted, "certificate rejected");
    const double delta = cert.diagnostics.at("delta_min");
    c.expect(std::abs(delta - 0.005) <= 1e-12, fmt("delta %.17g", delta));
    if (!cert.predicted) return c.done("");
    c.expect(std::abs(cert.predicted->lower - 0.8) <= 1e-12, fmt("A = %.17g", cert.predicted->lower));
    c.expect(std::abs(cert.predicted->upper - 1.2) <= 1e-12, fmt("B = %.17g", cert.predicted->upper));
    const auto sweep = worst_case_bounds(f, g);
    c.expect(sweep.records.size() == 64, "sweep is not 64 weavings");
    c.expect(sweep.worst_lower >= 0.8 - 1e-9, fmt("worst lower %.17g", sweep.worst_lower));
    c.expect(sweep.worst_upper <= 1.2 + 1e-9, fmt("worst upper %.17g", sweep.worst_upper));
    return c.done(fmt("delta=%.17g predicted=(%.17g, %.17g) worst=(%.6f, %.6f) over %zu weavings", delta,
                      cert.predicted->lower, cert.predicted->upper, sweep.worst_lower, sweep.worst_upper,
                      sweep.records.size()));
}

Outcome shift_bounds()
{
    Checks c;
    double worst = 0.0;
    for (std::size_t big_m : {2U, 4U, 8U, 16U}) {
        const auto b = optimal_bounds(shift_frame(big_m));
        const double err = std::max(std::abs(b.lower - 1.0), std::abs(b.upper - 2.0));
        worst = std::max(worst, err);
        c.expect(err <= 1e-12, fmt("M=%zu bounds (%.17g, %.17g)", big_m, b.lower, b.upper));
    }
    return c.done(fmt("M in {2,4,8,16}: max |error| = %.2e", worst));
}

Outcome decay_pipeline()
{
    Checks c;
    std::ostringstream summary;
    for (const DecayRegime& regime : {DecayRegime{PolyDecay{1.0}}, DecayRegime{ExpDecay{0.5}}}) {
        const char* label = std::holds_alternative<PolyDecay>(regime) ? "p=1" : "c=0.5";
        const double eps = feasible_epsilon(regime);
        c.expect(eps > 0.0, std::string(label) + ": feasible eps not positive");
        const HSFrame g = shift_frame(12);
        const HSFrame f = decay_perturbation(g, regime, eps, 1);
        const auto weights = regime_weights(regime, 12);
        const auto devs = pairwise_deviations(f, g);
        for (std::size_t i = 0; i < devs.size(); ++i)
            c.expect(std::abs(devs[i] - eps / weights.weights()[i]) <= 1e-14,
                     fmt("%s: |E_%zu| = %.17g, expected eps/w_i", label, i, devs[i]));
        const auto cert = certify_decay(f, g, weights, eps);
        c.expect(cert.accepted, std::string(label) + ": certify_decay rejected");
        if (!cert.accepted) continue;
        SoundnessOptions so;
        so.threads = 4;
        const auto s = soundness_check(cert, f, g, so);
        c.expect(s.checked == 4096, std::string(label) + ": sweep is not 4096 weavings");
        c.expect(s.pass && s.violations == 0, fmt("%s: %zu violations", label, s.violations));
        summary << label << ": eps=" << eps << " checked=" << s.checked << " violations=" << s.violations << "; ";
    }
    return c.done(summary.str());
}

Outcome soundness_fuzz()
{
    Checks c;
    std::ostringstream summary;
    for (auto id : {TheoremId::Finite, TheoremId::Quadratic, TheoremId::Relative, TheoremId::Decay,
                    TheoremId::Parseval}) {
        std::size_t accepted = 0, weavings = 0;
        double min_slack = std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 200; ++k) {
            const std::uint64_t seed = 0x5eed0000ULL + 1000ULL * static_cast<std::uint64_t>(id) + k;
            const auto inst = fuzz::make(id, seed);
            if (!inst.cert.accepted) continue;
            ++accepted;
            SweepOptions so;
            so.max_sigma = inst.cert.quantifier.max_sigma();
            const auto sweep = worst_case_bounds(inst.f, inst.g, so);
            const FrameBounds& p = *inst.cert.predicted;
            for (const auto& r : sweep.records) {
                const double slack = std::min(r.bounds.lower - p.lower, p.upper - r.bounds.upper);
                min_slack = std::min(min_slack, slack);
                c.expect(slack >= -1e-9, fmt("%s seed %llu mask %llu: slack %.3e", to_string(id),
                                             static_cast<unsigned long long>(seed),
                                             static_cast<unsigned long long>(r.mask), slack));
            }
            weavings += sweep.records.size();
        }
        c.expect(accepted > 0, std::string(to_string(id)) + ": no accepted instance among 200");
        summary << to_string(id) << " " << accepted << "/200 accepted, " << weavings
                << " weavings, min slack " << fmt("%.3e", min_slack) << "; ";
    }
    return c.done(summary.str());
}

Outcome identity_suite()
{
    Checks c;
    Rng rng(20240601);
    std::uniform_int_distribution<std::size_t> small(1, 5), big(1, 6);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    double e_tensor = 0, e_iso = 0, e_quad = 0, e_scale = 0;
    for (int t = 0; t < 1000; ++t) {
        // HS tensor identity and rank-one norm, 1e-12
        const std::size_t m = small(rng);
        const CVector x = random_cvector(m, rng), y = random_cvector(m, rng);
        const CVector u = random_cvector(m, rng), v = random_cvector(m, rng);
        const Complex lhs = hs_inner(rank_one(x, y), rank_one(u, v));
        const Complex rhs = inner(x, u) * inner(v, y);
        const double et = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        const double en = std::abs(hs_norm(rank_one(x, y)) - x.norm() * y.norm()) / std::max(1.0, x.norm() * y.norm());
        e_tensor = std::max({e_tensor, et, en});
        c.expect(et <= 1e-12 && en <= 1e-12, fmt("tensor identity trial %d: %.3e / %.3e", t, et, en));

        // vectorization isometry, 1e-12 relative
        const HSMap map = random_map(small(rng), small(rng), rng);
        const CVector z = random_cvector(map.dim_h(), rng);
        const double a = hs_norm(hsframe::apply(map, z)), b = (map.flattened() * z).norm();
        const double ei = std::abs(a - b) / b;
        e_iso = std::max(e_iso, ei);
        c.expect(ei <= 1e-12, fmt("isometry trial %d: %.3e", t, ei));

        // quadratic-form identity, 1e-10 relative
        const std::size_t n = small(rng), k = std::min<std::size_t>(small(rng), 4);
        const HSFrame f = random_bessel(n, k, big(rng), rng);
        const CVector w = random_cvector(n, rng);
        const double s = frame_sum(f, w);
        const double q = inner(frame_operator(f) * w, w).real();
        const double eq = std::abs(s - q) / s;
        e_quad = std::max(e_quad, eq);
        c.expect(eq <= 1e-10, fmt("quadratic form trial %d: %.3e", t, eq));

        // scaling covariance, 1e-12 relative
        const HSFrame g = random_frame(n, k, std::max<std::size_t>(big(rng), (n + k * k - 1) / (k * k)), rng);
        const double cc = scale(rng);
        const auto b0 = optimal_bounds(g), b1 = optimal_bounds(g.scaled(cc));
        const double es = std::max(std::abs(b1.lower - cc * cc * b0.lower) / (cc * cc * b0.lower),
                                   std::abs(b1.upper - cc * cc * b0.upper) / (cc * cc * b0.upper));
        e_scale = std::max(e_scale, es);
        c.expect(es <= 1e-12, fmt("scaling trial %d (c=%.3f): %.3e", t, cc, es));
    }
    return c.done(fmt("1000 trials each; max rel err tensor=%.1e isometry=%.1e quadratic=%.1e scaling=%.1e",
                      e_tensor, e_iso, e_quad, e_scale));
}

Outcome zeta_bracket()
{
    Checks c;
    const auto z = zeta_partial(1.0, 1'000'000);
    const double basel = std::numbers::pi * std::numbers::pi / 6.0;
    c.expect(z.brackets(basel), fmt("[%.17g, %.17g] misses pi^2/6", z.partial, z.total_upper()));
    c.expect(z.tail_upper <= 1e-6, fmt("bracket width %.3e", z.tail_upper));
    const double g = geometric_weight_sum(std::numbers::ln2);
    c.expect(std::abs(g - 1.0 / 3.0) <= 1e-15, fmt("geometric sum %.17g", g));
    return c.done(fmt("[%.15f, %.15f] contains pi^2/6, width %.3e; geometric(ln 2) - 1/3 = %.1e", z.partial,
                      z.total_upper(), z.tail_upper, g - 1.0 / 3.0));
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::vector<Criterion> criteria = {
        {1, "finite-example reproduction", 1.0, finite_example},
        {2, "parseval-example reproduction", 5.0, parseval_example},
        {3, "shift-frame bounds", 1.0, shift_bounds},
        {4, "decay pipeline", 60.0, decay_pipeline},
        {5, "certificate soundness fuzz", 600.0, soundness_fuzz},
        {6, "numerical-identity suite", 30.0, identity_suite},
        {7, "zeta bracket", 5.0, zeta_bracket},
    };
    int failed = 0, ran = 0;
    for (const auto& cr : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), cr.id) == only.end()) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.ok && secs > cr.time_limit_s) {
            o.ok = false;
            o.detail = fmt("took %.2f s, limit %.0f s", secs, cr.time_limit_s);
        }
        failed += o.ok ? 0 : 1;
        std::printf("[%s] criterion %d: %s (%.2f s) -- %s\n", o.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed == 0 && ran > 0 ? 0 : 1;
}
