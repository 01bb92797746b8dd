// hsframe command-line tool: analyze, certify, weave, brute, paper-example, gen.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsframe/hsframe.hpp"

namespace {

using namespace hsframe;

void emit(const Report& r)
{
    std::cout << r.to_json().dump(2) << '\n';
}

std::vector<std::size_t> parse_index_list(const std::string& s)
{
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(static_cast<std::size_t>(std::stoull(item)));
    return out;
}

struct CertifyFlags {
    std::optional<std::size_t> n;
    std::optional<double> eps;
    std::string weights = "poly:p=1";
    double tol_parseval = default_parseval_tolerance;
    double tol_psd = CertifyTolerances{}.frame;

    void add_to(CLI::App* app)
    {
        app->add_option("--N", n, "cardinality cap |sigma| <= N (default: L)");
        app->add_option("--eps", eps, "perturbation size (default: measured)");
        app->add_option("--weights", weights, "decay weights: poly:p=..[,terms=..] | exp:c=.. | list:w1,w2,..");
    }

    CertifyArgs args() const
    {
        CertifyArgs a;
        a.n = n;
        a.eps = eps;
        a.weights = weights;
        a.tol.parseval = tol_parseval;
        a.tol.frame = tol_psd;
        return a;
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hilbert-Schmidt frame bounds, weavings and perturbation certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(tool_version));

    std::uint64_t seed = 0;
    unsigned threads = 1;
    double tol_sound = 1e-9;
    CertifyFlags cf;
    app.add_option("--seed", seed, "random seed (HSFRAME_SEED overrides)");
    app.add_option("--tol-parseval", cf.tol_parseval, "Parseval classification tolerance");
    app.add_option("--tol-psd", cf.tol_psd, "A_G must exceed this for G to count as a frame");
    app.add_option("--tol-sound", tol_sound, "slack allowed when checking predicted bounds");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "optimal bounds and classification of a frame file");
    std::string frame_path;
    analyze->add_option("frame", frame_path, "frame file")->required();

    // certify
    auto* certify = app.add_subcommand("certify", "check one stability theorem on a pair (F, G)");
    std::string theorem, f_path, g_path;
    certify->add_option("theorem", theorem, "finite | quadratic | relative | decay | parseval")->required();
    certify->add_option("F", f_path, "perturbed frame file")->required();
    certify->add_option("G", g_path, "reference frame file")->required();
    cf.add_to(certify);

    // weave
    auto* weave_cmd = app.add_subcommand("weave", "build the weaving F on sigma, G elsewhere");
    std::string sigma_list, out_path;
    weave_cmd->add_option("F", f_path)->required();
    weave_cmd->add_option("G", g_path)->required();
    weave_cmd->add_option("--sigma", sigma_list, "comma-separated 0-based indices taken from F");
    weave_cmd->add_option("--out", out_path, "write the woven frame here");

    // brute
    auto* brute = app.add_subcommand("brute", "exhaustive weaving sweep");
    BruteArgs ba;
    std::optional<std::string> check;
    bool csv = false;
    bool no_records = false;
    std::optional<std::size_t> sample;
    brute->add_option("F", f_path)->required();
    brute->add_option("G", g_path)->required();
    brute->add_option("--max-size", ba.max_size, "largest L swept exhaustively");
    brute->add_option("--restrict-N", ba.restrict_n, "only weavings with |sigma| <= N");
    brute->add_option("--parallel", threads, "worker threads");
    brute->add_option("--sample", sample, "draw this many random subsets instead (non-exhaustive)");
    brute->add_option("--check", check, "validate this theorem's certificate against the sweep");
    brute->add_flag("--csv", csv, "print the sweep as CSV");
    brute->add_flag("--no-records", no_records, "omit per-weaving records from the report");
    cf.add_to(brute);

    // paper-example
    auto* example = app.add_subcommand("paper-example", "reproduce a worked example");
    std::string example_name;
    PaperExampleArgs pa;
    example->add_option("name", example_name, "finite | decay-poly | decay-exp | parseval")->required();
    example->add_option("--M", pa.truncation, "truncation");
    example->add_option("--p", pa.p, "polynomial decay exponent");
    example->add_option("--c", pa.c, "exponential decay rate");
    example->add_option("--parallel", threads, "worker threads");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded random frame file");
    GenArgs ga;
    std::string mode = "frame";
    std::string base_path;
    gen->add_option("--dim-h", ga.dim_h)->required();
    gen->add_option("--dim-k", ga.dim_k)->required();
    gen->add_option("--count", ga.count, "number of elements");
    gen->add_option("--mode", mode, "bessel | frame | parseval | perturb");
    gen->add_option("--base", base_path, "base frame for perturb mode");
    gen->add_option("--eps", ga.eps, "perturbation size for perturb mode");
    gen->add_option("--profile", ga.profile, "const | poly:p=.. | exp:c=..");
    gen->add_option("--out", out_path, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);
    if (const char* env = std::getenv("HSFRAME_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: HSFRAME_SEED is not an unsigned integer\n";
            return exit_code::error;
        }
    }

    try {
        Report report;
        if (*analyze) {
            report = cmd_analyze(read_frame_file(frame_path), cf.tol_parseval);
        } else if (*certify) {
            report = cmd_certify(parse_theorem_id(theorem), read_frame_file(f_path), read_frame_file(g_path), cf.args());
        } else if (*weave_cmd) {
            const HSFrame f = read_frame_file(f_path);
            const HSFrame g = read_frame_file(g_path);
            HSFrame woven = g;
            report = cmd_weave(f, g, WeavingSpec::from_indices(f.size(), parse_index_list(sigma_list)), &woven);
            if (!out_path.empty()) {
                write_frame_file(out_path, woven);
                report.result["out"] = out_path;
            }
        } else if (*brute) {
            ba.threads = threads;
            ba.sample = sample;
            ba.seed = seed;
            ba.records = !no_records;
            ba.tol_sound = tol_sound;
            ba.certify = cf.args();
            if (check) ba.check = parse_theorem_id(*check);
            WeavingSweep sweep;
            report = cmd_brute(read_frame_file(f_path), read_frame_file(g_path), ba, &sweep);
            if (csv) {
                std::cout << sweep_csv(sweep);
                return report.exit;
            }
        } else if (*example) {
            pa.seed = seed == 0 ? pa.seed : seed;
            pa.threads = threads;
            report = cmd_paper_example(example_name, pa);
        } else if (*gen) {
            ga.seed = seed;
            ga.mode = parse_gen_mode(mode);
            if (!base_path.empty()) ga.base = read_frame_file(base_path);
            const HSFrame frame = generate_frame(ga);
            if (out_path.empty()) {
                std::cout << serialize_frame(frame);
                return exit_code::ok;
            }
            write_frame_file(out_path, frame);
            report.command = "gen";
            report.seed = seed;
            // perturb mode takes its shape from the base, so report what was written
            report.arguments = {{"mode", mode}, {"dim_h", frame.dim_h()}, {"dim_k", frame.dim_k()},
                                {"count", frame.size()}};
            if (ga.base) {
                report.arguments["base"] = base_path;
                report.arguments["eps"] = ga.eps;
                report.arguments["profile"] = ga.profile;
            }
            report.result = {{"out", out_path}};
        }
        emit(report);
        return report.exit;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis error: " << e.what() << '\n';
        return exit_code::rejected;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::error;
    }
}
