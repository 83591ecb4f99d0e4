// copcal: command-line surface for the copula calculus library.
//
// Subcommands cover descriptor validation, Sobolev norms and distances,
// Markov products, shuffles, diagonalization, shuffle approximation, the
// self-similar generator, the dependence measures, and the empirical
// pipeline.  All randomness flows from --seed; outputs are byte-identical
// across runs with identical flags.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "copcal/dependence.hpp"
#include "copcal/descriptor.hpp"
#include "copcal/empirical.hpp"
#include "copcal/io.hpp"
#include "copcal/norms.hpp"
#include "copcal/shuffle_engine.hpp"
#include "copcal/star.hpp"

namespace {

using namespace copcal;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

IntervalUnion parse_interval_set(const std::string& text) {
    // "a1,b1;a2,b2;..."
    std::vector<Interval> parts;
    std::istringstream in(text);
    std::string chunk;
    while (std::getline(in, chunk, ';')) {
        if (chunk.empty()) continue;
        std::istringstream cs(chunk);
        double a, b;
        char comma;
        if (!(cs >> a >> comma >> b) || comma != ',')
            throw std::runtime_error("cannot parse interval '" + chunk +
                                     "' (expected a,b)");
        parts.push_back({a, b});
    }
    return IntervalUnion(std::move(parts));
}

void emit(const std::string& out_path, const std::string& content) {
    if (!out_path.empty()) write_text_file(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"copula calculus: *-products, Sobolev and *-norms, shuffles, "
                 "and the dependence measures omega / omega*"};
    app.require_subcommand(1);

    int grid_n = 256;
    std::uint64_t seed = 0;
    app.add_option("--grid", grid_n, "grid resolution for discretized paths")
        ->capture_default_str();
    app.add_option("--seed", seed, "seed for all randomized searches")
        ->capture_default_str();

    std::string desc_arg, desc_b_arg, out_path, by_arg, side_arg = "left";
    std::string set_arg, samples_path;
    int depth = 6, bins = 16, level = 0, budget = 64;

    auto* c_validate = app.add_subcommand("validate", "check descriptor invariants");
    c_validate->add_option("descriptor", desc_arg)->required();

    auto* c_norm = app.add_subcommand("norm", "squared Sobolev norm");
    c_norm->add_option("descriptor", desc_arg)->required();
    c_norm->add_option("-o,--out", out_path, "write NormReport JSON");

    auto* c_dist = app.add_subcommand("dist", "squared Sobolev distance");
    c_dist->add_option("a", desc_arg)->required();
    c_dist->add_option("b", desc_b_arg)->required();

    auto* c_star = app.add_subcommand("star", "Markov product a*b");
    c_star->add_option("a", desc_arg)->required();
    c_star->add_option("b", desc_b_arg)->required();
    c_star->add_option("-o,--out", out_path, "write result descriptor");

    auto* c_transpose = app.add_subcommand("transpose", "coordinate swap");
    c_transpose->add_option("descriptor", desc_arg)->required();
    c_transpose->add_option("-o,--out", out_path, "write result descriptor");

    auto* c_shuffle_of =
        app.add_subcommand("shuffle-of", "T-shuffle star(shuffle, d) or star(d, shuffle)");
    c_shuffle_of->add_option("descriptor", desc_arg)->required();
    c_shuffle_of->add_option("--by", by_arg, "shuffle descriptor")->required();
    c_shuffle_of->add_option("--side", side_arg, "left|right")
        ->capture_default_str();
    c_shuffle_of->add_option("-o,--out", out_path, "write result descriptor");

    auto* c_sorting =
        app.add_subcommand("sorting-shuffle", "s_A for an interval union A");
    c_sorting->add_option("--set", set_arg, "intervals \"a1,b1;a2,b2\"")
        ->required();
    c_sorting->add_option("-o,--out", out_path, "write shuffle descriptor");

    bool diag_right = false;
    auto* c_diag = app.add_subcommand("diagonalize",
                                      "left diagonalization sequence B_n");
    c_diag->add_option("descriptor", desc_arg)->required();
    c_diag->add_option("--depth", depth)->capture_default_str();
    c_diag->add_flag("--right", diag_right,
                     "right diagonalization (for right-invertible inputs)");
    c_diag->add_option("-o,--out", out_path, "write trace CSV");

    auto* c_approx = app.add_subcommand(
        "approx-shuffles", "straight shuffle-of-Min approximation");
    c_approx->add_option("descriptor", desc_arg)->required();
    c_approx->add_option("--bins", bins)->capture_default_str();
    c_approx->add_option("-o,--out", out_path, "write shuffle descriptor");

    auto* c_selfsim =
        app.add_subcommand("selfsimilar", "dyadic self-similar shuffle S_L");
    c_selfsim->add_option("--level", level)->required();
    c_selfsim->add_option("-o,--out", out_path, "write shuffle descriptor");

    auto* c_omega = app.add_subcommand("omega", "sqrt(3)||C - Pi||");
    c_omega->add_option("descriptor", desc_arg)->required();

    auto* c_omega_star = app.add_subcommand(
        "omega-star", "certified lower bound for sqrt(3)||C - Pi||_*");
    c_omega_star->add_option("descriptor", desc_arg)->required();
    c_omega_star->add_option("--budget", budget)->capture_default_str();
    c_omega_star->add_option("--depth", depth)->capture_default_str();
    c_omega_star->add_option("-o,--out", out_path, "write DependenceReport JSON");

    auto* c_empirical = app.add_subcommand(
        "empirical", "checkerboard empirical copula from samples");
    c_empirical->add_option("samples", samples_path)->required();
    c_empirical->add_option("--bins", bins)->capture_default_str();
    c_empirical->add_option("-o,--out", out_path, "write grid descriptor");

    auto* c_support =
        app.add_subcommand("support", "support polyline of a shuffle");
    c_support->add_option("descriptor", desc_arg)->required();
    c_support->add_option("-o,--out", out_path, "write polyline CSV");

    for (auto* sub : app.get_subcommands({}))
        sub->fallthrough();  // --grid/--seed may follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_validate->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const ValidationReport rep = validate(d);
            std::cout << validation_report_to_json(rep) << "\n";
            std::cout << (rep.ok ? "valid" : "invalid") << " " << d.kind()
                      << " descriptor\n";
            return rep.ok ? 0 : 1;
        }
        if (c_norm->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const NormReport rep = sobolev_norm_sq(d, grid_n);
            emit(out_path, norm_report_to_json(rep) + "\n");
            std::cout << "norm_sq " << fmt(rep.norm_sq) << " ("
                      << rep.scheme_name() << ")\n";
            return 0;
        }
        if (c_dist->parsed()) {
            const CopulaDescriptor a = read_descriptor(desc_arg);
            const CopulaDescriptor b = read_descriptor(desc_b_arg);
            std::cout << "dist_sq " << fmt(sobolev_dist_sq(a, b, grid_n))
                      << "\n";
            return 0;
        }
        if (c_star->parsed()) {
            const CopulaDescriptor a = read_descriptor(desc_arg);
            const CopulaDescriptor b = read_descriptor(desc_b_arg);
            const StarResult r = star(a, b, grid_n);
            emit(out_path, descriptor_to_json(r.copula) + "\n");
            std::cout << "star result " << r.copula.kind() << " ("
                      << (r.exact ? "exact" : "grid(" + std::to_string(r.grid_n) + ")")
                      << "; " << r.provenance << ")\n";
            return 0;
        }
        if (c_transpose->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const CopulaDescriptor t = transpose(d);
            emit(out_path, descriptor_to_json(t) + "\n");
            std::cout << "transposed " << d.kind() << "\n";
            return 0;
        }
        if (c_shuffle_of->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const CopulaDescriptor by = read_descriptor(by_arg);
            const auto s = by.as_exact_shuffle();
            if (!s) throw std::runtime_error("--by must be a shuffle descriptor");
            const Side side = side_arg == "right" ? Side::Right : Side::Left;
            const StarResult r = shuffle_of(d, *s, side, grid_n);
            emit(out_path, descriptor_to_json(r.copula) + "\n");
            std::cout << "shuffle-of result " << r.copula.kind() << " ("
                      << (r.exact ? "exact" : "grid(" + std::to_string(r.grid_n) + ")")
                      << ")\n";
            return 0;
        }
        if (c_sorting->parsed()) {
            const IntervalExchange s = sorting_shuffle(parse_interval_set(set_arg));
            emit(out_path,
                 descriptor_to_json(CopulaDescriptor::shuffle(s)) + "\n");
            std::cout << "sorting shuffle with " << s.piece_count()
                      << " pieces\n";
            return 0;
        }
        if (c_diag->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const DiagonalizationTrace t =
                diag_right ? right_diagonalize(d, depth, grid_n)
                           : diagonalize(d, depth, grid_n);
            emit(out_path, trace_to_csv(t));
            std::cout << "diagonalize depth " << t.steps.size() << ": norm_sq "
                      << fmt(t.initial_norm_sq) << " -> "
                      << fmt(t.steps.empty() ? t.initial_norm_sq
                                             : t.steps.back().norm_sq_after)
                      << "\n";
            return 0;
        }
        if (c_approx->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const ShuffleApprox a = approx_by_shuffles(d, bins, grid_n);
            emit(out_path,
                 descriptor_to_json(CopulaDescriptor::shuffle(a.shuffle)) + "\n");
            std::cout << "approx with " << bins << " bins: dist_sq "
                      << fmt(a.dist_sq)
                      << (a.extracted_from_grid ? " (cell-argmax extraction)"
                                                : " (certified bound)")
                      << "\n";
            return 0;
        }
        if (c_selfsim->parsed()) {
            const IntervalExchange s = selfsimilar(level);
            emit(out_path,
                 descriptor_to_json(CopulaDescriptor::shuffle(s)) + "\n");
            std::cout << "selfsimilar level " << level << ": "
                      << s.piece_count() << " pieces\n";
            return 0;
        }
        if (c_omega->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            std::cout << "omega " << fmt(omega(d, grid_n)) << "\n";
            return 0;
        }
        if (c_omega_star->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const DependenceReport rep =
                omega_star_lower(d, budget, seed, grid_n, depth);
            emit(out_path, dependence_report_to_json(rep) + "\n");
            std::cout << "omega " << fmt(rep.omega) << " omega_star_lb "
                      << fmt(rep.omega_star_lb) << " (budget " << budget
                      << ", depth " << depth << ", seed " << seed << ")\n";
            return 0;
        }
        if (c_empirical->parsed()) {
            const SamplePairs s = read_samples_csv(samples_path);
            const EmpiricalGrid e = checkerboard(s, bins);
            const CopulaDescriptor d = CopulaDescriptor::grid(e.grid);
            emit(out_path, descriptor_to_json(d) + "\n");
            std::cout << "empirical checkerboard " << bins << "x" << bins
                      << " from " << s.size() << " samples (" << e.sweeps
                      << " rescaling sweeps"
                      << (e.ties_broken ? ", ties broken by input order" : "")
                      << "); omega " << fmt(omega(d, bins)) << "\n";
            return 0;
        }
        if (c_support->parsed()) {
            const CopulaDescriptor d = read_descriptor(desc_arg);
            const auto s = d.as_exact_shuffle();
            if (!s)
                throw std::runtime_error(
                    "support: descriptor must be a shuffle");
            emit(out_path, polyline_to_csv(support_polyline(*s)));
            std::cout << "support polyline with " << s->piece_count()
                      << " segments\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
