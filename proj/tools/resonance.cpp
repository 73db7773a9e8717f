#include <CLI11.hpp>

#include <iostream>

#include "resonance/cli.hpp"

using resonance::cli::RunConfig;

namespace {

void add_solver_options(CLI::App* app, RunConfig& c) {
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--tol-path", c.solver.path_tol, "corrector tolerance along paths")->check(CLI::PositiveNumber);
    app->add_option("--tol-final", c.solver.final_tol, "endpoint Newton tolerance")->check(CLI::PositiveNumber);
    app->add_option("--tol-dedup", c.solver.dedup_tol, "relative distance for merging endpoints")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-steps", c.solver.max_steps, "step budget per path");
    app->add_option("--tol-residual", c.residual_tol, "acceptance threshold on the full quadric residual")
        ->check(CLI::PositiveNumber);
    app->add_option("--tol-rank", c.rank_tol, "relative singular value cutoff for numerical rank")
        ->check(CLI::PositiveNumber);
    app->add_option("-o,--output", c.output, "write JSON here instead of stdout");
    app->add_flag("!--no-timing", c.timing, "omit wall_clock_s so output is byte-reproducible");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance varieties of pairs (V, K): Grassmannian sections, duality and P^1 bundle strata"};
    app.set_version_flag("--version", resonance::version);
    app.require_subcommand(1);
    RunConfig c;

    auto* solve = app.add_subcommand("solve", "points of G(2, V) on P(K-perp) when the section is finite");
    solve->add_option("-i,--input", c.input, "PairVK JSON document");
    solve->add_flag("--random", c.random, "draw a random rational pair");
    solve->add_flag("--degenerate", c.degenerate, "with --random: build a pair with a non-transversal point");
    solve->add_option("--tangent-dirs", c.tangent_dirs, "with --degenerate: tangent directions forced into K");
    solve->add_option("-n,--n", c.n, "dim V for --random");
    solve->add_option("--dim-k", c.dim_k, "dim K for --random (default 2(n-2))");
    solve->add_option("--save-pair", c.save_pair, "write the generated pair as JSON");
    add_solver_options(solve, c);

    auto* membership = app.add_subcommand("membership", "decide whether a point lies in R(V, K)");
    membership->add_option("-i,--input", c.input, "PairVK JSON document");
    membership->add_option("--raag", c.raag, "use the path-graph pair on N vertices");
    membership->add_option("--point", c.point, "comma-separated coordinates of a")->required();
    add_solver_options(membership, c);

    auto* duality = app.add_subcommand("duality", "compare transversality of (V, K) and its dual pair");
    duality->add_option("--tangent-dirs", c.tangent_dirs, "with --degenerate: tangent directions forced into K");
    duality->add_option("-n,--n", c.n, "dim V (4, 5 or 6)")->required();
    duality->add_option("--dim-k", c.dim_k, "dim K")->required();
    duality->add_option("--trials", c.trials, "number of random pairs");
    duality->add_flag("--degenerate", c.degenerate, "use constructed non-transversal pairs");
    add_solver_options(duality, c);

    auto* p1 = app.add_subcommand("p1", "resonance of sections of O(a) + O(b) on P^1");
    p1->require_subcommand(1);
    p1->add_option("-a,--a", c.a, "first degree")->required();
    p1->add_option("-b,--b", c.b, "second degree")->required();
    p1->add_option("--trials", c.trials, "samples per stratum");
    p1->add_option("--count", c.count, "points for crosscheck");
    add_solver_options(p1, c);
    const std::pair<const char*, const char*> p1_subs[] = {
        {"strata", "sample each gcd stratum and confirm the samples land in it"},
        {"crosscheck", "compare the rank test with the gcd test on random sections"},
        {"dims", "numerical dimension of each stratum cone"}};
    for (const auto& [name, help] : p1_subs) {
        auto* sub = p1->add_subcommand(name, help)->fallthrough();
        sub->callback([&c, name] { c.subcommand = name; });
    }

    auto* raag = app.add_subcommand("raag", "resonance of the path-graph pair against coordinate hyperplanes");
    raag->add_option("-n,--n", c.n, "number of vertices (>= 4)")->required();
    raag->add_option("--count", c.count, "random points to classify");
    add_solver_options(raag, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return resonance::cli::Usage;
    }
    c.command = app.get_subcommands().front()->get_name();
    return resonance::cli::run(c);
}
