// rls: command-line front end for the RLS k-coloring solver.
//
//   rls solve     <instance.col>... --k K        fixed-k runs
//   rls chromatic <instance.col>... [--k-start K] decreasing-k runs
//   rls compare   <instance.col>... --k K        all four variants side by side
//
// Exit codes: 0 all runs completed, 1 bad flags, 2 unparsable instance,
// 3 I/O failure.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rls/harness.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kIo = 3 };

struct Options {
    std::vector<std::string> instances;
    std::optional<int> k;
    std::optional<int> k_start;
    int runs = 20;
    int jobs = 1;
    std::uint64_t seed = 1;
    std::string variant = "full";
    std::string strategy = "hybrid";
    rls::LearningParams learning;
    std::uint64_t imax = 1'000'000;
    std::optional<double> time_limit;
    std::string out = "rls-results";
    bool dump_matrix = false;
};

const std::map<std::string, rls::Variant> kVariants{{"full", rls::Variant::full},
                                                     {"rls0", rls::Variant::no_learning},
                                                     {"rls1", rls::Variant::no_smoothing},
                                                     {"rls2", rls::Variant::roulette}};

const std::map<std::string, rls::Selection> kStrategies{{"hybrid", rls::Selection::hybrid},
                                                         {"random", rls::Selection::random},
                                                         {"greedy", rls::Selection::greedy},
                                                         {"roulette", rls::Selection::roulette}};

struct Flags {
    CLI::Option* variant = nullptr;
    CLI::Option* strategy = nullptr;
};

Flags add_common(CLI::App& cmd, Options& o, bool with_variant) {
    Flags f;
    cmd.add_option("instances", o.instances, "DIMACS .col instance file(s)")->required();
    cmd.add_option("--runs", o.runs, "independent runs per instance")->capture_default_str();
    cmd.add_option("--seed", o.seed, "base seed; run r uses seed + r")->envname("RLS_SEED")->capture_default_str();
    if (with_variant)
        f.variant = cmd.add_option("--variant", o.variant, "full | rls0 | rls1 | rls2")
                        ->check(CLI::IsMember(kVariants))
                        ->capture_default_str();
    f.strategy = cmd.add_option("--strategy", o.strategy, "hybrid | random | greedy | roulette")
                     ->check(CLI::IsMember(kStrategies))
                     ->capture_default_str();
    cmd.add_option("--omega", o.learning.noise, "noise probability")->capture_default_str();
    cmd.add_option("--alpha", o.learning.reward, "reward factor")->capture_default_str();
    cmd.add_option("--beta", o.learning.penalty, "penalization factor")->capture_default_str();
    cmd.add_option("--gamma", o.learning.compensation, "compensation factor")->capture_default_str();
    cmd.add_option("--rho", o.learning.smoothing, "smoothing coefficient")->capture_default_str();
    cmd.add_option("--p0", o.learning.threshold, "smoothing threshold")->capture_default_str();
    cmd.add_option("--imax", o.imax, "generations without improvement before a run stops")->capture_default_str();
    cmd.add_option("--time-limit", o.time_limit, "per-run limit in seconds");
    cmd.add_option("--jobs", o.jobs, "runs executed in parallel")->capture_default_str();
    cmd.add_option("--out", o.out, "output directory")->capture_default_str();
    cmd.add_flag("--dump-matrix", o.dump_matrix, "write each run's final probability matrix");
    return f;
}

rls::harness::ExperimentSpec to_spec(const Options& o, const Flags& f) {
    using rls::harness::UsageError;
    const rls::Variant variant = kVariants.at(o.variant);
    const rls::Selection strategy = kStrategies.at(o.strategy);
    if (f.strategy && f.strategy->count() > 0) {
        if (variant == rls::Variant::no_learning)
            throw UsageError("--strategy has no effect with --variant rls0");
        if (variant == rls::Variant::roulette && strategy != rls::Selection::roulette)
            throw UsageError("--variant rls2 always uses roulette selection");
    }

    rls::harness::ExperimentSpec spec;
    for (const auto& p : o.instances) spec.instances.emplace_back(p);
    spec.k = o.k;
    spec.k_start = o.k_start;
    spec.runs = o.runs;
    spec.jobs = o.jobs;
    spec.out_dir = o.out;
    spec.dump_matrix = o.dump_matrix;
    spec.config.learning = o.learning;
    spec.config.selection = strategy;
    spec.config.variant = variant;
    spec.config.max_stall = o.imax;
    spec.config.time_limit = o.time_limit;
    spec.config.seed = o.seed;
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reinforcement-learning local search for graph k-coloring"};
    app.require_subcommand(1);

    Options solve_opts, chromatic_opts, compare_opts;

    auto* solve = app.add_subcommand("solve", "search for a legal k-coloring, repeated --runs times");
    auto solve_flags = add_common(*solve, solve_opts, true);
    solve->add_option("--k", solve_opts.k, "number of colors")->required();

    auto* chromatic = app.add_subcommand("chromatic", "decrease k while legal colorings are found");
    auto chromatic_flags = add_common(*chromatic, chromatic_opts, true);
    chromatic->add_option("--k-start", chromatic_opts.k_start, "first k tried (default: max degree + 1)");

    auto* compare = app.add_subcommand("compare", "run full, rls0, rls1 and rls2 under identical seeds");
    auto compare_flags = add_common(*compare, compare_opts, false);
    compare->add_option("--k", compare_opts.k, "number of colors")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (solve->parsed()) {
            rls::harness::run_experiment(to_spec(solve_opts, solve_flags), std::cout);
        } else if (chromatic->parsed()) {
            auto spec = to_spec(chromatic_opts, chromatic_flags);
            spec.descending = true;
            rls::harness::run_experiment(spec, std::cout);
        } else {
            rls::harness::compare_variants(to_spec(compare_opts, compare_flags), std::cout);
        }
    } catch (const rls::harness::UsageError& e) {
        std::cerr << "rls: " << e.what() << '\n';
        return kUsage;
    } catch (const rls::ParseError& e) {
        std::cerr << "rls: parse error: " << e.what() << '\n';
        return kParse;
    } catch (const rls::IoError& e) {
        std::cerr << "rls: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "rls: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}
