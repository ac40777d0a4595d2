#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rls/graph.hpp"
#include "rls/learning.hpp"
#include "rls/solver.hpp"

namespace rls::harness {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Invalid flag combination or parameter value.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
    std::vector<fs::path> instances;
    std::optional<int> k;        ///< fixed-k mode
    bool descending = false;     ///< chromatic mode; starts at k_start
    std::optional<int> k_start;  ///< defaults to max degree + 1
    int runs = 20;
    int jobs = 1;
    RlsConfig config;
    fs::path out_dir = "rls-results";
    bool dump_matrix = false;

    void validate() const {
        if (instances.empty()) throw UsageError("no instance given");
        if (runs < 1) throw UsageError("--runs must be at least 1");
        if (jobs < 1) throw UsageError("--jobs must be at least 1");
        if (descending == k.has_value()) throw UsageError("choose exactly one of fixed k or descending mode");
        if (k && *k < 2) throw UsageError("--k must be at least 2");
        if (k_start && *k_start < 2) throw UsageError("--k-start must be at least 2");
        try {
            config.validate(k.value_or(k_start.value_or(2)));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
};

/// Per-instance summary. Averages are over successful runs only.
struct AggregateStats {
    std::string instance;
    std::size_t n = 0;
    std::size_t m = 0;
    int k = 0;  ///< fixed k, or best k in descending mode (0 if none)
    std::string variant;
    int hits = 0;
    int runs = 0;
    double avg_generations = 0.0;
    double avg_descent_moves = 0.0;
    double avg_time = 0.0;
    std::optional<int> best_k;  ///< descending mode only
};

/// Runs `count` independent jobs on up to `jobs` threads; job r writes only
/// slot r of the caller's output.
template <class Fn>
void parallel_runs(int count, int jobs, Fn&& fn) {
    const int workers = std::max(1, std::min(jobs, count));
    if (workers == 1) {
        for (int r = 0; r < count; ++r) fn(r);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int r; (r = next.fetch_add(1)) < count;) {
                try {
                    fn(r);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Run r uses seed base + r.
inline std::vector<RunResult> run_batch(const Graph& g, int k, const RlsConfig& config, int runs, int jobs) {
    std::vector<RunResult> out(runs);
    parallel_runs(runs, jobs, [&](int r) {
        RlsConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(r);
        out[r] = solve_k(g, k, c);
    });
    return out;
}

inline std::vector<ChromaticResult> run_chromatic_batch(const Graph& g, int k_start, const RlsConfig& config,
                                                        int runs, int jobs) {
    std::vector<ChromaticResult> out(runs);
    parallel_runs(runs, jobs, [&](int r) {
        RlsConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(r);
        out[r] = solve_gcp(g, k_start, c);
    });
    return out;
}

inline AggregateStats aggregate(const std::vector<RunResult>& results) {
    AggregateStats s;
    s.runs = static_cast<int>(results.size());
    for (const auto& r : results) {
        s.k = r.k;
        if (!r.legal_found) continue;
        ++s.hits;
        s.avg_generations += static_cast<double>(r.generations);
        s.avg_descent_moves += static_cast<double>(r.descent_moves);
        s.avg_time += r.wall_time;
    }
    if (s.hits > 0) {
        s.avg_generations /= s.hits;
        s.avg_descent_moves /= s.hits;
        s.avg_time /= s.hits;
    }
    return s;
}

/// Best k over all runs; hits counts runs reaching it and the averages use
/// each such run's final successful stage.
inline AggregateStats aggregate(const std::vector<ChromaticResult>& results) {
    AggregateStats s;
    s.runs = static_cast<int>(results.size());
    for (const auto& r : results)
        if (r.best_k && (!s.best_k || *r.best_k < *s.best_k)) s.best_k = r.best_k;
    if (!s.best_k) return s;
    s.k = *s.best_k;
    for (const auto& r : results) {
        if (r.best_k != s.best_k) continue;
        ++s.hits;
        auto stage = std::find_if(r.trail.begin(), r.trail.end(), [&](const RunResult& t) { return t.k == s.k; });
        if (stage == r.trail.end()) continue;  // edgeless fast path
        s.avg_generations += static_cast<double>(stage->generations);
        s.avg_descent_moves += static_cast<double>(stage->descent_moves);
        s.avg_time += stage->wall_time;
    }
    s.avg_generations /= s.hits;
    s.avg_descent_moves /= s.hits;
    s.avg_time /= s.hits;
    return s;
}

inline json params_json(const RlsConfig& c) {
    const auto& p = c.learning;
    return {{"omega", p.noise},     {"alpha", p.reward},    {"beta", p.penalty},
            {"gamma", p.compensation}, {"rho", p.smoothing}, {"p0", p.threshold}};
}

/// 1-based colors, matching DIMACS numbering conventions for output.
inline json coloring_json(const Assignment& a) {
    json out = json::array();
    for (Group g : a.groups()) out.push_back(g + 1);
    return out;
}

inline json run_json(const RunResult& r) {
    return {{"k", r.k},
            {"legal_found", r.legal_found},
            {"best_cost", r.best_cost},
            {"generations", r.generations},
            {"descent_moves", r.descent_moves},
            {"timed_out", r.timed_out},
            {"wall_time_s", r.wall_time}};
}

struct InstanceInfo {
    std::string name;
    std::string path;
    std::size_t n = 0;
    std::size_t m = 0;
};

inline json header_json(const InstanceInfo& inst, const RlsConfig& c, int run) {
    json j{{"schema", kSchemaVersion},
           {"instance", inst.name},
           {"path", inst.path},
           {"n", inst.n},
           {"m", inst.m},
           {"variant", std::string(to_string(c.variant))},
           {"selection", std::string(to_string(c.effective_selection()))},
           {"params", params_json(c)},
           {"imax", c.max_stall},
           {"time_limit_s", c.time_limit ? json(*c.time_limit) : json(nullptr)},
           {"run", run},
           {"seed", c.seed + static_cast<std::uint64_t>(run)}};
    return j;
}

/// Per-run record for fixed-k mode.
inline json run_record(const InstanceInfo& inst, const RlsConfig& c, int run, const RunResult& r) {
    json j = header_json(inst, c, run);
    j.update(run_json(r));
    j["coloring"] = coloring_json(r.best);
    return j;
}

/// Per-run record for descending mode.
inline json chromatic_record(const InstanceInfo& inst, const RlsConfig& c, int run, int k_start,
                             const ChromaticResult& r) {
    json j = header_json(inst, c, run);
    j["k_start"] = k_start;
    j["best_k"] = r.best_k ? json(*r.best_k) : json(nullptr);
    json trail = json::array();
    for (const auto& t : r.trail) trail.push_back(run_json(t));
    j["trail"] = std::move(trail);
    j["coloring"] = r.best_k ? coloring_json(r.witness) : json(nullptr);
    return j;
}

inline json aggregate_json(const AggregateStats& s) {
    return {{"schema", kSchemaVersion},
            {"instance", s.instance},
            {"n", s.n},
            {"m", s.m},
            {"k", s.k},
            {"variant", s.variant},
            {"hits", s.hits},
            {"runs", s.runs},
            {"avg_generations", s.avg_generations},
            {"avg_descent_moves", s.avg_descent_moves},
            {"avg_time_s", s.avg_time},
            {"best_k", s.best_k ? json(*s.best_k) : json(nullptr)}};
}

/// Header `generation,best_cost,elapsed_ms`; one row per improving
/// generation plus the final generation.
inline void write_profile_csv(std::ostream& out, const RunResult& r) {
    out << "generation,best_cost,elapsed_ms\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& p : r.profile) out << p.generation << ',' << p.best_cost << ',' << p.elapsed_ms << '\n';
}

namespace detail {

inline void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    writer(out);
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

inline std::string run_stem(int r) {
    std::ostringstream s;
    s << "run_" << std::setw(3) << std::setfill('0') << r;
    return s.str();
}

inline void write_json(const fs::path& path, const json& j) {
    write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

}  // namespace detail

inline InstanceInfo describe(const fs::path& path, const Graph& g) {
    return {path.stem().string(), path.string(), g.vertex_count(), g.edge_count()};
}

/// Writes per-run JSON, profile CSVs (and matrices if requested) plus an
/// aggregate JSON under `dir`.
inline AggregateStats write_fixed_k(const fs::path& dir, const InstanceInfo& inst, const RlsConfig& config,
                                    const std::vector<RunResult>& results, bool dump_matrix) {
    detail::ensure_dir(dir);
    for (int r = 0; r < static_cast<int>(results.size()); ++r) {
        const auto stem = detail::run_stem(r);
        detail::write_json(dir / (stem + ".json"), run_record(inst, config, r, results[r]));
        detail::write_file(dir / (stem + "_profile.csv"),
                           [&](std::ostream& out) { write_profile_csv(out, results[r]); });
        if (dump_matrix && results[r].matrix)
            detail::write_file(dir / (stem + "_matrix.txt"),
                               [&](std::ostream& out) { write_matrix(out, *results[r].matrix); });
    }
    AggregateStats s = aggregate(results);
    s.instance = inst.name;
    s.n = inst.n;
    s.m = inst.m;
    s.variant = std::string(to_string(config.variant));
    detail::write_json(dir / "aggregate.json", aggregate_json(s));
    return s;
}

inline void print_table_header(std::ostream& out) {
    out << std::left << std::setw(22) << "instance" << std::right << std::setw(6) << "n" << std::setw(8) << "m"
        << std::setw(5) << "k" << std::setw(8) << "variant" << std::setw(9) << "hits" << std::setw(14)
        << "avg_gen" << std::setw(14) << "avg_moves" << std::setw(11) << "avg_time" << '\n';
}

inline void print_table_row(std::ostream& out, const AggregateStats& s) {
    std::ostringstream hits;
    hits << s.hits << '/' << s.runs;
    out << std::left << std::setw(22) << s.instance << std::right << std::setw(6) << s.n << std::setw(8) << s.m
        << std::setw(5) << s.k << std::setw(8) << s.variant << std::setw(9) << hits.str() << std::fixed
        << std::setprecision(1) << std::setw(14) << s.avg_generations << std::setw(14) << s.avg_descent_moves
        << std::setprecision(3) << std::setw(11) << s.avg_time << '\n';
    out.unsetf(std::ios::floatfield);
}

/// Runs the multi-run protocol on every instance and writes results under
/// out_dir/<instance>/{k<k>|chromatic}/<variant>/.
inline std::vector<AggregateStats> run_experiment(const ExperimentSpec& spec, std::ostream& table) {
    spec.validate();
    std::vector<AggregateStats> all;
    print_table_header(table);
    for (const auto& path : spec.instances) {
        const Graph g = load_dimacs(path);
        const InstanceInfo inst = describe(path, g);
        const RlsConfig config = [&] {
            RlsConfig c = spec.config;
            c.keep_matrix = spec.dump_matrix;
            return c;
        }();

        if (spec.k) {
            auto results = run_batch(g, *spec.k, config, spec.runs, spec.jobs);
            fs::path dir = spec.out_dir / inst.name / ("k" + std::to_string(*spec.k)) /
                           std::string(to_string(config.variant));
            all.push_back(write_fixed_k(dir, inst, config, results, spec.dump_matrix));
        } else {
            const int k_start = spec.k_start.value_or(default_k_start(g));
            auto results = run_chromatic_batch(g, k_start, config, spec.runs, spec.jobs);
            fs::path dir = spec.out_dir / inst.name / "chromatic" / std::string(to_string(config.variant));
            detail::ensure_dir(dir);
            for (int r = 0; r < spec.runs; ++r) {
                const auto stem = detail::run_stem(r);
                detail::write_json(dir / (stem + ".json"), chromatic_record(inst, config, r, k_start, results[r]));
                for (const auto& stage : results[r].trail) {
                    detail::write_file(dir / (stem + "_k" + std::to_string(stage.k) + "_profile.csv"),
                                       [&](std::ostream& out) { write_profile_csv(out, stage); });
                    if (spec.dump_matrix && stage.matrix)
                        detail::write_file(dir / (stem + "_k" + std::to_string(stage.k) + "_matrix.txt"),
                                           [&](std::ostream& out) { write_matrix(out, *stage.matrix); });
                }
            }
            AggregateStats s = aggregate(results);
            s.instance = inst.name;
            s.n = inst.n;
            s.m = inst.m;
            s.variant = std::string(to_string(config.variant));
            detail::write_json(dir / "aggregate.json", aggregate_json(s));
            all.push_back(s);
        }
        print_table_row(table, all.back());
    }
    return all;
}

inline constexpr Variant kAllVariants[] = {Variant::full, Variant::no_learning, Variant::no_smoothing,
                                           Variant::roulette};

/// Runs all four variants with identical seeds and budgets at a fixed k and
/// writes them side by side, plus comparison.json, under
/// out_dir/<instance>/k<k>/.
inline std::vector<AggregateStats> compare_variants(const ExperimentSpec& spec, std::ostream& table) {
    spec.validate();
    if (!spec.k) throw UsageError("compare requires a fixed --k");
    std::vector<AggregateStats> all;
    print_table_header(table);
    for (const auto& path : spec.instances) {
        const Graph g = load_dimacs(path);
        const InstanceInfo inst = describe(path, g);
        const fs::path base = spec.out_dir / inst.name / ("k" + std::to_string(*spec.k));
        json comparison{{"schema", kSchemaVersion}, {"instance", inst.name}, {"k", *spec.k},
                        {"variants", json::array()}};
        for (Variant v : kAllVariants) {
            RlsConfig c = spec.config;
            c.variant = v;
            c.keep_matrix = spec.dump_matrix;
            auto results = run_batch(g, *spec.k, c, spec.runs, spec.jobs);
            all.push_back(write_fixed_k(base / std::string(to_string(v)), inst, c, results, spec.dump_matrix));
            comparison["variants"].push_back(aggregate_json(all.back()));
            print_table_row(table, all.back());
        }
        detail::write_json(base / "comparison.json", comparison);
    }
    return all;
}

}  // namespace rls::harness
