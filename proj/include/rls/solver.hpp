#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rls/assignment.hpp"
#include "rls/coloring.hpp"
#include "rls/descent.hpp"
#include "rls/graph.hpp"
#include "rls/learning.hpp"
#include "rls/random.hpp"

namespace rls {

/// Ablation switches. `no_learning` restarts from a uniform random coloring
/// every generation, `no_smoothing` drops the smoothing step, `roulette`
/// replaces hybrid selection with roulette-wheel selection.
enum class Variant { full, no_learning, no_smoothing, roulette };

inline std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::no_learning: return "rls0";
        case Variant::no_smoothing: return "rls1";
        case Variant::roulette: return "rls2";
    }
    return "?";
}

struct RlsConfig {
    LearningParams learning;
    Selection selection = Selection::hybrid;
    /// Consecutive generations without a new best cost before giving up.
    std::uint64_t max_stall = 1'000'000;
    std::optional<double> time_limit;  ///< seconds
    Variant variant = Variant::full;
    std::uint64_t seed = 1;
    /// Keep the final probability matrix in the result (debug dumps).
    bool keep_matrix = false;

    Selection effective_selection() const noexcept {
        if (variant == Variant::roulette) return Selection::roulette;
        if (variant == Variant::no_learning) return Selection::random;
        return selection;
    }

    void validate(int k) const {
        if (k < 2) throw std::invalid_argument("k must be at least 2");
        if (max_stall < 1) throw std::invalid_argument("max_stall must be at least 1");
        if (time_limit && !(*time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
        if (variant != Variant::no_learning) learning.validate(k);
    }
};

struct ProfilePoint {
    std::uint64_t generation;
    long best_cost;
    double elapsed_ms;
};

struct RunResult {
    int k = 0;
    bool legal_found = false;
    long best_cost = 0;
    std::uint64_t generations = 0;
    std::uint64_t descent_moves = 0;
    double wall_time = 0.0;  ///< seconds
    bool timed_out = false;
    std::uint64_t seed = 0;
    /// Best-so-far cost after each improving generation, plus the last one.
    std::vector<ProfilePoint> profile;
    /// Lowest-cost local optimum seen (a legal coloring when legal_found).
    Assignment best;
    std::optional<ProbabilityMatrix> matrix;
};

/// Searches for a legal k-coloring. Each generation draws a coloring from
/// the probability matrix, descends to a local optimum, then reinforces and
/// smooths the matrix according to the variant. Stops on a legal coloring,
/// after `max_stall` generations without improving the best cost, or when
/// the time limit expires.
inline RunResult solve_k(const Graph& graph, int k, const RlsConfig& config) {
    config.validate(k);
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    auto elapsed_s = [&] { return std::chrono::duration<double>(clock::now() - started).count(); };

    const std::size_t n = graph.vertex_count();
    const bool learns = config.variant != Variant::no_learning;
    const bool smooths = learns && config.variant != Variant::no_smoothing;
    const Selection selection = config.effective_selection();

    Rng rng(config.seed);
    ColoringProblem problem(graph, k);
    ProbabilityMatrix matrix = learns ? ProbabilityMatrix::uniform(n, k) : ProbabilityMatrix{};

    RunResult result;
    result.k = k;
    result.seed = config.seed;
    result.best_cost = std::numeric_limits<long>::max();

    Assignment start(n, k);
    ColoringState state(graph, start);
    std::uint64_t stall = 0;

    while (true) {
        ++result.generations;
        if (learns) {
            select_groups(matrix, selection, config.learning.noise, rng, start);
        } else {
            for (std::size_t v = 0; v < n; ++v) start.set(v, uniform_below(rng, k));
        }
        state.reset(start);
        result.descent_moves += descend(problem, state, rng);

        const long cost = state.conflicts();
        if (cost < result.best_cost) {
            result.best_cost = cost;
            result.best = state.assignment();
            result.profile.push_back({result.generations, cost, elapsed_s() * 1e3});
            stall = 0;
        } else {
            ++stall;
        }

        if (learns) {
            update_probabilities(matrix, start, state.assignment(), config.learning);
            if (smooths) smooth(matrix, config.learning);
        }

        if (result.best_cost == 0 || stall >= config.max_stall) break;
        if (config.time_limit && elapsed_s() >= *config.time_limit) {
            result.timed_out = true;
            break;
        }
    }

    if (result.profile.back().generation != result.generations)
        result.profile.push_back({result.generations, result.best_cost, elapsed_s() * 1e3});
    // the incremental cost is trusted only after a from-scratch recount
    result.legal_found = evaluate(graph, result.best) == 0;
    if (result.legal_found != (result.best_cost == 0))
        throw std::logic_error("incremental conflict count disagrees with recount");
    if (config.keep_matrix && learns) result.matrix = std::move(matrix);
    result.wall_time = elapsed_s();
    return result;
}

struct ChromaticResult {
    /// Smallest k with a legal coloring found; empty if k_start failed.
    std::optional<int> best_k;
    Assignment witness;
    /// One entry per attempted k, in decreasing k order.
    std::vector<RunResult> trail;
};

/// Solves k-colorings for k = k_start, k_start - 1, ... until one fails
/// (or k = 2 succeeds). Every k starts from a fresh uniform matrix. Graphs
/// without edges report k = 1 immediately.
inline ChromaticResult solve_gcp(const Graph& graph, int k_start, const RlsConfig& config) {
    ChromaticResult out;
    if (graph.edge_count() == 0) {
        out.best_k = 1;
        out.witness = Assignment(graph.vertex_count(), 1);
        return out;
    }
    if (k_start < 2) throw std::invalid_argument("k_start must be at least 2");
    for (int k = k_start; k >= 2; --k) {
        out.trail.push_back(solve_k(graph, k, config));
        const RunResult& run = out.trail.back();
        if (!run.legal_found) break;
        out.best_k = k;
        out.witness = run.best;
    }
    return out;
}

inline int default_k_start(const Graph& graph) {
    return static_cast<int>(graph.max_degree()) + 1;
}

}  // namespace rls
