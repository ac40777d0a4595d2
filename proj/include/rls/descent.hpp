#pragma once

#include <concepts>
#include <cstddef>
#include <optional>

#include "rls/assignment.hpp"
#include "rls/random.hpp"

namespace rls {

/// A one-item relocation and its cost change (after - before).
struct Move {
    int item;
    Group group;
    long gain;
    friend bool operator==(const Move&, const Move&) = default;
};

/// What a concrete grouping problem supplies to the generic search.
///
/// `attach` builds a mutable search state from an assignment.
/// `best_improving_move` returns a minimum-gain move among the problem's
/// neighborhood if that gain is strictly negative, ties broken with `rng`.
/// `apply_move` relocates the item; the state's cost must change by exactly
/// the reported gain.
template <class P>
concept GroupingProblem =
    requires(const P& p, typename P::State& s, const typename P::State& cs, const Assignment& a,
             const Move& m, Rng& rng) {
        { p.item_count() } -> std::convertible_to<std::size_t>;
        { p.group_count() } -> std::convertible_to<int>;
        { p.cost(a) } -> std::convertible_to<long>;
        { p.attach(a) } -> std::same_as<typename P::State>;
        { p.state_cost(cs) } -> std::convertible_to<long>;
        { p.state_assignment(cs) } -> std::convertible_to<const Assignment&>;
        { p.best_improving_move(cs, rng) } -> std::same_as<std::optional<Move>>;
        p.apply_move(s, m);
    };

struct NoObserver {
    void operator()(const Move&, long /*cost_after*/) const noexcept {}
};

/// Steepest descent on an attached state: repeatedly applies a best strictly
/// improving move until none exists or the cost reaches zero. Returns the
/// number of accepted moves. `observe` sees each move and the cost after it.
template <GroupingProblem P, class Observer = NoObserver>
std::size_t descend(const P& problem, typename P::State& state, Rng& rng, Observer&& observe = {}) {
    std::size_t moves = 0;
    while (problem.state_cost(state) > 0) {
        auto move = problem.best_improving_move(state, rng);
        if (!move) break;
        problem.apply_move(state, *move);
        ++moves;
        observe(*move, problem.state_cost(state));
    }
    return moves;
}

struct DescentResult {
    Assignment assignment;
    long cost;
    std::size_t moves;
};

template <GroupingProblem P>
DescentResult descent(const P& problem, const Assignment& start, Rng& rng) {
    auto state = problem.attach(start);
    std::size_t moves = descend(problem, state, rng);
    return {problem.state_assignment(state), problem.state_cost(state), moves};
}

}  // namespace rls
