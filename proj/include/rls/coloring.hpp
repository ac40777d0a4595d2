#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rls/assignment.hpp"
#include "rls/descent.hpp"
#include "rls/graph.hpp"
#include "rls/random.hpp"

namespace rls {

/// Number of edges whose endpoints share a group. Zero iff `s` is a legal
/// coloring. Computed from scratch in O(m).
inline long evaluate(const Graph& g, const Assignment& s) {
    long conflicts = 0;
    for (Edge e : g.edges())
        if (s[e.u] == s[e.v]) ++conflicts;
    return conflicts;
}

/// Coloring plus incremental bookkeeping:
///   gain(v, c)   number of neighbors of v currently in group c
///   conflicts()  number of monochromatic edges
///   conflicting  vertices with at least one neighbor in their own group
/// Moving v from a to c changes the cost by gain(v, c) - gain(v, a).
class ColoringState {
public:
    ColoringState(const Graph& g, const Assignment& s) : graph_(&g) { reset(s); }

    /// Rebinds to a new assignment over the same graph, reusing storage.
    void reset(const Assignment& s) {
        const std::size_t n = graph_->vertex_count();
        if (s.size() != n) throw std::invalid_argument("assignment size does not match graph");
        assignment_ = s;
        k_ = s.group_count();
        gain_.assign(n * static_cast<std::size_t>(k_), 0);
        for (Edge e : graph_->edges()) {
            ++gain_[index(e.u, s[e.v])];
            ++gain_[index(e.v, s[e.u])];
        }
        long twice = 0;
        conflicting_.clear();
        position_.assign(n, npos);
        for (std::size_t v = 0; v < n; ++v) {
            int own = gain_[index(static_cast<Vertex>(v), s[v])];
            twice += own;
            if (own > 0) insert(static_cast<Vertex>(v));
        }
        conflicts_ = twice / 2;
    }

    const Graph& graph() const noexcept { return *graph_; }
    const Assignment& assignment() const noexcept { return assignment_; }
    int group_count() const noexcept { return k_; }
    long conflicts() const noexcept { return conflicts_; }

    int gain(Vertex v, Group c) const noexcept { return gain_[index(v, c)]; }
    std::span<const int> gain_row(Vertex v) const noexcept {
        return {gain_.data() + index(v, 0), static_cast<std::size_t>(k_)};
    }

    std::span<const Vertex> conflicting() const noexcept { return conflicting_; }
    bool is_conflicting(Vertex v) const noexcept { return position_[v] != npos; }

    /// Cost change of moving v to c.
    long delta(Vertex v, Group c) const noexcept {
        return gain(v, c) - gain(v, assignment_[v]);
    }

    /// Scans conflicting vertices x other groups for the smallest delta.
    /// Returns it only if strictly negative; equal-best moves are chosen
    /// uniformly at random.
    std::optional<Move> best_improving_move(Rng& rng) const {
        long best = 0;
        int ties = 0;
        Move chosen{};
        for (Vertex v : conflicting_) {
            const int* row = gain_.data() + index(v, 0);
            const Group current = assignment_[v];
            const int own = row[current];
            for (Group c = 0; c < k_; ++c) {
                if (c == current) continue;
                long d = row[c] - own;
                if (d < best) {
                    best = d;
                    ties = 1;
                    chosen = {v, c, d};
                } else if (d == best && ties > 0) {
                    if (uniform_below(rng, ++ties) == 0) chosen = {v, c, d};
                }
            }
        }
        if (ties == 0) return std::nullopt;
        return chosen;
    }

    void apply_move(Vertex v, Group c) {
        const Group old = assignment_[v];
        if (c == old) return;
        conflicts_ += gain(v, c) - gain(v, old);
        assignment_.set(v, c);
        for (Vertex u : graph_->neighbors(v)) {
            --gain_[index(u, old)];
            ++gain_[index(u, c)];
            const Group gu = assignment_[u];
            if (gu == old && gain_[index(u, old)] == 0) erase(u);
            else if (gu == c && gain_[index(u, c)] == 1) insert(u);
        }
        if (gain(v, c) > 0) insert(v);
        else erase(v);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t index(Vertex v, Group c) const noexcept {
        return static_cast<std::size_t>(v) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(c);
    }

    void insert(Vertex v) {
        if (position_[v] != npos) return;
        position_[v] = conflicting_.size();
        conflicting_.push_back(v);
    }

    void erase(Vertex v) {
        std::size_t at = position_[v];
        if (at == npos) return;
        Vertex last = conflicting_.back();
        conflicting_[at] = last;
        position_[last] = at;
        conflicting_.pop_back();
        position_[v] = npos;
    }

    const Graph* graph_;
    Assignment assignment_;
    int k_ = 0;
    std::vector<int> gain_;
    long conflicts_ = 0;
    std::vector<Vertex> conflicting_;
    std::vector<std::size_t> position_;
};

/// k-coloring as a grouping problem: items are vertices, the cost is the
/// conflict count, and the neighborhood moves one conflicting vertex to
/// another group.
class ColoringProblem {
public:
    using State = ColoringState;

    ColoringProblem(const Graph& g, int k) : graph_(&g), k_(k) {}

    std::size_t item_count() const noexcept { return graph_->vertex_count(); }
    int group_count() const noexcept { return k_; }
    const Graph& graph() const noexcept { return *graph_; }

    long cost(const Assignment& s) const { return evaluate(*graph_, s); }
    State attach(const Assignment& s) const { return State(*graph_, s); }
    long state_cost(const State& s) const noexcept { return s.conflicts(); }
    const Assignment& state_assignment(const State& s) const noexcept { return s.assignment(); }

    std::optional<Move> best_improving_move(const State& s, Rng& rng) const {
        return s.best_improving_move(rng);
    }
    void apply_move(State& s, const Move& m) const { s.apply_move(m.item, m.group); }

private:
    const Graph* graph_;
    int k_;
};

static_assert(GroupingProblem<ColoringProblem>);

}  // namespace rls
