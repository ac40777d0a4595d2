#pragma once

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rls/assignment.hpp"
#include "rls/random.hpp"

namespace rls {

/// Reinforcement parameters. Defaults are the published settings; the
/// penalization factor has no published per-instance value and defaults
/// to 0.3.
struct LearningParams {
    double noise = 0.200;         ///< probability of a random pick in hybrid selection
    double reward = 0.100;        ///< weight given to a group the item kept
    double penalty = 0.300;       ///< weight taken from a group the item left
    double compensation = 0.300;  ///< weight given to the group the item moved to
    double smoothing = 0.500;     ///< factor applied to a dominant probability
    double threshold = 0.995;     ///< a row's max above this triggers smoothing

    void validate(int k) const {
        auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
        if (!(noise >= 0.0 && noise <= 1.0)) throw std::invalid_argument("noise must lie in [0,1]");
        if (!open_unit(reward)) throw std::invalid_argument("reward factor must lie in (0,1)");
        if (!open_unit(penalty)) throw std::invalid_argument("penalization factor must lie in (0,1)");
        if (!open_unit(compensation)) throw std::invalid_argument("compensation factor must lie in (0,1)");
        if (!open_unit(smoothing)) throw std::invalid_argument("smoothing coefficient must lie in (0,1)");
        if (!(threshold > 1.0 / k && threshold <= 1.0))
            throw std::invalid_argument("smoothing threshold must lie in (1/k, 1]");
    }
};

enum class Selection { random, greedy, roulette, hybrid };

inline std::string_view to_string(Selection s) {
    switch (s) {
        case Selection::random: return "random";
        case Selection::greedy: return "greedy";
        case Selection::roulette: return "roulette";
        case Selection::hybrid: return "hybrid";
    }
    return "?";
}

/// n x k row-stochastic matrix; row i is item i's distribution over groups.
class ProbabilityMatrix {
public:
    ProbabilityMatrix() = default;

    ProbabilityMatrix(std::size_t items, int groups, double fill)
        : n_(items), k_(groups), p_(items * static_cast<std::size_t>(groups), fill) {}

    static ProbabilityMatrix uniform(std::size_t items, int groups) {
        if (items < 1) throw std::invalid_argument("need at least one item");
        if (groups < 2) throw std::invalid_argument("need at least two groups");
        return ProbabilityMatrix(items, groups, 1.0 / groups);
    }

    std::size_t items() const noexcept { return n_; }
    int groups() const noexcept { return k_; }

    std::span<double> row(std::size_t i) noexcept { return {p_.data() + i * k_, static_cast<std::size_t>(k_)}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {p_.data() + i * k_, static_cast<std::size_t>(k_)};
    }

    double operator()(std::size_t i, int j) const noexcept { return p_[i * k_ + j]; }
    double& operator()(std::size_t i, int j) noexcept { return p_[i * k_ + j]; }

    friend bool operator==(const ProbabilityMatrix&, const ProbabilityMatrix&) = default;

private:
    std::size_t n_ = 0;
    int k_ = 0;
    std::vector<double> p_;
};

namespace detail {

inline Group argmax_random_tie(std::span<const double> row, Rng& rng) {
    Group best = 0;
    int ties = 1;
    for (Group j = 1; j < static_cast<Group>(row.size()); ++j) {
        if (row[j] > row[best]) {
            best = j;
            ties = 1;
        } else if (row[j] == row[best] && uniform_below(rng, ++ties) == 0) {
            best = j;
        }
    }
    return best;
}

inline Group roulette(std::span<const double> row, Rng& rng) {
    double target = uniform_unit(rng);
    double acc = 0.0;
    Group last_positive = 0;
    for (Group j = 0; j < static_cast<Group>(row.size()); ++j) {
        if (row[j] <= 0.0) continue;
        acc += row[j];
        last_positive = j;
        if (target < acc) return j;
    }
    // rounding left target above the accumulated mass
    return last_positive;
}

}  // namespace detail

/// Draws a group for every item independently. `noise` is only read by the
/// hybrid strategy: with probability `noise` a uniform group, else the row's
/// argmax.
inline void select_groups(const ProbabilityMatrix& p, Selection strategy, double noise, Rng& rng,
                          Assignment& out) {
    const int k = p.groups();
    if (out.size() != p.items() || out.group_count() != k) out = Assignment(p.items(), k);
    for (std::size_t i = 0; i < p.items(); ++i) {
        Group g = 0;
        switch (strategy) {
            case Selection::random: g = uniform_below(rng, k); break;
            case Selection::greedy: g = detail::argmax_random_tie(p.row(i), rng); break;
            case Selection::roulette: g = detail::roulette(p.row(i), rng); break;
            case Selection::hybrid:
                g = uniform_unit(rng) < noise ? uniform_below(rng, k) : detail::argmax_random_tie(p.row(i), rng);
                break;
        }
        out.set(i, g);
    }
}

inline Assignment select_groups(const ProbabilityMatrix& p, Selection strategy, double noise, Rng& rng) {
    Assignment out(p.items(), p.groups());
    select_groups(p, strategy, noise, rng, out);
    return out;
}

/// Compares each item's group before and after the descent. A kept group is
/// rewarded; a left group is penalized and the adopted group compensated.
/// Both updates preserve the row sum.
inline void update_probabilities(ProbabilityMatrix& p, const Assignment& before, const Assignment& after,
                                 const LearningParams& params) {
    if (before.size() != p.items() || after.size() != p.items() || before.group_count() != p.groups() ||
        after.group_count() != p.groups())
        throw std::invalid_argument("probability matrix and assignments disagree in shape");

    const int k = p.groups();
    const double a = params.reward;
    const double keep = (1.0 - params.compensation) * (1.0 - params.penalty);
    const double spread = (1.0 - params.compensation) * params.penalty / (k - 1);

    for (std::size_t i = 0; i < p.items(); ++i) {
        auto row = p.row(i);
        const Group u = before[i];
        const Group v = after[i];
        if (u == v) {
            for (Group j = 0; j < k; ++j) row[j] *= 1.0 - a;
            row[u] += a;
        } else {
            for (Group j = 0; j < k; ++j) {
                if (j == u) row[j] = keep * row[j];
                else if (j == v) row[j] = params.compensation + spread + keep * row[j];
                else row[j] = spread + keep * row[j];
            }
        }
    }
}

/// For each row whose largest entry exceeds the threshold, scales that entry
/// by the smoothing coefficient and shares the removed mass equally among the
/// other groups. Returns the number of rows smoothed.
inline std::size_t smooth(ProbabilityMatrix& p, const LearningParams& params) {
    const int k = p.groups();
    const double rho = params.smoothing;
    std::size_t touched = 0;
    for (std::size_t i = 0; i < p.items(); ++i) {
        auto row = p.row(i);
        Group w = 0;
        for (Group j = 1; j < k; ++j)
            if (row[j] > row[w]) w = j;
        const double top = row[w];
        if (top <= params.threshold) continue;
        const double share = (1.0 - rho) / (k - 1) * top;
        for (Group j = 0; j < k; ++j) row[j] = j == w ? rho * top : row[j] + share;
        ++touched;
    }
    return touched;
}

/// Snapshot for offline analysis: one line per item, space-separated.
inline void write_matrix(std::ostream& out, const ProbabilityMatrix& p) {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < p.items(); ++i) {
        auto row = p.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
        out << '\n';
    }
}

}  // namespace rls
