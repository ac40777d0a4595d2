#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "rls/learning.hpp"
#include "test_support.hpp"

using namespace rls;

namespace {

ProbabilityMatrix single_row(std::vector<double> values) {
    ProbabilityMatrix p(1, static_cast<int>(values.size()), 0.0);
    for (std::size_t j = 0; j < values.size(); ++j) p(0, static_cast<int>(j)) = values[j];
    return p;
}

Assignment one(Group g, int k) { return Assignment(std::vector<Group>{g}, k); }

std::vector<double> row_of(const ProbabilityMatrix& p, std::size_t i) {
    auto r = p.row(i);
    return {r.begin(), r.end()};
}

LearningParams params_with(double alpha, double beta, double gamma) {
    LearningParams p;
    p.reward = alpha;
    p.penalty = beta;
    p.compensation = gamma;
    return p;
}

// Case-by-case transcription of the reward / penalize-compensate rules,
// used as an independent reference for the vectorised implementation.
std::vector<double> reference_update(std::vector<double> row, int u, int v, const LearningParams& lp) {
    const int k = static_cast<int>(row.size());
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) {
        if (u == v) {
            out[j] = j == u ? lp.reward + (1 - lp.reward) * row[j] : (1 - lp.reward) * row[j];
        } else if (j == u) {
            out[j] = (1 - lp.compensation) * (1 - lp.penalty) * row[j];
        } else if (j == v) {
            out[j] = lp.compensation + (1 - lp.compensation) * lp.penalty / (k - 1) +
                     (1 - lp.compensation) * (1 - lp.penalty) * row[j];
        } else {
            out[j] = (1 - lp.compensation) * lp.penalty / (k - 1) + (1 - lp.compensation) * (1 - lp.penalty) * row[j];
        }
    }
    return out;
}

void expect_row_near(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j], want[j], tol) << "entry " << j;
}

}  // namespace

TEST(InitUniform, Entries) {
    auto p = ProbabilityMatrix::uniform(1, 2);
    expect_row_near(row_of(p, 0), {0.5, 0.5}, 0.0);
    auto q = ProbabilityMatrix::uniform(3, 4);
    for (std::size_t i = 0; i < 3; ++i) {
        expect_row_near(row_of(q, i), {0.25, 0.25, 0.25, 0.25}, 0.0);
        auto r = q.row(i);
        EXPECT_DOUBLE_EQ(std::accumulate(r.begin(), r.end(), 0.0), 1.0);
    }
    EXPECT_THROW(ProbabilityMatrix::uniform(0, 3), std::invalid_argument);
    EXPECT_THROW(ProbabilityMatrix::uniform(3, 1), std::invalid_argument);
}

TEST(UpdateProbabilities, RewardKeptGroup) {
    auto p = single_row({0.25, 0.25, 0.25, 0.25});
    update_probabilities(p, one(1, 4), one(1, 4), params_with(0.1, 0.3, 0.3));
    expect_row_near(row_of(p, 0), {0.225, 0.325, 0.225, 0.225}, 1e-15);
}

TEST(UpdateProbabilities, PenalizeAndCompensate) {
    auto p = single_row({1.0 / 3, 1.0 / 3, 1.0 / 3});
    update_probabilities(p, one(0, 3), one(1, 3), params_with(0.1, 0.3, 0.3));
    expect_row_near(row_of(p, 0), {0.16333333333333333, 0.56833333333333333, 0.26833333333333333}, 1e-15);
    auto r = p.row(0);
    EXPECT_NEAR(std::accumulate(r.begin(), r.end(), 0.0), 1.0, 1e-15);
}

TEST(UpdateProbabilities, CertainRowIsFixedPointOfReward) {
    auto p = single_row({1.0, 0.0, 0.0});
    update_probabilities(p, one(0, 3), one(0, 3), params_with(0.37, 0.3, 0.3));
    expect_row_near(row_of(p, 0), {1.0, 0.0, 0.0}, 0.0);
}

TEST(UpdateProbabilities, MatchesReferenceOnRandomRows) {
    Rng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + uniform_below(rng, 9);
        std::vector<double> row(k);
        double sum = 0;
        for (auto& x : row) sum += (x = 0.01 + uniform_unit(rng));
        for (auto& x : row) x /= sum;
        LearningParams lp = params_with(0.01 + 0.98 * uniform_unit(rng), 0.01 + 0.98 * uniform_unit(rng),
                                        0.01 + 0.98 * uniform_unit(rng));
        const int u = uniform_below(rng, k);
        const int v = uniform_below(rng, k);
        auto p = single_row(row);
        update_probabilities(p, one(u, k), one(v, k), lp);
        expect_row_near(row_of(p, 0), reference_update(row, u, v, lp), 1e-15);
    }
}

TEST(UpdateProbabilities, RejectsShapeMismatch) {
    auto p = ProbabilityMatrix::uniform(2, 3);
    EXPECT_THROW(update_probabilities(p, Assignment(3, 3), Assignment(2, 3), {}), std::invalid_argument);
    EXPECT_THROW(update_probabilities(p, Assignment(2, 4), Assignment(2, 4), {}), std::invalid_argument);
}

TEST(UpdateProbabilities, RewardRaisesAndPenaltyLowersOwnGroup) {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + uniform_below(rng, 6);
        auto p = ProbabilityMatrix::uniform(1, k);
        const int u = uniform_below(rng, k);
        const double before = p(0, u);
        update_probabilities(p, one(u, k), one(u, k), {});
        EXPECT_GT(p(0, u), before);
        const int v = (u + 1) % k;
        const double kept = p(0, u);
        update_probabilities(p, one(u, k), one(v, k), {});
        EXPECT_LT(p(0, u), kept);
    }
}

TEST(Smooth, Examples) {
    LearningParams lp;
    lp.smoothing = 0.5;
    lp.threshold = 0.995;

    auto two = single_row({0.996, 0.004});
    EXPECT_EQ(smooth(two, lp), 1u);
    expect_row_near(row_of(two, 0), {0.498, 0.502}, 1e-15);

    auto below = single_row({0.6, 0.4});
    EXPECT_EQ(smooth(below, lp), 0u);
    expect_row_near(row_of(below, 0), {0.6, 0.4}, 0.0);

    auto three = single_row({0.996, 0.003, 0.001});
    smooth(three, lp);
    expect_row_near(row_of(three, 0), {0.498, 0.252, 0.250}, 1e-15);
}

TEST(Smooth, OnlyRowsAboveThreshold) {
    ProbabilityMatrix p(3, 2, 0.5);
    p(1, 0) = 0.999;
    p(1, 1) = 0.001;
    EXPECT_EQ(smooth(p, {}), 1u);
    expect_row_near(row_of(p, 0), {0.5, 0.5}, 0.0);
    expect_row_near(row_of(p, 2), {0.5, 0.5}, 0.0);
    EXPECT_NEAR(p(1, 0), 0.4995, 1e-15);
}

// 10^4 random interleavings on random matrices: rows stay stochastic and
// strictly inside (0, 1).
TEST(LearningInvariants, RowsStayStochasticAndInterior) {
    Rng rng(31337);
    LearningParams lp;
    double worst = 0.0;
    for (int matrix = 0; matrix < 20; ++matrix) {
        const std::size_t n = 1 + uniform_below(rng, 50);
        const int k = 2 + uniform_below(rng, 9);
        lp.penalty = 0.05 + 0.4 * uniform_unit(rng);
        auto p = ProbabilityMatrix::uniform(n, k);
        for (int op = 0; op < 500; ++op) {
            if (uniform_below(rng, 2) == 0) {
                auto before = test::random_assignment(n, k, rng);
                auto after = before;
                for (std::size_t i = 0; i < n; ++i)
                    if (uniform_below(rng, 3) == 0) after.set(i, uniform_below(rng, k));
                update_probabilities(p, before, after, lp);
            } else {
                smooth(p, lp);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto r = p.row(i);
            worst = std::max(worst, std::abs(std::accumulate(r.begin(), r.end(), 0.0) - 1.0));
            for (double x : r) {
                EXPECT_GT(x, 0.0);
                EXPECT_LT(x, 1.0);
            }
        }
    }
    EXPECT_LE(worst, 1e-9);
}

TEST(SelectGroups, GreedyPicksUniqueArgmax) {
    auto p = single_row({0.7, 0.2, 0.1});
    Rng rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(select_groups(p, Selection::greedy, 0.2, rng)[0], 0);
}

TEST(SelectGroups, RouletteOnDegenerateRow) {
    auto p = single_row({1.0, 0.0});
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(select_groups(p, Selection::roulette, 0.2, rng)[0], 0);
}

TEST(SelectGroups, GreedyTiesAreUniform) {
    auto p = ProbabilityMatrix::uniform(1, 4);
    Rng rng(3);
    std::vector<int> counts(4, 0);
    const int trials = 40000;
    for (int i = 0; i < trials; ++i) ++counts[select_groups(p, Selection::greedy, 0.0, rng)[0]];
    const double sigma = std::sqrt(trials * 0.25 * 0.75);
    for (int c : counts) EXPECT_NEAR(c, trials * 0.25, 3 * sigma);
}

// Empirical frequencies over 10^5 draws stay within 3 sigma of each
// strategy's defining distribution.
TEST(SelectGroups, EmpiricalDistributions) {
    const std::vector<double> row{0.5, 0.1, 0.25, 0.05, 0.1};
    const int k = 5;
    const int trials = 100000;
    auto p = single_row(row);
    const double omega = 0.2;

    auto expected = [&](Selection s, int j) {
        switch (s) {
            case Selection::random: return 1.0 / k;
            case Selection::greedy: return j == 0 ? 1.0 : 0.0;
            case Selection::roulette: return row[j];
            case Selection::hybrid: return (j == 0 ? 1 - omega : 0.0) + omega / k;
        }
        return 0.0;
    };

    Rng rng(12345);
    for (Selection s : {Selection::random, Selection::greedy, Selection::roulette, Selection::hybrid}) {
        std::vector<int> counts(k, 0);
        for (int i = 0; i < trials; ++i) ++counts[select_groups(p, s, omega, rng)[0]];
        for (int j = 0; j < k; ++j) {
            const double q = expected(s, j);
            const double sigma = std::sqrt(trials * q * (1 - q));
            EXPECT_LE(std::abs(counts[j] - trials * q), 3 * sigma + 1e-9) << to_string(s) << " group " << j;
        }
    }
}

TEST(SelectGroups, HybridArgmaxFrequency) {
    auto p = single_row({0.1, 0.1, 0.6, 0.1, 0.1});
    Rng rng(77);
    int hits = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) hits += select_groups(p, Selection::hybrid, 0.2, rng)[0] == 2;
    EXPECT_NEAR(static_cast<double>(hits) / trials, 0.84, 0.01);
}

TEST(SelectGroups, ItemsDrawIndependently) {
    auto p = ProbabilityMatrix::uniform(200, 3);
    Rng rng(5);
    auto a = select_groups(p, Selection::hybrid, 0.2, rng);
    EXPECT_EQ(a.size(), 200u);
    std::vector<int> counts(3, 0);
    for (Group g : a.groups()) ++counts[g];
    for (int c : counts) EXPECT_GT(c, 30);
}

TEST(LearningParams, Validation) {
    LearningParams lp;
    EXPECT_NO_THROW(lp.validate(5));
    auto bad = [](auto mutate) {
        LearningParams p;
        mutate(p);
        return p;
    };
    EXPECT_THROW(bad([](auto& p) { p.noise = 1.5; }).validate(5), std::invalid_argument);
    EXPECT_THROW(bad([](auto& p) { p.reward = 0.0; }).validate(5), std::invalid_argument);
    EXPECT_THROW(bad([](auto& p) { p.penalty = 1.0; }).validate(5), std::invalid_argument);
    EXPECT_THROW(bad([](auto& p) { p.compensation = -0.1; }).validate(5), std::invalid_argument);
    EXPECT_THROW(bad([](auto& p) { p.smoothing = 1.0; }).validate(5), std::invalid_argument);
    EXPECT_THROW(bad([](auto& p) { p.threshold = 0.2; }).validate(5), std::invalid_argument);
    EXPECT_NO_THROW(bad([](auto& p) { p.threshold = 1.0; }).validate(5));
}

TEST(WriteMatrix, OneLinePerItem) {
    auto p = ProbabilityMatrix::uniform(2, 2);
    std::ostringstream out;
    write_matrix(out, p);
    EXPECT_EQ(out.str(), "0.5 0.5\n0.5 0.5\n");
}
