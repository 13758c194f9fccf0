#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "netgc/coherence.hpp"
#include "netgc/maxent.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace netgc {
namespace {

using testing::Rng;
constexpr Complex I{0.0, 1.0};

// Nodes 1 and 2 unlinked, a = c13, b = c23.
PartialHermitian three_node(Complex a, Complex b) {
    PartialHermitian p(testing::three_node_path());
    p.set_known(0, 2, a);
    p.set_known(1, 2, b);
    return p;
}

PartialHermitian four_cycle(double g) {
    PartialHermitian p(testing::four_cycle());
    for (auto e : p.topology().edges()) p.set_known(e.first, e.second, g);
    return p;
}

TEST(SingleEntryUpdate, ThreeNodeClosedForm) {
    const auto p = three_node(0.5, 0.4 * I);
    const Complex s = single_entry_update(p.values(), {0, 1});
    EXPECT_NEAR(std::abs(s - Complex(0.0, -0.2)), 0.0, 1e-15);

    // independent check: dense grid maximization of log det over the disk
    testing::LogDetObjective<3> objective(p.values(), {{0, 1}});
    const auto best = testing::grid_argmax_complex(
        [&](Complex z) { return objective({z.real(), z.imag()}); });
    EXPECT_NEAR(std::abs(best - s), 0.0, 1e-8);
}

TEST(SingleEntryUpdate, ZeroExamples) {
    EXPECT_EQ(single_entry_update(three_node(0.0, 0.0).values(), {0, 1}), Complex(0.0));
    const auto id = HermitianMatrix::identity(4);
    for (auto p : missing_pairs(Topology(4, {})))
        EXPECT_EQ(single_entry_update(id, p), Complex(0.0));
}

TEST(SingleEntryUpdate, ZeroesInverseEntry) {
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
        auto c = testing::random_pd(5, rng);
        c.set(1, 3, single_entry_update(c, {1, 3}));
        EXPECT_LE(std::abs(inverse(c)(1, 3)), 1e-12);
    }
}

TEST(ConditionalEntry, SingularBlockNamesIndices) {
    auto c = HermitianMatrix::identity(4);
    c.set(2, 3, 1.0);
    const std::vector<std::size_t> r{2, 3};
    try {
        conditional_entry(c, 0, 1, r);
        FAIL();
    } catch (const SubmatrixSingularError& e) {
        EXPECT_EQ(e.indices(), r);
        EXPECT_NE(std::string(e.what()).find("{3,4}"), std::string::npos);
    }
}

TEST(PartialHermitian, RejectsBadEntries) {
    PartialHermitian p(testing::three_node_path());
    EXPECT_THROW(p.set_known(0, 1, 0.5), InvalidInputError);
    EXPECT_THROW(p.set_known(0, 2, 1.01), InvalidInputError);
    EXPECT_THROW(p.set_known(0, 2, Complex(NAN, 0.0)), InvalidInputError);
    EXPECT_NO_THROW(p.set_known(0, 2, 1.0 + 1e-13));
    EXPECT_TRUE(p.is_known(0, 0));
    EXPECT_FALSE(p.is_known(0, 1));
}

TEST(Complete, ThreeNodeExample) {
    const auto r = complete(three_node(0.5, 0.2));
    ASSERT_EQ(r.surrogates.size(), 1u);
    EXPECT_NEAR(std::abs(r.surrogates.at({0, 1}) - 0.1), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.completed(0, 1) - 0.1), 0.0, 1e-15);
    EXPECT_LE(r.zero_pattern_residual, 1e-15);
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_TRUE(r.chordal);
    EXPECT_NEAR(r.entropy, std::log(0.75 * 0.96), 1e-14);
}

TEST(Complete, ThreeNodeClosedFormOnRandomData) {
    Rng rng(43);
    for (int t = 0; t < 100; ++t) {
        const auto d = testing::random_channels(3, 16, rng);
        const auto g = normalized_gram(d);
        const auto r = complete(build_partial_gram(d, testing::three_node_path()));
        EXPECT_NEAR(std::abs(r.surrogates.at({0, 1}) - g(0, 2) * std::conj(g(1, 2))), 0.0, 1e-10);
        EXPECT_LE(verify_zero_pattern(r, testing::three_node_path()), 1e-10);
    }
}

TEST(Complete, FourCycleMatchesNestedOracle) {
    const auto p = four_cycle(0.5);
    const auto r = complete(p);
    const Complex s12 = r.surrogates.at({0, 1}), s34 = r.surrogates.at({2, 3});
    EXPECT_NEAR(std::abs(s12 - s34), 0.0, 1e-9);
    EXPECT_NEAR(s12.imag(), 0.0, 1e-12);
    EXPECT_GT(r.iterations, 0u);
    EXPECT_FALSE(r.chordal);

    // both surrogates real by symmetry: two scalar unknowns
    testing::LogDetObjective<4> objective(p.values(), {{0, 1}, {2, 3}});
    std::function<double(const std::vector<double>&)> f = [&](const std::vector<double>& x) {
        return objective({x[0], 0.0, x[1], 0.0});
    };
    std::vector<double> x(2, 0.0), lo(2, -1.0), hi(2, 1.0);
    testing::nested_golden_max(f, x, lo, hi, 1e-10);
    EXPECT_NEAR(s12.real(), x[0], 1e-6);
    EXPECT_NEAR(s34.real(), x[1], 1e-6);
}

TEST(Complete, FourCycleRandomMatchesComplexOracle) {
    Rng rng(47);
    for (int t = 0; t < 3; ++t) {
        const auto d = testing::random_channels(4, 8, rng);
        const auto p = build_partial_gram(d, testing::four_cycle());
        const auto r = complete(p);
        testing::LogDetObjective<4> objective(p.values(), {{0, 1}, {2, 3}});
        const auto x = testing::brute_force_maxdet(objective, 1e-8);
        EXPECT_NEAR(std::abs(r.surrogates.at({0, 1}) - Complex(x[0], x[1])), 0.0, 1e-6);
        EXPECT_NEAR(std::abs(r.surrogates.at({2, 3}) - Complex(x[2], x[3])), 0.0, 1e-6);
    }
}

TEST(Complete, DisconnectedIsBlockDiagonal) {
    PartialHermitian p(parse_topology("3: 1-3"));
    p.set_known(0, 2, 0.3 - 0.4 * I);
    const auto r = complete(p);
    EXPECT_EQ(r.surrogates.at({0, 1}), Complex(0.0));
    EXPECT_EQ(r.surrogates.at({1, 2}), Complex(0.0));
    EXPECT_EQ(r.completed(0, 2), 0.3 - 0.4 * I);
}

TEST(Complete, CompleteGraphIsIdentityMap) {
    Rng rng(53);
    const auto d = testing::random_channels(4, 10, rng);
    const auto p = build_partial_gram(d, Topology::complete(4));
    const auto r = complete(p);
    EXPECT_EQ(r.completed, p.values());
    EXPECT_TRUE(r.surrogates.empty());
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_EQ(verify_zero_pattern(r, Topology::complete(4)), 0.0);
}

TEST(VerifyZeroPattern, WrongSurrogateResidual) {
    const Complex a = 0.5, b = 0.5;
    CompletionResult wrong;
    wrong.completed = three_node(a, b).values();  // s = 0
    const double d = 1.0 - std::norm(a) - std::norm(b);
    EXPECT_NEAR(verify_zero_pattern(wrong, testing::three_node_path()), std::abs(a * std::conj(b)) / d, 1e-14);

    const auto right = complete(three_node(a, b));
    EXPECT_LE(verify_zero_pattern(right, testing::three_node_path()), 1e-12);
}

TEST(Complete, ZeroPatternOnFourNodeTopologies) {
    Rng rng(59);
    for (const auto& t : {testing::diamond(), testing::paw(), testing::four_cycle()}) {
        for (int k = 0; k < 100; ++k) {
            const auto d = testing::random_channels(4, 8 + k % 57, rng);
            const auto r = complete(build_partial_gram(d, t));
            EXPECT_LE(verify_zero_pattern(r, t), 1e-8);
            EXPECT_TRUE(cholesky(r.completed));
        }
    }
}

TEST(Complete, LocalOptimality) {
    Rng rng(61);
    const Topology five = parse_topology("5: 1-2,2-3,3-4,4-5,5-1,1-3");  // non-chordal: 1-3-4-5 cycle
    ASSERT_FALSE(is_chordal(five).chordal);
    for (const auto& t : {testing::four_cycle(), testing::paw(), five}) {
        for (int k = 0; k < 10; ++k) {
            const auto d = testing::random_channels(t.node_count(), 12, rng);
            const auto r = complete(build_partial_gram(d, t));
            for (auto [pair, s] : r.surrogates)
                for (Complex step : {Complex(1e-3), Complex(-1e-3), 1e-3 * I, -1e-3 * I}) {
                    auto c = r.completed;
                    c.set(pair.first, pair.second, s + step);
                    EXPECT_LT(log_det(c), r.entropy);
                }
        }
    }
}

TEST(Complete, ChordalInitialFillIsExact) {
    Rng rng(67);
    const Topology path5 = parse_topology("5: 1-2,2-3,3-4,4-5");
    for (const auto& t : {testing::diamond(), testing::paw(), path5}) {
        for (int k = 0; k < 20; ++k) {
            const auto d = testing::random_channels(t.node_count(), 12, rng);
            const auto p = build_partial_gram(d, t);
            const auto direct = complete(p);
            EXPECT_EQ(direct.iterations, 0u) << to_string(t);
            EXPECT_LE(direct.zero_pattern_residual, 1e-10);
            CompletionConfig forced;
            forced.force_refinement = true;
            const auto refined = complete(p, forced);
            for (auto [pair, s] : direct.surrogates) EXPECT_NEAR(std::abs(refined.surrogates.at(pair) - s), 0.0, 1e-9);
        }
    }
}

TEST(Complete, EntropyTraceNonDecreasing) {
    Rng rng(71);
    for (int k = 0; k < 20; ++k) {
        const auto d = testing::random_channels(4, 6, rng);
        const auto r = complete(build_partial_gram(d, testing::four_cycle()));
        ASSERT_EQ(r.entropy_trace.size(), r.iterations + 1);
        for (std::size_t s = 1; s < r.entropy_trace.size(); ++s)
            EXPECT_GE(r.entropy_trace[s], r.entropy_trace[s - 1] - 1e-13);
    }
}

TEST(Complete, EquivariantUnderReindexing) {
    Rng rng(73);
    CompletionConfig tight;
    tight.tol = 1e-13;
    for (int k = 0; k < 30; ++k) {
        const auto t = k % 2 ? testing::four_cycle() : testing::paw();
        const auto d = testing::random_channels(4, 10, rng);
        const auto perm = testing::random_permutation(4, rng);
        const auto tp = apply_permutation(t, perm);
        const auto r = complete(build_partial_gram(d, t), tight);
        const auto rp = complete(build_partial_gram(testing::permute_channels(d, perm), tp), tight);
        for (auto [pair, s] : r.surrogates) {
            const std::size_t i = perm[pair.first], j = perm[pair.second];
            const Complex expected = i < j ? s : std::conj(s);
            EXPECT_NEAR(std::abs(rp.surrogates.at(NodePair::of(i, j)) - expected), 0.0, 1e-10);
        }
        EXPECT_NEAR(r.entropy, rp.entropy, 1e-10);
    }
}

TEST(Complete, UnitMagnitudeIsInfeasible) {
    PartialHermitian p(parse_topology("3: 1-3,2-3"));
    p.set_known(0, 2, 1.0);
    p.set_known(1, 2, 0.5);
    EXPECT_THROW(complete(p), InfeasiblePartialMatrixError);
}

TEST(Complete, ConflictingEntriesAreInfeasible) {
    // four-cycle with three strongly positive links and one strongly negative
    PartialHermitian p(testing::four_cycle());
    p.set_known(0, 2, 0.99);
    p.set_known(1, 2, 0.99);
    p.set_known(1, 3, 0.99);
    p.set_known(0, 3, -0.99);
    EXPECT_THROW(complete(p), InfeasiblePartialMatrixError);

    PartialHermitian full(Topology::complete(3));
    full.set_known(0, 1, 0.9);
    full.set_known(0, 2, 0.9);
    full.set_known(1, 2, -0.9);
    EXPECT_THROW(complete(full), InfeasiblePartialMatrixError);
}

TEST(Complete, NonConvergenceCarriesResidual) {
    Rng rng(79);
    const auto d = testing::random_channels(4, 6, rng);
    CompletionConfig one;
    one.max_iter = 1;
    one.tol = 1e-14;
    try {
        complete(build_partial_gram(d, testing::four_cycle()), one);
        FAIL();
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.last_residual(), 0.0);
    }
}

TEST(Complete, ConfigAndPatternValidation) {
    const auto p = three_node(0.5, 0.2);
    CompletionConfig bad;
    bad.tol = 0.0;
    EXPECT_THROW(complete(p, bad), InvalidInputError);
    bad = {};
    bad.max_iter = 0;
    EXPECT_THROW(complete(p, bad), InvalidInputError);
    EXPECT_THROW(complete(p, Topology::complete(3)), InvalidInputError);
}

}  // namespace
}  // namespace netgc
