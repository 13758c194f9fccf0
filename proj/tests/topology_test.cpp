#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <vector>

#include "netgc/topology.hpp"
#include "test_util.hpp"

namespace netgc {
namespace {

using testing::Rng;

std::vector<NodePair> pairs(std::initializer_list<std::pair<int, int>> one_based) {
    std::vector<NodePair> out;
    for (auto [a, b] : one_based) out.push_back(NodePair::of(a - 1, b - 1));
    return out;
}

// Independent chordality check: search for a chordless cycle of length >= 4.
bool has_chordless_cycle(const Topology& t) {
    const std::size_t n = t.node_count();
    std::vector<std::size_t> path;
    std::vector<bool> used(n, false);
    std::function<bool()> extend = [&]() -> bool {
        const std::size_t last = path.back();
        for (std::size_t v = 0; v < n; ++v) {
            if (used[v] || !t.has_edge(last, v)) continue;
            // v must not touch any interior path vertex other than `last`
            bool chord = false;
            for (std::size_t k = 1; k + 1 < path.size(); ++k)
                if (t.has_edge(path[k], v)) chord = true;
            if (chord) continue;
            if (path.size() >= 3 && t.has_edge(path.front(), v)) return true;
            if (path.size() >= 2 && t.has_edge(path.front(), v)) continue;
            used[v] = true;
            path.push_back(v);
            if (extend()) return true;
            path.pop_back();
            used[v] = false;
        }
        return false;
    };
    for (std::size_t s = 0; s < n; ++s) {
        path = {s};
        std::fill(used.begin(), used.end(), false);
        used[s] = true;
        if (extend()) return true;
    }
    return false;
}

TEST(Topology, ConstructionValidates) {
    EXPECT_THROW(Topology(1, {}), InvalidInputError);
    EXPECT_THROW(Topology(3, {{0, 0}}), InvalidInputError);
    EXPECT_THROW(Topology(3, {{0, 3}}), InvalidInputError);
    EXPECT_THROW(Topology(3, {{0, 1}, {1, 0}}), InvalidInputError);
    const Topology t(3, {{2, 0}, {1, 2}});
    EXPECT_TRUE(t.has_edge(0, 2));
    EXPECT_TRUE(t.has_edge(2, 0));
    EXPECT_FALSE(t.has_edge(0, 1));
    EXPECT_FALSE(t.has_edge(1, 1));
}

TEST(MissingPairs, Examples) {
    EXPECT_EQ(missing_pairs(testing::three_node_path()), pairs({{1, 2}}));
    EXPECT_TRUE(missing_pairs(Topology::complete(4)).empty());
    EXPECT_EQ(missing_pairs(testing::four_cycle()), pairs({{1, 2}, {3, 4}}));
}

TEST(MissingPairs, OrderedByHopDistanceThenIndex) {
    // path 1-2-3-4-5: distance-2 pairs first, unreachable none
    const auto t = parse_topology("5: 1-2,2-3,3-4,4-5");
    EXPECT_EQ(missing_pairs(t), pairs({{1, 3}, {2, 4}, {3, 5}, {1, 4}, {2, 5}, {1, 5}}));
    // isolated node 3 sorts last
    EXPECT_EQ(missing_pairs(parse_topology("3: 1-2")), pairs({{1, 3}, {2, 3}}));
}

TEST(MissingPairs, CountsComplementEdges) {
    for (std::size_t m = 2; m <= 5; ++m)
        for (const auto& t : testing::all_topologies(m)) {
            const auto miss = missing_pairs(t);
            EXPECT_EQ(t.edge_count() + miss.size(), m * (m - 1) / 2);
            for (auto p : miss) EXPECT_FALSE(t.has_edge(p.first, p.second));
        }
}

TEST(IsConnected, Examples) {
    EXPECT_TRUE(is_connected(testing::three_node_path()));
    EXPECT_FALSE(is_connected(parse_topology("3: 1-3")));
    EXPECT_FALSE(is_connected(Topology(2, {})));
}

TEST(IsChordal, Examples) {
    for (std::size_t m = 2; m <= 3; ++m)
        for (const auto& t : testing::all_topologies(m)) EXPECT_TRUE(is_chordal(t).chordal);
    EXPECT_FALSE(is_chordal(parse_topology("4: 1-3,3-2,2-4,4-1")).chordal);
    EXPECT_TRUE(is_chordal(testing::paw()).chordal);
}

TEST(IsChordal, AgreesWithChordlessCycleSearch) {
    for (std::size_t m = 4; m <= 6; ++m)
        for (const auto& t : testing::all_topologies(m)) {
            const auto r = is_chordal(t);
            EXPECT_EQ(r.chordal, !has_chordless_cycle(t)) << to_string(t);
            if (!r.chordal) continue;
            // perfect elimination order: later neighbors of each vertex form a clique
            std::vector<std::size_t> pos(m);
            ASSERT_EQ(r.elimination_order.size(), m);
            for (std::size_t k = 0; k < m; ++k) pos[r.elimination_order[k]] = k;
            for (auto v : r.elimination_order) {
                std::vector<std::size_t> later;
                for (auto u : t.neighbors(v))
                    if (pos[u] > pos[v]) later.push_back(u);
                for (auto a : later)
                    for (auto b : later)
                        if (a != b) EXPECT_TRUE(t.has_edge(a, b));
            }
        }
}

TEST(ApplyPermutation, Examples) {
    const std::vector<std::size_t> id{0, 1, 2, 3};
    EXPECT_EQ(apply_permutation(testing::diamond(), id), testing::diamond());
    const std::vector<std::size_t> swap{1, 0, 2};
    EXPECT_EQ(apply_permutation(testing::three_node_path(), swap), testing::three_node_path());
    // 1->3, 2->4, 3->1, 4->2
    const std::vector<std::size_t> p{2, 3, 0, 1};
    EXPECT_EQ(missing_pairs(apply_permutation(testing::diamond(), p)), pairs({{3, 4}}));
}

TEST(ApplyPermutation, RejectsNonBijection) {
    const std::vector<std::size_t> repeat{0, 0, 2}, short_{0, 1}, range{0, 1, 3};
    EXPECT_THROW(apply_permutation(testing::three_node_path(), repeat), InvalidPermutationError);
    EXPECT_THROW(apply_permutation(testing::three_node_path(), short_), InvalidPermutationError);
    EXPECT_THROW(apply_permutation(testing::three_node_path(), range), InvalidPermutationError);
}

TEST(ApplyPermutation, PreservesStructure) {
    Rng rng(3);
    for (const auto& t : testing::all_topologies(5)) {
        const auto p = testing::random_permutation(5, rng);
        const auto u = apply_permutation(t, p);
        EXPECT_EQ(u.edge_count(), t.edge_count());
        EXPECT_EQ(is_connected(u), is_connected(t));
        EXPECT_EQ(is_chordal(u).chordal, is_chordal(t).chordal);
        EXPECT_TRUE(are_isomorphic(t, u));
        for (auto e : t.edges()) EXPECT_TRUE(u.has_edge(p[e.first], p[e.second]));
    }
}

TEST(Isomorphism, FourNodeClasses) {
    std::size_t four = 0, five = 0;
    for (const auto& t : testing::all_topologies(4)) {
        if (t.edge_count() == 4 && is_connected(t)) {
            ++four;
            EXPECT_TRUE(are_isomorphic(t, testing::paw()) || are_isomorphic(t, testing::four_cycle())) << to_string(t);
        }
        if (t.edge_count() == 5) {
            ++five;
            EXPECT_TRUE(are_isomorphic(t, testing::diamond())) << to_string(t);
        }
    }
    EXPECT_EQ(four, 15u);  // 12 paw graphs + 3 four-cycles
    EXPECT_EQ(five, 6u);
    EXPECT_FALSE(are_isomorphic(testing::paw(), testing::four_cycle()));
}

TEST(Parse, RoundTrip) {
    const auto t = parse_topology(" 4 :  3-1 , 1-4,\t2-4 ");
    EXPECT_EQ(to_string(t), "4: 1-3,1-4,2-4");
    EXPECT_EQ(parse_topology(to_string(t)), t);
    EXPECT_EQ(to_string(Topology(3, {})), "3:");
    EXPECT_EQ(parse_topology("3:"), Topology(3, {}));
    for (const auto& u : testing::all_topologies(4)) EXPECT_EQ(parse_topology(to_string(u)), u);
}

TEST(Parse, Errors) {
    for (const char* bad : {"", "4", "4: 1-", "4: 1-5", "4: 0-1", "4: 1-2,", "4: 1-2,1-2", "4: 1-1", "x: 1-2",
                            "4: 1-2 3-4", "1:"}) {
        EXPECT_THROW(parse_topology(bad), Error) << bad;
    }
    try {
        parse_topology("4: 1-2,3-x");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 10u);
    }
}

TEST(NodePair, LabelsAreOneBased) {
    EXPECT_EQ(to_label(NodePair::of(2, 0)), "1-3");
    EXPECT_EQ(NodePair::of(2, 0), (NodePair{0, 2}));
}

}  // namespace
}  // namespace netgc
