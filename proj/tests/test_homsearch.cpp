#include "support.hpp"

#include <parrep/conditioning.hpp>
#include <parrep/homsearch.hpp>

#include <gtest/gtest.h>

using namespace parrep;
using namespace parrep::testing;

namespace
{
    auto is_collapse(const Homomorphism & f, const Hypergraph & g, const SideSubset & kept) -> bool
    {
        for (auto v : g.vertices())
            if (kept.contains(v) && f(v) != v.id)
                return false;
        return is_homomorphism(f, g, section(g, kept));
    }
}

TEST(FindCollapse, FourCycleOntoOneEdge)
{
    auto c = even_cycle(4);
    SideSubset kept(std::vector<std::set<VertexId>>{{0}, {1}});
    auto f = find_collapse(c, kept);
    ASSERT_TRUE(f);
    EXPECT_TRUE(is_collapse(*f, c, kept));
}

TEST(FindCollapse, StarLeavesLandOnTheKeptLeaf)
{
    auto s = star(3);
    SideSubset kept(std::vector<std::set<VertexId>>{{0}, {2}});
    auto f = find_collapse(s, kept);
    ASSERT_TRUE(f);
    for (VertexId leaf = 1; leaf <= 3; ++leaf)
        EXPECT_EQ((*f)({1, leaf}), 2u);
}

TEST(FindCollapse, SetGraphAgreesWithCandidateOracle)
{
    auto s = named::set_graph(2);
    // Element 1 and the singleton {1} (bitmask 1).
    SideSubset kept(std::vector<std::set<VertexId>>{{1}, {1}});
    auto fast = find_collapse(s, kept);
    auto slow = find_collapse_naive(s, kept);
    EXPECT_EQ(fast.has_value(), slow.has_value());
    if (fast)
        EXPECT_TRUE(is_collapse(*fast, s, kept));
}

TEST(FindCollapse, ForcedPinsAreRespected)
{
    auto c = even_cycle(6);
    SideSubset kept(std::vector<std::set<VertexId>>{{0, 2}, {1}});
    Homomorphism pin(2);
    pin.set({0, 4}, 2);
    auto f = find_collapse(c, kept, pin);
    ASSERT_TRUE(f);
    EXPECT_EQ((*f)({0, 4}), 2u);
    EXPECT_TRUE(is_collapse(*f, c, kept));
}

TEST(FindCollapse, AgreesWithNaiveOracleOnRandomGraphs)
{
    std::mt19937_64 rng(21);
    std::bernoulli_distribution keep(0.5);
    int found = 0;
    for (int trial = 0; trial < 400; ++trial) {
        int arity = 2 + trial % 2;
        auto g = random_hypergraph(rng, arity, arity == 2 ? 6 : 4, 0.45);
        SideSubset kept(arity);
        for (auto v : g.vertices())
            if (keep(rng))
                kept.insert(v);
        auto fast = find_collapse(g, kept);
        auto slow = find_collapse_naive(g, kept);
        ASSERT_EQ(fast.has_value(), slow.has_value()) << "trial " << trial;
        if (fast) {
            ++found;
            EXPECT_TRUE(is_collapse(*fast, g, kept));
            EXPECT_EQ(find_collapse(g, kept), fast);
        }
    }
    EXPECT_GT(found, 20);
    EXPECT_LT(found, 400);
}

TEST(FindUnnaturalCollapse, TwoDisjointEdgesOnlyCollapseNaturally)
{
    Hypergraph g({{0, 1}, {0, 1}}, {{0, 0}, {1, 1}});
    SideSubset kept(std::vector<std::set<VertexId>>{{0}, {0}});
    Homomorphism natural(2);
    natural.set({0, 1}, 0);
    natural.set({1, 1}, 0);
    EXPECT_FALSE(find_unnatural_collapse(g, kept, {{0, 1}}, natural));
}

TEST(FindUnnaturalCollapse, DoubledSixCycleRotates)
{
    auto c = even_cycle(6);
    auto d = apply_doubling(c, DoublingStep{c.all_vertices()});
    Homomorphism natural(2);
    for (auto [from, to] : d.copies)
        natural.set(to, from.id);
    auto kept = c.all_vertices();
    auto t = std::set<VertexRef>{d.copies.at({0, 0})};
    auto f = find_unnatural_collapse(d.graph, kept, t, natural);
    ASSERT_TRUE(f);
    EXPECT_TRUE(is_collapse(*f, d.graph, kept));
    EXPECT_NE((*f)(d.copies.at({0, 0})), 0u);
    bool other_moves = false;
    for (auto [from, to] : d.copies)
        if (! t.contains(to))
            other_moves = other_moves || (*f)(to) != from.id;
    EXPECT_TRUE(other_moves);
}

TEST(FindUnnaturalCollapse, EmptyTIsVacuouslyAbsent)
{
    auto c = even_cycle(6);
    auto d = apply_doubling(c, DoublingStep{c.all_vertices()});
    Homomorphism natural(2);
    for (auto [from, to] : d.copies)
        natural.set(to, from.id);
    EXPECT_FALSE(find_unnatural_collapse(d.graph, c.all_vertices(), {}, natural));
}

TEST(FindUnnaturalCollapse, RejectsMissingNaturalPartner)
{
    Hypergraph g({{0, 1}, {0, 1}}, {{0, 0}, {1, 1}});
    SideSubset kept(std::vector<std::set<VertexId>>{{0}, {0}});
    Homomorphism natural(2);
    natural.set({0, 1}, 0);
    EXPECT_THROW(find_unnatural_collapse(g, kept, {{0, 1}}, natural), std::invalid_argument);
}

TEST(FindCollapse, RandomHypergraphsCollapseOntoEveryEdge)
{
    // Sending side j to the j-th vertex of the edge always works, so the search must succeed.
    std::mt19937_64 rng(22);
    int instances = 0;
    for (int trial = 0; trial < 300; ++trial) {
        int arity = 2 + trial % 3;
        auto g = random_hypergraph(rng, arity, arity == 4 ? 3 : 4, 0.5);
        instances += g.edge_count() > 0;
        for (auto & e : g.edges()) {
            SideSubset kept(arity);
            for (int j = 0; j < arity; ++j)
                kept.insert({j, e[static_cast<std::size_t>(j)]});
            auto f = find_collapse(g, kept);
            ASSERT_TRUE(f) << to_text(g);
            EXPECT_TRUE(is_collapse(*f, g, kept));
        }
    }
    EXPECT_GT(instances, 200);
}
