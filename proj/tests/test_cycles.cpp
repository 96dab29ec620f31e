#include <parrep/conditioning.hpp>
#include <parrep/cycles.hpp>
#include <parrep/homsearch.hpp>

#include <gtest/gtest.h>

#include <bit>
#include <random>

using namespace parrep;
using namespace parrep::cycles;

namespace
{
    auto bit(int u) -> Mask
    {
        return Mask{1} << u;
    }

    auto restrict_to(const BitGraph & g, Mask s) -> BitGraph
    {
        BitGraph out{s, std::vector<Mask>(g.adj.size(), 0)};
        for (int u = 0; u < g.size(); ++u)
            if (bit(u) & s)
                out.adj[static_cast<std::size_t>(u)] = g.adj[static_cast<std::size_t>(u)] & s;
        return out;
    }

    // Positions become ids, parity becomes the side.
    auto to_hypergraph(const BitGraph & g) -> Hypergraph
    {
        std::vector<std::vector<VertexId>> sides(2);
        std::vector<Edge> edges;
        for (int u = 0; u < g.size(); ++u) {
            if (! (bit(u) & g.active))
                continue;
            sides[static_cast<std::size_t>(u % 2)].push_back(static_cast<VertexId>(u));
            if (u % 2 == 0)
                for (int w = 0; w < g.size(); ++w)
                    if (g.adj[static_cast<std::size_t>(u)] & bit(w))
                        edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(w)});
        }
        return Hypergraph(sides, edges);
    }

    auto valid_mapping(const BitGraph & g, const BitGraph & copy, const Between & between, const std::vector<int> & m) -> bool
    {
        for (int up = 0; up < g.size(); ++up) {
            auto uu = static_cast<std::size_t>(up);
            if (! (bit(up) & copy.active))
                continue;
            if (m[uu] < 0 || ! (bit(m[uu]) & g.active))
                return false;
            auto nu = g.adj[static_cast<std::size_t>(m[uu])];
            if ((nu & between[uu]) != between[uu])
                return false;
            for (int vp = 0; vp < g.size(); ++vp)
                if (copy.adj[uu] & bit(vp) && ! (nu & bit(m[static_cast<std::size_t>(vp)])))
                    return false;
        }
        return true;
    }

    // Every assignment of copies to active positions, parity ignored.
    auto brute_collapse(const BitGraph & g, const BitGraph & copy, const Between & between, std::optional<Mask> unnatural) -> bool
    {
        std::vector<int> copies, targets;
        for (int u = 0; u < g.size(); ++u) {
            if (bit(u) & copy.active)
                copies.push_back(u);
            if (bit(u) & g.active)
                targets.push_back(u);
        }
        std::vector<std::size_t> digit(copies.size(), 0);
        std::vector<int> m(g.adj.size(), -1);
        for (;;) {
            for (std::size_t i = 0; i < copies.size(); ++i)
                m[static_cast<std::size_t>(copies[i])] = targets[digit[i]];
            if (valid_mapping(g, copy, between, m)) {
                if (! unnatural)
                    return true;
                bool in_t = false, outside = false;
                for (int up : copies)
                    if (m[static_cast<std::size_t>(up)] != up)
                        (bit(up) & *unnatural ? in_t : outside) = true;
                if (in_t && outside)
                    return true;
            }
            std::size_t i = 0;
            while (i < digit.size() && ++digit[i] == targets.size())
                digit[i++] = 0;
            if (i == digit.size())
                return false;
        }
    }

    // True when every connected piece of the copy touches the original.
    auto anchored(const BitGraph & copy, const Between & between) -> bool
    {
        Mask seen = 0;
        for (int s = 0; s < copy.size(); ++s) {
            if (! (bit(s) & copy.active) || (bit(s) & seen))
                continue;
            Mask piece = bit(s), frontier = bit(s);
            while (frontier) {
                int u = std::countr_zero(frontier);
                frontier &= ~bit(u);
                Mask next = copy.adj[static_cast<std::size_t>(u)] & ~piece;
                piece |= next;
                frontier |= next;
            }
            seen |= piece;
            bool touches = false;
            for (int u = 0; u < copy.size(); ++u)
                if (bit(u) & piece)
                    touches = touches || between[static_cast<std::size_t>(u)] != 0;
            if (! touches)
                return false;
        }
        return true;
    }
}

TEST(BitHelpers, ModAndPopcountMatchNaiveDefinitions)
{
    for (int m = 1; m <= 17; ++m)
        for (int x = -40; x <= 40; ++x) {
            int want = x % m;
            if (want < 0)
                want += m;
            EXPECT_EQ(mod(x, m), want);
        }
    std::mt19937 rng(61);
    for (Mask u = 0; u < (1u << 16); ++u)
        ASSERT_EQ(popcount(u), std::popcount(u));
    for (int i = 0; i < 5000; ++i) {
        Mask u = rng();
        EXPECT_EQ(popcount(u), std::popcount(u));
    }
}

TEST(BitHelpers, CycleWithShortcuts)
{
    auto g = cycle_graph(12);
    EXPECT_EQ(g.active, (1u << 12) - 1);
    EXPECT_EQ(g.adj[0], bit(1) | bit(3) | bit(9) | bit(11));
    for (int u = 0; u < 12; ++u) {
        EXPECT_EQ(std::popcount(g.adj[static_cast<std::size_t>(u)]), 4);
        for (int w = 0; w < 12; ++w)
            EXPECT_EQ(bool(g.adj[static_cast<std::size_t>(u)] & bit(w)), bool(g.adj[static_cast<std::size_t>(w)] & bit(u)));
    }
    EXPECT_EQ(neighbors(bit(0) | bit(1), g), g.adj[0] | g.adj[1]);
    EXPECT_EQ(neighbors(0, g), 0u);
}

TEST(BitDouble, SplitsEdgesBetweenCopyAndOriginal)
{
    auto g = cycle_graph(8);
    BitGraph copy;
    Between between;
    Mask t = bit(0) | bit(1) | bit(2);
    bit_double(t, g, copy, between);
    EXPECT_EQ(copy.active, t);
    EXPECT_EQ(copy.adj[0], bit(1));
    EXPECT_EQ(copy.adj[1], bit(0) | bit(2));
    EXPECT_EQ(between[0], bit(3) | bit(5) | bit(7));
    EXPECT_EQ(between[1], bit(4) | bit(6));
    EXPECT_EQ(between[5], 0u);
    EXPECT_THROW(bit_double(bit(3), restrict_to(g, bit(0)), copy, between), std::invalid_argument);
}

TEST(BitExchange, TwiceRestoresEverything)
{
    std::mt19937 rng(62);
    auto full = cycle_graph(10);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = full;
        BitGraph copy;
        Between between;
        Mask t = rng() & g.active;
        bit_double(t, g, copy, between);
        Mask swap = rng() & t;
        auto g0 = g;
        auto copy0 = copy;
        auto between0 = between;
        bit_exchange(swap, g, copy, between);
        bit_exchange(swap, g, copy, between);
        EXPECT_EQ(g, g0);
        EXPECT_EQ(copy, copy0);
        EXPECT_EQ(between, between0);
    }
}

TEST(BitExchange, DoublingIsSymmetricUnderExchange)
{
    // Swapping a whole doubled set leaves the same picture up to relabelling.
    auto g = cycle_graph(8);
    BitGraph copy;
    Between between;
    Mask t = bit(0) | bit(1) | bit(4);
    bit_double(t, g, copy, between);
    auto g0 = g;
    bit_exchange(t, g, copy, between);
    EXPECT_EQ(g.adj, g0.adj);
}

TEST(Collapse, AgreesWithExhaustiveAssignment)
{
    auto full = cycle_graph(8);
    int searched = 0, unnatural = 0, natural_only = 0;
    for (Mask s = 1; s < (1u << 8); ++s) {
        auto g = restrict_to(full, s);
        for (Mask t = s;; t = (t - 1) & s) {
            if (std::popcount(t) <= 4) {
                BitGraph copy;
                Between between;
                bit_double(t, g, copy, between);
                std::vector<int> mapping;
                bool fast = is_collapsible(g, copy, between, mapping);
                ASSERT_EQ(fast, brute_collapse(g, copy, between, std::nullopt)) << s << " " << t;
                if (fast)
                    EXPECT_TRUE(valid_mapping(g, copy, between, mapping));
                for (Mask u = t;; u = (u - 1) & t) {
                    bool unnat = is_unnaturally_collapsible(u, g, copy, between, mapping);
                    ASSERT_EQ(unnat, brute_collapse(g, copy, between, u));
                    (unnat ? unnatural : natural_only) += 1;
                    if (u == 0)
                        break;
                }
                // The identity on copies is always available.
                EXPECT_TRUE(fast);
                ++searched;
            }
            if (t == 0)
                break;
        }
    }
    EXPECT_GT(searched, 1000);
    EXPECT_GT(unnatural, 0);
    EXPECT_GT(natural_only, 0);
}

TEST(Collapse, AgreesWithGeneralSearchWhenParityIsForced)
{
    auto full = cycle_graph(8);
    int compared = 0;
    for (Mask s = 1; s < (1u << 8); ++s) {
        auto g = restrict_to(full, s);
        auto h = to_hypergraph(g);
        for (Mask t = s;; t = (t - 1) & s) {
            BitGraph copy;
            Between between;
            bit_double(t, g, copy, between);
            std::vector<int> mapping;
            bool bits = is_collapsible(g, copy, between, mapping);

            SideSubset doubled(2);
            for (int u = 0; u < 8; ++u)
                if (bit(u) & t)
                    doubled.insert({u % 2, static_cast<VertexId>(u)});
            auto d = apply_doubling(h, DoublingStep{doubled});
            auto general = find_collapse(d.graph, h.all_vertices());
            // A side-preserving collapse is always a collapse of the bit graph.
            if (general)
                EXPECT_TRUE(bits);
            if (anchored(copy, between)) {
                ASSERT_EQ(bits, general.has_value()) << s << " " << t;
                ++compared;
            }
            if (t == 0)
                break;
        }
    }
    EXPECT_GT(compared, 1000);
}

TEST(LemmaChecks, TwelveVerticesSucceed)
{
    for (auto c : {Check::NonEmptyB, Check::NonEmptyAD, Check::NaturalCollapse}) {
        auto r = run_lemma_check(c, 12);
        EXPECT_TRUE(r.success()) << r.transcript();
        EXPECT_NE(r.transcript().find("SUCCESS"), std::string::npos);
    }
    auto b = run_lemma_check(Check::NonEmptyB, 12);
    EXPECT_EQ(b.partitions, 23u);
    auto ad = run_lemma_check(Check::NonEmptyAD, 12);
    EXPECT_EQ(ad.partitions, 12419u);
    EXPECT_EQ(ad.collapse_searches, 4896u);
}

TEST(LemmaChecks, EightVerticesFailTheBlockCheck)
{
    auto r = run_lemma_check(Check::NonEmptyB, 8);
    ASSERT_FALSE(r.success());
    auto & ce = *r.counterexample;
    EXPECT_EQ(ce.a, 0u);
    EXPECT_EQ(ce.c, bit(1) | bit(3) | bit(5) | bit(7));
    EXPECT_EQ(ce.d, bit(4) | bit(6));
    auto text = r.transcript();
    EXPECT_NE(text.find("FAILURE"), std::string::npos);
    EXPECT_NE(text.find("(B,B') = (0,2)"), std::string::npos);
    EXPECT_NE(text.find("(4,0) (5,-1) (6,0)"), std::string::npos);
}

TEST(LemmaChecks, WorkerCountDoesNotChangeAnything)
{
    for (auto c : {Check::NonEmptyB, Check::NonEmptyAD, Check::NaturalCollapse})
        for (int v : {8, 10}) {
            auto one = run_lemma_check(c, v, 1);
            auto three = run_lemma_check(c, v, 3);
            EXPECT_EQ(one.partitions, three.partitions);
            EXPECT_EQ(one.collapse_searches, three.collapse_searches);
            EXPECT_EQ(one.transcript(), three.transcript());
        }
}

TEST(LemmaChecks, CheckNames)
{
    for (auto c : {Check::NonEmptyB, Check::NonEmptyAD, Check::NaturalCollapse})
        EXPECT_EQ(parse_check(check_name(c)), c);
    EXPECT_THROW(parse_check("x"), std::invalid_argument);
}

TEST(Verdict, TwelveIsNonConstructibleAndEightIsWithheld)
{
    auto v12 = verify_nonconstructible(12);
    EXPECT_TRUE(v12.non_constructible());
    EXPECT_FALSE(v12.experimental);
    EXPECT_NE(v12.report().find("not constructible"), std::string::npos);
    auto v8 = verify_nonconstructible(8);
    EXPECT_FALSE(v8.non_constructible());
    EXPECT_TRUE(v8.experimental);
    EXPECT_NE(v8.report().find("WITHHELD"), std::string::npos);
    EXPECT_THROW(verify_nonconstructible(9), std::invalid_argument);
    EXPECT_THROW(verify_nonconstructible(6), std::invalid_argument);
}
