#include "support.hpp"

#include <parrep/errors.hpp>
#include <parrep/games.hpp>
#include <parrep/lines.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace parrep;
using namespace parrep::testing;

namespace
{
    auto rat(long p, long q) -> Rational
    {
        Rational x(p, q);
        x.canonicalize();
        return x;
    }

    auto words(int r, int n, std::initializer_list<const char *> list) -> StringSet
    {
        StringSet s(r, n);
        for (auto w : list) {
            Word word;
            for (const char * c = w; *c; ++c)
                word.push_back(*c - '0');
            s.insert(word);
        }
        return s;
    }

    auto full_set(int r, int n) -> StringSet
    {
        StringSet s(r, n);
        for (std::size_t i = 0; i < s.universe(); ++i)
            s.insert(i);
        return s;
    }

    auto random_strategy(const Game & g, std::mt19937_64 & rng) -> Strategy
    {
        return make_strategy(g, [&](int j, VertexId) {
            return std::uniform_int_distribution<std::size_t>(0, g.answer_count(j) - 1)(rng);
        });
    }

    auto strategy_space(const Game & g) -> long double
    {
        long double total = 1;
        for (int j = 0; j < g.arity(); ++j)
            total *= std::pow(static_cast<long double>(g.answer_count(j)), static_cast<long double>(g.questions().side(j).size()));
        return total;
    }
}

TEST(Value, AndGameIsThreeQuarters)
{
    auto g = and_game();
    auto v = game_value(g);
    EXPECT_EQ(v.value, rat(3, 4));
    EXPECT_EQ(brute_force_value(g), rat(3, 4));
    EXPECT_EQ(evaluate_strategy(g, v.witness), v.value);
}

TEST(Value, AlwaysAcceptIsOne)
{
    Game g(named::qr(3), {2, 3, 1}, [](const Edge &, std::span<const std::size_t>) { return true; });
    EXPECT_EQ(game_value(g).value, 1);
}

TEST(Value, StringGameWithWholeSpaceIsTrivial)
{
    EXPECT_EQ(game_value(build_game_gs(3, full_set(3, 1))).value, 1);
}

TEST(Value, MatchesBruteForceOnRandomGames)
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 80; ++trial) {
        auto g = random_game(rng, 2 + trial % 2, 3, 3);
        if (strategy_space(g) > 2e5)
            continue;
        auto v = game_value(g);
        EXPECT_EQ(v.value, brute_force_value(g)) << "trial " << trial;
        EXPECT_EQ(evaluate_strategy(g, v.witness), v.value);
    }
}

TEST(Value, WorkersDoNotChangeTheResult)
{
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = random_game(rng, 3, 3, 3);
        auto one = game_value(g, default_budget, 1);
        auto three = game_value(g, default_budget, 3);
        EXPECT_EQ(one.value, three.value);
        EXPECT_EQ(one.witness, three.witness);
    }
}

TEST(Value, BudgetIsEnforced)
{
    auto g = repeat_game(and_game(), 2);
    try {
        game_value(g, 10);
        FAIL() << "expected the budget to trip";
    }
    catch (const BudgetExceeded & e) {
        EXPECT_GT(e.required(), 10);
    }
}

TEST(Repeat, OneCopyIsTheSameGame)
{
    auto g = and_game();
    auto g1 = repeat_game(g, 1);
    EXPECT_EQ(g1.questions().edge_count(), g.questions().edge_count());
    EXPECT_TRUE(are_isomorphic(g1.questions(), g.questions()));
    EXPECT_EQ(game_value(g1).value, game_value(g).value);
}

TEST(Repeat, AndGameTwice)
{
    auto g2 = repeat_game(and_game(), 2);
    EXPECT_EQ(g2.questions().edge_count(), 16u);
    EXPECT_GE(game_value(g2).value, rat(9, 16));
}

TEST(Repeat, EdgeCountsMultiply)
{
    auto g = build_game_gs(3, full_set(3, 1));
    for (std::size_t n = 1; n <= 3; ++n)
        EXPECT_EQ(repeat_game(g, n).questions().edge_count(), static_cast<std::size_t>(std::pow(3, n)));
}

TEST(Repeat, ValueIsAtLeastThePowerOnRandomGames)
{
    std::mt19937_64 rng(53);
    int tested = 0;
    while (tested < 60) {
        auto g = random_game(rng, 2, 3, 3);
        auto v = game_value(g).value;
        EXPECT_GE(game_value(repeat_game(g, 1)).value, v);
        auto g2 = repeat_game(g, 2);
        if (strategy_space(g2) > 5e6)
            continue;
        EXPECT_GE(game_value(g2).value, v * v) << to_text(g);
        ++tested;
    }
}

TEST(StringGame, AlphabetAndQuestions)
{
    auto g = build_game_gs(3, StringSet(3, 2));
    for (int j = 0; j < 3; ++j)
        EXPECT_EQ(g.answer_count(j), 8u);
    EXPECT_EQ(g.questions().edge_count(), 3u);
    EXPECT_THROW(build_game_gs(2, StringSet(2, 2)), std::invalid_argument);
}

TEST(StringGame, EmptySetStaysBelowOneMinusOneOverR)
{
    for (int n = 1; n <= 2; ++n) {
        auto v = game_value(build_game_gs(3, StringSet(3, n))).value;
        EXPECT_LT(v, 1);
        EXPECT_LE(v, rat(2, 3));
    }
}

TEST(StringGame, LineStrategyWins)
{
    auto g1 = build_game_gs(3, full_set(3, 1));
    EXPECT_EQ(evaluate_strategy(g1, line_strategy_gs(3, parse_pattern("*", 3), 0)), 1);
    auto s = words(3, 2, {"11", "12", "13"});
    auto g2 = build_game_gs(3, s);
    EXPECT_EQ(evaluate_strategy(g2, line_strategy_gs(3, parse_pattern("1*", 3), 1)), 1);
    EXPECT_EQ(game_value(g2).value, 1);
    EXPECT_THROW(line_strategy_gs(3, parse_pattern("1*", 3), 0), std::invalid_argument);
}

TEST(StringGame, CanonicalStrategyAchievesTheMeasure)
{
    auto check = [](const StringSet & s) {
        auto g = repeat_game(build_game_gs(3, s), static_cast<std::size_t>(s.n()));
        return evaluate_strategy(g, canonical_strategy_gs(3, s.n()));
    };
    EXPECT_EQ(check(full_set(3, 2)), 1);
    EXPECT_EQ(check(words(3, 2, {"12", "21"})), rat(2, 9));
    EXPECT_EQ(check(equidistributed_set(3, 3)), rat(2, 9));
}

TEST(StringGame, ValueOneIffLineOnSampledSets)
{
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 40; ++trial) {
        StringSet s(3, 2);
        for (std::size_t i = 0; i < 9; ++i)
            if (rng() & 1)
                s.insert(i);
        auto v = game_value(build_game_gs(3, s)).value;
        if (has_combinatorial_line(s))
            EXPECT_EQ(v, 1);
        else
            EXPECT_LE(v, rat(2, 3));
    }
}

TEST(GoodVector, WholeProductGivesIdentities)
{
    auto q = named::qr(3);
    EdgeTupleMask all(9, true);
    auto gv = find_good_vector(q, 2, all);
    ASSERT_TRUE(gv);
    EXPECT_EQ(gv->maps[gv->identity_coordinate], identity_map(q));
    EXPECT_TRUE(is_good_vector(q, *gv, all));
    GoodVector all_id{{identity_map(q), identity_map(q)}, 0};
    EXPECT_TRUE(is_good_vector(q, all_id, all));
}

TEST(GoodVector, MissingEdgeWithOneCoordinateIsHopeless)
{
    auto q = named::qr(3);
    EdgeTupleMask s{true, true, false};
    EXPECT_FALSE(find_good_vector(q, 1, s));
}

TEST(GoodVector, IdentityAndAConstant)
{
    auto q = named::qr(3);
    auto e1 = *q.edge_index({1, 0, 0});
    EdgeTupleMask s(9, false);
    for (std::size_t e = 0; e < 3; ++e)
        s[e * 3 + e1] = true;
    auto gv = find_good_vector(q, 2, s);
    ASSERT_TRUE(gv);
    EXPECT_EQ(gv->identity_coordinate, 0u);
    EXPECT_EQ(gv->maps[0], identity_map(q));
    for (auto & e : q.edges())
        EXPECT_EQ(gv->maps[1].image(e), (Edge{1, 0, 0}));
    EXPECT_TRUE(is_good_vector(q, *gv, s));
}

TEST(Lift, EverywhereWinningStrategyLifts)
{
    Game g(named::qr(3), {2, 2, 2}, [](const Edge &, std::span<const std::size_t> a) { return a[0] == a[1]; });
    auto g2 = repeat_game(g, 2);
    auto s = game_value(g2).witness;
    ASSERT_EQ(evaluate_strategy(g2, s), 1);
    GoodVector all_id{{identity_map(g.questions()), identity_map(g.questions())}, 0};
    EXPECT_EQ(evaluate_strategy(g, lift_strategy(g, 2, s, all_id)), 1);
}

TEST(Lift, NotGoodIsRejected)
{
    auto g = and_game();
    auto g2 = repeat_game(g, 2);
    auto s = make_strategy(g2, [](int, VertexId) { return std::size_t{0}; });
    GoodVector all_id{{identity_map(g.questions()), identity_map(g.questions())}, 0};
    EXPECT_THROW(lift_strategy(g, 2, s, all_id), std::invalid_argument);
}

TEST(Lift, AndGameSquaredNeverAdmitsAGoodVector)
{
    // A good vector would lift to a perfect strategy, but the game's value is 3/4.
    auto g = and_game();
    auto g2 = repeat_game(g, 2);
    std::vector<std::size_t> digits(8, 0);
    std::size_t checked = 0;
    for (;;) {
        Strategy s{{{digits[0], digits[1], digits[2], digits[3]}, {digits[4], digits[5], digits[6], digits[7]}}};
        EXPECT_FALSE(find_good_vector(g.questions(), 2, winning_tuples(g, 2, s)));
        ++checked;
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == 4)
            digits[i++] = 0;
        if (i == digits.size())
            break;
    }
    EXPECT_EQ(checked, 65536u);
}

TEST(Lift, CertifiedVectorsAlwaysGivePerfectStrategies)
{
    std::mt19937_64 rng(55);
    int lifted = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto g = random_game(rng, 2, 2, 2);
        auto g2 = repeat_game(g, 2);
        auto s = trial % 2 ? game_value(g2).witness : random_strategy(g2, rng);
        auto win = winning_tuples(g, 2, s);
        auto gv = find_good_vector(g.questions(), 2, win);
        if (! gv)
            continue;
        ASSERT_TRUE(is_good_vector(g.questions(), *gv, win));
        EXPECT_EQ(evaluate_strategy(g, lift_strategy(g, 2, s, *gv)), 1);
        EXPECT_EQ(game_value(g).value, 1);
        ++lifted;
    }
    EXPECT_GT(lifted, 10);
}

TEST(Coloring, ConstantOutputNeedsOneColour)
{
    ColoringGame g(named::complete({2, 2}), {2, 2}, [](const Edge &, std::span<const std::size_t>) { return Color{7}; });
    EXPECT_EQ(coloring_value(g).colors, 1u);
}

TEST(Coloring, QuestionOutputNeedsOneColourPerTuple)
{
    Hypergraph q({{0, 1}, {0}}, {{0, 0}, {1, 0}});
    ColoringGame g(q, {2, 2}, [](const Edge & e, std::span<const std::size_t>) {
        return Color{static_cast<std::int64_t>(e[0]), static_cast<std::int64_t>(e[1])};
    });
    EXPECT_EQ(coloring_value(g).colors, 2u);
}

TEST(Coloring, FirstProversAnswerCanBeHeldConstant)
{
    ColoringGame g(named::complete({2, 2}), {2, 2}, [](const Edge &, std::span<const std::size_t> a) {
        return Color{static_cast<std::int64_t>(a[0])};
    });
    auto v = coloring_value(g);
    EXPECT_EQ(v.colors, 1u);
    EXPECT_EQ(colors_used(g, v.witness).size(), 1u);
}

TEST(Coloring, CanonicalStrategyReusesTheColouring)
{
    for (int n = 1; n <= 2; ++n) {
        std::size_t words_count = static_cast<std::size_t>(std::pow(3, n));
        std::mt19937_64 rng(56 + static_cast<unsigned>(n));
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<int> c(words_count);
            for (auto & x : c)
                x = static_cast<int>(rng() % 3);
            if (trial == 0)
                std::fill(c.begin(), c.end(), 0);
            auto gc = build_coloring_game_gc(3, n, c);
            auto rep = repeat_coloring_game(gc, static_cast<std::size_t>(n));
            auto used = colors_used(rep, canonical_strategy_gs(3, n));
            std::set<int> image(c.begin(), c.end());
            EXPECT_EQ(used.size(), image.size());
            for (auto & col : used)
                for (auto x : col) {
                    EXPECT_GE(x, 0);
                    EXPECT_TRUE(image.contains(static_cast<int>(x)));
                }
        }
    }
}

TEST(Coloring, GameNeverNeedsMoreThanTheColouring)
{
    // Every colouring of [3]^1, against the exact colour value of its game.
    for (int code = 0; code < 27; ++code) {
        std::vector<int> c{code % 3, code / 3 % 3, code / 9};
        auto v = coloring_value(build_coloring_game_gc(3, 1, c));
        std::set<int> image(c.begin(), c.end());
        EXPECT_LE(v.colors, image.size());
        if (! has_monochromatic_line(3, 1, c))
            EXPECT_GE(static_cast<int>(image.size()), hj_coeff(3, 1).colors);
    }
}

TEST(Bounds, NonuniformFormula)
{
    auto zero = [](double) { return 0.0; };
    auto half_pow = [](double x) { return std::exp2(-x); };
    EXPECT_DOUBLE_EQ(nonuniform_bound(1, 2, zero), std::exp(-1.0));
    EXPECT_DOUBLE_EQ(nonuniform_bound(rat(1, 2), 8, half_pow), std::exp(-1.0) + 0.25);
    EXPECT_THROW(nonuniform_bound(0, 8, zero), std::invalid_argument);
    EXPECT_THROW(nonuniform_bound(rat(3, 2), 8, zero), std::invalid_argument);
    double prev = 0;
    for (long d : {1, 2, 4, 16, 256}) {
        double b = nonuniform_bound(rat(1, d), 4, half_pow);
        EXPECT_GE(b, prev);
        prev = b;
    }
    EXPECT_NEAR(prev, 2.0, 0.05);
}

TEST(Text, GameAndStrategyRoundTrip)
{
    auto text = "game 2\nquestions 1: 0 1\nquestions 2: 0 1\nanswers 1: 2\nanswers 2: 2\n"
                "accept 0 0 0 0\naccept 0 0 1 1\naccept 0 1 0 0\naccept 0 1 1 1\n"
                "accept 1 0 0 0\naccept 1 0 1 1\naccept 1 1 0 1\naccept 1 1 1 0\n";
    auto g = parse_game(text);
    EXPECT_EQ(game_value(g).value, rat(3, 4));
    auto again = parse_game(to_text(g));
    EXPECT_EQ(to_text(again), to_text(g));
    auto s = game_value(g).witness;
    EXPECT_EQ(parse_strategy(g, to_text(g, s)), s);
    try {
        parse_game("game 2\nquestions 1: 0\nquestions 2: 0\nanswers 1: 2\nanswers 2: 2\naccept 0 0 1\n");
        FAIL() << "expected a format error";
    }
    catch (const FormatError & e) {
        EXPECT_EQ(e.line(), 6u);
    }
    auto restricted = parse_game("game 2\nquestions 1: 0 1\nquestions 2: 0\nanswers 1: 1\nanswers 2: 1\nedge: 0 0\nedge: 1 0\naccept 0 0 0 0\n");
    EXPECT_EQ(game_value(restricted).value, rat(1, 2));
}
