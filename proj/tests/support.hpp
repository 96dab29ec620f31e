#pragma once

#include <parrep/conditioning.hpp>
#include <parrep/games.hpp>
#include <parrep/hypergraph.hpp>

#include <functional>
#include <memory>
#include <random>
#include <vector>

namespace parrep::testing
{
    // Bipartite cycle on 2m positions: even positions on side 0, odd on side 1, ids are positions.
    inline auto even_cycle(int length) -> Hypergraph
    {
        std::vector<std::vector<VertexId>> sides(2);
        std::vector<Edge> edges;
        for (int i = 0; i < length; ++i)
            sides[static_cast<std::size_t>(i % 2)].push_back(static_cast<VertexId>(i));
        for (int i = 0; i < length; i += 2) {
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % length)});
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + length - 1) % length)});
        }
        return {sides, edges};
    }

    // Path with the given number of edges, positions alternate sides as above.
    inline auto path(int edges_count) -> Hypergraph
    {
        std::vector<std::vector<VertexId>> sides(2);
        std::vector<Edge> edges;
        for (int i = 0; i <= edges_count; ++i)
            sides[static_cast<std::size_t>(i % 2)].push_back(static_cast<VertexId>(i));
        for (int i = 0; i < edges_count; ++i) {
            auto a = static_cast<VertexId>(i), b = static_cast<VertexId>(i + 1);
            edges.push_back(i % 2 == 0 ? Edge{a, b} : Edge{b, a});
        }
        return {sides, edges};
    }

    inline auto star(int leaves) -> Hypergraph
    {
        std::vector<std::vector<VertexId>> sides{{0}, {}};
        std::vector<Edge> edges;
        for (int i = 1; i <= leaves; ++i) {
            sides[1].push_back(static_cast<VertexId>(i));
            edges.push_back({0, static_cast<VertexId>(i)});
        }
        return {sides, edges};
    }

    inline auto random_hypergraph(std::mt19937_64 & rng, int arity, int max_side, double density) -> Hypergraph
    {
        std::uniform_int_distribution<int> size(1, max_side);
        std::bernoulli_distribution keep(density);
        std::vector<std::vector<VertexId>> sides(static_cast<std::size_t>(arity));
        for (auto & s : sides) {
            int k = size(rng);
            for (int i = 0; i < k; ++i)
                s.push_back(static_cast<VertexId>(i));
        }
        std::vector<Edge> edges;
        Edge e(static_cast<std::size_t>(arity), 0);
        std::function<void(int)> rec = [&](int j) {
            if (j == arity) {
                if (keep(rng))
                    edges.push_back(e);
                return;
            }
            for (auto v : sides[static_cast<std::size_t>(j)]) {
                e[static_cast<std::size_t>(j)] = v;
                rec(j + 1);
            }
        };
        rec(0);
        return {sides, edges};
    }

    // Every total side-preserving map g -> h that is a homomorphism, in lexicographic order.
    inline auto brute_force_homs(const Hypergraph & g, const Hypergraph & h) -> std::vector<Homomorphism>
    {
        auto vs = g.vertices();
        std::vector<Homomorphism> out;
        Homomorphism f(g.arity());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == vs.size()) {
                if (is_homomorphism(f, g, h))
                    out.push_back(f);
                return;
            }
            for (auto t : h.side(vs[i].side)) {
                f.set(vs[i], t);
                rec(i + 1);
            }
        };
        rec(0);
        return out;
    }

    // Independent value oracle: every strategy tuple, every question tuple.
    inline auto brute_force_value(const Game & g) -> Rational
    {
        int r = g.arity();
        std::vector<std::size_t> radix;
        for (int j = 0; j < r; ++j)
            for (std::size_t k = 0; k < g.questions().side(j).size(); ++k)
                radix.push_back(g.answer_count(j));
        std::vector<std::size_t> digits(radix.size(), 0);
        Rational best(0);
        for (;;) {
            Strategy s;
            std::size_t pos = 0;
            for (int j = 0; j < r; ++j) {
                std::vector<std::size_t> row;
                for (std::size_t k = 0; k < g.questions().side(j).size(); ++k)
                    row.push_back(digits[pos++]);
                s.answers.push_back(row);
            }
            std::size_t wins = 0;
            for (auto & e : g.questions().edges()) {
                std::vector<std::size_t> a;
                for (int j = 0; j < r; ++j)
                    a.push_back(answer_of(g, s, j, e[static_cast<std::size_t>(j)]));
                wins += g.accepts(e, a);
            }
            Rational v(static_cast<long>(wins), static_cast<long>(g.questions().edge_count()));
            v.canonicalize();
            if (v > best)
                best = v;
            std::size_t i = 0;
            while (i < digits.size() && ++digits[i] == radix[i])
                digits[i++] = 0;
            if (i == digits.size())
                break;
        }
        return best;
    }

    // XOR game: accept iff a1 xor a2 == q1 and q2.
    inline auto and_game() -> Game
    {
        return {named::complete({2, 2}), {2, 2},
            [](const Edge & q, std::span<const std::size_t> a) { return (a[0] ^ a[1]) == (q[0] & q[1]); }};
    }

    // Random game with a random acceptance table over (edge, answers).
    inline auto random_game(std::mt19937_64 & rng, int arity, int max_questions, int max_answers) -> Game
    {
        Hypergraph q;
        do
            q = random_hypergraph(rng, arity, max_questions, 0.7);
        while (! q.no_impossible_questions());
        std::uniform_int_distribution<int> ans(1, max_answers);
        std::vector<std::size_t> counts;
        std::size_t combos = 1;
        for (int j = 0; j < arity; ++j) {
            counts.push_back(static_cast<std::size_t>(ans(rng)));
            combos *= counts.back();
        }
        std::bernoulli_distribution coin(0.5);
        auto table = std::make_shared<std::vector<bool>>();
        for (std::size_t i = 0; i < q.edge_count() * combos; ++i)
            table->push_back(coin(rng));
        auto qq = std::make_shared<Hypergraph>(q);
        return {q, counts, [table, qq, counts, combos](const Edge & e, std::span<const std::size_t> a) {
                    std::size_t code = 0;
                    for (std::size_t j = 0; j < a.size(); ++j)
                        code = code * counts[j] + a[j];
                    return static_cast<bool>((*table)[*qq->edge_index(e) * combos + code]);
                }};
    }
}
