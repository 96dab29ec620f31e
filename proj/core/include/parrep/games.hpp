#pragma once

#include <parrep/hypergraph.hpp>
#include <parrep/lines.hpp>
#include <parrep/rational.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace parrep
{
    // Answer of prover j is an index in 0..answer_count(j)-1. Questions are the vertex ids of
    // each side; the verifier sees the question tuple (an edge) and the answer tuple.
    using Predicate = std::function<bool(const Edge & questions, std::span<const std::size_t> answers)>;

    class Game
    {
        Hypergraph questions_;
        std::vector<std::size_t> answer_counts_;
        Predicate accept_;

    public:
        // Throws std::invalid_argument on arity mismatch, an empty alphabet, or a question in no edge.
        Game(Hypergraph questions, std::vector<std::size_t> answer_counts, Predicate accept);

        auto arity() const -> int { return questions_.arity(); }
        auto questions() const -> const Hypergraph & { return questions_; }
        auto answer_count(int j) const -> std::size_t { return answer_counts_.at(static_cast<std::size_t>(j)); }
        auto answer_counts() const -> const std::vector<std::size_t> & { return answer_counts_; }
        auto accepts(const Edge & q, std::span<const std::size_t> a) const -> bool { return accept_(q, a); }
    };

    // answers[j][k] is prover j's answer to the k-th question of side j (sorted id order).
    struct Strategy
    {
        std::vector<std::vector<std::size_t>> answers;

        auto operator<=>(const Strategy &) const = default;
    };

    auto make_strategy(const Game & g, const std::function<std::size_t(int prover, VertexId question)> & f) -> Strategy;
    auto answer_of(const Game & g, const Strategy & s, int prover, VertexId question) -> std::size_t;

    // Exact acceptance probability under uniform questions.
    auto evaluate_strategy(const Game & g, const Strategy & s) -> Rational;
    // Edge indices on which the strategy wins.
    auto winning_edges(const Game & g, const Strategy & s) -> std::vector<bool>;

    struct ValueResult
    {
        Rational value;
        Strategy witness;
    };

    inline constexpr std::uint64_t default_budget = 100'000'000;

    // Maximum over deterministic strategies. All provers but the last are enumerated and the
    // last best-responds; the witness is the first optimum in enumeration order.
    auto game_value(const Game & g, std::uint64_t budget = default_budget, unsigned workers = 1) -> ValueResult;

    // Tuples are encoded in mixed radix, first coordinate most significant.
    auto encode_tuple(std::span<const std::size_t> digits, std::size_t base) -> std::size_t;
    auto decode_tuple(std::size_t code, std::size_t base, std::size_t length) -> std::vector<std::size_t>;

    // Product question set over positions of each side; product answers; conjunction.
    // Side j of the repeated game has ids encode(positions of the coordinate questions).
    auto repeat_game(const Game & g, std::size_t n, std::uint64_t budget = default_budget) -> Game;

    // Question set of Q_r; answer (T, z) is encoded as T * n + z with T a bitmask over coordinates 0..n-1.
    auto build_game_gs(int r, const StringSet & s) -> Game;
    auto encode_gs_answer(std::uint64_t t, int z, int n) -> std::size_t;

    // z is the 0-based wildcard position used by every prover.
    auto line_strategy_gs(int r, const Pattern & pattern, int z) -> Strategy;

    // Strategy for repeat_game(build_game_gs(r, s), n) where prover j answers (T^(j), i) in coordinate i.
    auto canonical_strategy_gs(int r, int n) -> Strategy;

    // Good vector of homomorphisms of Q for a set of edge tuples of Q^n.
    struct GoodVector
    {
        std::vector<Homomorphism> maps;
        std::size_t identity_coordinate = 0;
    };

    // Tuple membership: index encode(edge indices) over the edge count.
    using EdgeTupleMask = std::vector<bool>;

    auto is_good_vector(const Hypergraph & q, const GoodVector & gv, const EdgeTupleMask & s) -> bool;
    auto find_good_vector(const Hypergraph & q, std::size_t n, const EdgeTupleMask & s, std::uint64_t budget = default_budget)
        -> std::optional<GoodVector>;

    // Set of edge tuples won by a strategy of repeat_game(g, n).
    auto winning_tuples(const Game & g, std::size_t n, const Strategy & repeated) -> EdgeTupleMask;

    // Throws std::invalid_argument if gv is not good for the strategy's winning set or f_i is not the identity.
    auto lift_strategy(const Game & g, std::size_t n, const Strategy & repeated, const GoodVector & gv) -> Strategy;

    // Colours are vectors of base colours; a repeated game outputs one entry per coordinate.
    using Color = std::vector<std::int64_t>;
    using ColorFunction = std::function<Color(const Edge & questions, std::span<const std::size_t> answers)>;

    class ColoringGame
    {
        Hypergraph questions_;
        std::vector<std::size_t> answer_counts_;
        ColorFunction output_;

    public:
        ColoringGame(Hypergraph questions, std::vector<std::size_t> answer_counts, ColorFunction output);

        auto arity() const -> int { return questions_.arity(); }
        auto questions() const -> const Hypergraph & { return questions_; }
        auto answer_count(int j) const -> std::size_t { return answer_counts_.at(static_cast<std::size_t>(j)); }
        auto answer_counts() const -> const std::vector<std::size_t> & { return answer_counts_; }
        auto output(const Edge & q, std::span<const std::size_t> a) const -> Color { return output_(q, a); }
        // Same question and answer structure, so strategies carry over.
        auto shape() const -> Game;
    };

    auto colors_used(const ColoringGame & g, const Strategy & s) -> std::set<Color>;

    struct ColoringValueResult
    {
        std::size_t colors = 0;
        Strategy witness;
    };

    auto coloring_value(const ColoringGame & g, std::uint64_t budget = default_budget) -> ColoringValueResult;
    auto repeat_coloring_game(const ColoringGame & g, std::size_t n, std::uint64_t budget = default_budget) -> ColoringGame;

    // coloring[i] is the colour (>= 0) of the word with index i in [r]^n. Failed checks output the
    // pseudo-colour -(special prover + 1).
    auto build_coloring_game_gc(int r, int n, const std::vector<int> & coloring) -> ColoringGame;

    // exp(-alpha^2 n / 2) + f(alpha n / 2); alpha in (0, 1].
    auto nonuniform_bound(const Rational & alpha, double n, const std::function<double(double)> & f) -> double;

    // Header "game r"; "questions j: ids"; "answers j: count"; optional "edge: q1 .. qr" lines
    // (default: full product); "accept q1 .. qr a1 .. ar" lines.
    auto parse_game(const std::string & text) -> Game;
    auto to_text(const Game & g) -> std::string;

    // Header "strategy r", then "prover j: q->a ..." lines.
    auto parse_strategy(const Game & g, const std::string & text) -> Strategy;
    auto to_text(const Game & g, const Strategy & s) -> std::string;
}
