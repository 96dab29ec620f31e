#include <parrep/errors.hpp>
#include <parrep/games.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace parrep
{
    namespace
    {
        auto ratio(uint64_t num, uint64_t den) -> Rational
        {
            Rational q{Integer(static_cast<unsigned long>(num)), Integer(static_cast<unsigned long>(den))};
            q.canonicalize();
            return q;
        }

        auto position(const Hypergraph & h, int side, VertexId id) -> size_t
        {
            auto & ids = h.side(side);
            auto it = std::lower_bound(ids.begin(), ids.end(), id);
            if (it == ids.end() || *it != id)
                throw std::invalid_argument("question " + std::to_string(id) + " is not on side " + std::to_string(side + 1));
            return static_cast<size_t>(it - ids.begin());
        }

        auto checked_product(const vector<long double> & factors, uint64_t budget, const std::string & what) -> uint64_t
        {
            long double total = 1;
            for (auto f : factors)
                total *= f;
            if (total > static_cast<long double>(budget))
                throw BudgetExceeded(what, total, static_cast<long double>(budget));
            return static_cast<uint64_t>(std::llround(total));
        }

        auto validate_shape(const Hypergraph & q, const vector<size_t> & answers) -> void
        {
            if (q.arity() < 1)
                throw std::invalid_argument("a game needs at least one prover");
            if (answers.size() != static_cast<size_t>(q.arity()))
                throw std::invalid_argument("one answer alphabet per prover required");
            if (std::find(answers.begin(), answers.end(), size_t{0}) != answers.end())
                throw std::invalid_argument("answer alphabets must be nonempty");
            if (q.edges().empty() || ! q.no_impossible_questions())
                throw std::invalid_argument("every question must occur in some question tuple");
        }

        // Per-edge positions of the questions on each side.
        auto edge_positions(const Hypergraph & q) -> vector<vector<size_t>>
        {
            vector<vector<size_t>> out;
            for (auto & e : q.edges()) {
                vector<size_t> p;
                for (int j = 0; j < q.arity(); ++j)
                    p.push_back(position(q, j, e[static_cast<size_t>(j)]));
                out.push_back(std::move(p));
            }
            return out;
        }
    }

    Game::Game(Hypergraph questions, vector<size_t> answer_counts, Predicate accept) :
        questions_(std::move(questions)),
        answer_counts_(std::move(answer_counts)),
        accept_(std::move(accept))
    {
        validate_shape(questions_, answer_counts_);
        if (! accept_)
            throw std::invalid_argument("game needs a predicate");
    }

    auto make_strategy(const Game & g, const std::function<size_t(int, VertexId)> & f) -> Strategy
    {
        Strategy s;
        for (int j = 0; j < g.arity(); ++j) {
            vector<size_t> answers;
            for (auto q : g.questions().side(j)) {
                auto a = f(j, q);
                if (a >= g.answer_count(j))
                    throw std::invalid_argument("strategy answer out of range");
                answers.push_back(a);
            }
            s.answers.push_back(std::move(answers));
        }
        return s;
    }

    auto answer_of(const Game & g, const Strategy & s, int prover, VertexId question) -> size_t
    {
        return s.answers.at(static_cast<size_t>(prover)).at(position(g.questions(), prover, question));
    }

    namespace
    {
        auto check_strategy(const Game & g, const Strategy & s) -> void
        {
            if (s.answers.size() != static_cast<size_t>(g.arity()))
                throw std::invalid_argument("strategy has the wrong number of provers");
            for (int j = 0; j < g.arity(); ++j) {
                auto & a = s.answers[static_cast<size_t>(j)];
                if (a.size() != g.questions().side(j).size())
                    throw std::invalid_argument("strategy is not total on prover " + std::to_string(j + 1));
                for (auto x : a)
                    if (x >= g.answer_count(j))
                        throw std::invalid_argument("strategy answer out of range");
            }
        }
    }

    auto winning_edges(const Game & g, const Strategy & s) -> vector<bool>
    {
        check_strategy(g, s);
        auto pos = edge_positions(g.questions());
        vector<bool> out;
        vector<size_t> a(static_cast<size_t>(g.arity()));
        for (size_t e = 0; e < pos.size(); ++e) {
            for (size_t j = 0; j < a.size(); ++j)
                a[j] = s.answers[j][pos[e][j]];
            out.push_back(g.accepts(g.questions().edges()[e], a));
        }
        return out;
    }

    auto evaluate_strategy(const Game & g, const Strategy & s) -> Rational
    {
        auto wins = winning_edges(g, s);
        return ratio(static_cast<uint64_t>(std::count(wins.begin(), wins.end(), true)), wins.size());
    }

    auto game_value(const Game & g, uint64_t budget, unsigned workers) -> ValueResult
    {
        auto & q = g.questions();
        auto r = static_cast<size_t>(g.arity());
        auto last = r - 1;

        // Digits of the enumerated provers, prover-major.
        vector<std::pair<size_t, size_t>> digits;
        vector<long double> factors;
        for (size_t j = 0; j < last; ++j)
            for (size_t k = 0; k < q.side(static_cast<int>(j)).size(); ++k) {
                digits.emplace_back(j, k);
                factors.push_back(static_cast<long double>(g.answer_count(static_cast<int>(j))));
            }
        auto total = checked_product(factors, budget, "strategy tuples");

        vector<size_t> offset(r, 0);
        for (size_t j = 1; j < r; ++j)
            offset[j] = offset[j - 1] + q.side(static_cast<int>(j - 1)).size();

        auto pos = edge_positions(q);
        auto last_questions = q.side(static_cast<int>(last)).size();
        vector<vector<size_t>> by_last(last_questions);
        for (size_t e = 0; e < pos.size(); ++e)
            by_last[pos[e][last]].push_back(e);

        struct Best
        {
            uint64_t wins = 0;
            uint64_t index = std::numeric_limits<uint64_t>::max();
        };

        auto best_response = [&](const vector<size_t> & assignment, vector<size_t> * choice) {
            uint64_t wins = 0;
            vector<size_t> a(r);
            for (size_t k = 0; k < last_questions; ++k) {
                uint64_t best = 0;
                size_t best_answer = 0;
                for (size_t ans = 0; ans < g.answer_count(static_cast<int>(last)); ++ans) {
                    uint64_t count = 0;
                    for (auto e : by_last[k]) {
                        for (size_t j = 0; j < last; ++j)
                            a[j] = assignment[offset[j] + pos[e][j]];
                        a[last] = ans;
                        count += g.accepts(q.edges()[e], a) ? 1 : 0;
                    }
                    if (count > best || ans == 0) {
                        best = count;
                        best_answer = ans;
                    }
                }
                wins += best;
                if (choice)
                    (*choice)[k] = best_answer;
            }
            return wins;
        };

        auto decode = [&](uint64_t index) {
            vector<size_t> assignment(digits.size());
            for (size_t i = digits.size(); i-- > 0;) {
                auto base = g.answer_count(static_cast<int>(digits[i].first));
                assignment[i] = static_cast<size_t>(index % base);
                index /= base;
            }
            return assignment;
        };

        auto scan = [&](uint64_t from, uint64_t to) {
            Best best;
            if (from >= to)
                return best;
            auto assignment = decode(from);
            for (uint64_t index = from; index < to; ++index) {
                auto wins = best_response(assignment, nullptr);
                if (best.index == std::numeric_limits<uint64_t>::max() || wins > best.wins)
                    best = {wins, index};
                if (best.wins == pos.size())
                    break;
                for (size_t i = digits.size(); i-- > 0;) {
                    if (++assignment[i] < g.answer_count(static_cast<int>(digits[i].first)))
                        break;
                    assignment[i] = 0;
                }
            }
            return best;
        };

        Best best;
        workers = std::max(1u, workers);
        if (workers == 1 || total < workers)
            best = scan(0, total);
        else {
            vector<Best> parts(workers);
            vector<std::thread> threads;
            for (unsigned w = 0; w < workers; ++w)
                threads.emplace_back([&, w] { parts[w] = scan(total * w / workers, total * (w + 1) / workers); });
            for (auto & t : threads)
                t.join();
            for (auto & p : parts)
                if (p.index != std::numeric_limits<uint64_t>::max() && (best.index == std::numeric_limits<uint64_t>::max() || p.wins > best.wins))
                    best = p;
        }

        auto assignment = decode(best.index);
        Strategy witness;
        size_t d = 0;
        for (size_t j = 0; j < last; ++j) {
            auto count = q.side(static_cast<int>(j)).size();
            witness.answers.emplace_back(assignment.begin() + static_cast<std::ptrdiff_t>(d),
                assignment.begin() + static_cast<std::ptrdiff_t>(d + count));
            d += count;
        }
        vector<size_t> choice(last_questions);
        best_response(assignment, &choice);
        witness.answers.push_back(choice);
        return {ratio(best.wins, pos.size()), witness};
    }

    auto encode_tuple(std::span<const size_t> digits, size_t base) -> size_t
    {
        size_t code = 0;
        for (auto d : digits) {
            if (d >= base)
                throw std::invalid_argument("tuple digit out of range");
            code = code * base + d;
        }
        return code;
    }

    auto decode_tuple(size_t code, size_t base, size_t length) -> vector<size_t>
    {
        vector<size_t> digits(length);
        for (size_t i = length; i-- > 0;) {
            digits[i] = code % base;
            code /= base;
        }
        return digits;
    }

    namespace
    {
        struct Product
        {
            Hypergraph questions;
            vector<size_t> answers;
        };

        // Shared structure of repeated games and repeated colouring games.
        auto repeat_structure(const Hypergraph & q, const vector<size_t> & answers, size_t n, uint64_t budget) -> Product
        {
            if (n < 1)
                throw std::invalid_argument("repetition count must be positive");
            auto r = q.arity();
            checked_product(vector<long double>(n, static_cast<long double>(q.edge_count())), budget, "repeated question tuples");
            vector<vector<VertexId>> sides(static_cast<size_t>(r));
            vector<size_t> rep_answers;
            for (int j = 0; j < r; ++j) {
                auto count = checked_product(vector<long double>(n, static_cast<long double>(q.side(j).size())),
                    std::numeric_limits<VertexId>::max(), "repeated questions");
                for (uint64_t id = 0; id < count; ++id)
                    sides[static_cast<size_t>(j)].push_back(static_cast<VertexId>(id));
                rep_answers.push_back(static_cast<size_t>(checked_product(
                    vector<long double>(n, static_cast<long double>(answers[static_cast<size_t>(j)])), budget, "repeated answers")));
            }
            auto pos = edge_positions(q);
            auto m = q.edge_count();
            size_t tuples = 1;
            for (size_t i = 0; i < n; ++i)
                tuples *= m;
            vector<Edge> edges;
            edges.reserve(tuples);
            for (size_t t = 0; t < tuples; ++t) {
                auto es = decode_tuple(t, m, n);
                Edge e;
                for (int j = 0; j < r; ++j) {
                    vector<size_t> coords;
                    for (auto ei : es)
                        coords.push_back(pos[ei][static_cast<size_t>(j)]);
                    e.push_back(static_cast<VertexId>(encode_tuple(coords, q.side(j).size())));
                }
                edges.push_back(std::move(e));
            }
            return {Hypergraph(std::move(sides), std::move(edges)), std::move(rep_answers)};
        }

        // Splits a repeated question/answer tuple into its n coordinate instances.
        struct Splitter
        {
            Hypergraph base;
            vector<size_t> answers;
            size_t n;

            auto split(const Edge & q, std::span<const size_t> a, size_t i, Edge & bq, vector<size_t> & ba) const -> void
            {
                auto r = static_cast<size_t>(base.arity());
                bq.resize(r);
                ba.resize(r);
                for (size_t j = 0; j < r; ++j) {
                    auto qs = decode_tuple(q[j], base.side(static_cast<int>(j)).size(), n);
                    auto as = decode_tuple(a[j], answers[j], n);
                    bq[j] = base.side(static_cast<int>(j))[qs[i]];
                    ba[j] = as[i];
                }
            }
        };
    }

    auto repeat_game(const Game & g, size_t n, uint64_t budget) -> Game
    {
        auto product = repeat_structure(g.questions(), g.answer_counts(), n, budget);
        Splitter splitter{g.questions(), g.answer_counts(), n};
        auto accept = [g, splitter](const Edge & q, std::span<const size_t> a) {
            Edge bq;
            vector<size_t> ba;
            for (size_t i = 0; i < splitter.n; ++i) {
                splitter.split(q, a, i, bq, ba);
                if (! g.accepts(bq, ba))
                    return false;
            }
            return true;
        };
        return Game(std::move(product.questions), std::move(product.answers), accept);
    }

    auto encode_gs_answer(uint64_t t, int z, int n) -> size_t
    {
        if (n < 1 || z < 0 || z >= n || t >= (uint64_t{1} << n))
            throw std::invalid_argument("answer (T, z) out of range");
        return static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(z);
    }

    namespace
    {
        // The induced word of a partition, or nothing if the checks fail.
        auto gs_checks(const Edge & q, std::span<const size_t> a, int n) -> std::optional<Word>
        {
            auto r = q.size();
            auto special = static_cast<size_t>(std::find(q.begin(), q.end(), VertexId{1}) - q.begin());
            uint64_t seen = 0;
            auto z = a[0] % static_cast<size_t>(n);
            Word w(static_cast<size_t>(n), 0);
            for (size_t j = 0; j < r; ++j) {
                auto t = static_cast<uint64_t>(a[j] / static_cast<size_t>(n));
                if (a[j] % static_cast<size_t>(n) != z || (t & seen))
                    return std::nullopt;
                seen |= t;
                for (int i = 0; i < n; ++i)
                    if (t >> i & 1)
                        w[static_cast<size_t>(i)] = static_cast<int>(j) + 1;
            }
            if (seen != (uint64_t{1} << n) - 1)
                return std::nullopt;
            if (special >= r || ! (a[special] / static_cast<size_t>(n) >> z & 1))
                return std::nullopt;
            return w;
        }

        auto gs_answer_count(int n) -> size_t
        {
            if (n < 1 || n > 20)
                throw std::invalid_argument("need 1 <= n <= 20");
            return (size_t{1} << n) * static_cast<size_t>(n);
        }
    }

    auto build_game_gs(int r, const StringSet & s) -> Game
    {
        if (r < 3)
            throw std::invalid_argument("the construction needs r >= 3");
        if (s.r() != r)
            throw std::invalid_argument("string set alphabet does not match r");
        int n = s.n();
        auto answers = vector<size_t>(static_cast<size_t>(r), gs_answer_count(n));
        auto accept = [s, n](const Edge & q, std::span<const size_t> a) {
            auto w = gs_checks(q, a, n);
            return w && s.contains(*w);
        };
        return Game(named::qr(r), answers, accept);
    }

    auto line_strategy_gs(int r, const Pattern & pattern, int z) -> Strategy
    {
        int n = static_cast<int>(pattern.size());
        if (z < 0 || z >= n || pattern[static_cast<size_t>(z)] != wildcard)
            throw std::invalid_argument("position z must hold a wildcard");
        uint64_t stars = 0;
        vector<uint64_t> block(static_cast<size_t>(r) + 1, 0);
        for (int i = 0; i < n; ++i) {
            auto sym = pattern[static_cast<size_t>(i)];
            if (sym < 0 || sym > r)
                throw std::invalid_argument("pattern symbol out of range");
            (sym == wildcard ? stars : block[static_cast<size_t>(sym)]) |= uint64_t{1} << i;
        }
        Strategy s;
        for (int j = 1; j <= r; ++j)
            s.answers.push_back({encode_gs_answer(block[static_cast<size_t>(j)], z, n),
                encode_gs_answer(block[static_cast<size_t>(j)] | stars, z, n)});
        return s;
    }

    auto canonical_strategy_gs(int r, int n) -> Strategy
    {
        auto base = gs_answer_count(n);
        Strategy s;
        for (int j = 0; j < r; ++j) {
            vector<size_t> answers;
            for (size_t id = 0; id < (size_t{1} << n); ++id) {
                auto q = decode_tuple(id, 2, static_cast<size_t>(n));
                uint64_t t = 0;
                for (int i = 0; i < n; ++i)
                    if (q[static_cast<size_t>(i)] == 1)
                        t |= uint64_t{1} << i;
                vector<size_t> coords;
                for (int i = 0; i < n; ++i)
                    coords.push_back(encode_gs_answer(t, i, n));
                answers.push_back(encode_tuple(coords, base));
            }
            s.answers.push_back(std::move(answers));
        }
        return s;
    }

    namespace
    {
        auto tuple_count(size_t m, size_t n) -> size_t
        {
            size_t total = 1;
            for (size_t i = 0; i < n; ++i) {
                if (total > std::numeric_limits<size_t>::max() / std::max<size_t>(m, 1))
                    throw BudgetExceeded("edge tuples", std::pow(static_cast<long double>(m), static_cast<long double>(n)),
                        static_cast<long double>(std::numeric_limits<size_t>::max()));
                total *= m;
            }
            return total;
        }

        // image[h][e] = index of the image of edge e under homomorphism h.
        auto edge_images(const Hypergraph & q, const vector<Homomorphism> & homs) -> vector<vector<size_t>>
        {
            vector<vector<size_t>> out;
            for (auto & h : homs) {
                vector<size_t> row;
                for (auto & e : q.edges()) {
                    auto idx = q.edge_index(h.image(e));
                    if (! idx)
                        throw std::invalid_argument("map is not a homomorphism of the question set");
                    row.push_back(*idx);
                }
                out.push_back(std::move(row));
            }
            return out;
        }

        auto good_for(const vector<vector<size_t>> & images, size_t m, const EdgeTupleMask & s) -> bool
        {
            auto edges = images.front().size();
            vector<size_t> coords(images.size());
            for (size_t e = 0; e < edges; ++e) {
                for (size_t i = 0; i < images.size(); ++i)
                    coords[i] = images[i][e];
                if (! s.at(encode_tuple(coords, m)))
                    return false;
            }
            return true;
        }
    }

    auto is_good_vector(const Hypergraph & q, const GoodVector & gv, const EdgeTupleMask & s) -> bool
    {
        if (gv.maps.empty() || gv.identity_coordinate >= gv.maps.size())
            return false;
        if (s.size() != tuple_count(q.edge_count(), gv.maps.size()))
            throw std::invalid_argument("tuple set has the wrong size");
        if (gv.maps[gv.identity_coordinate] != identity_map(q))
            return false;
        for (auto & f : gv.maps)
            if (! is_homomorphism(f, q, q))
                return false;
        return good_for(edge_images(q, gv.maps), q.edge_count(), s);
    }

    auto find_good_vector(const Hypergraph & q, size_t n, const EdgeTupleMask & s, uint64_t budget) -> std::optional<GoodVector>
    {
        if (n < 1)
            throw std::invalid_argument("vector length must be positive");
        if (s.size() != tuple_count(q.edge_count(), n))
            throw std::invalid_argument("tuple set has the wrong size");
        auto homs = enumerate_homomorphisms(q, q);
        auto total = checked_product(vector<long double>(n, static_cast<long double>(homs.size())), budget, "homomorphism vectors");
        auto id = identity_map(q);
        auto id_index = static_cast<size_t>(std::find(homs.begin(), homs.end(), id) - homs.begin());
        auto images = edge_images(q, homs);
        vector<vector<size_t>> chosen(n);
        for (uint64_t v = 0; v < total; ++v) {
            auto idx = decode_tuple(static_cast<size_t>(v), homs.size(), n);
            auto it = std::find(idx.begin(), idx.end(), id_index);
            if (it == idx.end())
                continue;
            for (size_t i = 0; i < n; ++i)
                chosen[i] = images[idx[i]];
            if (good_for(chosen, q.edge_count(), s)) {
                GoodVector gv;
                for (auto i : idx)
                    gv.maps.push_back(homs[i]);
                gv.identity_coordinate = static_cast<size_t>(it - idx.begin());
                return gv;
            }
        }
        return std::nullopt;
    }

    auto winning_tuples(const Game & g, size_t n, const Strategy & repeated) -> EdgeTupleMask
    {
        auto & q = g.questions();
        auto m = q.edge_count();
        auto tuples = tuple_count(m, n);
        auto pos = edge_positions(q);
        auto r = static_cast<size_t>(g.arity());
        if (repeated.answers.size() != r)
            throw std::invalid_argument("strategy has the wrong number of provers");
        EdgeTupleMask out(tuples, false);
        Edge bq(r);
        vector<size_t> ba(r);
        for (size_t t = 0; t < tuples; ++t) {
            auto es = decode_tuple(t, m, n);
            vector<vector<size_t>> coord_answers(r);
            for (size_t j = 0; j < r; ++j) {
                vector<size_t> coords;
                for (auto e : es)
                    coords.push_back(pos[e][j]);
                auto rep_q = encode_tuple(coords, q.side(static_cast<int>(j)).size());
                coord_answers[j] = decode_tuple(repeated.answers[j].at(rep_q), g.answer_count(static_cast<int>(j)), n);
            }
            bool win = true;
            for (size_t i = 0; i < n && win; ++i) {
                for (size_t j = 0; j < r; ++j)
                    ba[j] = coord_answers[j][i];
                win = g.accepts(q.edges()[es[i]], ba);
            }
            out[t] = win;
        }
        return out;
    }

    auto lift_strategy(const Game & g, size_t n, const Strategy & repeated, const GoodVector & gv) -> Strategy
    {
        auto & q = g.questions();
        if (gv.maps.size() != n)
            throw std::invalid_argument("good vector has the wrong length");
        if (! is_good_vector(q, gv, winning_tuples(g, n, repeated)))
            throw std::invalid_argument("vector is not good for the strategy's winning set");
        return make_strategy(g, [&](int j, VertexId question) {
            vector<size_t> coords;
            for (auto & f : gv.maps)
                coords.push_back(position(q, j, f({j, question})));
            auto rep_q = encode_tuple(coords, q.side(j).size());
            auto answers = decode_tuple(repeated.answers.at(static_cast<size_t>(j)).at(rep_q), g.answer_count(j), n);
            return answers[gv.identity_coordinate];
        });
    }

    ColoringGame::ColoringGame(Hypergraph questions, vector<size_t> answer_counts, ColorFunction output) :
        questions_(std::move(questions)),
        answer_counts_(std::move(answer_counts)),
        output_(std::move(output))
    {
        validate_shape(questions_, answer_counts_);
        if (! output_)
            throw std::invalid_argument("colouring game needs an output function");
    }

    auto ColoringGame::shape() const -> Game
    {
        return Game(questions_, answer_counts_, [](const Edge &, std::span<const size_t>) { return true; });
    }

    auto colors_used(const ColoringGame & g, const Strategy & s) -> std::set<Color>
    {
        auto shape = g.shape();
        check_strategy(shape, s);
        auto pos = edge_positions(g.questions());
        std::set<Color> out;
        vector<size_t> a(static_cast<size_t>(g.arity()));
        for (size_t e = 0; e < pos.size(); ++e) {
            for (size_t j = 0; j < a.size(); ++j)
                a[j] = s.answers[j][pos[e][j]];
            out.insert(g.output(g.questions().edges()[e], a));
        }
        return out;
    }

    auto coloring_value(const ColoringGame & g, uint64_t budget) -> ColoringValueResult
    {
        auto & q = g.questions();
        vector<std::pair<size_t, size_t>> digits;
        vector<long double> factors;
        for (int j = 0; j < g.arity(); ++j)
            for (size_t k = 0; k < q.side(j).size(); ++k) {
                digits.emplace_back(static_cast<size_t>(j), k);
                factors.push_back(static_cast<long double>(g.answer_count(j)));
            }
        auto total = checked_product(factors, budget, "strategy tuples");
        Strategy s;
        for (int j = 0; j < g.arity(); ++j)
            s.answers.emplace_back(q.side(j).size(), 0);
        ColoringValueResult best{std::numeric_limits<size_t>::max(), s};
        for (uint64_t index = 0; index < total; ++index) {
            auto count = colors_used(g, s).size();
            if (count < best.colors) {
                best = {count, s};
                if (count == 1)
                    break;
            }
            for (size_t i = digits.size(); i-- > 0;) {
                auto [j, k] = digits[i];
                if (++s.answers[j][k] < g.answer_count(static_cast<int>(j)))
                    break;
                s.answers[j][k] = 0;
            }
        }
        return best;
    }

    auto repeat_coloring_game(const ColoringGame & g, size_t n, uint64_t budget) -> ColoringGame
    {
        auto product = repeat_structure(g.questions(), g.answer_counts(), n, budget);
        Splitter splitter{g.questions(), g.answer_counts(), n};
        auto output = [g, splitter](const Edge & q, std::span<const size_t> a) {
            Edge bq;
            vector<size_t> ba;
            Color out;
            for (size_t i = 0; i < splitter.n; ++i) {
                splitter.split(q, a, i, bq, ba);
                auto c = g.output(bq, ba);
                out.insert(out.end(), c.begin(), c.end());
            }
            return out;
        };
        return ColoringGame(std::move(product.questions), std::move(product.answers), output);
    }

    auto build_coloring_game_gc(int r, int n, const vector<int> & coloring) -> ColoringGame
    {
        if (r < 3)
            throw std::invalid_argument("the construction needs r >= 3");
        StringSet indexer(r, n);
        if (coloring.size() != indexer.universe())
            throw std::invalid_argument("colouring has the wrong size");
        if (std::any_of(coloring.begin(), coloring.end(), [](int c) { return c < 0; }))
            throw std::invalid_argument("colours must be non-negative");
        auto answers = vector<size_t>(static_cast<size_t>(r), gs_answer_count(n));
        auto output = [indexer, coloring, n](const Edge & q, std::span<const size_t> a) -> Color {
            if (auto w = gs_checks(q, a, n))
                return {coloring[indexer.index_of(*w)]};
            auto special = std::find(q.begin(), q.end(), VertexId{1}) - q.begin();
            return {-(static_cast<std::int64_t>(special) + 1)};
        };
        return ColoringGame(named::qr(r), answers, output);
    }

    auto nonuniform_bound(const Rational & alpha, double n, const std::function<double(double)> & f) -> double
    {
        if (alpha <= 0 || alpha > 1)
            throw std::invalid_argument("alpha must lie in (0, 1]");
        auto a = alpha.get_d();
        return std::exp(-a * a * n / 2) + f(a * n / 2);
    }

    namespace
    {
        auto parse_id(const std::string & token, size_t line) -> size_t
        {
            try {
                size_t used = 0;
                auto v = std::stoull(token, &used);
                if (used != token.size() || v > std::numeric_limits<VertexId>::max())
                    throw std::invalid_argument(token);
                return static_cast<size_t>(v);
            }
            catch (const std::logic_error &) {
                throw FormatError("expected a non-negative integer, got '" + token + "'", line);
            }
        }

        auto parse_side_label(const std::string & label, int r, size_t line) -> int
        {
            if (label.empty() || label.back() != ':')
                throw FormatError("expected 'j:'", line);
            auto j = parse_id(label.substr(0, label.size() - 1), line);
            if (j < 1 || j > static_cast<size_t>(r))
                throw FormatError("prover index out of range", line);
            return static_cast<int>(j) - 1;
        }

        auto tokens_of(std::istringstream & ls) -> vector<std::string>
        {
            vector<std::string> out;
            std::string t;
            while (ls >> t)
                out.push_back(t);
            return out;
        }
    }

    auto parse_game(const std::string & text) -> Game
    {
        std::istringstream in(text);
        std::string raw;
        size_t line_no = 0;
        int r = 0;
        vector<std::optional<vector<VertexId>>> questions;
        vector<std::optional<size_t>> answers;
        vector<Edge> edges;
        bool explicit_edges = false;
        std::set<vector<size_t>> accepted;
        vector<std::pair<vector<size_t>, size_t>> accept_lines;
        while (std::getline(in, raw)) {
            ++line_no;
            std::istringstream ls(raw.substr(0, raw.find('#')));
            std::string head;
            if (! (ls >> head))
                continue;
            if (r == 0) {
                if (head != "game" || ! (ls >> r) || r < 1 || ! tokens_of(ls).empty())
                    throw FormatError("expected 'game r' header", line_no);
                questions.resize(static_cast<size_t>(r));
                answers.resize(static_cast<size_t>(r));
                continue;
            }
            if (head == "questions" || head == "answers") {
                std::string label;
                ls >> label;
                auto j = static_cast<size_t>(parse_side_label(label, r, line_no));
                auto rest = tokens_of(ls);
                if (head == "questions") {
                    if (questions[j])
                        throw FormatError("questions of prover " + std::to_string(j + 1) + " declared twice", line_no);
                    vector<VertexId> ids;
                    for (auto & t : rest)
                        ids.push_back(static_cast<VertexId>(parse_id(t, line_no)));
                    questions[j] = ids;
                }
                else {
                    if (answers[j] || rest.size() != 1)
                        throw FormatError("expected 'answers j: count' once per prover", line_no);
                    answers[j] = parse_id(rest[0], line_no);
                    if (*answers[j] == 0)
                        throw FormatError("answer alphabet must be nonempty", line_no);
                }
            }
            else if (head == "edge:") {
                explicit_edges = true;
                auto rest = tokens_of(ls);
                if (rest.size() != static_cast<size_t>(r))
                    throw FormatError("edge needs " + std::to_string(r) + " questions", line_no);
                Edge e;
                for (auto & t : rest)
                    e.push_back(static_cast<VertexId>(parse_id(t, line_no)));
                edges.push_back(e);
            }
            else if (head == "accept") {
                auto rest = tokens_of(ls);
                if (rest.size() != 2 * static_cast<size_t>(r))
                    throw FormatError("accept needs " + std::to_string(r) + " questions and " + std::to_string(r) + " answers", line_no);
                vector<size_t> key;
                for (auto & t : rest)
                    key.push_back(parse_id(t, line_no));
                accept_lines.emplace_back(key, line_no);
            }
            else
                throw FormatError("unexpected '" + head + "'", line_no);
        }
        if (r == 0)
            throw FormatError("missing 'game r' header", line_no);
        vector<vector<VertexId>> sides;
        vector<size_t> counts;
        for (size_t j = 0; j < static_cast<size_t>(r); ++j) {
            if (! questions[j] || ! answers[j])
                throw FormatError("prover " + std::to_string(j + 1) + " lacks questions or answers", line_no);
            sides.push_back(*questions[j]);
            counts.push_back(*answers[j]);
        }
        if (! explicit_edges) {
            vector<size_t> idx(static_cast<size_t>(r), 0);
            if (std::all_of(sides.begin(), sides.end(), [](auto & s) { return ! s.empty(); }))
                while (true) {
                    Edge e;
                    for (size_t j = 0; j < idx.size(); ++j)
                        e.push_back(sides[j][idx[j]]);
                    edges.push_back(e);
                    size_t j = idx.size();
                    while (j-- > 0) {
                        if (++idx[j] < sides[j].size())
                            break;
                        idx[j] = 0;
                    }
                    if (j == static_cast<size_t>(-1))
                        break;
                }
        }
        Hypergraph q;
        try {
            q = Hypergraph(sides, edges);
        }
        catch (const std::invalid_argument & e) {
            throw FormatError(e.what(), line_no);
        }
        for (auto & [key, line] : accept_lines) {
            Edge e(key.begin(), key.begin() + r);
            if (! q.has_edge(e))
                throw FormatError("accept line names a question tuple outside the question set", line);
            for (size_t j = 0; j < static_cast<size_t>(r); ++j)
                if (key[static_cast<size_t>(r) + j] >= counts[j])
                    throw FormatError("answer out of range", line);
            accepted.insert(key);
        }
        auto accept = [accepted](const Edge & qs, std::span<const size_t> a) {
            vector<size_t> key(qs.begin(), qs.end());
            key.insert(key.end(), a.begin(), a.end());
            return accepted.contains(key);
        };
        try {
            return Game(q, counts, accept);
        }
        catch (const std::invalid_argument & e) {
            throw FormatError(e.what(), line_no);
        }
    }

    auto to_text(const Game & g) -> std::string
    {
        std::ostringstream out;
        auto r = g.arity();
        out << "game " << r << "\n";
        for (int j = 0; j < r; ++j) {
            out << "questions " << j + 1 << ":";
            for (auto id : g.questions().side(j))
                out << " " << id;
            out << "\n";
        }
        for (int j = 0; j < r; ++j)
            out << "answers " << j + 1 << ": " << g.answer_count(j) << "\n";
        for (auto & e : g.questions().edges()) {
            out << "edge:";
            for (auto id : e)
                out << " " << id;
            out << "\n";
        }
        for (auto & e : g.questions().edges()) {
            vector<size_t> a(static_cast<size_t>(r), 0);
            while (true) {
                if (g.accepts(e, a)) {
                    out << "accept";
                    for (auto id : e)
                        out << " " << id;
                    for (auto x : a)
                        out << " " << x;
                    out << "\n";
                }
                int j = r;
                while (j-- > 0) {
                    if (++a[static_cast<size_t>(j)] < g.answer_count(j))
                        break;
                    a[static_cast<size_t>(j)] = 0;
                }
                if (j < 0)
                    break;
            }
        }
        return out.str();
    }

    auto parse_strategy(const Game & g, const std::string & text) -> Strategy
    {
        std::istringstream in(text);
        std::string raw;
        size_t line_no = 0;
        bool header = false;
        vector<std::map<VertexId, size_t>> maps(static_cast<size_t>(g.arity()));
        while (std::getline(in, raw)) {
            ++line_no;
            std::istringstream ls(raw.substr(0, raw.find('#')));
            std::string head;
            if (! (ls >> head))
                continue;
            if (! header) {
                int r = 0;
                if (head != "strategy" || ! (ls >> r) || r != g.arity())
                    throw FormatError("expected 'strategy " + std::to_string(g.arity()) + "' header", line_no);
                header = true;
                continue;
            }
            if (head != "prover")
                throw FormatError("expected 'prover j:'", line_no);
            std::string label;
            ls >> label;
            auto j = static_cast<size_t>(parse_side_label(label, g.arity(), line_no));
            for (auto & t : tokens_of(ls)) {
                auto arrow = t.find("->");
                if (arrow == std::string::npos)
                    throw FormatError("expected 'q->a', got '" + t + "'", line_no);
                auto qid = static_cast<VertexId>(parse_id(t.substr(0, arrow), line_no));
                auto a = parse_id(t.substr(arrow + 2), line_no);
                if (a >= g.answer_count(static_cast<int>(j)))
                    throw FormatError("answer out of range", line_no);
                maps[j][qid] = a;
            }
        }
        if (! header)
            throw FormatError("missing 'strategy r' header", line_no);
        Strategy s;
        for (int j = 0; j < g.arity(); ++j) {
            vector<size_t> answers;
            for (auto qid : g.questions().side(j)) {
                auto it = maps[static_cast<size_t>(j)].find(qid);
                if (it == maps[static_cast<size_t>(j)].end())
                    throw FormatError("strategy gives no answer for question " + std::to_string(qid) + " of prover " + std::to_string(j + 1), line_no);
                answers.push_back(it->second);
            }
            s.answers.push_back(std::move(answers));
        }
        return s;
    }

    auto to_text(const Game & g, const Strategy & s) -> std::string
    {
        check_strategy(g, s);
        std::ostringstream out;
        out << "strategy " << g.arity() << "\n";
        for (int j = 0; j < g.arity(); ++j) {
            out << "prover " << j + 1 << ":";
            auto & ids = g.questions().side(j);
            for (size_t k = 0; k < ids.size(); ++k)
                out << " " << ids[k] << "->" << s.answers[static_cast<size_t>(j)][k];
            out << "\n";
        }
        return out.str();
    }
}
