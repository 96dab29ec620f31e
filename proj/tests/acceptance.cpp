// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include "support.hpp"

#include <parrep/conditioning.hpp>
#include <parrep/cycles.hpp>
#include <parrep/games.hpp>
#include <parrep/lines.hpp>
#include <parrep/spgraph.hpp>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

using namespace parrep;
using namespace parrep::testing;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    int failures = 0;

    auto criterion(const std::string & name, const std::function<Outcome()> & body) -> void
    {
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = body();
        }
        catch (const std::exception & e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += ! out.pass;
        std::cout << (out.pass ? "PASS " : "FAIL ") << name << ": " << out.detail << " [" << std::fixed;
        std::cout.precision(1);
        std::cout << secs << "s]" << std::endl;
    }

    auto workers() -> unsigned
    {
        if (auto env = std::getenv("PARREP_WORKERS"))
            return static_cast<unsigned>(std::max(1, std::atoi(env)));
        return std::max(1u, std::thread::hardware_concurrency());
    }

    auto lemma_checks(int v) -> Outcome
    {
        std::ostringstream detail;
        bool all = true;
        for (auto c : {cycles::Check::NonEmptyB, cycles::Check::NonEmptyAD, cycles::Check::NaturalCollapse}) {
            auto r = cycles::run_lemma_check(c, v, workers());
            all = all && r.success();
            detail << cycles::check_name(c) << "=" << (r.success() ? "SUCCESS" : "FAILURE") << " ";
        }
        detail << "V=" << v;
        return {all, detail.str()};
    }

    auto all_subsets_3x3() -> std::vector<StringSet>
    {
        std::vector<StringSet> out;
        for (unsigned mask = 0; mask < 512; ++mask) {
            StringSet s(3, 2);
            for (std::size_t i = 0; i < 9; ++i)
                if (mask >> i & 1u)
                    s.insert(i);
            out.push_back(std::move(s));
        }
        return out;
    }

    auto pow_int(std::size_t base, std::size_t e) -> std::size_t
    {
        std::size_t x = 1;
        while (e--)
            x *= base;
        return x;
    }
}

int main()
{
    std::cout << "workers: " << workers() << "\n";

    criterion("lemma checks V=12", [] { return lemma_checks(12); });
    criterion("lemma checks V=14 (stretch)", [] { return lemma_checks(14); });

    criterion("homomorphism census", [] {
        auto q3 = named::qr(3), q4 = named::qr(4);
        auto c3 = count_homomorphisms(q3, q3), c4 = count_homomorphisms(q4, q4);
        return Outcome{c3 == 4 && c4 == 5, "|Hom(Q3,Q3)|=" + std::to_string(c3) + " |Hom(Q4,Q4)|=" + std::to_string(c4)};
    });

    criterion("density Hales-Jewett desk scale", [] {
        bool ok = true;
        std::ostringstream detail;
        for (unsigned n = 1; n <= 4; ++n) {
            Rational want(binomial(n, n / 2), Integer(1) << n);
            want.canonicalize();
            auto got = dhj_coeff(2, static_cast<int>(n)).value;
            ok = ok && got == want;
            detail << "(2," << n << ")=" << got << " ";
        }
        auto d31 = dhj_coeff(3, 1).value;
        ok = ok && d31 == Rational(2, 3);
        auto e = equidistributed_set(3, 3);
        bool equi = ! has_combinatorial_line(e) && e.measure() == Rational(2, 9);
        detail << "(3,1)=" << d31 << " equi(3,3) line-free mu=" << e.measure();
        return Outcome{ok && equi, detail.str()};
    });

    criterion("string game sweep over all subsets of [3]^2", [] {
        std::size_t with_line = 0, bad = 0;
        for (auto & s : all_subsets_3x3()) {
            auto v = game_value(build_game_gs(3, s)).value;
            if (has_combinatorial_line(s)) {
                ++with_line;
                bad += v != 1;
            }
            else
                bad += v > Rational(2, 3);
        }
        return Outcome{bad == 0, "512 sets, " + std::to_string(with_line) + " with a line, " + std::to_string(bad) + " mismatches"};
    });

    criterion("canonical strategy achieves mu(S) at n=2", [] {
        auto strategy = canonical_strategy_gs(3, 2);
        std::size_t bad = 0;
        for (auto & s : all_subsets_3x3())
            bad += evaluate_strategy(repeat_game(build_game_gs(3, s), 2), strategy) != s.measure();
        return Outcome{bad == 0, "512 sets, " + std::to_string(bad) + " mismatches"};
    });

    criterion("certificate budgets", [] {
        bool ok = true;
        std::ostringstream detail;
        for (auto [r, k] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
            std::vector<int> sizes(static_cast<std::size_t>(r), 1 << k);
            auto cert = certify_complete(sizes);
            bool iso = are_isomorphic(verify_certificate(cert).final_graph, named::complete(sizes));
            ok = ok && iso && cert.doubling_count() <= static_cast<std::size_t>(r * k);
            detail << "K(r=" << r << ",k=" << k << "):" << cert.doubling_count() << "<=" << r * k << " ";
        }
        for (int k = 1; k <= 5; ++k) {
            auto cert = certify_set_graph(k);
            bool iso = are_isomorphic(verify_certificate(cert).final_graph, named::set_graph(k));
            ok = ok && iso && cert.doubling_count() == static_cast<std::size_t>(2 * (k - 1));
            detail << "Set(" << k << "):" << cert.doubling_count() << " ";
        }
        return Outcome{ok, detail.str()};
    });

    criterion("series-parallel synthesis corpus", [] {
        std::mt19937_64 rng(2024);
        std::size_t passed = 0, total = 150, doublings = 0;
        for (std::size_t i = 0; i < total; ++i) {
            auto t = random_sp_tree(rng, 10);
            auto syn = certify_sp_detailed(t);
            auto g = flatten(t);
            bool ok = g.vertex_count() <= 10 && are_isomorphic(verify_certificate(syn.certificate).final_graph, g) &&
                syn.contiguity_checks >= syn.certificate.doubling_count();
            passed += ok;
            doublings += syn.certificate.doubling_count();
        }
        return Outcome{passed == total, std::to_string(passed) + "/" + std::to_string(total) + " verified, " +
                std::to_string(doublings) + " contiguous doublings"};
    });

    criterion("same-set hitting", [] {
        struct Case
        {
            Certificate cert;
            Hypergraph target;
        };
        std::vector<Case> cases{
            {certify_named("Complete:2,1"), named::complete({2, 2})},
            {certify_named("Complete:2,2"), named::complete({2, 2})},
            {certify_named("Complete:2,2"), named::complete({1, 3})},
            {certify_tree(path(3)), named::complete({2, 2})},
            {certify_tree(star(3)), named::complete({1, 2})},
            {certify_named("Complete:2,1,1"), named::qr(3)},
            {certify_named("Complete:2,1,1,1"), named::qr(4)},
        };
        bool ok = true;
        std::size_t sets = 0, violations = 0;
        for (auto & c : cases) {
            auto dist = build_hitting_distribution(c.cert, c.target);
            auto k = dist.doublings;
            if (k > 2 || c.target.edge_count() > 4)
                return Outcome{false, "case outside k<=2, M<=4"};
            Rational floor(1, pow_int(c.target.edge_count(), pow_int(2, k)));
            floor.canonicalize();
            auto report = verify_hitting_exhaustive(dist, 1);
            ok = ok && dist.total() == 1 && dist.min_probability() >= floor && report.violations == 0;
            sets += report.tested;
            violations += report.violations;
        }
        return Outcome{ok, std::to_string(cases.size()) + " certificate/target pairs, " + std::to_string(sets) + " sets, " + std::to_string(violations) + " violations"};
    });

    criterion("repetition and lifting properties", [] {
        std::mt19937_64 rng(77);
        std::size_t games = 0, bad = 0, lifted = 0;
        while (games < 60) {
            auto g = random_game(rng, 2, 3, 3);
            auto g2 = repeat_game(g, 2);
            double space = 1;
            for (int j = 0; j < 2; ++j)
                space *= std::pow(double(g2.answer_count(j)), double(g2.questions().side(j).size()));
            if (space > 5e6)
                continue;
            Rational v = game_value(g).value;
            auto best2 = game_value(g2);
            bad += game_value(repeat_game(g, 1)).value < v;
            bad += best2.value < v * v;
            ++games;
        }
        for (int trial = 0; trial < 400; ++trial) {
            auto g = random_game(rng, 2, 2, 2);
            auto g2 = repeat_game(g, 2);
            auto s = game_value(g2).witness;
            auto gv = find_good_vector(g.questions(), 2, winning_tuples(g, 2, s));
            if (! gv)
                continue;
            ++lifted;
            bad += evaluate_strategy(g, lift_strategy(g, 2, s, *gv)) != 1;
        }
        return Outcome{bad == 0 && lifted > 0, std::to_string(games) + " games, " + std::to_string(lifted) + " lifts, " +
                std::to_string(bad) + " violations"};
    });

    criterion("Hales-Jewett desk scale", [] {
        auto a = hj_coeff(2, 1).colors, b = hj_coeff(2, 2).colors;
        return Outcome{a == 2 && b == 3, "hj(2,1)=" + std::to_string(a) + " hj(2,2)=" + std::to_string(b)};
    });

    std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " failing" << std::endl;
    return failures ? 1 : 0;
}
