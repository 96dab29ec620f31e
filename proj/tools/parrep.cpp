#include <parrep/conditioning.hpp>
#include <parrep/cycles.hpp>
#include <parrep/errors.hpp>
#include <parrep/games.hpp>
#include <parrep/homsearch.hpp>
#include <parrep/hypergraph.hpp>
#include <parrep/lines.hpp>
#include <parrep/spgraph.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace parrep;

namespace
{
    enum Exit
    {
        ok = 0,
        negative = 1,
        usage = 2
    };

    // A negative verdict: the report is still printed, the exit status is 1.
    struct Negative
    {
    };

    auto read_file(const std::string & path) -> std::string
    {
        std::ifstream in(path);
        if (! in)
            throw std::invalid_argument("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    auto fnv1a(const std::string & data, std::uint64_t h = 14695981039346656037ull) -> std::uint64_t
    {
        for (unsigned char c : data) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

    auto approx(double x) -> json
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return json{{"approx", buf}};
    }

    auto vertex_list(const std::vector<VertexRef> & vs) -> std::string
    {
        std::string out;
        for (auto v : vs)
            out += (out.empty() ? "" : " ") + to_string(v);
        return out;
    }

    auto hom_string(const Homomorphism & f) -> std::string
    {
        std::string out;
        for (int j = 0; j < f.arity(); ++j)
            for (auto [from, to] : f.side_map(j))
                out += (out.empty() ? "" : " ") + std::to_string(j + 1) + ":" + std::to_string(from) + "->" + std::to_string(to);
        return out;
    }

    struct Context
    {
        std::string subcommand;
        std::string digest_input;
        unsigned workers = 1;
        std::string format = "text";
        bool timing = false;
        json result = json::object();

        auto input(const std::string & label, const std::string & data) -> void
        {
            digest_input += label + '\0' + data + '\0';
        }

        // A file path or a named family such as Qr:3.
        auto graph(const std::string & source) -> Hypergraph
        {
            if (source.find(':') != std::string::npos && ! std::ifstream(source)) {
                input("graph", source);
                return named::from_spec(source);
            }
            auto text = read_file(source);
            input("graph", text);
            return parse_hypergraph(text);
        }

        auto file(const std::string & path) -> std::string
        {
            auto text = read_file(path);
            input("file", text);
            return text;
        }
    };

    auto render_text(const json & j, const std::string & prefix, std::ostream & out) -> void
    {
        for (auto & [key, value] : j.items()) {
            auto name = prefix.empty() ? key : prefix + "." + key;
            if (value.is_object() && value.contains("approx") && value.size() == 1)
                out << name << ": " << value["approx"].get<std::string>() << " (approx)\n";
            else if (value.is_object())
                render_text(value, name, out);
            else if (value.is_array()) {
                out << name << ":\n";
                for (auto & item : value)
                    out << "  " << (item.is_string() ? item.get<std::string>() : item.dump()) << "\n";
            }
            else if (value.is_string()) {
                auto s = value.get<std::string>();
                if (s.find('\n') != std::string::npos) {
                    out << name << ":\n";
                    std::istringstream ls(s);
                    std::string line;
                    while (std::getline(ls, line))
                        out << "  " << line << "\n";
                }
                else
                    out << name << ": " << s << "\n";
            }
            else
                out << name << ": " << value.dump() << "\n";
        }
    }

    auto emit(const Context & ctx, std::optional<double> seconds) -> void
    {
        char digest[32];
        std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(fnv1a(ctx.subcommand + '\0' + ctx.digest_input)));
        json report;
        report["subcommand"] = ctx.subcommand;
        report["inputs_digest"] = std::string("fnv1a:") + digest;
        report["workers"] = ctx.workers;
        report["result"] = ctx.result;
        if (seconds)
            report["timing"] = approx(*seconds);
        if (ctx.format == "json")
            std::cout << report.dump(2) << "\n";
        else
            render_text(report, "", std::cout);
    }

    auto certificate_summary(const Certificate & cert) -> json
    {
        return {{"arity", cert.arity}, {"doublings", cert.doubling_count()}, {"collapses", cert.collapse_count()},
            {"certificate", to_text(cert)}};
    }

    auto distribution_json(const HomDistribution & d, bool list) -> json
    {
        auto m = static_cast<unsigned long>(d.target.edge_count());
        Rational bound(1);
        bound /= pow(Rational(static_cast<long>(m)), 1ul << d.doublings);
        json j{{"support", d.probability.size()}, {"total", to_string(d.total())}, {"min_probability", to_string(d.min_probability())},
            {"min_probability_bound", to_string(bound)}, {"bound_holds", d.min_probability() >= bound}};
        if (list) {
            json entries = json::array();
            for (auto & [f, p] : d.probability)
                entries.push_back(to_string(p) + "  " + hom_string(f));
            j["distribution"] = entries;
        }
        return j;
    }

    auto set_text(const StringSet & s) -> json
    {
        json words = json::array();
        for (auto i : s.elements())
            words.push_back(to_string(s.word(i)));
        return words;
    }

    auto parse_tuples(const std::string & text, std::size_t m) -> std::pair<std::size_t, EdgeTupleMask>
    {
        std::istringstream in(text);
        std::string raw;
        std::size_t line_no = 0, n = 0;
        EdgeTupleMask mask;
        while (std::getline(in, raw)) {
            ++line_no;
            std::istringstream ls(raw.substr(0, raw.find('#')));
            std::string head;
            if (! (ls >> head))
                continue;
            if (n == 0) {
                if (head != "tuples" || ! (ls >> n) || n == 0)
                    throw FormatError("expected 'tuples n' header", line_no);
                std::size_t total = 1;
                for (std::size_t i = 0; i < n; ++i)
                    total *= m;
                mask.assign(total, false);
                continue;
            }
            std::vector<std::size_t> idx;
            std::istringstream all(raw.substr(0, raw.find('#')));
            std::size_t x;
            while (all >> x)
                idx.push_back(x);
            if (idx.size() != n || std::any_of(idx.begin(), idx.end(), [&](std::size_t e) { return e >= m; }))
                throw FormatError("expected " + std::to_string(n) + " edge indices below " + std::to_string(m), line_no);
            mask[encode_tuple(idx, m)] = true;
        }
        if (n == 0)
            throw FormatError("missing 'tuples n' header", line_no);
        return {n, mask};
    }

    auto parse_coloring(const std::string & text) -> std::vector<int>
    {
        std::vector<int> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(std::stoi(item));
        return out;
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{"Certificates, games and repetition bounds for multi-prover question sets"};
    app.require_subcommand(1);
    app.fallthrough();
    Context ctx;
    if (auto env = std::getenv("PARREP_WORKERS"))
        ctx.workers = static_cast<unsigned>(std::max(1, std::atoi(env)));
    app.add_option("--format", ctx.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--workers", ctx.workers, "Worker threads (default: PARREP_WORKERS or 1)")->check(CLI::Range(1u, 1024u));
    app.add_flag("--timing", ctx.timing, "Include wall-clock timing in the report");
    std::uint64_t budget = default_budget;
    app.add_option("--budget", budget, "Enumeration budget for exhaustive searches");

    std::function<void()> action;
    auto bind = [&](CLI::App * sub, std::string name, std::function<void()> f) {
        sub->callback([&, name, f] {
            ctx.subcommand = name;
            action = f;
        });
    };

    // hypergraph
    auto * hg = app.add_subcommand("hypergraph", "Inspect question-set hypergraphs");
    hg->require_subcommand(1);
    std::string g_src, h_src;
    std::optional<std::size_t> limit;
    auto * hg_check = hg->add_subcommand("check", "Validate and summarize a hypergraph");
    hg_check->add_option("graph", g_src, "File or named family (Qr:3, Cycle:12, Complete:2,2, SetGraph:3)")->required();
    bind(hg_check, "hypergraph check", [&] {
        auto g = ctx.graph(g_src);
        json sides = json::array();
        for (int j = 0; j < g.arity(); ++j)
            sides.push_back(g.side(j).size());
        ctx.result = {{"arity", g.arity()}, {"side_sizes", sides}, {"edges", g.edge_count()},
            {"components", connected_components(g).size()}, {"no_impossible_questions", g.no_impossible_questions()},
            {"text", to_text(g)}};
    });
    auto * hg_hom = hg->add_subcommand("hom", "Enumerate homomorphisms G -> H");
    hg_hom->add_option("source", g_src)->required();
    hg_hom->add_option("target", h_src)->required();
    hg_hom->add_option("--limit", limit, "Stop after this many");
    bind(hg_hom, "hypergraph hom", [&] {
        auto g = ctx.graph(g_src);
        auto h = ctx.graph(h_src);
        auto homs = enumerate_homomorphisms(g, h, limit);
        json list = json::array();
        for (auto & f : homs)
            list.push_back(hom_string(f));
        ctx.result = {{"count", homs.size()}, {"complete", ! limit || homs.size() < *limit}, {"homomorphisms", list}};
    });

    // cert
    auto * cert = app.add_subcommand("cert", "Certificates of constructibility by conditioning");
    cert->require_subcommand(1);
    std::string cert_path, spec, out_path;
    auto * cert_verify = cert->add_subcommand("verify", "Replay a certificate");
    cert_verify->add_option("certificate", cert_path)->required();
    cert_verify->add_option("--expect", g_src, "Also check the result is isomorphic to this graph");
    bind(cert_verify, "cert verify", [&] {
        auto c = parse_certificate(ctx.file(cert_path));
        try {
            auto replay = verify_certificate(c);
            ctx.result = {{"valid", true}, {"doublings", c.doubling_count()}, {"collapses", c.collapse_count()},
                {"final_graph", to_text(replay.final_graph)}};
            if (! g_src.empty()) {
                bool iso = are_isomorphic(replay.final_graph, ctx.graph(g_src));
                ctx.result["isomorphic_to_expected"] = iso;
                if (! iso)
                    throw Negative{};
            }
        }
        catch (const CertificateError & e) {
            ctx.result = {{"valid", false}, {"failing_step", e.step() ? json(*e.step()) : json(nullptr)}, {"error", e.what()}};
            throw Negative{};
        }
    });
    auto * cert_norm = cert->add_subcommand("normalize", "Merge all collapses into one final step");
    cert_norm->add_option("certificate", cert_path)->required();
    bind(cert_norm, "cert normalize", [&] {
        auto c = parse_certificate(ctx.file(cert_path));
        auto n = normalize_certificate(c);
        ctx.result = certificate_summary(n);
        ctx.result["input_doublings"] = c.doubling_count();
        ctx.result["isomorphic"] = are_isomorphic(verify_certificate(c).final_graph, verify_certificate(n).final_graph);
    });
    auto * cert_named = cert->add_subcommand("named", "Certificate for Complete:... or SetGraph:k");
    cert_named->add_option("spec", spec)->required();
    bind(cert_named, "cert named", [&] {
        ctx.input("spec", spec);
        auto c = certify_named(spec);
        ctx.result = certificate_summary(c);
        ctx.result["isomorphic"] = are_isomorphic(verify_certificate(c).final_graph, named::from_spec(spec));
    });
    auto * cert_sp = cert->add_subcommand("sp", "Certificate for a bipartite series-parallel graph");
    cert_sp->add_option("graph", g_src)->required();
    bind(cert_sp, "cert sp", [&] {
        auto g = ctx.graph(g_src);
        auto t = sp_parse(g);
        if (! t) {
            ctx.result = {{"series_parallel", false}};
            throw Negative{};
        }
        auto syn = certify_sp_detailed(*t);
        ctx.result = certificate_summary(syn.certificate);
        ctx.result["series_parallel"] = true;
        ctx.result["spine"] = vertex_list(spine_of(*t));
        ctx.result["contiguity_checks"] = syn.contiguity_checks;
        ctx.result["isomorphic"] = are_isomorphic(verify_certificate(syn.certificate).final_graph, g);
    });
    auto * cert_tree = cert->add_subcommand("tree", "Certificate for a tree by leaf addition");
    cert_tree->add_option("graph", g_src)->required();
    bind(cert_tree, "cert tree", [&] {
        auto g = ctx.graph(g_src);
        auto c = certify_tree(g);
        ctx.result = certificate_summary(c);
        ctx.result["isomorphic"] = are_isomorphic(verify_certificate(c).final_graph, g);
    });

    // hitting
    auto * hit = app.add_subcommand("hitting", "Same-set hitting distributions");
    hit->require_subcommand(1);
    std::size_t n = 1, samples = 1000;
    std::uint64_t seed = 1;
    bool list = false;
    auto * hit_build = hit->add_subcommand("build", "Build the distribution over Hom(P, Q)");
    hit_build->add_option("certificate", cert_path)->required();
    hit_build->add_option("target", h_src)->required();
    hit_build->add_flag("--list", list, "List every support element");
    bind(hit_build, "hitting build", [&] {
        auto c = parse_certificate(ctx.file(cert_path));
        auto d = build_hitting_distribution(c, ctx.graph(h_src));
        ctx.result = distribution_json(d, list);
        ctx.result["doublings"] = d.doublings;
    });
    auto * hit_verify = hit->add_subcommand("verify", "Check Pr[all edges in S] >= mu(S)^(2^k)");
    hit_verify->add_option("certificate", cert_path)->required();
    hit_verify->add_option("target", h_src)->required();
    hit_verify->add_option("--n", n, "Repetitions")->check(CLI::PositiveNumber);
    hit_verify->add_option("--samples", samples, "Random sets when exhaustive mode is too large");
    hit_verify->add_option("--seed", seed);
    bind(hit_verify, "hitting verify", [&] {
        auto c = parse_certificate(ctx.file(cert_path));
        auto d = build_hitting_distribution(c, ctx.graph(h_src));
        ctx.input("args", std::to_string(n) + "/" + std::to_string(samples) + "/" + std::to_string(seed));
        double points = std::pow(static_cast<double>(d.target.edge_count()), static_cast<double>(n));
        bool exhaustive = points <= 16;
        auto rep = exhaustive ? verify_hitting_exhaustive(d, n) : verify_hitting_sampled(d, n, samples, seed);
        ctx.result = {{"mode", exhaustive ? "exhaustive" : "sampled"}, {"sets_tested", rep.tested}, {"violations", rep.violations},
            {"min_slack", to_string(rep.min_slack)}};
        if (rep.violations > 0)
            throw Negative{};
    });

    // game
    auto * game = app.add_subcommand("game", "Exact game values and repetition");
    game->require_subcommand(1);
    std::string game_path, strings_path, strategy_path, tuples_path;
    int r = 3, gn = 1;
    auto * game_value_cmd = game->add_subcommand("value", "Exact value over deterministic strategies");
    game_value_cmd->add_option("game", game_path)->required();
    bind(game_value_cmd, "game value", [&] {
        auto g = parse_game(ctx.file(game_path));
        auto v = game_value(g, budget, ctx.workers);
        ctx.result = {{"value", to_string(v.value)}, {"witness", to_text(g, v.witness)}};
    });
    auto * game_repeat = game->add_subcommand("repeat", "Value of the n-fold parallel repetition");
    game_repeat->add_option("game", game_path)->required();
    game_repeat->add_option("--n", n)->check(CLI::PositiveNumber);
    bind(game_repeat, "game repeat", [&] {
        auto g = parse_game(ctx.file(game_path));
        ctx.input("n", std::to_string(n));
        auto rg = repeat_game(g, n, budget);
        auto base = game_value(g, budget, ctx.workers).value;
        auto v = game_value(rg, budget, ctx.workers).value;
        ctx.result = {{"n", n}, {"question_tuples", rg.questions().edge_count()}, {"base_value", to_string(base)},
            {"value", to_string(v)}, {"base_value_power", to_string(pow(base, n))}, {"at_least_power", v >= pow(base, n)}};
    });
    auto * game_gs = game->add_subcommand("gs", "The string-set game on Q_r");
    game_gs->add_option("--r", r)->check(CLI::Range(3, 9));
    game_gs->add_option("--strings", strings_path, "String set file")->required();
    bind(game_gs, "game gs", [&] {
        auto s = parse_string_set(ctx.file(strings_path));
        if (s.r() != r)
            throw std::invalid_argument("string set is over [" + std::to_string(s.r()) + "], not [" + std::to_string(r) + "]");
        auto g = build_game_gs(r, s);
        auto v = game_value(g, budget, ctx.workers);
        auto line = has_combinatorial_line(s);
        ctx.result = {{"r", r}, {"n", s.n()}, {"measure", to_string(s.measure())}, {"value", to_string(v.value)},
            {"line", line ? pattern_to_string(*line) : "none"}};
        if (s.n() <= 3)
            ctx.result["canonical_repeated_value"] =
                to_string(evaluate_strategy(repeat_game(g, static_cast<std::size_t>(s.n()), budget), canonical_strategy_gs(r, s.n())));
    });
    auto * game_gv = game->add_subcommand("good-vector", "Search a good homomorphism vector for a set of edge tuples");
    game_gv->add_option("graph", g_src)->required();
    game_gv->add_option("--tuples", tuples_path, "File: 'tuples n' then lines of n edge indices")->required();
    bind(game_gv, "game good-vector", [&] {
        auto q = ctx.graph(g_src);
        auto [len, mask] = parse_tuples(ctx.file(tuples_path), q.edge_count());
        auto gv = find_good_vector(q, len, mask, budget);
        if (! gv) {
            ctx.result = {{"found", false}};
            throw Negative{};
        }
        json maps = json::array();
        for (auto & f : gv->maps)
            maps.push_back(hom_string(f));
        ctx.result = {{"found", true}, {"identity_coordinate", gv->identity_coordinate + 1}, {"maps", maps}};
    });
    auto * game_lift = game->add_subcommand("lift", "Lift a repeated-game strategy through a good vector");
    game_lift->add_option("game", game_path)->required();
    game_lift->add_option("--n", n)->check(CLI::PositiveNumber);
    game_lift->add_option("--strategy", strategy_path, "Strategy file for the repeated game")->required();
    bind(game_lift, "game lift", [&] {
        auto g = parse_game(ctx.file(game_path));
        auto rg = repeat_game(g, n, budget);
        auto s = parse_strategy(rg, ctx.file(strategy_path));
        auto win = winning_tuples(g, n, s);
        auto gv = find_good_vector(g.questions(), n, win, budget);
        ctx.result = {{"repeated_value", to_string(evaluate_strategy(rg, s))}, {"good_vector", gv.has_value()}};
        if (! gv)
            throw Negative{};
        auto lifted = lift_strategy(g, n, s, *gv);
        ctx.result["lifted_value"] = to_string(evaluate_strategy(g, lifted));
        ctx.result["lifted"] = to_text(g, lifted);
    });

    // dhj
    auto * dhj = app.add_subcommand("dhj", "Density Hales-Jewett quantities");
    dhj->require_subcommand(1);
    auto * dhj_coeff_cmd = dhj->add_subcommand("coeff", "Largest line-free density of [r]^n");
    dhj_coeff_cmd->add_option("--r", r)->required();
    dhj_coeff_cmd->add_option("--n", gn)->required();
    dhj_coeff_cmd->add_option("--witness", out_path, "Write the witness set to this file");
    bind(dhj_coeff_cmd, "dhj coeff", [&] {
        ctx.input("args", std::to_string(r) + "," + std::to_string(gn));
        auto d = dhj_coeff(r, gn);
        ctx.result = {{"r", r}, {"n", gn}, {"value", to_string(d.value)}, {"witness", set_text(d.witness)}};
        if (! out_path.empty())
            std::ofstream(out_path) << to_text(d.witness);
    });
    auto * dhj_line = dhj->add_subcommand("line", "Find a combinatorial line in a string set");
    dhj_line->add_option("strings", strings_path)->required();
    bind(dhj_line, "dhj line", [&] {
        auto s = parse_string_set(ctx.file(strings_path));
        auto line = has_combinatorial_line(s);
        ctx.result = {{"measure", to_string(s.measure())}, {"line", line ? pattern_to_string(*line) : "none"}};
    });
    auto * dhj_equi = dhj->add_subcommand("equi", "Equidistributed set of [r]^n");
    dhj_equi->add_option("--r", r)->required();
    dhj_equi->add_option("--n", gn)->required();
    bind(dhj_equi, "dhj equi", [&] {
        ctx.input("args", std::to_string(r) + "," + std::to_string(gn));
        auto s = equidistributed_set(r, gn);
        auto line = has_combinatorial_line(s);
        ctx.result = {{"size", s.size()}, {"measure", to_string(s.measure())}, {"line", line ? pattern_to_string(*line) : "none"},
            {"set", to_text(s)}};
    });

    // hj
    auto * hj = app.add_subcommand("hj", "Hales-Jewett colouring numbers");
    hj->require_subcommand(1);
    auto * hj_coeff_cmd = hj->add_subcommand("coeff", "Fewest colours of [r]^n without a monochromatic line");
    hj_coeff_cmd->add_option("--r", r)->required();
    hj_coeff_cmd->add_option("--n", gn)->required();
    bind(hj_coeff_cmd, "hj coeff", [&] {
        ctx.input("args", std::to_string(r) + "," + std::to_string(gn));
        auto h = hj_coeff(r, gn);
        StringSet indexer(r, gn);
        json colouring = json::array();
        for (std::size_t i = 0; i < h.coloring.size(); ++i)
            colouring.push_back(to_string(indexer.word(i)) + " -> " + std::to_string(h.coloring[i]));
        ctx.result = {{"r", r}, {"n", gn}, {"colors", h.colors}, {"coloring", colouring}};
    });

    // coloring
    auto * col = app.add_subcommand("coloring", "Colouring games");
    col->require_subcommand(1);
    std::string colouring_arg;
    auto * col_value = col->add_subcommand("value", "Colour value of the colouring game built from C: [r]^n -> colours");
    col_value->add_option("--r", r)->check(CLI::Range(3, 9));
    col_value->add_option("--n", gn)->required();
    col_value->add_option("--coloring", colouring_arg, "Comma-separated colours in word order")->required();
    bind(col_value, "coloring value", [&] {
        ctx.input("args", std::to_string(r) + "," + std::to_string(gn) + "," + colouring_arg);
        auto c = parse_coloring(colouring_arg);
        auto g = build_coloring_game_gc(r, gn, c);
        auto v = coloring_value(g, budget);
        auto mono = has_monochromatic_line(r, gn, c);
        ctx.result = {{"colors", v.colors}, {"monochromatic_line", mono ? pattern_to_string(*mono) : "none"},
            {"witness", to_text(g.shape(), v.witness)}};
    });

    // bound
    auto * bound = app.add_subcommand("bound", "Repetition bound formulas");
    bound->require_subcommand(1);
    double m_edges = 1, reps = 1;
    unsigned k = 0;
    auto * bound_pr = bound->add_subcommand("pr", "3 exp(-n / M^(2^(k+1)))");
    bound_pr->add_option("--m", m_edges, "Edge count")->required();
    bound_pr->add_option("--k", k, "Doublings")->required();
    bound_pr->add_option("--n", reps, "Repetitions")->required();
    bind(bound_pr, "bound pr", [&] {
        ctx.input("args", std::to_string(m_edges) + "," + std::to_string(k) + "," + std::to_string(reps));
        ctx.result = {{"value", approx(pr_upper_bound(m_edges, k, reps))}};
    });
    std::string alpha_text = "1", f_name = "zero";
    auto * bound_nu = bound->add_subcommand("nonuniform", "exp(-alpha^2 n / 2) + f(alpha n / 2)");
    bound_nu->add_option("--alpha", alpha_text, "Rational in (0, 1]")->required();
    bound_nu->add_option("--n", reps)->required();
    bound_nu->add_option("--f", f_name, "zero or exp2 (f(x) = 2^-x)")->check(CLI::IsMember({"zero", "exp2"}));
    bind(bound_nu, "bound nonuniform", [&] {
        ctx.input("args", alpha_text + "," + std::to_string(reps) + "," + f_name);
        auto f = f_name == "zero" ? std::function<double(double)>([](double) { return 0.0; })
                                  : std::function<double(double)>([](double x) { return std::exp2(-x); });
        ctx.result = {{"value", approx(nonuniform_bound(parse_rational(alpha_text), reps, f))}};
    });

    // cycle
    auto * cyc = app.add_subcommand("cycle", "Computer-assisted non-constructibility of cycles with shortcuts");
    cyc->require_subcommand(1);
    int cycle_n = 12;
    std::string check_name_arg;
    auto * cyc_verify = cyc->add_subcommand("verify", "Run the lemma checks");
    cyc_verify->add_option("--n", cycle_n, "Cycle length (even, >= 8)");
    cyc_verify->add_option("--check", check_name_arg, "Only one check: b, ad or natural");
    bind(cyc_verify, "cycle verify", [&] {
        ctx.input("args", std::to_string(cycle_n) + "," + check_name_arg);
        if (! check_name_arg.empty()) {
            auto res = cycles::run_lemma_check(cycles::parse_check(check_name_arg), cycle_n, ctx.workers);
            ctx.result = {{"check", check_name_arg}, {"v", cycle_n}, {"success", res.success()}, {"partitions", res.partitions},
                {"collapse_searches", res.collapse_searches}, {"transcript", res.transcript()}};
            if (! res.success())
                throw Negative{};
            return;
        }
        auto verdict = cycles::verify_nonconstructible(cycle_n, ctx.workers);
        json checks = json::object();
        for (auto & c : verdict.checks)
            checks[cycles::check_name(c.check)] = {{"success", c.success()}, {"partitions", c.partitions},
                {"collapse_searches", c.collapse_searches}};
        ctx.result = {{"v", cycle_n}, {"verdict", verdict.non_constructible() ? "non-constructible" : "withheld"},
            {"experimental", verdict.experimental}, {"checks", checks}, {"report", verdict.report()}};
        if (! verdict.non_constructible())
            throw Negative{};
    });

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    auto start = std::chrono::steady_clock::now();
    auto seconds = [&]() -> std::optional<double> {
        if (! ctx.timing)
            return std::nullopt;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    try {
        action();
        emit(ctx, seconds());
        return ok;
    }
    catch (const Negative &) {
        emit(ctx, seconds());
        return negative;
    }
    catch (const BudgetExceeded & e) {
        std::cerr << "error: budget exceeded: " << e.what() << "\n";
        return usage;
    }
    catch (const FormatError & e) {
        std::cerr << "error: format: " << e.what() << "\n";
        return usage;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
}
