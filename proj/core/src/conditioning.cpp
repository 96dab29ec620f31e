#include <parrep/conditioning.hpp>
#include <parrep/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

using std::map;
using std::optional;
using std::set;
using std::size_t;
using std::string;
using std::vector;

namespace parrep
{
    auto Certificate::doubling_count() const -> size_t
    {
        return std::count_if(steps.begin(), steps.end(), [](const Step & s) { return std::holds_alternative<DoublingStep>(s); });
    }

    auto Certificate::collapse_count() const -> size_t
    {
        return steps.size() - doubling_count();
    }

    auto single_edge(const Edge & e) -> Hypergraph
    {
        vector<vector<VertexId>> sides;
        for (auto v : e)
            sides.push_back({v});
        return Hypergraph(std::move(sides), {e});
    }

    auto apply_doubling(const Hypergraph & g, const DoublingStep & step) -> DoublingResult
    {
        if (step.doubled.arity() != g.arity())
            throw std::invalid_argument("doubling: arity mismatch");
        CopyMap copies;
        vector<vector<VertexId>> sides;
        for (int j = 0; j < g.arity(); ++j) {
            sides.push_back(g.side(j));
            auto next = g.next_unused_id(j);
            for (auto id : step.doubled.side(j)) {
                if (! g.contains({j, id}))
                    throw std::invalid_argument("doubling: " + to_string(VertexRef{j, id}) + " is not a vertex");
                copies[{j, id}] = {j, next};
                sides[j].push_back(next++);
            }
        }
        vector<Edge> edges = g.edges();
        for (auto & e : g.edges()) {
            Edge copy = e;
            bool fixed = true;
            for (int j = 0; j < g.arity(); ++j)
                if (auto it = copies.find({j, e[j]}); it != copies.end()) {
                    copy[j] = it->second.id;
                    fixed = false;
                }
            if (fixed)
                continue;
            for (int j = 0; j < g.arity(); ++j)
                if (step.doubled.side(j).contains(copy[j]) && ! copies.contains({j, e[j]}))
                    throw std::logic_error("doubling produced an edge mixing old and new vertices");
            edges.push_back(std::move(copy));
        }
        return {Hypergraph(std::move(sides), std::move(edges)), std::move(copies)};
    }

    namespace
    {
        auto validate_collapse(const Hypergraph & g, const CollapseStep & step) -> void
        {
            if (step.kept.arity() != g.arity())
                throw std::invalid_argument("collapse: arity mismatch");
            for (auto v : step.kept.vertices())
                if (! g.contains(v))
                    throw std::invalid_argument("collapse: kept " + to_string(v) + " is not a vertex");
            for (auto v : g.vertices()) {
                if (step.kept.contains(v))
                    continue;
                auto it = step.mapping.find(v);
                if (it == step.mapping.end())
                    throw std::invalid_argument("collapse: no target for removed vertex " + to_string(v));
                if (! step.kept.contains({v.side, it->second}))
                    throw std::invalid_argument("collapse: target of " + to_string(v) + " is not kept");
            }
            for (auto & [v, target] : step.mapping)
                if (! g.contains(v) || step.kept.contains(v))
                    throw std::invalid_argument("collapse: mapping source " + to_string(v) + " is not a removed vertex");
        }
    }

    auto collapse_homomorphism(const Hypergraph & g, const CollapseStep & step) -> Homomorphism
    {
        validate_collapse(g, step);
        Homomorphism f(g.arity());
        for (auto v : g.vertices())
            f.set(v, step.kept.contains(v) ? v.id : step.mapping.at(v));
        return f;
    }

    auto apply_collapse(const Hypergraph & g, const CollapseStep & step) -> Hypergraph
    {
        auto f = collapse_homomorphism(g, step);
        for (auto & e : g.edges())
            if (! g.has_edge(f.image(e))) {
                string edge;
                for (int j = 0; j < g.arity(); ++j)
                    edge += (j ? " " : "") + to_string(VertexRef{j, e[j]});
                throw HomomorphismViolation("collapse sends edge (" + edge + ") outside the kept section");
            }
        return section(g, step.kept);
    }

    auto verify_certificate(const Certificate & cert) -> Replay
    {
        if (cert.arity < 1 || static_cast<int>(cert.init.size()) != cert.arity)
            throw CertificateError("initial edge must have one vertex per side");
        Replay replay{single_edge(cert.init), {}};
        for (size_t i = 0; i < cert.steps.size(); ++i) {
            StepRecord record;
            record.index = i;
            try {
                if (auto d = std::get_if<DoublingStep>(&cert.steps[i])) {
                    auto result = apply_doubling(replay.final_graph, *d);
                    record.doubling = true;
                    record.copies = std::move(result.copies);
                    replay.final_graph = std::move(result.graph);
                }
                else {
                    auto & c = std::get<CollapseStep>(cert.steps[i]);
                    auto next = apply_collapse(replay.final_graph, c);
                    for (auto & [v, _] : c.mapping)
                        record.removed.push_back(v);
                    replay.final_graph = std::move(next);
                }
            }
            catch (const HomomorphismViolation & e) {
                throw HomomorphismViolation(e.what(), i);
            }
            catch (const std::invalid_argument & e) {
                throw CertificateError(e.what(), i);
            }
            record.after = replay.final_graph;
            replay.transcript.push_back(std::move(record));
        }
        return replay;
    }

    auto normalize_certificate(const Certificate & cert) -> Certificate
    {
        verify_certificate(cert);

        // full: the graph with nothing collapsed; image: full vertex -> the surviving vertex it collapses to
        // (both in full numbering); to_full: vertex of the original replay -> full vertex.
        Hypergraph full = single_edge(cert.init);
        Hypergraph current = full;
        map<VertexRef, VertexRef> image;
        map<VertexRef, VertexRef> to_full;
        for (auto v : full.vertices()) {
            image[v] = v;
            to_full[v] = v;
        }
        set<VertexRef> removed;

        Certificate out{cert.arity, cert.init, {}};
        for (auto & step : cert.steps) {
            if (auto d = std::get_if<DoublingStep>(&step)) {
                DoublingStep full_step{SideSubset(cert.arity)};
                set<VertexRef> doubled_full;
                for (auto v : d->doubled.vertices())
                    doubled_full.insert(to_full.at(v));
                for (auto v : doubled_full)
                    full_step.doubled.insert(v);
                // A removed vertex must follow its image when that image is doubled.
                for (auto a : removed)
                    if (doubled_full.contains(image.at(a)))
                        full_step.doubled.insert(a);
                auto full_result = apply_doubling(full, full_step);
                auto cur_result = apply_doubling(current, *d);
                for (auto & [old, copy] : cur_result.copies)
                    to_full[copy] = full_result.copies.at(to_full.at(old));
                for (auto & [old, copy] : full_result.copies) {
                    if (removed.contains(old)) {
                        image[copy] = full_result.copies.at(image.at(old));
                        removed.insert(copy);
                    }
                    else
                        image[copy] = copy;
                }
                full = std::move(full_result.graph);
                current = std::move(cur_result.graph);
                out.steps.push_back(std::move(full_step));
            }
            else {
                auto & c = std::get<CollapseStep>(step);
                auto f = collapse_homomorphism(current, c);
                map<VertexRef, VertexRef> moved;
                for (auto v : current.vertices())
                    moved[to_full.at(v)] = to_full.at({v.side, f(v)});
                for (auto & [v, target] : image)
                    target = moved.at(target);
                for (auto & [v, _] : c.mapping) {
                    removed.insert(to_full.at(v));
                    to_full.erase(v);
                }
                current = apply_collapse(current, c);
            }
        }
        if (! removed.empty()) {
            CollapseStep merged{SideSubset(cert.arity), {}};
            for (auto & [v, f] : to_full)
                merged.kept.insert(f);
            for (auto a : removed)
                merged.mapping[a] = image.at(a).id;
            out.steps.push_back(std::move(merged));
        }
        return out;
    }

    auto certify_complete(const vector<int> & sizes) -> Certificate
    {
        if (sizes.empty())
            throw std::invalid_argument("Complete needs at least one side");
        int r = static_cast<int>(sizes.size());
        Certificate cert{r, Edge(r, 0), {}};
        for (int j = 0; j < r; ++j) {
            if (sizes[j] < 1)
                throw std::invalid_argument("Complete sizes must be >= 1");
            // Doubling a subset of one side with everything else fixed keeps the graph complete.
            int count = 1;
            while (count < sizes[j]) {
                int d = std::min(count, sizes[j] - count);
                DoublingStep step{SideSubset(r)};
                for (int id = 0; id < d; ++id)
                    step.doubled.insert({j, static_cast<VertexId>(id)});
                cert.steps.push_back(std::move(step));
                count += d;
            }
        }
        return cert;
    }

    auto certify_set_graph(int k) -> Certificate
    {
        if (k < 1 || k > 20)
            throw std::invalid_argument("SetGraph needs 1 <= k <= 20");
        Certificate cert{2, {0, 0}, {}};
        Hypergraph g = single_edge(cert.init);
        map<VertexId, int> element{{0, 1}};
        map<VertexId, std::uint32_t> subset{{0, 1u}};
        for (int m = 1; m < k; ++m) {
            std::uint32_t bit_m = 1u << (m - 1), bit_next = 1u << m;
            DoublingStep first{SideSubset(2)};
            for (auto [id, s] : subset)
                if (s & bit_m)
                    first.doubled.insert({1, id});
            auto r1 = apply_doubling(g, first);
            for (auto & [old, copy] : r1.copies)
                subset[copy.id] = subset.at(old.id) | bit_next;
            g = std::move(r1.graph);
            cert.steps.push_back(std::move(first));

            DoublingStep second{SideSubset(2)};
            for (auto [id, x] : element)
                if (x == m)
                    second.doubled.insert({0, id});
            for (auto [id, s] : subset)
                if ((s & bit_m) && ! (s & bit_next))
                    second.doubled.insert({1, id});
            auto r2 = apply_doubling(g, second);
            for (auto & [old, copy] : r2.copies) {
                if (old.side == 0)
                    element[copy.id] = m + 1;
                else
                    subset[copy.id] = (subset.at(old.id) & ~bit_m) | bit_next;
            }
            g = std::move(r2.graph);
            cert.steps.push_back(std::move(second));
        }
        return cert;
    }

    auto certify_named(const string & spec) -> Certificate
    {
        auto colon = spec.find(':');
        auto name = spec.substr(0, colon);
        if (name == "Complete" || name == "SetGraph") {
            auto g = named::from_spec(spec);
            if (name == "SetGraph")
                return certify_set_graph(static_cast<int>(g.side(0).size()));
            vector<int> sizes;
            for (int j = 0; j < g.arity(); ++j)
                sizes.push_back(static_cast<int>(g.side(j).size()));
            return certify_complete(sizes);
        }
        throw std::invalid_argument("certificates are generated only for Complete and SetGraph, not '" + spec + "'");
    }

    auto to_text(const Certificate & cert) -> string
    {
        std::ostringstream out;
        out << "cert " << cert.arity << "\ninit";
        for (auto v : cert.init)
            out << ' ' << v;
        out << '\n';
        for (auto & step : cert.steps) {
            if (auto d = std::get_if<DoublingStep>(&step)) {
                out << "double";
                for (auto v : d->doubled.vertices())
                    out << ' ' << to_string(v);
            }
            else {
                auto & c = std::get<CollapseStep>(step);
                out << "collapse keep";
                for (auto v : c.kept.vertices())
                    out << ' ' << to_string(v);
                out << " map";
                for (auto & [from, to] : c.mapping)
                    out << ' ' << to_string(from) << "->" << to_string(VertexRef{from.side, to});
            }
            out << '\n';
        }
        return out.str();
    }

    namespace
    {
        auto parse_token(const string & token, int arity, size_t line) -> VertexRef
        {
            auto colon = token.find(':');
            if (colon == string::npos || colon == 0 || colon + 1 == token.size())
                throw FormatError("expected side:vertex, got '" + token + "'", line);
            auto digits = [&](const string & s) {
                if (s.empty() || ! std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 9)
                    throw FormatError("bad number in token '" + token + "'", line);
                return std::stoul(s);
            };
            auto side = digits(token.substr(0, colon));
            auto id = digits(token.substr(colon + 1));
            if (side < 1 || static_cast<int>(side) > arity)
                throw FormatError("side out of range in '" + token + "'", line);
            return {static_cast<int>(side) - 1, static_cast<VertexId>(id)};
        }
    }

    auto parse_certificate(const string & text) -> Certificate
    {
        std::istringstream in(text);
        string raw;
        size_t line_no = 0;
        Certificate cert;
        bool have_header = false, have_init = false;
        while (std::getline(in, raw)) {
            ++line_no;
            if (auto hash = raw.find('#'); hash != string::npos)
                raw.resize(hash);
            std::istringstream ls(raw);
            string head;
            if (! (ls >> head))
                continue;
            if (! have_header) {
                if (head != "cert" || ! (ls >> cert.arity) || cert.arity < 1)
                    throw FormatError("expected 'cert r' header", line_no);
                have_header = true;
                continue;
            }
            if (! have_init) {
                if (head != "init")
                    throw FormatError("expected 'init v1 ... vr'", line_no);
                string token;
                while (ls >> token) {
                    if (token.empty() || ! std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }) || token.size() > 9)
                        throw FormatError("bad vertex id '" + token + "'", line_no);
                    cert.init.push_back(static_cast<VertexId>(std::stoul(token)));
                }
                if (static_cast<int>(cert.init.size()) != cert.arity)
                    throw FormatError("init needs exactly " + std::to_string(cert.arity) + " vertices", line_no);
                have_init = true;
                continue;
            }
            string token;
            if (head == "double") {
                DoublingStep step{SideSubset(cert.arity)};
                while (ls >> token)
                    step.doubled.insert(parse_token(token, cert.arity, line_no));
                cert.steps.push_back(std::move(step));
            }
            else if (head == "collapse") {
                CollapseStep step{SideSubset(cert.arity), {}};
                if (! (ls >> token) || token != "keep")
                    throw FormatError("expected 'keep' after 'collapse'", line_no);
                bool in_map = false;
                while (ls >> token) {
                    if (token == "map") {
                        if (in_map)
                            throw FormatError("duplicate 'map'", line_no);
                        in_map = true;
                        continue;
                    }
                    if (! in_map) {
                        step.kept.insert(parse_token(token, cert.arity, line_no));
                        continue;
                    }
                    auto arrow = token.find("->");
                    if (arrow == string::npos)
                        throw FormatError("expected from->to, got '" + token + "'", line_no);
                    auto from = parse_token(token.substr(0, arrow), cert.arity, line_no);
                    auto to = parse_token(token.substr(arrow + 2), cert.arity, line_no);
                    if (from.side != to.side)
                        throw FormatError("mapping changes side in '" + token + "'", line_no);
                    if (! step.mapping.emplace(from, to.id).second)
                        throw FormatError("vertex mapped twice in '" + token + "'", line_no);
                }
                if (! in_map)
                    throw FormatError("collapse without 'map'", line_no);
                cert.steps.push_back(std::move(step));
            }
            else
                throw FormatError("unexpected '" + head + "'", line_no);
        }
        if (! have_header || ! have_init)
            throw FormatError("missing header or init line", line_no);
        return cert;
    }

    auto HomDistribution::total() const -> Rational
    {
        Rational sum = 0;
        for (auto & [f, p] : probability)
            sum += p;
        return sum;
    }

    auto HomDistribution::min_probability() const -> Rational
    {
        if (probability.empty())
            throw std::logic_error("empty distribution");
        Rational best = probability.begin()->second;
        for (auto & [f, p] : probability)
            if (p < best)
                best = p;
        return best;
    }

    auto build_hitting_distribution(const Certificate & cert, const Hypergraph & target) -> HomDistribution
    {
        if (target.edges().empty())
            throw std::invalid_argument("hitting distribution needs a target with at least one edge");
        if (target.arity() != cert.arity)
            throw std::invalid_argument("hitting distribution: arity mismatch");
        verify_certificate(cert);

        using Assignment = vector<VertexId>;
        Hypergraph g = single_edge(cert.init);
        vector<VertexRef> verts = g.vertices();
        map<Assignment, Rational> dist;
        Rational uniform(1, static_cast<unsigned long>(target.edge_count()));
        for (auto & e : target.edges())
            dist[e] = uniform;

        for (auto & step : cert.steps) {
            map<VertexRef, size_t> old_pos;
            for (size_t i = 0; i < verts.size(); ++i)
                old_pos[verts[i]] = i;
            if (auto d = std::get_if<DoublingStep>(&step)) {
                auto result = apply_doubling(g, *d);
                vector<size_t> fixed_pos, doubled_pos;
                for (size_t i = 0; i < verts.size(); ++i)
                    (result.copies.contains(verts[i]) ? doubled_pos : fixed_pos).push_back(i);

                // Group by the restriction to fixed vertices; conditionals index only support elements.
                map<Assignment, vector<std::pair<Assignment, Rational>>> by_fixed;
                map<Assignment, Rational> marginal;
                for (auto & [f, p] : dist) {
                    Assignment fa, fb;
                    for (auto i : fixed_pos)
                        fa.push_back(f[i]);
                    for (auto i : doubled_pos)
                        fb.push_back(f[i]);
                    by_fixed[fa].emplace_back(fb, p);
                    marginal[fa] += p;
                }

                auto new_verts = result.graph.vertices();
                // Source of each new vertex: (kind, index into fa / fb).
                map<VertexRef, size_t> fixed_index, doubled_index, copy_index;
                for (size_t i = 0; i < fixed_pos.size(); ++i)
                    fixed_index[verts[fixed_pos[i]]] = i;
                for (size_t i = 0; i < doubled_pos.size(); ++i) {
                    doubled_index[verts[doubled_pos[i]]] = i;
                    copy_index[result.copies.at(verts[doubled_pos[i]])] = i;
                }

                map<Assignment, Rational> next;
                for (auto & [fa, entries] : by_fixed) {
                    auto & pa = marginal.at(fa);
                    for (auto & [fb1, p1] : entries)
                        for (auto & [fb2, p2] : entries) {
                            Assignment f;
                            f.reserve(new_verts.size());
                            for (auto v : new_verts) {
                                if (auto it = fixed_index.find(v); it != fixed_index.end())
                                    f.push_back(fa[it->second]);
                                else if (auto it2 = doubled_index.find(v); it2 != doubled_index.end())
                                    f.push_back(fb1[it2->second]);
                                else
                                    f.push_back(fb2[copy_index.at(v)]);
                            }
                            next[std::move(f)] += p1 * p2 / pa;
                        }
                }
                dist = std::move(next);
                verts = std::move(new_verts);
                g = std::move(result.graph);
            }
            else {
                auto & c = std::get<CollapseStep>(step);
                auto kept = c.kept.vertices();
                map<Assignment, Rational> next;
                for (auto & [f, p] : dist) {
                    Assignment restricted;
                    for (auto v : kept)
                        restricted.push_back(f[old_pos.at(v)]);
                    next[std::move(restricted)] += p;
                }
                dist = std::move(next);
                verts = std::move(kept);
                g = apply_collapse(g, c);
            }
        }

        HomDistribution out{g, target, cert.doubling_count(), {}};
        for (auto & [f, p] : dist) {
            Homomorphism h(g.arity());
            for (size_t i = 0; i < verts.size(); ++i)
                h.set(verts[i], f[i]);
            out.probability.emplace(std::move(h), p);
        }
        return out;
    }

    namespace
    {
        auto checked_power(size_t base, size_t exponent, size_t cap, const string & what) -> size_t
        {
            long double value = std::pow(static_cast<long double>(base), static_cast<long double>(exponent));
            if (value > static_cast<long double>(cap))
                throw BudgetExceeded(what, value, static_cast<long double>(cap));
            size_t result = 1;
            for (size_t i = 0; i < exponent; ++i)
                result *= base;
            return result;
        }

        // For each n-tuple of support elements, the set of target^n points hit by the source edges.
        struct HitTable
        {
            size_t points = 0;
            map<vector<bool>, Rational> weight;
        };

        auto hit_table(const HomDistribution & dist, size_t n) -> HitTable
        {
            size_t m = dist.target.edge_count();
            HitTable table;
            table.points = checked_power(m, n, size_t{1} << 24, "target^n points");
            vector<std::pair<vector<size_t>, Rational>> support;
            for (auto & [f, p] : dist.probability) {
                vector<size_t> images;
                for (auto & e : dist.source.edges())
                    images.push_back(*dist.target.edge_index(f.image(e)));
                support.emplace_back(std::move(images), p);
            }
            checked_power(support.size(), n, size_t{1} << 24, "support^n tuples");
            vector<size_t> choice(n, 0);
            while (true) {
                vector<bool> hit(table.points, false);
                Rational p = 1;
                for (size_t i = 0; i < n; ++i)
                    p *= support[choice[i]].second;
                for (size_t e = 0; e < dist.source.edge_count(); ++e) {
                    size_t point = 0;
                    for (size_t i = 0; i < n; ++i)
                        point = point * m + support[choice[i]].first[e];
                    hit[point] = true;
                }
                table.weight[std::move(hit)] += p;
                size_t i = n;
                while (i > 0) {
                    --i;
                    if (++choice[i] < support.size())
                        break;
                    choice[i] = 0;
                    if (i == 0)
                        return table;
                }
                if (n == 0)
                    return table;
            }
        }

        auto probability_in(const HitTable & table, const EdgeTupleSet & s) -> Rational
        {
            Rational total = 0;
            for (auto & [hit, p] : table.weight) {
                bool inside = true;
                for (size_t i = 0; i < hit.size() && inside; ++i)
                    inside = ! hit[i] || s[i];
                if (inside)
                    total += p;
            }
            return total;
        }

        auto check_sets(const HomDistribution & dist, const HitTable & table,
            const std::function<bool(EdgeTupleSet &)> & next_set) -> HittingReport
        {
            HittingReport report;
            unsigned long c = 1;
            for (size_t i = 0; i < dist.doublings; ++i)
                c *= 2;
            EdgeTupleSet s;
            bool first = true;
            while (next_set(s)) {
                if (s.size() != table.points)
                    throw std::invalid_argument("edge tuple set has the wrong size");
                auto pr = probability_in(table, s);
                Rational mu(static_cast<unsigned long>(std::count(s.begin(), s.end(), true)), static_cast<unsigned long>(table.points));
                mu.canonicalize();
                Rational slack = pr - pow(mu, c);
                if (first || slack < report.min_slack)
                    report.min_slack = slack;
                first = false;
                ++report.tested;
                if (slack < 0) {
                    if (! report.first_violation)
                        report.first_violation = s;
                    ++report.violations;
                }
            }
            return report;
        }
    }

    auto hitting_probability(const HomDistribution & dist, size_t n, const EdgeTupleSet & s) -> Rational
    {
        auto table = hit_table(dist, n);
        if (s.size() != table.points)
            throw std::invalid_argument("edge tuple set has the wrong size");
        return probability_in(table, s);
    }

    auto verify_hitting_exhaustive(const HomDistribution & dist, size_t n) -> HittingReport
    {
        auto points = checked_power(dist.target.edge_count(), n, 16, "exhaustive hitting check (|target|^n points)");
        auto table = hit_table(dist, n);
        std::uint64_t mask = 0, end = std::uint64_t{1} << points;
        return check_sets(dist, table, [&](EdgeTupleSet & s) {
            if (mask == end)
                return false;
            s.assign(points, false);
            for (size_t i = 0; i < points; ++i)
                s[i] = (mask >> i) & 1;
            ++mask;
            return true;
        });
    }

    auto verify_hitting_sampled(const HomDistribution & dist, size_t n, size_t samples, std::uint64_t seed) -> HittingReport
    {
        auto table = hit_table(dist, n);
        std::mt19937_64 rng(seed);
        size_t produced = 0;
        return check_sets(dist, table, [&](EdgeTupleSet & s) {
            if (produced == samples)
                return false;
            ++produced;
            s.assign(table.points, false);
            for (size_t i = 0; i < table.points; ++i)
                s[i] = rng() & 1;
            return true;
        });
    }

    auto verify_hitting_sets(const HomDistribution & dist, size_t n, const vector<EdgeTupleSet> & sets) -> HittingReport
    {
        auto table = hit_table(dist, n);
        size_t i = 0;
        return check_sets(dist, table, [&](EdgeTupleSet & s) {
            if (i == sets.size())
                return false;
            s = sets[i++];
            return true;
        });
    }

    auto pr_upper_bound(double m, unsigned k, double n) -> double
    {
        if (m < 1 || n < 1)
            throw std::invalid_argument("pr_upper_bound needs M >= 1 and n >= 1");
        long double log_denominator = std::ldexp(1.0L, static_cast<int>(k) + 1) * std::log(static_cast<long double>(m));
        long double ratio = std::exp(std::log(static_cast<long double>(n)) - log_denominator);
        return static_cast<double>(3.0L * std::exp(-ratio));
    }

    auto probabilistic_good_bound(double eps, double c, double n) -> double
    {
        if (c <= 0)
            throw std::invalid_argument("probabilistic_good_bound needs C > 0");
        return 3.0 * std::exp(-eps * n / c);
    }
}
