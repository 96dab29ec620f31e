#include <parrep/errors.hpp>
#include <parrep/hypergraph.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

using std::map;
using std::optional;
using std::set;
using std::size_t;
using std::string;
using std::vector;

namespace parrep
{
    auto SideSubset::size() const -> size_t
    {
        size_t n = 0;
        for (auto & s : sides_)
            n += s.size();
        return n;
    }

    auto SideSubset::vertices() const -> vector<VertexRef>
    {
        vector<VertexRef> result;
        for (int j = 0; j < arity(); ++j)
            for (auto id : sides_[j])
                result.push_back({j, id});
        return result;
    }

    auto Homomorphism::operator()(VertexRef v) const -> VertexId
    {
        auto & m = maps_.at(v.side);
        auto it = m.find(v.id);
        if (it == m.end())
            throw std::invalid_argument("map not defined on vertex " + to_string(v));
        return it->second;
    }

    auto Homomorphism::image(const Edge & e) const -> Edge
    {
        Edge result(e.size());
        for (size_t j = 0; j < e.size(); ++j)
            result[j] = (*this)({static_cast<int>(j), e[j]});
        return result;
    }

    Hypergraph::Hypergraph(vector<vector<VertexId>> sides, vector<Edge> edges) :
        sides_(std::move(sides)),
        edges_(std::move(edges))
    {
        if (sides_.empty())
            throw std::invalid_argument("hypergraph needs at least one side");
        for (auto & s : sides_) {
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw std::invalid_argument("duplicate vertex id on a side");
        }
        for (auto & e : edges_) {
            if (e.size() != sides_.size())
                throw std::invalid_argument("edge length differs from arity");
            for (size_t j = 0; j < e.size(); ++j)
                if (! std::binary_search(sides_[j].begin(), sides_[j].end(), e[j]))
                    throw std::invalid_argument("edge uses vertex " + std::to_string(e[j]) + " not on side " + std::to_string(j + 1));
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    }

    auto Hypergraph::vertex_count() const -> size_t
    {
        size_t n = 0;
        for (auto & s : sides_)
            n += s.size();
        return n;
    }

    auto Hypergraph::vertices() const -> vector<VertexRef>
    {
        vector<VertexRef> result;
        for (int j = 0; j < arity(); ++j)
            for (auto id : sides_[j])
                result.push_back({j, id});
        return result;
    }

    auto Hypergraph::all_vertices() const -> SideSubset
    {
        SideSubset s(arity());
        for (auto v : vertices())
            s.insert(v);
        return s;
    }

    auto Hypergraph::contains(VertexRef v) const -> bool
    {
        if (v.side < 0 || v.side >= arity())
            return false;
        return std::binary_search(sides_[v.side].begin(), sides_[v.side].end(), v.id);
    }

    auto Hypergraph::has_edge(const Edge & e) const -> bool
    {
        return std::binary_search(edges_.begin(), edges_.end(), e);
    }

    auto Hypergraph::edge_index(const Edge & e) const -> optional<size_t>
    {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
        if (it == edges_.end() || *it != e)
            return std::nullopt;
        return static_cast<size_t>(it - edges_.begin());
    }

    auto Hypergraph::next_unused_id(int side) const -> VertexId
    {
        auto & s = sides_.at(side);
        return s.empty() ? 0 : s.back() + 1;
    }

    auto Hypergraph::neighbours(VertexRef v) const -> set<VertexRef>
    {
        set<VertexRef> result;
        for (auto & e : edges_)
            if (e[v.side] == v.id)
                for (int j = 0; j < arity(); ++j)
                    if (j != v.side)
                        result.insert({j, e[j]});
        return result;
    }

    auto Hypergraph::degree(VertexRef v) const -> size_t
    {
        return std::count_if(edges_.begin(), edges_.end(), [&](const Edge & e) { return e[v.side] == v.id; });
    }

    auto Hypergraph::no_impossible_questions() const -> bool
    {
        vector<set<VertexId>> seen(arity());
        for (auto & e : edges_)
            for (int j = 0; j < arity(); ++j)
                seen[j].insert(e[j]);
        for (int j = 0; j < arity(); ++j)
            if (seen[j].size() != sides_[j].size())
                return false;
        return true;
    }

    auto is_homomorphism(const Homomorphism & f, const Hypergraph & g, const Hypergraph & h) -> bool
    {
        if (g.arity() != h.arity() || f.arity() != g.arity())
            throw std::invalid_argument("arity mismatch");
        for (auto v : g.vertices()) {
            if (! f.defined(v))
                throw std::invalid_argument("map not total: missing " + to_string(v));
            if (! h.contains({v.side, f(v)}))
                return false;
        }
        for (auto & e : g.edges())
            if (! h.has_edge(f.image(e)))
                return false;
        return true;
    }

    auto compose(const Homomorphism & second, const Homomorphism & first) -> Homomorphism
    {
        Homomorphism result(first.arity());
        for (int j = 0; j < first.arity(); ++j)
            for (auto [from, to] : first.side_map(j))
                result.set({j, from}, second({j, to}));
        return result;
    }

    auto identity_map(const Hypergraph & g) -> Homomorphism
    {
        Homomorphism f(g.arity());
        for (auto v : g.vertices())
            f.set(v, v.id);
        return f;
    }

    auto section(const Hypergraph & g, const SideSubset & p) -> Hypergraph
    {
        if (p.arity() != g.arity())
            throw std::invalid_argument("section: arity mismatch");
        vector<vector<VertexId>> sides(g.arity());
        for (int j = 0; j < g.arity(); ++j)
            for (auto id : p.side(j)) {
                if (! g.contains({j, id}))
                    throw std::invalid_argument("section: " + to_string({j, id}) + " is not a vertex");
                sides[j].push_back(id);
            }
        vector<Edge> edges;
        for (auto & e : g.edges()) {
            bool inside = true;
            for (int j = 0; j < g.arity() && inside; ++j)
                inside = p.side(j).contains(e[j]);
            if (inside)
                edges.push_back(e);
        }
        return Hypergraph(std::move(sides), std::move(edges));
    }

    namespace
    {
        // Backtracking over vertices in (side, id) order; each edge is checked once its last vertex is placed.
        struct HomSearch
        {
            const Hypergraph & g;
            const Hypergraph & h;
            vector<VertexRef> order;
            map<VertexRef, size_t> position;
            vector<vector<size_t>> edges_closing_at;
            vector<VertexId> assignment;

            HomSearch(const Hypergraph & g_, const Hypergraph & h_) :
                g(g_),
                h(h_),
                order(g_.vertices())
            {
                if (g.arity() != h.arity())
                    throw std::invalid_argument("arity mismatch");
                for (size_t i = 0; i < order.size(); ++i)
                    position[order[i]] = i;
                edges_closing_at.resize(order.size());
                for (size_t e = 0; e < g.edges().size(); ++e) {
                    size_t last = 0;
                    for (int j = 0; j < g.arity(); ++j)
                        last = std::max(last, position.at({j, g.edges()[e][j]}));
                    edges_closing_at[last].push_back(e);
                }
                assignment.resize(order.size());
            }

            auto consistent(size_t i) const -> bool
            {
                Edge image(g.arity());
                for (auto e : edges_closing_at[i]) {
                    for (int j = 0; j < g.arity(); ++j)
                        image[j] = assignment[position.at({j, g.edges()[e][j]})];
                    if (! h.has_edge(image))
                        return false;
                }
                return true;
            }

            auto to_hom() const -> Homomorphism
            {
                Homomorphism f(g.arity());
                for (size_t i = 0; i < order.size(); ++i)
                    f.set(order[i], assignment[i]);
                return f;
            }

            // Calls visit for every homomorphism; stops when visit returns false.
            auto run(const std::function<bool(const Homomorphism &)> & visit) -> void
            {
                std::function<bool(size_t)> rec = [&](size_t i) -> bool {
                    if (i == order.size())
                        return visit(to_hom());
                    for (auto candidate : h.side(order[i].side)) {
                        assignment[i] = candidate;
                        if (consistent(i) && ! rec(i + 1))
                            return false;
                    }
                    return true;
                };
                rec(0);
            }
        };
    }

    auto enumerate_homomorphisms(const Hypergraph & g, const Hypergraph & h, optional<size_t> limit) -> vector<Homomorphism>
    {
        vector<Homomorphism> result;
        if (limit && *limit == 0)
            return result;
        HomSearch search(g, h);
        search.run([&](const Homomorphism & f) {
            result.push_back(f);
            return ! (limit && result.size() >= *limit);
        });
        return result;
    }

    auto count_homomorphisms(const Hypergraph & g, const Hypergraph & h) -> size_t
    {
        size_t count = 0;
        HomSearch search(g, h);
        search.run([&](const Homomorphism &) {
            ++count;
            return true;
        });
        return count;
    }

    auto connected_components(const Hypergraph & g) -> vector<Hypergraph>
    {
        auto verts = g.vertices();
        map<VertexRef, size_t> index;
        for (size_t i = 0; i < verts.size(); ++i)
            index[verts[i]] = i;
        vector<size_t> parent(verts.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<size_t(size_t)> find = [&](size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto & e : g.edges())
            for (int j = 1; j < g.arity(); ++j)
                parent[find(index[{j, e[j]}])] = find(index[{0, e[0]}]);

        map<size_t, size_t> component_of_root;
        vector<vector<vector<VertexId>>> sides;
        vector<vector<Edge>> edges;
        for (size_t i = 0; i < verts.size(); ++i) {
            auto root = find(i);
            auto [it, fresh] = component_of_root.try_emplace(root, sides.size());
            if (fresh) {
                sides.emplace_back(g.arity());
                edges.emplace_back();
            }
            sides[it->second][verts[i].side].push_back(verts[i].id);
        }
        for (auto & e : g.edges())
            edges[component_of_root.at(find(index[{0, e[0]}]))].push_back(e);

        vector<Hypergraph> result;
        for (size_t c = 0; c < sides.size(); ++c)
            result.emplace_back(std::move(sides[c]), std::move(edges[c]));
        return result;
    }

    auto is_connected(const Hypergraph & g) -> bool
    {
        return connected_components(g).size() == 1;
    }

    auto find_isomorphism(const Hypergraph & g, const Hypergraph & h) -> optional<Homomorphism>
    {
        if (g.arity() != h.arity() || g.edge_count() != h.edge_count())
            return std::nullopt;
        for (int j = 0; j < g.arity(); ++j)
            if (g.side(j).size() != h.side(j).size())
                return std::nullopt;

        map<VertexRef, size_t> g_degree, h_degree;
        map<VertexRef, vector<size_t>> g_incident, h_incident;
        for (size_t e = 0; e < g.edges().size(); ++e)
            for (int j = 0; j < g.arity(); ++j) {
                ++g_degree[{j, g.edges()[e][j]}];
                g_incident[{j, g.edges()[e][j]}].push_back(e);
            }
        for (size_t e = 0; e < h.edges().size(); ++e)
            for (int j = 0; j < h.arity(); ++j) {
                ++h_degree[{j, h.edges()[e][j]}];
                h_incident[{j, h.edges()[e][j]}].push_back(e);
            }
        {
            vector<size_t> a, b;
            for (auto v : g.vertices())
                a.push_back(g_degree[v]);
            for (auto v : h.vertices())
                b.push_back(h_degree[v]);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b)
                return std::nullopt;
        }

        // Order g's vertices by BFS over shared edges so constraints appear early.
        vector<VertexRef> order;
        set<VertexRef> placed;
        for (auto start : g.vertices()) {
            if (placed.contains(start))
                continue;
            vector<VertexRef> queue{start};
            placed.insert(start);
            for (size_t q = 0; q < queue.size(); ++q) {
                order.push_back(queue[q]);
                for (auto n : g.neighbours(queue[q]))
                    if (placed.insert(n).second)
                        queue.push_back(n);
            }
        }

        map<VertexRef, VertexId> forward;
        map<VertexRef, VertexId> backward;
        auto edge_ok = [&](const Edge & e, const Hypergraph & from, const map<VertexRef, VertexId> & m, const Hypergraph & to) {
            Edge image(e.size());
            for (int j = 0; j < from.arity(); ++j) {
                auto it = m.find({j, e[j]});
                if (it == m.end())
                    return true;
                image[j] = it->second;
            }
            return to.has_edge(image);
        };

        std::function<bool(size_t)> rec = [&](size_t i) -> bool {
            if (i == order.size())
                return true;
            auto v = order[i];
            for (auto candidate : h.side(v.side)) {
                VertexRef w{v.side, candidate};
                if (backward.contains(w) || h_degree[w] != g_degree[v])
                    continue;
                forward[v] = candidate;
                backward[w] = v.id;
                bool ok = true;
                for (auto e : g_incident[v])
                    if (! edge_ok(g.edges()[e], g, forward, h)) {
                        ok = false;
                        break;
                    }
                if (ok)
                    for (auto e : h_incident[w])
                        if (! edge_ok(h.edges()[e], h, backward, g)) {
                            ok = false;
                            break;
                        }
                if (ok && rec(i + 1))
                    return true;
                forward.erase(v);
                backward.erase(w);
            }
            return false;
        };
        if (! rec(0))
            return std::nullopt;
        Homomorphism f(g.arity());
        for (auto [v, id] : forward)
            f.set(v, id);
        return f;
    }

    auto are_isomorphic(const Hypergraph & g, const Hypergraph & h) -> bool
    {
        return find_isomorphism(g, h).has_value();
    }

    namespace named
    {
        auto qr(int r) -> Hypergraph
        {
            if (r < 2)
                throw std::invalid_argument("Qr needs r >= 2");
            vector<vector<VertexId>> sides(r, {0, 1});
            vector<Edge> edges;
            for (int j = 0; j < r; ++j) {
                Edge e(r, 0);
                e[j] = 1;
                edges.push_back(e);
            }
            return Hypergraph(std::move(sides), std::move(edges));
        }

        auto cycle_shortcuts(int n) -> Hypergraph
        {
            if (n < 8 || n % 2 != 0)
                throw std::invalid_argument("CycleShortcuts needs even n >= 8");
            vector<vector<VertexId>> sides(2);
            for (int v = 0; v < n; ++v)
                sides[v % 2].push_back(v);
            vector<Edge> edges;
            for (int u = 0; u < n; u += 2)
                for (int d : {1, 3, n - 3, n - 1})
                    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>((u + d) % n)});
            return Hypergraph(std::move(sides), std::move(edges));
        }

        auto complete(const vector<int> & sizes) -> Hypergraph
        {
            if (sizes.empty())
                throw std::invalid_argument("Complete needs at least one side");
            vector<vector<VertexId>> sides;
            for (auto s : sizes) {
                if (s < 1)
                    throw std::invalid_argument("Complete sizes must be >= 1");
                vector<VertexId> ids(s);
                std::iota(ids.begin(), ids.end(), 0);
                sides.push_back(std::move(ids));
            }
            vector<Edge> edges;
            Edge e(sizes.size(), 0);
            while (true) {
                edges.push_back(e);
                size_t j = sizes.size();
                while (j > 0) {
                    --j;
                    if (++e[j] < static_cast<VertexId>(sizes[j]))
                        break;
                    e[j] = 0;
                    if (j == 0)
                        return Hypergraph(std::move(sides), std::move(edges));
                }
            }
        }

        auto set_graph(int k) -> Hypergraph
        {
            if (k < 1 || k > 20)
                throw std::invalid_argument("SetGraph needs 1 <= k <= 20");
            vector<vector<VertexId>> sides(2);
            for (int x = 1; x <= k; ++x)
                sides[0].push_back(x);
            vector<Edge> edges;
            for (VertexId s = 1; s < (VertexId{1} << k); ++s) {
                sides[1].push_back(s);
                for (int x = 1; x <= k; ++x)
                    if (s & (VertexId{1} << (x - 1)))
                        edges.push_back({static_cast<VertexId>(x), s});
            }
            return Hypergraph(std::move(sides), std::move(edges));
        }

        auto from_spec(const string & spec) -> Hypergraph
        {
            auto colon = spec.find(':');
            if (colon == string::npos)
                throw std::invalid_argument("named graph spec needs the form Name:args");
            auto name = spec.substr(0, colon);
            vector<int> args;
            std::stringstream ss(spec.substr(colon + 1));
            string item;
            while (std::getline(ss, item, ','))
                try {
                    args.push_back(std::stoi(item));
                }
                catch (const std::exception &) {
                    throw std::invalid_argument("bad integer '" + item + "' in " + spec);
                }
            auto single = [&]() {
                if (args.size() != 1)
                    throw std::invalid_argument(name + " takes one argument");
                return args[0];
            };
            if (name == "Qr")
                return qr(single());
            if (name == "Cycle" || name == "CycleShortcuts")
                return cycle_shortcuts(single());
            if (name == "Complete")
                return complete(args);
            if (name == "SetGraph")
                return set_graph(single());
            throw std::invalid_argument("unknown named graph " + name);
        }
    }

    auto to_text(const Hypergraph & g) -> string
    {
        std::ostringstream out;
        out << "hypergraph " << g.arity() << '\n';
        for (int j = 0; j < g.arity(); ++j) {
            out << "side " << j + 1 << ':';
            for (auto id : g.side(j))
                out << ' ' << id;
            out << '\n';
        }
        for (auto & e : g.edges()) {
            out << "edge:";
            for (auto v : e)
                out << ' ' << v;
            out << '\n';
        }
        return out.str();
    }

    namespace
    {
        auto strip_comment(const string & line) -> string
        {
            auto hash = line.find('#');
            return hash == string::npos ? line : line.substr(0, hash);
        }

        auto parse_id(const string & token, size_t line) -> VertexId
        {
            if (token.empty() || ! std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }))
                throw FormatError("expected a vertex id, got '" + token + "'", line);
            try {
                auto value = std::stoull(token);
                if (value > 0xffffffffULL)
                    throw FormatError("vertex id out of range: " + token, line);
                return static_cast<VertexId>(value);
            }
            catch (const std::out_of_range &) {
                throw FormatError("vertex id out of range: " + token, line);
            }
        }
    }

    auto parse_hypergraph(const string & text) -> Hypergraph
    {
        std::istringstream in(text);
        string raw;
        size_t line_no = 0;
        optional<int> arity;
        vector<vector<VertexId>> sides;
        vector<bool> side_seen;
        vector<Edge> edges;
        while (std::getline(in, raw)) {
            ++line_no;
            std::istringstream ls(strip_comment(raw));
            string head;
            if (! (ls >> head))
                continue;
            if (! arity) {
                int r = 0;
                if (head != "hypergraph" || ! (ls >> r) || r < 1)
                    throw FormatError("expected 'hypergraph r' header", line_no);
                string extra;
                if (ls >> extra)
                    throw FormatError("trailing input after header", line_no);
                arity = r;
                sides.resize(r);
                side_seen.resize(r, false);
                continue;
            }
            if (head == "side") {
                string label;
                if (! (ls >> label) || label.empty() || label.back() != ':')
                    throw FormatError("expected 'side j:'", line_no);
                label.pop_back();
                int j = 0;
                try {
                    j = std::stoi(label);
                }
                catch (const std::exception &) {
                    throw FormatError("bad side index '" + label + "'", line_no);
                }
                if (j < 1 || j > *arity)
                    throw FormatError("side index out of range", line_no);
                if (side_seen[j - 1])
                    throw FormatError("side " + label + " declared twice", line_no);
                side_seen[j - 1] = true;
                string token;
                set<VertexId> ids;
                while (ls >> token)
                    if (! ids.insert(parse_id(token, line_no)).second)
                        throw FormatError("duplicate vertex " + token, line_no);
                sides[j - 1].assign(ids.begin(), ids.end());
            }
            else if (head == "edge:") {
                Edge e;
                string token;
                while (ls >> token)
                    e.push_back(parse_id(token, line_no));
                if (static_cast<int>(e.size()) != *arity)
                    throw FormatError("edge has " + std::to_string(e.size()) + " vertices, expected " + std::to_string(*arity), line_no);
                for (int j = 0; j < *arity; ++j)
                    if (! std::binary_search(sides[j].begin(), sides[j].end(), e[j]))
                        throw FormatError("vertex " + std::to_string(e[j]) + " not declared on side " + std::to_string(j + 1), line_no);
                edges.push_back(std::move(e));
            }
            else
                throw FormatError("unexpected '" + head + "'", line_no);
        }
        if (! arity)
            throw FormatError("missing 'hypergraph r' header", line_no);
        return Hypergraph(std::move(sides), std::move(edges));
    }

    auto to_string(VertexRef v) -> string
    {
        return std::to_string(v.side + 1) + ":" + std::to_string(v.id);
    }
}
