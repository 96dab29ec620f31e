#include <parrep/errors.hpp>
#include <parrep/spgraph.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <tuple>

using std::map;
using std::optional;
using std::pair;
using std::set;
using std::size_t;
using std::vector;

namespace parrep
{
    namespace
    {
        using SPEdge = pair<VertexRef, VertexRef>;

        auto make_edge(VertexRef a, VertexRef b) -> SPEdge
        {
            return a.side == 0 ? SPEdge{a, b} : SPEdge{b, a};
        }

        auto intersection(const set<VertexRef> & a, const set<VertexRef> & b) -> set<VertexRef>
        {
            set<VertexRef> out;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
            return out;
        }

        auto disjoint_edges(const SPNode & a, const SPNode & b) -> bool
        {
            for (auto & e : a.edge_set)
                if (b.edge_set.contains(e))
                    return false;
            return true;
        }

        auto combine(SPKind kind, SPTree first, SPTree second) -> SPNode
        {
            SPNode node;
            node.kind = kind;
            node.vertex_set = first->vertex_set;
            node.vertex_set.insert(second->vertex_set.begin(), second->vertex_set.end());
            node.edge_set = first->edge_set;
            node.edge_set.insert(second->edge_set.begin(), second->edge_set.end());
            node.first = std::move(first);
            node.second = std::move(second);
            return node;
        }
    }

    auto sp_edge(VertexRef top, VertexRef bottom) -> SPTree
    {
        if (top.side == bottom.side || top.side < 0 || top.side > 1 || bottom.side < 0 || bottom.side > 1)
            throw std::invalid_argument("SP edge must join the two sides");
        SPNode node;
        node.top = top;
        node.bottom = bottom;
        node.vertex_set = {top, bottom};
        node.edge_set = {make_edge(top, bottom)};
        node.length = 1;
        return std::make_shared<const SPNode>(std::move(node));
    }

    auto sp_series(SPTree first, SPTree second) -> SPTree
    {
        if (first->bottom != second->top)
            throw std::invalid_argument("series: first bottom must equal second top");
        if (intersection(first->vertex_set, second->vertex_set) != set<VertexRef>{first->bottom})
            throw std::invalid_argument("series: children must share exactly the join vertex");
        auto node = combine(SPKind::Series, first, second);
        node.top = first->top;
        node.bottom = second->bottom;
        node.length = first->length + second->length;
        return std::make_shared<const SPNode>(std::move(node));
    }

    auto sp_generalized(SPTree first, SPTree second, bool primary_is_first) -> SPTree
    {
        if (first->bottom != second->top)
            throw std::invalid_argument("generalized: first bottom must equal second top");
        if (intersection(first->vertex_set, second->vertex_set) != set<VertexRef>{first->bottom})
            throw std::invalid_argument("generalized: children must share exactly the join vertex");
        auto node = combine(SPKind::Generalized, first, second);
        node.primary_is_first = primary_is_first;
        auto & p = primary_is_first ? node.first : node.second;
        node.top = p->top;
        node.bottom = p->bottom;
        node.length = p->length;
        return std::make_shared<const SPNode>(std::move(node));
    }

    auto sp_parallel(SPTree first, SPTree second) -> SPTree
    {
        if (first->top != second->top || first->bottom != second->bottom)
            throw std::invalid_argument("parallel: children must share top and bottom");
        if (intersection(first->vertex_set, second->vertex_set) != set<VertexRef>{first->top, first->bottom})
            throw std::invalid_argument("parallel: children must share exactly top and bottom");
        if (first->kind == SPKind::Edge && second->kind == SPKind::Edge)
            throw std::invalid_argument("parallel: both children are the direct top-bottom edge");
        if (! disjoint_edges(*first, *second))
            throw std::invalid_argument("parallel: children share an edge");
        if ((first->length - second->length) % 2 != 0)
            throw std::invalid_argument("parallel: spine lengths differ in parity");
        auto node = combine(SPKind::Parallel, first, second);
        node.top = node.first->top;
        node.bottom = node.first->bottom;
        node.length = std::min(node.first->length, node.second->length);
        return std::make_shared<const SPNode>(std::move(node));
    }

    auto sp_vertices(const SPTree & t) -> set<VertexRef>
    {
        return t->vertex_set;
    }

    auto sp_edges(const SPTree & t) -> set<pair<VertexRef, VertexRef>>
    {
        return t->edge_set;
    }

    auto flatten(const SPTree & t) -> Hypergraph
    {
        vector<vector<VertexId>> sides(2);
        for (auto v : t->vertex_set)
            sides[v.side].push_back(v.id);
        vector<Edge> edges;
        for (auto & [a, b] : t->edge_set)
            edges.push_back({a.id, b.id});
        return Hypergraph(std::move(sides), std::move(edges));
    }

    auto reversed(const SPTree & t) -> SPTree
    {
        switch (t->kind) {
        case SPKind::Edge: return sp_edge(t->bottom, t->top);
        case SPKind::Series: return sp_series(reversed(t->second), reversed(t->first));
        case SPKind::Generalized: return sp_generalized(reversed(t->second), reversed(t->first), ! t->primary_is_first);
        case SPKind::Parallel: return sp_parallel(reversed(t->first), reversed(t->second));
        }
        throw std::logic_error("unknown SP kind");
    }

    auto spine_of(const SPTree & t) -> Spine
    {
        switch (t->kind) {
        case SPKind::Edge: return {t->top, t->bottom};
        case SPKind::Series: {
            auto a = spine_of(t->first);
            auto b = spine_of(t->second);
            a.insert(a.end(), b.begin() + 1, b.end());
            return a;
        }
        case SPKind::Generalized: return spine_of(t->primary());
        case SPKind::Parallel:
            return t->first->length <= t->second->length ? spine_of(t->first) : spine_of(t->second);
        }
        throw std::logic_error("unknown SP kind");
    }

    auto spine_length(const SPTree & t) -> size_t
    {
        return t->length;
    }

    namespace
    {
        using VertexMap = map<VertexRef, VertexRef>;

        // Sends path[i] to onto[i], then zig-zags on the last edge of onto.
        auto fold_path(const Spine & path, const Spine & onto) -> VertexMap
        {
            if (path.size() < onto.size() || (path.size() - onto.size()) % 2 != 0 || path.front() != onto.front())
                throw std::logic_error("fold_path: incompatible paths");
            size_t k = onto.size() - 1;
            VertexMap f;
            for (size_t i = 0; i < path.size(); ++i)
                f[path[i]] = i <= k ? onto[i] : onto[k - ((i - k) % 2)];
            if (f.at(path.back()) != onto.back())
                throw std::logic_error("fold_path: endpoints disagree");
            return f;
        }

        auto spine_map(const SPTree & t) -> VertexMap
        {
            switch (t->kind) {
            case SPKind::Edge: return {{t->top, t->top}, {t->bottom, t->bottom}};
            case SPKind::Series: {
                auto f = spine_map(t->first);
                for (auto & [v, w] : spine_map(t->second))
                    f[v] = w;
                return f;
            }
            case SPKind::Generalized: {
                auto f = spine_map(t->primary());
                auto s = t->attachment();
                auto spine = spine_of(t->primary());
                auto x = spine.front() == s ? spine[1] : spine[spine.size() - 2];
                for (auto v : t->secondary()->vertex_set)
                    if (v != s)
                        f[v] = v.side == s.side ? s : x;
                return f;
            }
            case SPKind::Parallel: {
                bool first_short = t->first->length <= t->second->length;
                auto & shorter = first_short ? t->first : t->second;
                auto & longer = first_short ? t->second : t->first;
                auto f = spine_map(shorter);
                auto fold = fold_path(spine_of(longer), spine_of(shorter));
                for (auto & [v, w] : spine_map(longer))
                    if (! f.contains(v))
                        f[v] = fold.at(w);
                return f;
            }
            }
            throw std::logic_error("unknown SP kind");
        }

        auto to_homomorphism(const VertexMap & f) -> Homomorphism
        {
            Homomorphism h(2);
            for (auto & [v, w] : f)
                h.set(v, w.id);
            return h;
        }
    }

    auto collapse_to_spine(const SPTree & t) -> Homomorphism
    {
        return to_homomorphism(spine_map(t));
    }

    namespace
    {
        auto oriented_from(const SPTree & t, VertexRef start) -> SPTree
        {
            return t->top == start ? t : reversed(t);
        }

        auto oriented_to(const SPTree & t, VertexRef end) -> SPTree
        {
            return t->bottom == end ? t : reversed(t);
        }

        auto make_generalized(SPTree primary, SPTree secondary, bool at_bottom) -> SPTree
        {
            if (at_bottom)
                return sp_generalized(primary, oriented_from(secondary, primary->bottom), true);
            return sp_generalized(oriented_to(secondary, primary->top), primary, false);
        }

        // Attaches secondary at a terminal of primary, pushing it down until the primary is an edge.
        auto push_generalized(const SPTree & primary, const SPTree & secondary, bool at_bottom) -> SPTree
        {
            switch (primary->kind) {
            case SPKind::Edge: return make_generalized(primary, secondary, at_bottom);
            case SPKind::Series:
                return at_bottom ? sp_series(primary->first, push_generalized(primary->second, secondary, true))
                                 : sp_series(push_generalized(primary->first, secondary, false), primary->second);
            case SPKind::Parallel:
                return sp_parallel(push_generalized(primary->first, secondary, at_bottom), primary->second);
            case SPKind::Generalized:
                return make_generalized(push_generalized(primary->primary(), secondary, at_bottom),
                    primary->secondary(), primary->primary_is_first);
            }
            throw std::logic_error("unknown SP kind");
        }

        auto parallel_components(const SPTree & t, vector<SPTree> & out) -> void
        {
            if (t->kind == SPKind::Parallel) {
                parallel_components(t->first, out);
                parallel_components(t->second, out);
            }
            else
                out.push_back(t);
        }
    }

    auto standard_form(const SPTree & t) -> SPTree
    {
        switch (t->kind) {
        case SPKind::Edge: return t;
        case SPKind::Series: return sp_series(standard_form(t->first), standard_form(t->second));
        case SPKind::Generalized:
            return push_generalized(standard_form(t->primary()), standard_form(t->secondary()), t->primary_is_first);
        case SPKind::Parallel: {
            // Standardizing a generalized component can expose a parallel node, so flatten afterwards.
            vector<SPTree> raw, parts;
            parallel_components(t, raw);
            for (auto & p : raw)
                parallel_components(standard_form(p), parts);
            // The last longest component goes second; the first shortest one (the spine) stays in front.
            size_t longest = 0;
            for (size_t i = 1; i < parts.size(); ++i)
                if (parts[i]->length >= parts[longest]->length)
                    longest = i;
            auto g2 = parts[longest];
            parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(longest));
            auto g1 = parts[0];
            for (size_t i = 1; i < parts.size(); ++i)
                g1 = sp_parallel(g1, parts[i]);
            if (parts.size() > 1)
                g1 = standard_form(g1);
            return sp_parallel(g1, g2);
        }
        }
        throw std::logic_error("unknown SP kind");
    }

    namespace
    {
        // Memoized decomposition of edge subsets with fixed terminals.
        class Parser
        {
            vector<SPEdge> edges_;
            map<std::tuple<std::uint64_t, VertexRef, VertexRef>, optional<SPTree>> memo_;

            auto vertices(std::uint64_t mask) const -> set<VertexRef>
            {
                set<VertexRef> out;
                for (size_t e = 0; e < edges_.size(); ++e)
                    if (mask >> e & 1) {
                        out.insert(edges_[e].first);
                        out.insert(edges_[e].second);
                    }
                return out;
            }

            // Edge groups of mask after deleting the cut vertices; each group is connected through
            // non-cut vertices, and an edge between two cut vertices is a group of its own.
            auto groups(std::uint64_t mask, const set<VertexRef> & cut) const -> vector<std::uint64_t>
            {
                map<VertexRef, VertexRef> parent;
                std::function<VertexRef(VertexRef)> find = [&](VertexRef x) {
                    auto it = parent.find(x);
                    if (it == parent.end() || it->second == x)
                        return x;
                    return it->second = find(it->second);
                };
                for (size_t e = 0; e < edges_.size(); ++e)
                    if (mask >> e & 1) {
                        auto [a, b] = edges_[e];
                        if (! cut.contains(a) && ! cut.contains(b))
                            parent[find(a)] = find(b);
                    }
                map<VertexRef, std::uint64_t> by_root;
                vector<std::uint64_t> loose;
                for (size_t e = 0; e < edges_.size(); ++e)
                    if (mask >> e & 1) {
                        auto [a, b] = edges_[e];
                        if (cut.contains(a) && cut.contains(b))
                            loose.push_back(std::uint64_t{1} << e);
                        else
                            by_root[find(cut.contains(a) ? b : a)] |= std::uint64_t{1} << e;
                    }
                vector<std::uint64_t> out;
                for (auto & [root, m] : by_root)
                    out.push_back(m);
                out.insert(out.end(), loose.begin(), loose.end());
                std::sort(out.begin(), out.end());
                return out;
            }

            auto group_with(const vector<std::uint64_t> & gs, VertexRef v) const -> optional<size_t>
            {
                for (size_t i = 0; i < gs.size(); ++i)
                    if (vertices(gs[i]).contains(v))
                        return i;
                return std::nullopt;
            }

            auto try_series(std::uint64_t mask, VertexRef u, VertexRef v, const set<VertexRef> & verts) -> optional<SPTree>
            {
                for (auto w : verts) {
                    if (w == u || w == v)
                        continue;
                    auto gs = groups(mask, {w});
                    auto gu = group_with(gs, u), gv = group_with(gs, v);
                    if (! gu || ! gv || *gu == *gv)
                        continue;
                    vector<size_t> others;
                    for (size_t i = 0; i < gs.size(); ++i)
                        if (i != *gu && i != *gv)
                            others.push_back(i);
                    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << others.size()); ++pick) {
                        std::uint64_t m1 = gs[*gu], m2 = gs[*gv];
                        for (size_t i = 0; i < others.size(); ++i)
                            (pick >> i & 1 ? m1 : m2) |= gs[others[i]];
                        auto a = parse(m1, u, w);
                        if (! a)
                            continue;
                        auto b = parse(m2, w, v);
                        if (b)
                            return sp_series(*a, *b);
                    }
                }
                return std::nullopt;
            }

            auto try_generalized(std::uint64_t mask, VertexRef u, VertexRef v) -> optional<SPTree>
            {
                for (bool at_bottom : {true, false}) {
                    auto s = at_bottom ? v : u;
                    auto o = at_bottom ? u : v;
                    auto gs = groups(mask, {s});
                    auto go = group_with(gs, o);
                    if (! go)
                        continue;
                    vector<size_t> others;
                    for (size_t i = 0; i < gs.size(); ++i)
                        if (i != *go)
                            others.push_back(i);
                    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << others.size()); ++pick) {
                        std::uint64_t primary_mask = gs[*go], secondary_mask = 0;
                        for (size_t i = 0; i < others.size(); ++i)
                            (pick >> i & 1 ? secondary_mask : primary_mask) |= gs[others[i]];
                        auto p = parse(primary_mask, u, v);
                        if (! p)
                            continue;
                        for (auto x : vertices(secondary_mask)) {
                            if (x == s)
                                continue;
                            auto q = at_bottom ? parse(secondary_mask, s, x) : parse(secondary_mask, x, s);
                            if (q)
                                return at_bottom ? sp_generalized(*p, *q, true) : sp_generalized(*q, *p, false);
                        }
                    }
                }
                return std::nullopt;
            }

            auto try_parallel(std::uint64_t mask, VertexRef u, VertexRef v) -> optional<SPTree>
            {
                auto gs = groups(mask, {u, v});
                if (gs.size() < 2)
                    return std::nullopt;
                for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << (gs.size() - 1)); ++pick) {
                    std::uint64_t m1 = gs[0], m2 = 0;
                    for (size_t i = 1; i < gs.size(); ++i)
                        (pick >> (i - 1) & 1 ? m1 : m2) |= gs[i];
                    if (m2 == 0)
                        continue;
                    auto a = parse(m1, u, v);
                    if (! a)
                        continue;
                    auto b = parse(m2, u, v);
                    if (! b)
                        continue;
                    try {
                        return sp_parallel(*a, *b);
                    }
                    catch (const std::invalid_argument &) {
                    }
                }
                return std::nullopt;
            }

        public:
            explicit Parser(vector<SPEdge> edges) : edges_(std::move(edges)) {}

            auto parse(std::uint64_t mask, VertexRef u, VertexRef v) -> optional<SPTree>
            {
                auto key = std::make_tuple(mask, u, v);
                if (auto it = memo_.find(key); it != memo_.end())
                    return it->second;
                optional<SPTree> result;
                auto verts = vertices(mask);
                if (u != v && verts.contains(u) && verts.contains(v)) {
                    if (std::popcount(mask) == 1) {
                        auto e = edges_[std::countr_zero(mask)];
                        if (e == make_edge(u, v))
                            result = sp_edge(u, v);
                    }
                    else {
                        result = try_series(mask, u, v, verts);
                        if (! result)
                            result = try_generalized(mask, u, v);
                        if (! result)
                            result = try_parallel(mask, u, v);
                    }
                }
                memo_[key] = result;
                return result;
            }
        };
    }

    auto sp_parse(const Hypergraph & g) -> optional<SPTree>
    {
        if (g.arity() != 2)
            throw std::invalid_argument("SP parsing needs a 2-partite graph");
        if (g.edges().empty())
            throw std::invalid_argument("SP parsing needs at least one edge");
        if (! is_connected(g))
            throw std::invalid_argument("SP parsing needs a connected graph");
        if (g.edge_count() > 64)
            throw BudgetExceeded("SP parsing (edges)", static_cast<long double>(g.edge_count()), 64);
        vector<SPEdge> edges;
        for (auto & e : g.edges())
            edges.push_back({{0, e[0]}, {1, e[1]}});
        Parser parser(edges);
        std::uint64_t all = edges.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << edges.size()) - 1;
        auto verts = g.vertices();
        for (size_t i = 0; i < verts.size(); ++i)
            for (size_t j = i + 1; j < verts.size(); ++j)
                if (auto t = parser.parse(all, verts[i], verts[j]))
                    return t;
        return std::nullopt;
    }

    namespace
    {
        struct Scope
        {
            const Scope * parent = nullptr;
            set<VertexRef> owned;
            Spine spine;
            // Collapses the parent's other embedded vertices onto this scope's vertices, fixing the attachments.
            std::function<VertexMap(const set<VertexRef> &)> fold_rest;
        };

        // Certificate builder. Target vertices are those of the graph being certified; h-vertices
        // are the certificate's own.
        class Builder
        {
        public:
            Hypergraph h;
            Certificate cert;
            VertexMap emb;
            VertexMap label;
            size_t contiguity_checks = 0;

            Builder(VertexRef a, VertexRef b)
            {
                cert.arity = 2;
                cert.init = Edge(2, 0);
                h = single_edge(cert.init);
                emb[a] = {a.side, 0};
                emb[b] = {b.side, 0};
                label[{a.side, 0}] = a;
                label[{b.side, 0}] = b;
            }

            auto present(const set<VertexRef> & targets) const -> set<VertexRef>
            {
                set<VertexRef> out;
                for (auto t : targets)
                    if (emb.contains(t))
                        out.insert(t);
                return out;
            }

            auto check_contiguous(const Scope & scope, const set<VertexRef> & doubled) -> void
            {
                // Doubled spine vertices, read along the embedded part of the spine, must form one block.
                int state = 0;
                for (auto t : scope.spine) {
                    auto it = emb.find(t);
                    if (it == emb.end())
                        continue;
                    bool d = doubled.contains(it->second);
                    if (state == 0 && d)
                        state = 1;
                    else if (state == 1 && ! d)
                        state = 2;
                    else if (state == 2 && d)
                        throw std::logic_error("doubled spine vertices are not contiguous");
                }
                ++contiguity_checks;
            }

            auto emit_double(const set<VertexRef> & doubled, const Scope * origin) -> CopyMap
            {
                for (auto s = origin; s; s = s->parent)
                    check_contiguous(*s, doubled);
                DoublingStep step{SideSubset(2)};
                for (auto v : doubled)
                    step.doubled.insert(v);
                auto result = apply_doubling(h, step);
                h = std::move(result.graph);
                cert.steps.push_back(std::move(step));
                return result.copies;
            }

            auto emit_collapse(const VertexMap & moves) -> void
            {
                if (moves.empty())
                    return;
                CollapseStep step{SideSubset(2), {}};
                for (auto v : h.vertices())
                    if (! moves.contains(v))
                        step.kept.insert(v);
                for (auto & [from, to] : moves) {
                    if (label.contains(from))
                        throw std::logic_error("collapse would remove a labelled vertex");
                    step.mapping[from] = to.id;
                }
                h = apply_collapse(h, step);
                cert.steps.push_back(std::move(step));
            }

            auto assign(VertexRef target, VertexRef hv) -> void
            {
                emb[target] = hv;
                label[hv] = target;
            }

            auto double_in(const Scope & scope, const set<VertexRef> & doubled, const Scope * origin) -> CopyMap
            {
                if (! scope.parent)
                    return emit_double(doubled, origin);
                auto & parent = *scope.parent;
                set<VertexRef> rest;
                for (auto t : present(parent.owned))
                    if (! scope.owned.contains(t))
                        rest.insert(t);
                set<VertexRef> rest_h;
                for (auto t : rest)
                    rest_h.insert(emb.at(t));
                bool touches = false;
                for (auto t : present(scope.owned)) {
                    auto hv = emb.at(t);
                    if (! doubled.contains(hv))
                        continue;
                    for (auto n : h.neighbours(hv))
                        if (rest_h.contains(n))
                            touches = true;
                }
                if (! touches)
                    return double_in(parent, doubled, origin);

                // The rest is dragged along and its copy folded back onto this scope's copy.
                auto up = doubled;
                up.insert(rest_h.begin(), rest_h.end());
                auto copies = double_in(parent, up, origin);
                auto phi = scope.fold_rest(rest);
                VertexMap moves;
                for (auto r : rest) {
                    auto image = emb.at(phi.at(r));
                    moves[copies.at(emb.at(r))] = copies.contains(image) && doubled.contains(image) ? copies.at(image) : image;
                }
                emit_collapse(moves);
                return copies;
            }

            // Adds new_target as a leaf hanging from attach: fix attach, double the rest of the scope, fold back.
            auto add_leaf(const Scope & scope, VertexRef attach, VertexRef new_target) -> void
            {
                auto t = emb.at(attach);
                set<VertexRef> k;
                for (auto x : present(scope.owned))
                    k.insert(emb.at(x));
                optional<VertexRef> w;
                for (auto n : h.neighbours(t))
                    if (k.contains(n)) {
                        w = n;
                        break;
                    }
                if (! w)
                    throw std::logic_error("leaf attachment has no neighbour in scope");
                auto doubled = k;
                doubled.erase(t);
                auto copies = double_in(scope, doubled, &scope);
                auto w_copy = copies.at(*w);
                VertexMap moves;
                for (auto d : doubled) {
                    auto c = copies.at(d);
                    if (c != w_copy)
                        moves[c] = c.side == t.side ? t : w_copy;
                }
                emit_collapse(moves);
                assign(new_target, w_copy);
            }
        };

        auto single_attach(VertexRef z, VertexRef x) -> std::function<VertexMap(const set<VertexRef> &)>
        {
            return [z, x](const set<VertexRef> & rest) {
                VertexMap phi;
                for (auto r : rest)
                    phi[r] = r.side == z.side ? z : x;
                return phi;
            };
        }

        auto reversed_spine(Spine s) -> Spine
        {
            std::reverse(s.begin(), s.end());
            return s;
        }

        auto concat(Spine a, const Spine & b) -> Spine
        {
            if (a.back() != b.front())
                throw std::logic_error("spines do not meet");
            a.insert(a.end(), b.begin() + 1, b.end());
            return a;
        }

        class Synthesizer
        {
            Builder & b_;

            auto require_spine(const Scope & scope) const -> void
            {
                for (size_t i = 0; i < scope.spine.size(); ++i) {
                    if (! b_.emb.contains(scope.spine[i]))
                        throw std::logic_error("spine vertex missing before extension");
                    if (i > 0 && ! b_.h.has_edge([&] {
                            auto a = b_.emb.at(scope.spine[i - 1]), c = b_.emb.at(scope.spine[i]);
                            return a.side == 0 ? Edge{a.id, c.id} : Edge{c.id, a.id};
                        }()))
                        throw std::logic_error("spine edge missing before extension");
                }
            }

            auto add_path(const Scope & scope, const Spine & path) -> void
            {
                for (size_t i = 1; i < path.size(); ++i)
                    b_.add_leaf(scope, path[i - 1], path[i]);
            }

            auto child_scope(const Scope & parent, const SPTree & t, std::function<VertexMap(const set<VertexRef> &)> fold) -> Scope
            {
                return Scope{&parent, t->vertex_set, spine_of(t), std::move(fold)};
            }

            auto extend_series(const SPTree & t, Scope & scope, int fuel) -> void
            {
                auto w = t->first->bottom;
                auto s1 = spine_of(t->first), s2 = spine_of(t->second);
                auto scope1 = child_scope(scope, t->first, single_attach(w, s1[s1.size() - 2]));
                extend(t->first, scope1, fuel);
                auto scope2 = child_scope(scope, t->second, single_attach(w, s2[1]));
                extend(t->second, scope2, fuel);
            }

            auto extend_generalized(const SPTree & t, Scope & scope, int fuel) -> void
            {
                auto & p = t->primary();
                auto & q = t->secondary();
                auto s = t->attachment();
                auto sq = spine_of(q);
                if (sq.front() != s)
                    sq = reversed_spine(sq);
                add_path(scope, sq);
                auto sp = spine_of(p);
                auto x = sp.front() == s ? sp[1] : sp[sp.size() - 2];
                auto scope_p = child_scope(scope, p, single_attach(s, x));
                extend(p, scope_p, fuel);
                auto scope_q = child_scope(scope, q, single_attach(s, sq[1]));
                extend(q, scope_q, fuel);
            }

            auto extend_parallel(const SPTree & t, Scope & scope, int fuel) -> void
            {
                auto & g1 = t->first;
                auto & g2 = t->second;
                if (g2->kind != SPKind::Series || g1->length > g2->length)
                    throw std::logic_error("parallel node is not in standard form");
                auto & g3 = g2->first;
                auto & g4 = g2->second;
                auto u = t->top, v = t->bottom, w = g3->bottom;
                auto l1 = g1->length, l3 = g3->length, l4 = g4->length;
                auto s1 = spine_of(g1), s3 = spine_of(g3), s4 = spine_of(g4);

                if (l1 + l3 < l4 || l1 + l4 < l3) {
                    if (fuel <= 0)
                        throw std::runtime_error("spine rotation did not terminate within the vertex bound");
                    SPTree rotated;
                    if (l1 + l3 < l4) {
                        // Grow the spine of G3 on top, then view G as oriented from w.
                        add_path(scope, s3);
                        rotated = sp_parallel(sp_series(reversed(g3), g1), g4);
                    }
                    else {
                        add_path(scope, reversed_spine(s4));
                        rotated = sp_parallel(g3, sp_series(g1, reversed(g4)));
                    }
                    rotated = standard_form(rotated);
                    auto spine = spine_of(rotated);
                    if (spine.size() <= scope.spine.size())
                        throw std::logic_error("rotation did not lengthen the spine");
                    scope.spine = spine;
                    extend(rotated, scope, fuel - 1);
                    return;
                }

                auto f1 = spine_map(g1);
                auto scope1 = child_scope(scope, g1, [](const set<VertexRef> & rest) {
                    if (! rest.empty())
                        throw std::logic_error("first parallel branch has unexpected neighbours");
                    return VertexMap{};
                });
                extend(g1, scope1, fuel);

                // Spine of G2: a path from u of length (b-a)/2, then a doubling that fixes v and the
                // path end x, folding the copy of G1 onto its spine.
                auto s2 = spine_of(g2);
                size_t a = l1, bl = l3 + l4;
                if (bl < a || (bl - a) % 2 != 0)
                    throw std::logic_error("parallel branches have incompatible spines");
                size_t half = (bl - a) / 2;
                add_path(scope, Spine(s2.begin(), s2.begin() + static_cast<std::ptrdiff_t>(half) + 1));
                auto x = s2[half];
                set<VertexRef> doubled;
                for (auto q : b_.present(scope.owned))
                    if (q != v && q != x)
                        doubled.insert(b_.emb.at(q));
                auto copies = b_.double_in(scope, doubled, &scope);
                auto star = [&](VertexRef hv) { return doubled.contains(hv) ? copies.at(hv) : hv; };
                set<VertexRef> on_spine1(s1.begin(), s1.end());
                VertexMap moves;
                for (auto g : g1->vertex_set) {
                    auto hv = b_.emb.at(g);
                    if (doubled.contains(hv) && ! on_spine1.contains(g))
                        moves[copies.at(hv)] = star(b_.emb.at(f1.at(g)));
                }
                b_.emit_collapse(moves);
                for (size_t i = 0; i < half; ++i)
                    b_.assign(s2[2 * half - i], copies.at(b_.emb.at(s2[i])));
                for (size_t i = 1; i + 1 < s1.size(); ++i)
                    b_.assign(s2[2 * half + i], copies.at(b_.emb.at(s1[i])));

                auto fold3 = fold_path(concat(s1, reversed_spine(s4)), s3);
                auto scope3 = child_scope(scope, g3, [&, fold3](const set<VertexRef> & rest) {
                    VertexMap phi;
                    for (auto r : rest)
                        phi[r] = fold3.at(g1->vertex_set.contains(r) ? f1.at(r) : r);
                    return phi;
                });
                extend(g3, scope3, fuel);

                auto f3 = spine_map(g3);
                auto fold4 = fold_path(concat(reversed_spine(s3), s1), s4);
                auto scope4 = child_scope(scope, g4, [&, fold4](const set<VertexRef> & rest) {
                    VertexMap phi;
                    for (auto r : rest)
                        phi[r] = fold4.at(g1->vertex_set.contains(r) ? f1.at(r) : f3.at(r));
                    return phi;
                });
                extend(g4, scope4, fuel);
                (void)u;
                (void)w;
            }

        public:
            explicit Synthesizer(Builder & b) : b_(b) {}

            auto extend(const SPTree & t, Scope & scope, int fuel) -> void
            {
                require_spine(scope);
                switch (t->kind) {
                case SPKind::Edge: return;
                case SPKind::Series: return extend_series(t, scope, fuel);
                case SPKind::Generalized: return extend_generalized(t, scope, fuel);
                case SPKind::Parallel: return extend_parallel(t, scope, fuel);
                }
            }

            auto add_root_spine(const Scope & scope) -> void
            {
                add_path(scope, Spine(scope.spine.begin() + 1, scope.spine.end()));
            }
        };
    }

    auto certify_sp_detailed(const SPTree & input) -> SpSynthesis
    {
        auto t = standard_form(input);
        auto spine = spine_of(t);
        if (spine != spine_of(input))
            throw std::logic_error("standard form changed the spine");
        Builder builder(spine[0], spine[1]);
        Scope root{nullptr, t->vertex_set, spine, {}};
        Synthesizer synth(builder);
        synth.add_root_spine(root);
        synth.extend(t, root, static_cast<int>(t->vertex_set.size()));

        Hypergraph target = flatten(input);
        if (builder.h.vertex_count() != target.vertex_count() || builder.h.edge_count() != target.edge_count())
            throw std::logic_error("synthesized graph has the wrong size");
        for (auto & e : builder.h.edges()) {
            auto a = builder.label.at({0, e[0]}), c = builder.label.at({1, e[1]});
            if (! target.has_edge({a.id, c.id}))
                throw std::logic_error("synthesized graph has an edge outside the target");
        }
        return {std::move(builder.cert), std::move(builder.label), builder.contiguity_checks};
    }

    auto certify_sp(const SPTree & t) -> Certificate
    {
        return certify_sp_detailed(t).certificate;
    }

    auto certify_tree(const Hypergraph & tree) -> Certificate
    {
        if (tree.arity() != 2 || tree.edges().empty() || ! is_connected(tree) || tree.edge_count() + 1 != tree.vertex_count())
            throw std::invalid_argument("certify_tree needs a tree with at least one edge");
        auto & root_edge = tree.edges().front();
        VertexRef a{0, root_edge[0]}, c{1, root_edge[1]};
        Builder builder(a, c);
        Scope root{nullptr, {}, {a, c}, {}};
        for (auto v : tree.vertices())
            root.owned.insert(v);
        vector<VertexRef> queue{a, c};
        set<VertexRef> seen{a, c};
        for (size_t i = 0; i < queue.size(); ++i)
            for (auto n : tree.neighbours(queue[i]))
                if (seen.insert(n).second) {
                    builder.add_leaf(root, queue[i], n);
                    queue.push_back(n);
                }
        return builder.cert;
    }

    auto random_sp_tree(std::mt19937_64 & rng, int max_vertices) -> SPTree
    {
        if (max_vertices < 2)
            throw std::invalid_argument("random SP graph needs at least two vertices");
        vector<VertexId> next_id(2, 0);
        auto fresh = [&](int side) { return VertexRef{side, next_id[side]++}; };
        auto coin = [&](std::uint64_t n) { return rng() % n; };

        // Builds an oriented graph between existing u and v using at most budget new vertices.
        std::function<SPTree(VertexRef, VertexRef, int)> build = [&](VertexRef u, VertexRef v, int budget) -> SPTree {
            bool odd = u.side != v.side;
            for (int attempt = 0; attempt < 16; ++attempt) {
                auto choice = coin(4);
                if (odd && (budget == 0 || choice == 0))
                    return sp_edge(u, v);
                if (budget == 0)
                    break;
                if (choice <= 1 || ! odd) {
                    if (choice == 3 && budget >= 2) {
                        int left = 1 + static_cast<int>(coin(static_cast<std::uint64_t>(budget - 1)));
                        auto a = build(u, v, left - 1 + 1 > budget ? 0 : left - 1);
                        auto b = build(u, v, budget - static_cast<int>(a->vertex_set.size()) + 2);
                        try {
                            return sp_parallel(a, b);
                        }
                        catch (const std::invalid_argument &) {
                            continue;
                        }
                    }
                    auto w = fresh(static_cast<int>(coin(2)));
                    int rest = budget - 1;
                    int left = rest == 0 ? 0 : static_cast<int>(coin(static_cast<std::uint64_t>(rest + 1)));
                    if (w.side == u.side && left == 0 && rest > 0)
                        left = 1;
                    if (w.side == u.side && left == 0)
                        continue;
                    auto a = build(u, w, left);
                    int used = static_cast<int>(a->vertex_set.size()) - 2;
                    if (w.side == v.side && rest - used <= 0)
                        continue;
                    auto b = build(w, v, rest - used);
                    return sp_series(a, b);
                }
                if (choice == 2) {
                    auto p = build(u, v, budget - 1);
                    int used = static_cast<int>(p->vertex_set.size()) - 2;
                    if (budget - used < 1)
                        return p;
                    bool at_bottom = coin(2) == 0;
                    auto s = at_bottom ? v : u;
                    auto x = fresh(1 - s.side);
                    auto q = at_bottom ? build(s, x, budget - used - 1) : build(x, s, budget - used - 1);
                    return at_bottom ? sp_generalized(p, q, true) : sp_generalized(q, p, false);
                }
                int left = static_cast<int>(coin(static_cast<std::uint64_t>(budget + 1)));
                auto a = build(u, v, left);
                auto b = build(u, v, budget - (static_cast<int>(a->vertex_set.size()) - 2));
                try {
                    return sp_parallel(a, b);
                }
                catch (const std::invalid_argument &) {
                    continue;
                }
            }
            if (odd)
                return sp_edge(u, v);
            throw std::logic_error("random SP generation failed");
        };

        while (true) {
            next_id = {0, 0};
            auto u = fresh(0);
            auto v = fresh(static_cast<int>(coin(2)));
            try {
                auto t = build(u, v, max_vertices - 2);
                if (static_cast<int>(t->vertex_set.size()) <= max_vertices)
                    return t;
            }
            catch (const std::logic_error &) {
            }
        }
    }
}
