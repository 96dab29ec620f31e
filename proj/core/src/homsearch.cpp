#include <parrep/homsearch.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

using std::map;
using std::optional;
using std::set;
using std::size_t;
using std::vector;

namespace parrep
{
    namespace
    {
        struct CollapseSearch
        {
            const Hypergraph & g;
            const SideSubset & kept;
            vector<VertexRef> removed;
            map<VertexRef, size_t> position;
            vector<vector<size_t>> edges_closing_at;
            vector<vector<VertexId>> candidates;
            vector<VertexId> assignment;

            CollapseSearch(const Hypergraph & g_, const SideSubset & kept_, const Homomorphism & forced) :
                g(g_),
                kept(kept_)
            {
                if (kept.arity() != g.arity())
                    throw std::invalid_argument("collapse: arity mismatch");
                for (auto v : kept.vertices())
                    if (! g.contains(v))
                        throw std::invalid_argument("collapse: kept vertex " + to_string(v) + " not in graph");
                for (auto v : g.vertices())
                    if (! kept.contains(v))
                        removed.push_back(v);
                std::sort(removed.begin(), removed.end(), [](VertexRef a, VertexRef b) {
                    return std::tie(a.id, a.side) < std::tie(b.id, b.side);
                });
                for (size_t i = 0; i < removed.size(); ++i)
                    position[removed[i]] = i;
                edges_closing_at.resize(removed.size());
                for (size_t e = 0; e < g.edges().size(); ++e) {
                    optional<size_t> last;
                    for (int j = 0; j < g.arity(); ++j) {
                        auto it = position.find({j, g.edges()[e][j]});
                        if (it != position.end())
                            last = std::max(last.value_or(0), it->second);
                    }
                    if (last)
                        edges_closing_at[*last].push_back(e);
                }
                for (auto v : removed) {
                    auto & side = kept.side(v.side);
                    if (forced.arity() == g.arity() && forced.defined(v)) {
                        if (! side.contains(forced(v)))
                            throw std::invalid_argument("collapse: forced target is not kept");
                        candidates.push_back({forced(v)});
                    }
                    else
                        candidates.emplace_back(side.begin(), side.end());
                }
                assignment.resize(removed.size());
            }

            auto value(VertexRef v) const -> VertexId
            {
                auto it = position.find(v);
                return it == position.end() ? v.id : assignment[it->second];
            }

            auto consistent(size_t i) const -> bool
            {
                Edge image(g.arity());
                for (auto e : edges_closing_at[i]) {
                    for (int j = 0; j < g.arity(); ++j)
                        image[j] = value({j, g.edges()[e][j]});
                    if (! g.has_edge(image))
                        return false;
                }
                return true;
            }

            auto to_hom() const -> Homomorphism
            {
                Homomorphism f(g.arity());
                for (auto v : g.vertices())
                    f.set(v, value(v));
                return f;
            }

            auto run(const std::function<bool(const Homomorphism &)> & visit) -> void
            {
                std::function<bool(size_t)> rec = [&](size_t i) -> bool {
                    if (i == removed.size())
                        return visit(to_hom());
                    for (auto c : candidates[i]) {
                        assignment[i] = c;
                        if (consistent(i) && ! rec(i + 1))
                            return false;
                    }
                    return true;
                };
                rec(0);
            }
        };
    }

    auto find_collapse(const Hypergraph & g, const SideSubset & kept, const Homomorphism & forced) -> optional<Homomorphism>
    {
        CollapseSearch search(g, kept, forced);
        optional<Homomorphism> found;
        search.run([&](const Homomorphism & f) {
            found = f;
            return false;
        });
        return found;
    }

    auto find_unnatural_collapse(const Hypergraph & g, const SideSubset & kept, const set<VertexRef> & t,
        const Homomorphism & natural) -> optional<Homomorphism>
    {
        CollapseSearch search(g, kept, {});
        for (auto v : t)
            if (! g.contains(v) || kept.contains(v))
                throw std::invalid_argument("unnatural collapse: T must consist of removed vertices");
        for (auto v : search.removed)
            if (natural.arity() != g.arity() || ! natural.defined(v) || ! kept.contains({v.side, natural(v)}))
                throw std::invalid_argument("unnatural collapse: no natural partner for " + to_string(v));
        if (t.empty())
            return std::nullopt;
        optional<Homomorphism> found;
        search.run([&](const Homomorphism & f) {
            bool moved_in_t = false, moved_outside = false;
            for (auto v : search.removed) {
                if (f(v) == natural(v))
                    continue;
                (t.contains(v) ? moved_in_t : moved_outside) = true;
            }
            if (moved_in_t && moved_outside) {
                found = f;
                return false;
            }
            return true;
        });
        return found;
    }

    auto find_collapse_naive(const Hypergraph & g, const SideSubset & kept) -> optional<Homomorphism>
    {
        vector<VertexRef> removed;
        for (auto v : g.vertices())
            if (! kept.contains(v))
                removed.push_back(v);
        vector<vector<VertexId>> options;
        for (auto v : removed) {
            auto & s = kept.side(v.side);
            if (s.empty())
                return std::nullopt;
            options.emplace_back(s.begin(), s.end());
        }
        auto target = section(g, kept);
        vector<size_t> choice(removed.size(), 0);
        while (true) {
            Homomorphism f(g.arity());
            for (auto v : kept.vertices())
                f.set(v, v.id);
            for (size_t i = 0; i < removed.size(); ++i)
                f.set(removed[i], options[i][choice[i]]);
            if (is_homomorphism(f, g, target))
                return f;
            size_t i = 0;
            for (; i < removed.size(); ++i) {
                if (++choice[i] < options[i].size())
                    break;
                choice[i] = 0;
            }
            if (i == removed.size())
                return std::nullopt;
        }
    }
}
