#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace parrep
{
    using VertexId = std::uint32_t;

    // A vertex is identified by its side (0-based) and an id unique within that side.
    struct VertexRef
    {
        int side = 0;
        VertexId id = 0;

        auto operator<=>(const VertexRef &) const = default;
    };

    // One vertex id per side.
    using Edge = std::vector<VertexId>;

    // Per-side vertex subsets.
    class SideSubset
    {
        std::vector<std::set<VertexId>> sides_;

    public:
        SideSubset() = default;
        explicit SideSubset(int arity) : sides_(arity) {}
        explicit SideSubset(std::vector<std::set<VertexId>> sides) : sides_(std::move(sides)) {}

        auto arity() const -> int { return static_cast<int>(sides_.size()); }
        auto side(int j) const -> const std::set<VertexId> & { return sides_.at(j); }
        auto side(int j) -> std::set<VertexId> & { return sides_.at(j); }
        auto contains(VertexRef v) const -> bool { return sides_.at(v.side).contains(v.id); }
        auto insert(VertexRef v) -> void { sides_.at(v.side).insert(v.id); }
        auto size() const -> std::size_t;
        auto empty() const -> bool { return size() == 0; }
        auto vertices() const -> std::vector<VertexRef>;

        auto operator<=>(const SideSubset &) const = default;
    };

    // Per-side vertex maps.
    class Homomorphism
    {
        std::vector<std::map<VertexId, VertexId>> maps_;

    public:
        Homomorphism() = default;
        explicit Homomorphism(int arity) : maps_(arity) {}
        explicit Homomorphism(std::vector<std::map<VertexId, VertexId>> maps) : maps_(std::move(maps)) {}

        auto arity() const -> int { return static_cast<int>(maps_.size()); }
        auto side_map(int j) const -> const std::map<VertexId, VertexId> & { return maps_.at(j); }
        auto set(VertexRef from, VertexId to) -> void { maps_.at(from.side)[from.id] = to; }
        auto defined(VertexRef v) const -> bool { return maps_.at(v.side).contains(v.id); }
        auto operator()(VertexRef v) const -> VertexId;
        auto image(const Edge & e) const -> Edge;

        auto operator<=>(const Homomorphism &) const = default;
    };

    // An r-partite, r-regular hypergraph. Immutable once built.
    class Hypergraph
    {
        std::vector<std::vector<VertexId>> sides_;
        std::vector<Edge> edges_;

    public:
        Hypergraph() = default;

        // Throws std::invalid_argument if an edge has the wrong length or uses a vertex not on its side.
        Hypergraph(std::vector<std::vector<VertexId>> sides, std::vector<Edge> edges);

        auto arity() const -> int { return static_cast<int>(sides_.size()); }
        auto side(int j) const -> const std::vector<VertexId> & { return sides_.at(j); }
        auto edges() const -> const std::vector<Edge> & { return edges_; }
        auto edge_count() const -> std::size_t { return edges_.size(); }
        auto vertex_count() const -> std::size_t;
        auto vertices() const -> std::vector<VertexRef>;
        auto all_vertices() const -> SideSubset;

        auto contains(VertexRef v) const -> bool;
        auto has_edge(const Edge & e) const -> bool;
        auto edge_index(const Edge & e) const -> std::optional<std::size_t>;
        auto next_unused_id(int side) const -> VertexId;

        // Vertices sharing an edge with v, grouped by side.
        auto neighbours(VertexRef v) const -> std::set<VertexRef>;
        auto degree(VertexRef v) const -> std::size_t;

        // Every vertex lies on some edge.
        auto no_impossible_questions() const -> bool;

        auto operator==(const Hypergraph &) const -> bool = default;
    };

    // True iff every edge of g maps to an edge of h.
    // Throws std::invalid_argument on arity mismatch or if f is not total on g.
    auto is_homomorphism(const Homomorphism & f, const Hypergraph & g, const Hypergraph & h) -> bool;

    auto compose(const Homomorphism & second, const Homomorphism & first) -> Homomorphism;

    auto identity_map(const Hypergraph & g) -> Homomorphism;

    // The edges of g whose vertices all lie in p. Throws std::invalid_argument if p is not a subset of g.
    auto section(const Hypergraph & g, const SideSubset & p) -> Hypergraph;

    // All homomorphisms g -> h in lexicographic order of the assignment vector
    // (vertices ordered by side then id, values by id).
    auto enumerate_homomorphisms(const Hypergraph & g, const Hypergraph & h,
        std::optional<std::size_t> limit = std::nullopt) -> std::vector<Homomorphism>;

    auto count_homomorphisms(const Hypergraph & g, const Hypergraph & h) -> std::size_t;

    auto connected_components(const Hypergraph & g) -> std::vector<Hypergraph>;

    auto is_connected(const Hypergraph & g) -> bool;

    // A side-preserving isomorphism g -> h, if one exists.
    auto find_isomorphism(const Hypergraph & g, const Hypergraph & h) -> std::optional<Homomorphism>;

    auto are_isomorphic(const Hypergraph & g, const Hypergraph & h) -> bool;

    namespace named
    {
        // Sides {0,1}; edge j has a 1 in position j only.
        auto qr(int r) -> Hypergraph;

        // Even vertices on side 0, odd on side 1, ids are the cycle positions.
        auto cycle_shortcuts(int n) -> Hypergraph;

        // Side j has ids 0..sizes[j]-1, every tuple is an edge.
        auto complete(const std::vector<int> & sizes) -> Hypergraph;

        // Side 0: elements 1..k. Side 1: nonempty subsets of [k] as bitmasks (bit i-1 for element i).
        auto set_graph(int k) -> Hypergraph;

        // Parses "Qr:3", "Cycle:12", "Complete:2,2", "SetGraph:3".
        auto from_spec(const std::string & spec) -> Hypergraph;
    }

    auto to_text(const Hypergraph & g) -> std::string;

    // Throws FormatError with the offending line number.
    auto parse_hypergraph(const std::string & text) -> Hypergraph;

    auto to_string(VertexRef v) -> std::string;
}
