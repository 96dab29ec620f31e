#pragma once

#include <parrep/conditioning.hpp>
#include <parrep/hypergraph.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace parrep
{
    struct SPNode;
    using SPTree = std::shared_ptr<const SPNode>;

    enum class SPKind
    {
        Edge,
        Series,
        Generalized,
        Parallel
    };

    // An oriented series-parallel bipartite graph. Vertices are VertexRefs of a 2-partite hypergraph.
    // Series and Generalized share first.bottom == second.top. For Generalized, the orientation
    // is that of the primary child.
    struct SPNode
    {
        SPKind kind = SPKind::Edge;
        VertexRef top, bottom;
        SPTree first, second;
        bool primary_is_first = true;

        // Derived at construction.
        std::set<VertexRef> vertex_set;
        std::set<std::pair<VertexRef, VertexRef>> edge_set;
        std::size_t length = 1;

        auto primary() const -> const SPTree & { return primary_is_first ? first : second; }
        auto secondary() const -> const SPTree & { return primary_is_first ? second : first; }
        // The vertex a Generalized node's secondary child hangs from.
        auto attachment() const -> VertexRef { return first->bottom; }
    };

    // Constructors validate the composition rules and throw std::invalid_argument.
    auto sp_edge(VertexRef top, VertexRef bottom) -> SPTree;
    auto sp_series(SPTree first, SPTree second) -> SPTree;
    auto sp_generalized(SPTree first, SPTree second, bool primary_is_first) -> SPTree;
    auto sp_parallel(SPTree first, SPTree second) -> SPTree;

    auto sp_vertices(const SPTree & t) -> std::set<VertexRef>;
    auto sp_edges(const SPTree & t) -> std::set<std::pair<VertexRef, VertexRef>>;
    auto flatten(const SPTree & t) -> Hypergraph;
    auto reversed(const SPTree & t) -> SPTree;

    // Throws std::invalid_argument if g is disconnected, not 2-partite or has no edge.
    auto sp_parse(const Hypergraph & g) -> std::optional<SPTree>;

    using Spine = std::vector<VertexRef>;

    auto spine_of(const SPTree & t) -> Spine;
    auto spine_length(const SPTree & t) -> std::size_t;

    // Identity on the spine; every other vertex lands on the spine.
    auto collapse_to_spine(const SPTree & t) -> Homomorphism;

    // Pushes secondary children of Generalized nodes down to edge primaries, and rewrites every
    // Parallel node as (parallel of the rest, longest component). Spines are preserved.
    auto standard_form(const SPTree & t) -> SPTree;

    // Iterated leaf addition.
    auto certify_tree(const Hypergraph & tree) -> Certificate;

    struct SpSynthesis
    {
        Certificate certificate;
        // Final certificate vertex -> vertex of the flattened tree.
        std::map<VertexRef, VertexRef> labels;
        std::size_t contiguity_checks = 0;
    };

    auto certify_sp_detailed(const SPTree & t) -> SpSynthesis;
    auto certify_sp(const SPTree & t) -> Certificate;

    // Random oriented SP graph with at most max_vertices vertices.
    auto random_sp_tree(std::mt19937_64 & rng, int max_vertices) -> SPTree;
}
