#pragma once

#include <parrep/hypergraph.hpp>

#include <optional>
#include <set>

namespace parrep
{
    // A collapse of g onto section(g, kept): removed vertices are placed in increasing
    // (id, side) order, candidates in increasing id order. The first witness found is returned.
    // forced pins removed vertices to specific kept targets.
    auto find_collapse(const Hypergraph & g, const SideSubset & kept,
        const Homomorphism & forced = {}) -> std::optional<Homomorphism>;

    // A collapse in which some vertex of t and some removed vertex outside t both avoid
    // their natural partner. natural must be defined on every removed vertex and map into kept.
    auto find_unnatural_collapse(const Hypergraph & g, const SideSubset & kept,
        const std::set<VertexRef> & t, const Homomorphism & natural) -> std::optional<Homomorphism>;

    // Oracle for tests: tries every map from removed to kept vertices.
    auto find_collapse_naive(const Hypergraph & g, const SideSubset & kept) -> std::optional<Homomorphism>;
}
