#pragma once

#include <parrep/hypergraph.hpp>
#include <parrep/rational.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace parrep
{
    struct DoublingStep
    {
        SideSubset doubled;

        auto operator==(const DoublingStep &) const -> bool = default;
    };

    struct CollapseStep
    {
        SideSubset kept;
        // Removed vertex -> kept vertex on the same side.
        std::map<VertexRef, VertexId> mapping;

        auto operator==(const CollapseStep &) const -> bool = default;
    };

    using Step = std::variant<DoublingStep, CollapseStep>;

    struct Certificate
    {
        int arity = 0;
        Edge init;
        std::vector<Step> steps;

        auto doubling_count() const -> std::size_t;
        auto collapse_count() const -> std::size_t;
        auto operator==(const Certificate &) const -> bool = default;
    };

    // Old vertex -> its fresh copy.
    using CopyMap = std::map<VertexRef, VertexRef>;

    struct DoublingResult
    {
        Hypergraph graph;
        CopyMap copies;
    };

    auto single_edge(const Edge & e) -> Hypergraph;

    // Copies receive the next unused id on their side, in increasing order of the original id.
    auto apply_doubling(const Hypergraph & g, const DoublingStep & step) -> DoublingResult;

    // Throws HomomorphismViolation if the extended mapping is not a homomorphism onto the section,
    // std::invalid_argument if the step is malformed.
    auto apply_collapse(const Hypergraph & g, const CollapseStep & step) -> Hypergraph;

    // The collapse map extended by the identity on kept vertices.
    auto collapse_homomorphism(const Hypergraph & g, const CollapseStep & step) -> Homomorphism;

    struct StepRecord
    {
        std::size_t index = 0;
        bool doubling = false;
        CopyMap copies;
        std::vector<VertexRef> removed;
        Hypergraph after;
    };

    struct Replay
    {
        Hypergraph final_graph;
        std::vector<StepRecord> transcript;
    };

    // Throws CertificateError (with the 0-based step index) on the first invalid step.
    auto verify_certificate(const Certificate & cert) -> Replay;

    auto normalize_certificate(const Certificate & cert) -> Certificate;

    auto certify_complete(const std::vector<int> & sizes) -> Certificate;
    auto certify_set_graph(int k) -> Certificate;
    // Accepts "Complete:..." and "SetGraph:k".
    auto certify_named(const std::string & spec) -> Certificate;

    auto to_text(const Certificate & cert) -> std::string;
    auto parse_certificate(const std::string & text) -> Certificate;

    // A distribution over homomorphisms from the certified graph into a target.
    struct HomDistribution
    {
        Hypergraph source;
        Hypergraph target;
        std::size_t doublings = 0;
        std::map<Homomorphism, Rational> probability;

        auto total() const -> Rational;
        auto min_probability() const -> Rational;
    };

    auto build_hitting_distribution(const Certificate & cert, const Hypergraph & target) -> HomDistribution;

    // A subset of target^n given by membership over edge-index tuples (mixed radix, first coordinate most significant).
    using EdgeTupleSet = std::vector<bool>;

    struct HittingReport
    {
        std::size_t tested = 0;
        std::size_t violations = 0;
        Rational min_slack;
        std::optional<EdgeTupleSet> first_violation;
    };

    // Pr[every source edge lands in s under n i.i.d. draws].
    auto hitting_probability(const HomDistribution & dist, std::size_t n, const EdgeTupleSet & s) -> Rational;

    // All subsets of target^n; requires |target|^n <= 16.
    auto verify_hitting_exhaustive(const HomDistribution & dist, std::size_t n) -> HittingReport;
    auto verify_hitting_sampled(const HomDistribution & dist, std::size_t n, std::size_t samples, std::uint64_t seed) -> HittingReport;
    auto verify_hitting_sets(const HomDistribution & dist, std::size_t n, const std::vector<EdgeTupleSet> & sets) -> HittingReport;

    // 3 exp(-n / M^(2^(k+1))).
    auto pr_upper_bound(double m, unsigned k, double n) -> double;
    // 3 exp(-eps n / c).
    auto probabilistic_good_bound(double eps, double c, double n) -> double;
}
