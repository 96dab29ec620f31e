#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace parrep::cycles
{
    using Mask = std::uint32_t;
    inline constexpr int max_vertices = 31;

    // Mathematical modulo; m > 0.
    auto mod(int x, int m) -> int;
    // Table-driven popcount over 16-bit halves.
    auto popcount(Mask u) -> int;

    // Graph on positions 0..N-1 with active set S; adj[u] is a neighbour mask.
    struct BitGraph
    {
        Mask active = 0;
        std::vector<Mask> adj;

        auto size() const -> int { return static_cast<int>(adj.size()); }
        auto operator==(const BitGraph &) const -> bool = default;
    };

    // Cycle on v positions with chords at distance 3.
    auto cycle_graph(int v) -> BitGraph;

    // Union of neighbourhoods of the vertices in t.
    auto neighbors(Mask t, const BitGraph & g) -> Mask;

    // between[u'] has bit u when copy u' is adjacent to u of the original.
    using Between = std::vector<Mask>;

    // Copies t; intra-t edges go to the copy, t-to-rest edges to between. Throws std::invalid_argument if t is not inside g.
    auto bit_double(Mask t, const BitGraph & g, BitGraph & copy, Between & between) -> void;
    // Swaps the roles of the vertices in t between g and copy.
    auto bit_exchange(Mask t, BitGraph & g, BitGraph & copy, Between & between) -> void;

    // Collapse of copy onto g that respects between; mapping[u'] = -1 outside copy.active.
    auto is_collapsible(const BitGraph & g, const BitGraph & copy, const Between & between, std::vector<int> & mapping) -> bool;
    // As above, but some vertex of t and some vertex of copy.active \ t must move off its own position.
    auto is_unnaturally_collapsible(Mask t, const BitGraph & g, const BitGraph & copy, const Between & between,
        std::vector<int> & mapping) -> bool;

    enum class Check
    {
        NonEmptyB,
        NonEmptyAD,
        NaturalCollapse
    };

    auto check_name(Check c) -> std::string;
    // Accepts "b", "ad", "natural".
    auto parse_check(const std::string & s) -> Check;

    struct Counterexample
    {
        Check check = Check::NonEmptyB;
        Mask a = 0, c = 0, d = 0;
        std::vector<std::pair<int, int>> bijection;
        std::optional<std::pair<int, int>> edge;
        std::vector<int> mapping;

        // FAILURE line followed by the counterexample fields.
        auto report() const -> std::string;
    };

    struct CheckResult
    {
        Check check = Check::NonEmptyB;
        int v = 0;
        // Partitions passing the structural filters, in enumeration order (up to the counterexample).
        std::uint64_t partitions = 0;
        std::uint64_t collapse_searches = 0;
        std::optional<Counterexample> counterexample;

        auto success() const -> bool { return ! counterexample; }
        // Header line followed by SUCCESS or the FAILURE block.
        auto transcript() const -> std::string;
    };

    // Exhaustive check; outer enumeration units are handed to workers in increasing order and the
    // counterexample reported is the first in sequential order.
    auto run_lemma_check(Check check, int v, unsigned workers = 1) -> CheckResult;

    struct Verdict
    {
        int v = 0;
        std::vector<CheckResult> checks;
        bool experimental = false;

        auto non_constructible() const -> bool;
        auto report() const -> std::string;
    };

    // Needs even v >= 8. Sizes outside 12, 14, 16 are flagged experimental.
    auto verify_nonconstructible(int v, unsigned workers = 1) -> Verdict;
}
