#pragma once

#include <parrep/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace parrep
{
    // A string over [r] of length n, symbols 1..r.
    using Word = std::vector<int>;

    // Symbols 1..r, or the wildcard.
    using Pattern = std::vector<int>;
    inline constexpr int wildcard = 0;

    // A subset of [r]^n, indexed by the base-r value of a word (first symbol most significant).
    class StringSet
    {
        int r_ = 1;
        int n_ = 0;
        std::vector<bool> members_;

    public:
        StringSet() = default;
        // Throws std::invalid_argument unless r >= 1, n >= 0 and r^n is addressable.
        StringSet(int r, int n);

        auto r() const -> int { return r_; }
        auto n() const -> int { return n_; }
        auto universe() const -> std::size_t { return members_.size(); }
        auto contains(std::size_t index) const -> bool { return members_.at(index); }
        auto contains(const Word & w) const -> bool { return members_.at(index_of(w)); }
        auto insert(std::size_t index) -> void { members_.at(index) = true; }
        auto insert(const Word & w) -> void { members_.at(index_of(w)) = true; }
        auto size() const -> std::size_t;
        auto measure() const -> Rational;
        auto elements() const -> std::vector<std::size_t>;

        auto index_of(const Word & w) const -> std::size_t;
        auto word(std::size_t index) const -> Word;

        auto operator==(const StringSet &) const -> bool = default;
    };

    auto line_points(const Pattern & p, int r) -> std::vector<Word>;
    auto has_wildcard(const Pattern & p) -> bool;

    // Patterns are tried in lexicographic order with the wildcard as the largest symbol.
    auto has_combinatorial_line(const StringSet & s) -> std::optional<Pattern>;

    // All combinatorial lines of [r]^n, as index lists, in the same pattern order.
    auto all_lines(int r, int n) -> std::vector<std::vector<std::size_t>>;

    struct DensityResult
    {
        Rational value;
        StringSet witness;
    };

    // Maximum measure of a line-free subset; needs r^n <= 64.
    auto dhj_coeff(int r, int n) -> DensityResult;

    auto equidistributed_set(int r, int n) -> StringSet;

    struct ColoringResult
    {
        int colors = 0;
        // Colour (0-based) per word index.
        std::vector<int> coloring;
    };

    // Fewest colours of [r]^n with no monochromatic line; needs r^n <= 64.
    auto hj_coeff(int r, int n) -> ColoringResult;
    auto has_monochromatic_line(int r, int n, const std::vector<int> & coloring) -> std::optional<Pattern>;

    auto to_string(const Word & w) -> std::string;
    // Wildcard printed as '*'.
    auto pattern_to_string(const Pattern & p) -> std::string;
    auto parse_pattern(const std::string & text, int r) -> Pattern;

    // Header "strings r n", then one word per line over digits 1..r; '#' starts a comment.
    auto parse_string_set(const std::string & text) -> StringSet;
    auto to_text(const StringSet & s) -> std::string;
}
