#include <parrep/errors.hpp>
#include <parrep/lines.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

using std::size_t;
using std::vector;

namespace parrep
{
    namespace
    {
        constexpr size_t max_universe = size_t{1} << 26;
        constexpr size_t mask_universe = 64;

        auto checked_power(int r, int n, size_t limit) -> size_t
        {
            size_t total = 1;
            for (int i = 0; i < n; ++i) {
                total *= static_cast<size_t>(r);
                if (total > limit)
                    throw BudgetExceeded("universe [r]^n", static_cast<long double>(std::pow(static_cast<long double>(r), n)),
                        static_cast<long double>(limit));
            }
            return total;
        }
    }

    StringSet::StringSet(int r, int n) : r_(r), n_(n)
    {
        if (r < 1 || n < 0)
            throw std::invalid_argument("string set needs r >= 1 and n >= 0");
        members_.assign(checked_power(r, n, max_universe), false);
    }

    auto StringSet::size() const -> size_t
    {
        return static_cast<size_t>(std::count(members_.begin(), members_.end(), true));
    }

    auto StringSet::measure() const -> Rational
    {
        Rational q(static_cast<long>(size()), static_cast<long>(universe()));
        q.canonicalize();
        return q;
    }

    auto StringSet::elements() const -> vector<size_t>
    {
        vector<size_t> out;
        for (size_t i = 0; i < members_.size(); ++i)
            if (members_[i])
                out.push_back(i);
        return out;
    }

    auto StringSet::index_of(const Word & w) const -> size_t
    {
        if (static_cast<int>(w.size()) != n_)
            throw std::invalid_argument("word has the wrong length");
        size_t index = 0;
        for (int s : w) {
            if (s < 1 || s > r_)
                throw std::invalid_argument("symbol out of range");
            index = index * static_cast<size_t>(r_) + static_cast<size_t>(s - 1);
        }
        return index;
    }

    auto StringSet::word(size_t index) const -> Word
    {
        Word w(static_cast<size_t>(n_));
        for (int i = n_ - 1; i >= 0; --i) {
            w[static_cast<size_t>(i)] = static_cast<int>(index % static_cast<size_t>(r_)) + 1;
            index /= static_cast<size_t>(r_);
        }
        return w;
    }

    auto has_wildcard(const Pattern & p) -> bool
    {
        return std::find(p.begin(), p.end(), wildcard) != p.end();
    }

    auto line_points(const Pattern & p, int r) -> vector<Word>
    {
        if (! has_wildcard(p))
            throw std::invalid_argument("pattern has no wildcard");
        vector<Word> out;
        for (int a = 1; a <= r; ++a) {
            Word w = p;
            for (auto & s : w)
                if (s == wildcard)
                    s = a;
            out.push_back(std::move(w));
        }
        return out;
    }

    namespace
    {
        // Calls f on every pattern, first symbol most significant, wildcard ordered after r.
        auto for_each_pattern(int r, int n, const std::function<bool(const Pattern &)> & f) -> void
        {
            Pattern p(static_cast<size_t>(n), 1);
            auto next = [&] {
                for (int i = n - 1; i >= 0; --i) {
                    auto & s = p[static_cast<size_t>(i)];
                    if (s == wildcard) {
                        s = 1;
                        continue;
                    }
                    s = s == r ? wildcard : s + 1;
                    return true;
                }
                return false;
            };
            do {
                if (has_wildcard(p) && f(p))
                    return;
            } while (next());
        }
    }

    auto all_lines(int r, int n) -> vector<vector<size_t>>
    {
        StringSet indexer(r, n);
        vector<vector<size_t>> out;
        for_each_pattern(r, n, [&](const Pattern & p) {
            vector<size_t> line;
            for (auto & w : line_points(p, r))
                line.push_back(indexer.index_of(w));
            out.push_back(std::move(line));
            return false;
        });
        return out;
    }

    auto has_combinatorial_line(const StringSet & s) -> std::optional<Pattern>
    {
        std::optional<Pattern> found;
        for_each_pattern(s.r(), s.n(), [&](const Pattern & p) {
            for (auto & w : line_points(p, s.r()))
                if (! s.contains(w))
                    return false;
            found = p;
            return true;
        });
        return found;
    }

    auto dhj_coeff(int r, int n) -> DensityResult
    {
        if (r < 1 || n < 1)
            throw std::invalid_argument("dhj_coeff needs r >= 1 and n >= 1");
        auto size = checked_power(r, n, mask_universe);
        // Lines through each point, as masks.
        vector<vector<std::uint64_t>> lines_at(size);
        for (auto & line : all_lines(r, n)) {
            std::uint64_t mask = 0;
            for (auto i : line)
                mask |= std::uint64_t{1} << i;
            // A line is complete once its largest point is added.
            lines_at[*std::max_element(line.begin(), line.end())].push_back(mask);
        }

        std::uint64_t best = 0;
        int best_count = -1;
        std::function<void(size_t, std::uint64_t, int)> search = [&](size_t i, std::uint64_t chosen, int count) {
            if (count + static_cast<int>(size - i) <= best_count)
                return;
            if (i == size) {
                best = chosen;
                best_count = count;
                return;
            }
            auto with = chosen | std::uint64_t{1} << i;
            bool free = std::none_of(lines_at[i].begin(), lines_at[i].end(), [&](std::uint64_t m) { return (with & m) == m; });
            if (free)
                search(i + 1, with, count + 1);
            search(i + 1, chosen, count);
        };
        search(0, 0, 0);

        DensityResult result{Rational(best_count, static_cast<long>(size)), StringSet(r, n)};
        result.value.canonicalize();
        for (size_t i = 0; i < size; ++i)
            if (best >> i & 1)
                result.witness.insert(i);
        return result;
    }

    auto equidistributed_set(int r, int n) -> StringSet
    {
        if (r < 1 || n < 1 || n % r != 0)
            throw std::invalid_argument("equidistributed set needs r to divide n");
        StringSet s(r, n);
        for (size_t i = 0; i < s.universe(); ++i) {
            vector<int> counts(static_cast<size_t>(r) + 1, 0);
            for (int sym : s.word(i))
                ++counts[static_cast<size_t>(sym)];
            if (std::all_of(counts.begin() + 1, counts.end(), [&](int c) { return c == n / r; }))
                s.insert(i);
        }
        return s;
    }

    auto has_monochromatic_line(int r, int n, const vector<int> & coloring) -> std::optional<Pattern>
    {
        StringSet indexer(r, n);
        if (coloring.size() != indexer.universe())
            throw std::invalid_argument("colouring has the wrong size");
        std::optional<Pattern> found;
        for_each_pattern(r, n, [&](const Pattern & p) {
            auto points = line_points(p, r);
            auto c = coloring[indexer.index_of(points.front())];
            for (auto & w : points)
                if (coloring[indexer.index_of(w)] != c)
                    return false;
            found = p;
            return true;
        });
        return found;
    }

    auto hj_coeff(int r, int n) -> ColoringResult
    {
        if (r < 2 || n < 1)
            throw std::invalid_argument("hj_coeff needs r >= 2 and n >= 1");
        auto size = checked_power(r, n, mask_universe);
        vector<vector<vector<size_t>>> lines_at(size);
        for (auto & line : all_lines(r, n))
            lines_at[*std::max_element(line.begin(), line.end())].push_back(line);

        vector<int> colour(size, -1);
        // Colours are introduced in order, so only the first unused one is tried.
        std::function<bool(size_t, int, int)> fill = [&](size_t i, int used, int limit) {
            if (i == size)
                return true;
            for (int c = 0; c < std::min(used + 1, limit); ++c) {
                colour[i] = c;
                bool mono = std::any_of(lines_at[i].begin(), lines_at[i].end(), [&](const vector<size_t> & line) {
                    return std::all_of(line.begin(), line.end(), [&](size_t p) { return colour[p] == c; });
                });
                if (! mono && fill(i + 1, std::max(used, c + 1), limit))
                    return true;
            }
            colour[i] = -1;
            return false;
        };
        for (int c = 1;; ++c)
            if (fill(0, 0, c))
                return {c, colour};
    }

    auto to_string(const Word & w) -> std::string
    {
        std::string out;
        for (int s : w)
            out += std::to_string(s);
        return out;
    }

    auto pattern_to_string(const Pattern & p) -> std::string
    {
        std::string out;
        for (int s : p)
            out += s == wildcard ? std::string("*") : std::to_string(s);
        return out;
    }

    auto parse_pattern(const std::string & text, int r) -> Pattern
    {
        Pattern p;
        for (char ch : text) {
            if (ch == '*')
                p.push_back(wildcard);
            else if (ch >= '1' && ch <= '9' && ch - '0' <= r)
                p.push_back(ch - '0');
            else
                throw std::invalid_argument(std::string("bad pattern symbol '") + ch + "'");
        }
        if (! has_wildcard(p))
            throw std::invalid_argument("pattern has no wildcard");
        return p;
    }

    auto parse_string_set(const std::string & text) -> StringSet
    {
        std::istringstream in(text);
        std::string raw;
        size_t line_no = 0;
        std::optional<StringSet> s;
        while (std::getline(in, raw)) {
            ++line_no;
            auto hash = raw.find('#');
            std::istringstream ls(raw.substr(0, hash));
            std::string head;
            if (! (ls >> head))
                continue;
            if (! s) {
                int r = 0, n = 0;
                std::string extra;
                if (head != "strings" || ! (ls >> r >> n) || ls >> extra)
                    throw FormatError("expected 'strings r n' header", line_no);
                if (r < 1 || r > 9 || n < 0)
                    throw FormatError("need 1 <= r <= 9 and n >= 0", line_no);
                try {
                    s.emplace(r, n);
                }
                catch (const BudgetExceeded & e) {
                    throw FormatError(e.what(), line_no);
                }
                continue;
            }
            std::string extra;
            if (ls >> extra)
                throw FormatError("one word per line", line_no);
            if (static_cast<int>(head.size()) != s->n())
                throw FormatError("word '" + head + "' has the wrong length", line_no);
            Word w;
            for (char ch : head) {
                if (ch < '1' || ch - '0' > s->r())
                    throw FormatError("symbol out of range in '" + head + "'", line_no);
                w.push_back(ch - '0');
            }
            s->insert(w);
        }
        if (! s)
            throw FormatError("missing 'strings r n' header", line_no);
        return *s;
    }

    auto to_text(const StringSet & s) -> std::string
    {
        std::string out = "strings " + std::to_string(s.r()) + " " + std::to_string(s.n()) + "\n";
        for (auto i : s.elements())
            out += to_string(s.word(i)) + "\n";
        return out;
    }
}
