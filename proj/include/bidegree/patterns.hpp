#pragma once

#include "core.hpp"
#include "polynomial.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace bidegree {

// Blocks of indices forced equal, plus the suffix {s..r} whose entries are pairwise
// distinct unless they share a block. With `weighted`, index 1 carries g instead of f.
struct EqualityPattern {
    std::vector<std::vector<int>> blocks;
    int distinct_from = 1;
    bool weighted = false;

    int weight() const {
        int w = 0;
        for (const auto& b : blocks) w += static_cast<int>(b.size()) - 1;
        return w;
    }

    friend bool operator==(const EqualityPattern& x, const EqualityPattern& y) {
        return x.blocks == y.blocks && x.distinct_from == y.distinct_from && x.weighted == y.weighted;
    }
    friend bool operator<(const EqualityPattern& x, const EqualityPattern& y) {
        return std::tie(x.weighted, x.distinct_from, x.blocks) < std::tie(y.weighted, y.distinct_from, y.blocks);
    }
};

enum class ExpansionMode { Exact, Truncated };

// How many distinct indices a returned free singleton may coincide with. `Lemma` counts
// the enlarged distinct set including the returned index, which reproduces the published
// weight-2 coefficients; `Exact` counts only the indices already present. Exact-mode
// expansions always use `Exact`.
enum class UnfreeCount { Lemma, Exact };

struct ExpansionTerm {
    IntPoly coefficient;
    EqualityPattern pattern;
};

struct PatternExpansion {
    std::vector<ExpansionTerm> terms;
    int k = 0;
    int truncation_weight = 0;
    ExpansionMode mode = ExpansionMode::Truncated;
    bool weighted = false;

    const ExpansionTerm* find(const EqualityPattern& p) const {
        for (const auto& t : terms)
            if (t.pattern == p) return &t;
        return nullptr;
    }
};

namespace detail {

// Structure of a pattern up to relabeling: free blocks (the g block apart), free
// singletons, at most one block joined to the distinct suffix, and the distinct
// singletons, whose number r - used() is implied.
struct Shape {
    int g = 0;  // size of the free block carrying g, 0 if none
    std::vector<int> blocks;  // other free blocks, sizes descending
    int singles = 0;
    int straddle = 0;
    bool straddle_g = false;

    int prefix() const {
        int p = g + singles;
        for (int b : blocks) p += b;
        return p;
    }
    int used() const { return prefix() + straddle; }
    int weight() const {
        int w = g > 0 ? g - 1 : 0;
        for (int b : blocks) w += b - 1;
        if (straddle > 0) w += straddle - 1;
        return w;
    }
    void add_block(int size) {
        blocks.push_back(size);
        std::sort(blocks.begin(), blocks.end(), std::greater<>());
    }

    auto tie() const { return std::tie(g, blocks, singles, straddle, straddle_g); }
    friend bool operator<(const Shape& x, const Shape& y) {
        if (x.weight() != y.weight()) return x.weight() < y.weight();
        return x.tie() < y.tie();
    }
    friend bool operator==(const Shape& x, const Shape& y) { return x.tie() == y.tie(); }
};

inline EqualityPattern to_pattern(const Shape& s, bool weighted) {
    EqualityPattern p;
    p.weighted = weighted;
    int next = 1;
    auto take = [&](int size) {
        std::vector<int> b;
        for (int m = 0; m < size; ++m) b.push_back(next++);
        return b;
    };
    if (s.g > 1) p.blocks.push_back(take(s.g));
    if (s.g == 1) ++next;
    for (int b : s.blocks) p.blocks.push_back(take(b));
    next += s.singles;
    p.distinct_from = next;
    if (s.straddle > 1) p.blocks.push_back(take(s.straddle));
    return p;
}

inline Shape to_shape(const EqualityPattern& p) {
    if (p.distinct_from < 1) throw Error(ErrorCode::BadArgument, "distinct suffix must start at index 1 or later");
    const int s = p.distinct_from;
    std::set<int> seen;
    Shape sh;
    int straddle_prefix = 0;
    int g_block = -1;
    for (std::size_t bi = 0; bi < p.blocks.size(); ++bi) {
        const auto& b = p.blocks[bi];
        bool touches = false;
        for (int x : b) {
            if (x < 1) throw Error(ErrorCode::BadArgument, "pattern indices start at 1");
            if (!seen.insert(x).second) throw Error(ErrorCode::BadArgument, "pattern blocks overlap");
            if (x >= s) touches = true;
        }
        if (b.size() < 2) continue;
        const bool has_g = p.weighted && std::find(b.begin(), b.end(), 1) != b.end();
        if (has_g) g_block = static_cast<int>(bi);
        if (touches) {
            if (sh.straddle) throw Error(ErrorCode::BadArgument, "more than one block meets the distinct suffix");
            sh.straddle = static_cast<int>(b.size());
            sh.straddle_g = has_g;
            for (int x : b)
                if (x < s) ++straddle_prefix;
        } else if (has_g) {
            sh.g = static_cast<int>(b.size());
        } else {
            sh.add_block(static_cast<int>(b.size()));
        }
    }
    if (p.weighted && g_block < 0) {
        if (s > 1)
            sh.g = 1;
        else
            throw Error(ErrorCode::BadArgument, "g on a lone distinct index is not supported");
    }
    int in_blocks = sh.g + straddle_prefix;
    for (int b : sh.blocks) in_blocks += b;
    sh.singles = (s - 1) - in_blocks;
    if (sh.singles < 0) throw Error(ErrorCode::BadArgument, "pattern blocks do not fit before the distinct suffix");
    return sh;
}

}  // namespace detail

inline EqualityPattern canonicalize(const EqualityPattern& p) {
    return detail::to_pattern(detail::to_shape(p), p.weighted);
}

namespace detail {

inline PatternExpansion expand(Shape source, bool weighted, int k, ExpansionMode mode, std::optional<int> max_weight,
                               UnfreeCount unfree) {
    if (k < 1 || k > 8) throw Error(ErrorCode::BadK, "k must be between 1 and 8");
    const int top = max_weight ? *max_weight : (mode == ExpansionMode::Exact && weighted ? k + 1 : k);
    if (top < source.weight()) throw Error(ErrorCode::BadK, "truncation weight below the source weight");
    const int width = 2 * k;
    const int unfree_shift = mode == ExpansionMode::Truncated && unfree == UnfreeCount::Lemma ? -1 : 0;

    std::map<Shape, IntPoly> pending, done;
    pending[source] = IntPoly(1);
    auto push = [&](const Shape& s, const IntPoly& c) {
        if (c.is_zero()) return;
        if (s.weight() > top) {
            if (mode == ExpansionMode::Exact)
                throw Error(ErrorCode::BadK, "exact expansion produced a term above its weight bound");
            return;
        }
        pending[s] += c;
    };

    while (!pending.empty()) {
        auto it = pending.begin();
        Shape s = it->first;
        IntPoly c = it->second;
        pending.erase(it);
        if (c.is_zero()) continue;
        const int P = s.prefix();
        if ((s.straddle == 0 && P == width) || (mode == ExpansionMode::Exact && s.weight() == top)) {
            done[s] += c;
            continue;
        }
        if (s.straddle > 0) {
            // distinct block -> free block, minus the block absorbing a distinct singleton
            Shape freed = s;
            if (s.straddle_g)
                freed.g = s.straddle;
            else
                freed.add_block(s.straddle);
            freed.straddle = 0;
            freed.straddle_g = false;
            push(freed, c);
            Shape grown = s;
            ++grown.straddle;
            push(grown, c * -IntPoly::r_minus(s.used()));
        } else if (P < width) {
            Shape freed = s;
            ++freed.singles;
            push(freed, c);
            Shape merged = s;
            merged.straddle = 2;
            push(merged, c * -IntPoly::r_minus(P + 1));
        } else {
            if (s.singles == 0) throw Error(ErrorCode::BadK, "no free singleton left to return to the distinct suffix");
            Shape back = s;
            --back.singles;
            push(back, c);
            Shape merged = back;
            merged.straddle = 2;
            push(merged, c * IntPoly::r_minus(P + unfree_shift));
        }
    }

    PatternExpansion out;
    out.k = k;
    out.truncation_weight = top;
    out.mode = mode;
    out.weighted = weighted;
    for (const auto& [s, c] : done)
        if (!c.is_zero()) out.terms.push_back({c, to_pattern(s, weighted)});
    return out;
}

}  // namespace detail

// Sum over x_1 != ... != x_r of prod f(x_m), with the first 2k indices freed.
inline PatternExpansion expand_distinct(int k, ExpansionMode mode = ExpansionMode::Truncated,
                                        std::optional<int> max_weight = std::nullopt,
                                        UnfreeCount unfree = UnfreeCount::Lemma) {
    return detail::expand(detail::Shape{}, false, k, mode, max_weight, unfree);
}

// Sum over x_1 = x_2 != ... != x_r of g(x_1) prod_{m>=2} f(x_m).
inline PatternExpansion expand_with_initial_equality(int k, ExpansionMode mode = ExpansionMode::Truncated,
                                                     std::optional<int> max_weight = std::nullopt,
                                                     UnfreeCount unfree = UnfreeCount::Lemma) {
    detail::Shape seed;
    seed.straddle = 2;
    seed.straddle_g = true;
    return detail::expand(seed, true, k, mode, max_weight, unfree);
}

inline EqualityPattern distinct_source() { return EqualityPattern{{}, 1, false}; }
inline EqualityPattern weighted_source() { return EqualityPattern{{{1, 2}}, 1, true}; }

// Factored evaluation: free blocks give power sums, free singletons (sum f)^m, and the
// distinct part n! e_n(f) with one table entry reserved for a block joined to it.
// A pattern naming an index beyond r evaluates to 0.
template <typename T>
T evaluate_pattern(const EqualityPattern& pattern, const std::vector<T>& f, const std::vector<T>* g, int r) {
    if (pattern.weighted && !g) throw Error(ErrorCode::BadArgument, "weighted pattern needs a g table");
    if (pattern.distinct_from > r + 1) return T(0);
    for (const auto& b : pattern.blocks)
        for (int x : b)
            if (x > r) return T(0);
    const auto sh = detail::to_shape(pattern);
    const int n = r - sh.used();
    if (n < 0) return T(0);
    const std::size_t N = f.size();

    auto pw = [](const T& x, int e) {
        T v(1);
        for (int m = 0; m < e; ++m) v *= x;
        return v;
    };
    auto block_value = [&](std::size_t x, int size, bool has_g) {
        return has_g ? T((*g)[x] * pw(f[x], size - 1)) : pw(f[x], size);
    };
    auto power_sum = [&](int size, bool has_g) {
        T s(0);
        for (std::size_t x = 0; x < N; ++x) s += block_value(x, size, has_g);
        return s;
    };
    // m! e_m of the table with entry `skip` removed
    auto distinct = [&](int m, std::size_t skip) {
        std::vector<T> e(m + 1, T(0));
        e[0] = T(1);
        for (std::size_t x = 0; x < N; ++x) {
            if (x == skip) continue;
            for (int d = m; d >= 1; --d) e[d] += e[d - 1] * f[x];
        }
        T v = e[m];
        for (int t = 2; t <= m; ++t) v *= T(t);
        return v;
    };

    T value(1);
    if (sh.g > 0) value *= power_sum(sh.g, true);
    for (int b : sh.blocks) value *= power_sum(b, false);
    value *= pw(power_sum(1, false), sh.singles);
    if (sh.straddle > 0) {
        T d(0);
        for (std::size_t y = 0; y < N; ++y) d += block_value(y, sh.straddle, sh.straddle_g) * distinct(n, y);
        value *= d;
    } else {
        value *= distinct(n, N);
    }
    return value;
}

template <typename T>
T evaluate_expansion(const PatternExpansion& e, const std::vector<T>& f, const std::vector<T>* g, int r) {
    T total(0);
    for (const auto& t : e.terms) total += T(t.coefficient.eval(r)) * evaluate_pattern(t.pattern, f, g, r);
    return total;
}

inline std::string format_blocks(const EqualityPattern& p) {
    if (p.blocks.empty()) return "-";
    std::string s;
    for (const auto& b : p.blocks) {
        s += "{";
        for (std::size_t m = 0; m < b.size(); ++m) s += (m ? "," : "") + std::to_string(b[m]);
        s += "}";
    }
    return s;
}

inline std::string format_free(const EqualityPattern& p) {
    std::set<int> in_blocks;
    for (const auto& b : p.blocks) in_blocks.insert(b.begin(), b.end());
    std::string s;
    for (int x = 1; x < p.distinct_from; ++x)
        if (!in_blocks.count(x)) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s.empty() ? "-" : s;
}

// "-(4r-10) | {1,2} | free 3,4 | distinct 5..r"
inline std::string format_term(const ExpansionTerm& t) {
    return t.coefficient.str() + " | " + format_blocks(t.pattern) + " | free " + format_free(t.pattern) +
           " | distinct " + std::to_string(t.pattern.distinct_from) + "..r";
}

}  // namespace bidegree
