#pragma once

#include "core.hpp"

#include <cstdlib>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace bidegree {

inline std::size_t default_max_states() {
    if (const char* env = std::getenv("BIDEGREE_MAX_STATE")) {
        try {
            long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return 4000000;
}

struct CountOptions {
    std::size_t max_nodes = 24;
    std::size_t max_states = default_max_states();
};

namespace detail {

// A class of interchangeable columns: `count` columns currently holding residual `value`.
struct ColumnClass {
    int value;
    int count;
    int slot;  // -1 for the processed histogram, otherwise the group index
};

inline void append_u16(std::string& key, int v) {
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
}

class DirectedCounter {
public:
    DirectedCounter(const BidegreeSequence& seq, bool loops, std::size_t max_states)
        : loops_(loops), max_states_(max_states) {
        const auto& a = seq.in_degrees();
        const auto& b = seq.out_degrees();
        std::vector<std::size_t> order(seq.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return b[x] > b[y]; });
        for (auto r : order) rows_.push_back(b[r]);
        max_value_ = std::max(1, *std::max_element(a.begin(), a.end()));
        if (loops_) {
            hist_init_.assign(max_value_ + 1, 0);
            for (int v : a) ++hist_init_[v];
            hist_init_[0] = 0;
        } else {
            hist_init_.assign(max_value_ + 1, 0);
            for (std::size_t t = 0; t < order.size(); ++t) {
                if (t == 0 || b[order[t]] != b[order[t - 1]]) groups_init_.emplace_back();
                groups_init_.back().push_back(a[order[t]]);
            }
            for (auto& g : groups_init_) std::sort(g.begin(), g.end());
        }
    }

    BigInt run() { return count(0, hist_init_, groups_init_); }

private:
    using Groups = std::vector<std::vector<int>>;

    std::string key(std::size_t t, const std::vector<int>& hist, const Groups& groups) const {
        std::string k;
        append_u16(k, static_cast<int>(t));
        for (std::size_t v = 1; v < hist.size(); ++v) append_u16(k, hist[v]);
        for (const auto& g : groups)
            for (int x : g) append_u16(k, x);
        return k;
    }

    BigInt count(std::size_t t, const std::vector<int>& hist, const Groups& groups) {
        const std::size_t n = rows_.size();
        if (t == n) {
            for (std::size_t v = 1; v < hist.size(); ++v)
                if (hist[v]) return 0;
            return 1;
        }
        const int remaining_rows = static_cast<int>(n - t);
        for (std::size_t v = static_cast<std::size_t>(remaining_rows) + 1; v < hist.size(); ++v)
            if (hist[v]) return 0;
        for (const auto& g : groups)
            if (!g.empty() && g.back() > remaining_rows) return 0;

        std::string k = key(t, hist, groups);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;

        Groups rest = groups;
        int own = 0;
        if (!loops_) {
            own = rest.front().front();
            rest.front().erase(rest.front().begin());
        }

        std::vector<ColumnClass> classes;
        for (std::size_t v = 1; v < hist.size(); ++v)
            if (hist[v]) classes.push_back({static_cast<int>(v), hist[v], -1});
        for (std::size_t gi = 0; gi < rest.size(); ++gi) {
            const auto& g = rest[gi];
            for (std::size_t p = 0; p < g.size();) {
                std::size_t q = p;
                while (q < g.size() && g[q] == g[p]) ++q;
                if (g[p] > 0) classes.push_back({g[p], static_cast<int>(q - p), static_cast<int>(gi)});
                p = q;
            }
        }
        std::vector<int> cap_suffix(classes.size() + 1, 0);
        for (std::size_t c = classes.size(); c-- > 0;) cap_suffix[c] = cap_suffix[c + 1] + classes[c].count;

        BigInt total = 0;
        std::vector<int> pick(classes.size(), 0);
        const int need = rows_[t];
        std::function<void(std::size_t, int, const BigInt&)> choose = [&](std::size_t c, int left, const BigInt& w) {
            if (left == 0) {
                std::vector<int> h = hist;
                Groups gs = rest;
                for (std::size_t ci = 0; ci < classes.size(); ++ci) {
                    if (!pick[ci]) continue;
                    const auto& cl = classes[ci];
                    if (cl.slot < 0) {
                        h[cl.value] -= pick[ci];
                        h[cl.value - 1] += pick[ci];
                    } else {
                        auto& g = gs[cl.slot];
                        auto it = std::lower_bound(g.begin(), g.end(), cl.value);
                        for (int m = 0; m < pick[ci]; ++m) --*(it + m);
                    }
                }
                h[0] = 0;
                for (auto& g : gs) std::sort(g.begin(), g.end());
                if (!loops_) {
                    if (own > 0) ++h[own];
                    if (gs.front().empty()) gs.erase(gs.begin());
                }
                total += w * count(t + 1, h, gs);
                return;
            }
            if (c == classes.size() || cap_suffix[c] < left) return;
            const int hi = std::min(left, classes[c].count);
            for (int x = 0; x <= hi; ++x) {
                pick[c] = x;
                choose(c + 1, left - x, x ? BigInt(w * binomial(classes[c].count, x)) : w);
            }
            pick[c] = 0;
        };
        choose(0, need, BigInt(1));

        if (memo_.size() >= max_states_)
            throw Error(ErrorCode::TooLarge, "DP state budget of " + std::to_string(max_states_) + " exceeded");
        memo_.emplace(std::move(k), total);
        return total;
    }

    bool loops_;
    std::size_t max_states_;
    std::vector<int> rows_;
    int max_value_ = 1;
    std::vector<int> hist_init_;
    Groups groups_init_;
    std::unordered_map<std::string, BigInt> memo_;
};

class UndirectedCounter {
public:
    UndirectedCounter(const std::vector<int>& degrees, std::size_t max_states) : max_states_(max_states) {
        int m = 1;
        for (int d : degrees) m = std::max(m, d);
        init_.assign(m + 1, 0);
        for (int d : degrees) ++init_[d];
        init_[0] = 0;
    }

    BigInt run() { return count(init_); }

private:
    BigInt count(const std::vector<int>& hist) {
        int top = 0;
        long long nodes = 0;
        for (std::size_t v = 1; v < hist.size(); ++v)
            if (hist[v]) {
                top = static_cast<int>(v);
                nodes += hist[v];
            }
        if (top == 0) return 1;
        if (top > nodes - 1) return 0;

        std::string k;
        for (std::size_t v = 1; v < hist.size(); ++v) append_u16(k, hist[v]);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;

        std::vector<int> rest = hist;
        --rest[top];
        std::vector<int> values;
        for (std::size_t v = 1; v < rest.size(); ++v)
            if (rest[v]) values.push_back(static_cast<int>(v));
        std::vector<int> cap_suffix(values.size() + 1, 0);
        for (std::size_t c = values.size(); c-- > 0;) cap_suffix[c] = cap_suffix[c + 1] + rest[values[c]];

        BigInt total = 0;
        std::vector<int> pick(values.size(), 0);
        std::function<void(std::size_t, int, const BigInt&)> choose = [&](std::size_t c, int left, const BigInt& w) {
            if (left == 0) {
                std::vector<int> h = rest;
                for (std::size_t ci = 0; ci < values.size(); ++ci) {
                    h[values[ci]] -= pick[ci];
                    h[values[ci] - 1] += pick[ci];
                }
                h[0] = 0;
                total += w * count(h);
                return;
            }
            if (c == values.size() || cap_suffix[c] < left) return;
            const int cnt = rest[values[c]];
            for (int x = 0; x <= std::min(left, cnt); ++x) {
                pick[c] = x;
                choose(c + 1, left - x, x ? BigInt(w * binomial(cnt, x)) : w);
            }
            pick[c] = 0;
        };
        choose(0, top, BigInt(1));

        if (memo_.size() >= max_states_)
            throw Error(ErrorCode::TooLarge, "DP state budget of " + std::to_string(max_states_) + " exceeded");
        memo_.emplace(std::move(k), total);
        return total;
    }

    std::size_t max_states_;
    std::vector<int> init_;
    std::unordered_map<std::string, BigInt> memo_;
};

}  // namespace detail

inline BigInt count_exact(const BidegreeSequence& seq, GraphVariant variant = GraphVariant::DirectedWithLoops,
                          const CountOptions& opt = {}) {
    check_variant(seq, variant);
    if (!seq.balanced()) throw Error(ErrorCode::NotBalanced, "count_exact needs equal in/out sums");
    if (seq.size() > opt.max_nodes)
        throw Error(ErrorCode::TooLarge, std::to_string(seq.size()) + " nodes exceeds limit " +
                                             std::to_string(opt.max_nodes));
    if (variant == GraphVariant::UndirectedNoLoops) {
        if (seq.edges() % 2) return 0;
        return detail::UndirectedCounter(seq.in_degrees(), opt.max_states).run();
    }
    return detail::DirectedCounter(seq, variant == GraphVariant::DirectedWithLoops, opt.max_states).run();
}

namespace detail {

// (S-qk)!/prod (x_i-q)! when y has entries in {0,1,k}, k = number of nonzero x entries.
inline bool lemma1_shape(const std::vector<int>& x, const std::vector<int>& y, BigInt& out) {
    int k = 0, p = -1;
    long long S = 0;
    for (int v : x) {
        S += v;
        if (v > 0) {
            ++k;
            p = p < 0 ? v : std::min(p, v);
        }
    }
    int q = 0;
    for (int v : y) {
        if (v == k && k > 1)
            ++q;
        else if (v != 0 && v != 1)
            return false;
    }
    if (k == 0) {
        out = 1;
        return true;
    }
    if (p < q) {
        out = 0;
        return true;
    }
    BigInt r = factorial(static_cast<int>(S - static_cast<long long>(q) * k));
    for (int v : x)
        if (v > 0) r /= factorial(v - q);
    out = r;
    return true;
}

}  // namespace detail

// Closed form for sequences whose out-degrees are k, 1 or 0 where k is the number of
// nonzero in-degrees (or the transposed shape). Self-loops allowed.
inline BigInt count_closed_special(const BidegreeSequence& seq) {
    if (!seq.balanced()) throw Error(ErrorCode::NotBalanced, "closed form needs equal in/out sums");
    BigInt r;
    if (detail::lemma1_shape(seq.in_degrees(), seq.out_degrees(), r)) return r;
    if (detail::lemma1_shape(seq.out_degrees(), seq.in_degrees(), r)) return r;
    throw Error(ErrorCode::ShapeMismatch, "sequence is not of the closed-form shape");
}

inline BigInt count_all_ones_undirected(long long S) {
    if (S < 0) throw Error(ErrorCode::BadShape, "negative edge total");
    if (S % 2) return 0;
    BigInt r = factorial(static_cast<int>(S));
    r /= boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(S / 2));
    r /= factorial(static_cast<int>(S / 2));
    return r;
}

inline BigInt count_all_ones_base(const BidegreeSequence& seq, GraphVariant variant = GraphVariant::DirectedWithLoops) {
    const auto& a = seq.in_degrees();
    const auto& b = seq.out_degrees();
    if (variant == GraphVariant::UndirectedNoLoops) {
        check_variant(seq, variant);
        for (int d : a)
            if (d > 1) throw Error(ErrorCode::BadShape, "undirected base needs degrees in {0,1}");
        return count_all_ones_undirected(seq.edges());
    }
    if (!seq.balanced()) throw Error(ErrorCode::NotBalanced, "base count needs equal in/out sums");
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] > 1) throw Error(ErrorCode::BadShape, "out-degrees must be 0 or 1");
        if (variant == GraphVariant::DirectedNoLoops && b[i] == 1 && a[i] > 0)
            throw Error(ErrorCode::BadShape, "a loop-free base needs disjoint source and target nodes");
    }
    BigInt r = factorial(static_cast<int>(seq.edges()));
    for (int v : a) r /= factorial(v);
    return r;
}

struct PartitionTerm {
    int k = 0;
    BigInt binom;
    BigInt residual_count;
    BigInt contribution;
};

namespace detail {

// Sum of count_exact over the residual family: nodes i and j lose all in-degree,
// the sources lose s_n in {0,1,2} with exactly k twos and sum(s) = total.
class ResidualFamily {
public:
    ResidualFamily(const BidegreeSequence& seq, std::size_t i, std::size_t j, const CountOptions& opt)
        : b_(seq.out_degrees()), opt_(opt) {
        a_rest_ = seq.in_degrees();
        a_rest_[i] = 0;
        a_rest_[j] = 0;
        sorted_a_ = a_rest_;
        std::sort(sorted_a_.begin(), sorted_a_.end());
    }

    BigInt total(int sum_s, int twos) {
        BigInt acc = 0;
        std::vector<int> s(b_.size(), 0);
        walk(0, sum_s, twos, s, acc);
        return acc;
    }

private:
    void walk(std::size_t n, int left, int twos, std::vector<int>& s, BigInt& acc) {
        if (n == b_.size()) {
            if (left == 0 && twos == 0) acc += residual(s);
            return;
        }
        const int room = static_cast<int>(b_.size() - n);
        if (left > 2 * room || left < 2 * twos) return;
        for (int v = 0; v <= std::min(2, b_[n]); ++v) {
            if (v == 2 && twos == 0) continue;
            if (v > left) break;
            s[n] = v;
            walk(n + 1, left - v, twos - (v == 2), s, acc);
        }
        s[n] = 0;
    }

    BigInt residual(const std::vector<int>& s) {
        std::vector<int> b(b_.size());
        for (std::size_t n = 0; n < b.size(); ++n) b[n] = b_[n] - s[n];
        std::sort(b.begin(), b.end());
        std::string k;
        for (int v : b) append_u16(k, v);
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
        BigInt c = count_exact(BidegreeSequence(sorted_a_, b), GraphVariant::DirectedWithLoops, opt_);
        cache_.emplace(std::move(k), c);
        return c;
    }

    std::vector<int> b_, a_rest_, sorted_a_;
    CountOptions opt_;
    std::unordered_map<std::string, BigInt> cache_;
};

}  // namespace detail

inline void check_pair(const BidegreeSequence& seq, std::size_t i, std::size_t j) {
    if (i >= seq.size() || j >= seq.size()) throw Error(ErrorCode::BadIndex, "node index out of range");
    if (i == j) throw Error(ErrorCode::BadIndex, "node pair must be distinct");
}

inline std::vector<PartitionTerm> partition_expand(const BidegreeSequence& seq, std::size_t i, std::size_t j,
                                                   const CountOptions& opt = {}) {
    check_pair(seq, i, j);
    if (!seq.balanced()) throw Error(ErrorCode::NotBalanced, "partition identity needs equal in/out sums");
    if (seq.in_degree(j) > seq.in_degree(i)) std::swap(i, j);
    const int ai = seq.in_degree(i), aj = seq.in_degree(j);
    detail::ResidualFamily family(seq, i, j, opt);
    std::vector<PartitionTerm> terms;
    for (int k = 0; k <= aj; ++k) {
        PartitionTerm t;
        t.k = k;
        t.binom = binomial(ai + aj - 2 * k, aj - k);
        t.residual_count = family.total(ai + aj, k);
        t.contribution = t.binom * t.residual_count;
        terms.push_back(std::move(t));
    }
    return terms;
}

inline void require_in_heavy(const BidegreeSequence& seq) {
    if (seq.form() != SequenceForm::InHeavy)
        throw Error(ErrorCode::WrongForm, "expected in-sum = out-sum + 1");
}

// eta[k] for 0 <= k <= floor((a_i+a_j-1)/2); eta[0] = 1.
inline std::vector<Rational> eta_profile(const BidegreeSequence& seq, std::size_t i, std::size_t j,
                                         const CountOptions& opt = {}) {
    check_pair(seq, i, j);
    require_in_heavy(seq);
    const int M = seq.in_degree(i) + seq.in_degree(j) - 1;
    if (M < 0) throw Error(ErrorCode::ZeroDegreeAt, "both degrees are zero");
    detail::ResidualFamily family(seq, i, j, opt);
    BigInt g0 = family.total(M, 0);
    if (g0 == 0) throw Error(ErrorCode::EmptyX0, "residual family X_0 has no realizations");
    std::vector<Rational> eta{Rational(1)};
    for (int k = 1; 2 * k <= M; ++k) {
        BigInt falling = 1;
        for (int l = 0; l < 2 * k; ++l) falling *= M - l;
        eta.push_back(Rational(family.total(M, k)) / Rational(falling * g0));
    }
    return eta;
}

// Ratio assembled from an eta profile; entries beyond the profile count as 1.
inline Rational ratio_from_eta(int ai, int aj, const std::vector<Rational>& eta) {
    auto at = [&](int k) { return k < static_cast<int>(eta.size()) ? eta[k] : Rational(1); };
    Rational num = 0, den = 0;
    const int kmax = std::max(ai, aj) + 1;
    for (int k = 0; k <= kmax; ++k) {
        BigInt pn = 1, pd = 1;
        for (int l = 0; l < k; ++l) pn *= aj - l;
        for (int l = 1; l <= k; ++l) pn *= ai - l;
        for (int l = 1; l <= k; ++l) pd *= aj - l;
        for (int l = 0; l < k; ++l) pd *= ai - l;
        num += Rational(pn) * at(k);
        den += Rational(pd) * at(k);
    }
    if (den == 0 || aj == 0) throw Error(ErrorCode::DenominatorZero, "ratio undefined");
    return Rational(ai, aj) * num / den;
}

// count(d_{-i}) / count(d_{-j}) on the chosen side.
inline Rational ratio_exact(const BidegreeSequence& seq, std::size_t i, std::size_t j, Side side = Side::In,
                            GraphVariant variant = GraphVariant::DirectedWithLoops, const CountOptions& opt = {}) {
    check_pair(seq, i, j);
    if (side == Side::Out) {
        if (variant == GraphVariant::UndirectedNoLoops)
            throw Error(ErrorCode::UnsupportedVariant, "undirected sequences have no out side");
        return ratio_exact(seq.transposed(), i, j, Side::In, variant, opt);
    }
    require_in_heavy(seq);
    if (seq.in_degree(i) == 0 || seq.in_degree(j) == 0)
        throw Error(ErrorCode::ZeroDegreeAt, "degree at i or j is zero");
    BigInt num = count_exact(decrement(seq, i), variant, opt);
    BigInt den = count_exact(decrement(seq, j), variant, opt);
    if (den == 0) throw Error(ErrorCode::DenominatorZero, "count of d_{-j} is zero");
    return Rational(num) / Rational(den);
}

}  // namespace bidegree
