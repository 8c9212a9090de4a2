#pragma once

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace bidegree {

using Rng = std::mt19937_64;

class LabeledDigraph {
public:
    LabeledDigraph() = default;
    LabeledDigraph(std::size_t n, GraphVariant variant)
        : n_(n), variant_(variant), adj_(n * n, 0), in_(n, 0), out_(n, 0) {}

    std::size_t size() const { return n_; }
    GraphVariant variant() const { return variant_; }
    bool has_edge(std::size_t u, std::size_t v) const { return adj_[u * n_ + v] != 0; }
    const std::vector<int>& in_degrees() const { return in_; }
    const std::vector<int>& out_degrees() const { return out_; }
    const std::vector<std::uint8_t>& adjacency() const { return adj_; }

    bool admissible(std::size_t u, std::size_t v) const {
        return u < n_ && v < n_ && !has_edge(u, v) && (u != v || variant_ == GraphVariant::DirectedWithLoops);
    }

    void add_edge(std::size_t u, std::size_t v) {
        if (!admissible(u, v)) throw Error(ErrorCode::BadArgument, "edge not admissible");
        set(u, v, 1);
    }

    void remove_edge(std::size_t u, std::size_t v) {
        if (!has_edge(u, v)) throw Error(ErrorCode::BadArgument, "edge absent");
        set(u, v, -1);
    }

    // Undirected edges are listed once with u < v.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> e;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = variant_ == GraphVariant::UndirectedNoLoops ? u + 1 : 0; v < n_; ++v)
                if (has_edge(u, v)) e.emplace_back(static_cast<int>(u), static_cast<int>(v));
        return e;
    }

    BidegreeSequence degree_sequence() const { return BidegreeSequence(in_, out_); }

    bool consistent() const {
        std::vector<int> in(n_, 0), out(n_, 0);
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v) {
                const auto x = adj_[u * n_ + v];
                if (x > 1) return false;
                if (!x) continue;
                if (u == v && variant_ != GraphVariant::DirectedWithLoops) return false;
                if (variant_ == GraphVariant::UndirectedNoLoops && !has_edge(v, u)) return false;
                ++out[u];
                ++in[v];
            }
        return in == in_ && out == out_;
    }

    friend bool operator==(const LabeledDigraph& x, const LabeledDigraph& y) {
        return x.n_ == y.n_ && x.variant_ == y.variant_ && x.adj_ == y.adj_;
    }

private:
    void set(std::size_t u, std::size_t v, int d) {
        adj_[u * n_ + v] = d > 0;
        out_[u] += d;
        in_[v] += d;
        if (variant_ == GraphVariant::UndirectedNoLoops) {
            adj_[v * n_ + u] = d > 0;
            out_[v] += d;
            in_[u] += d;
        }
    }

    std::size_t n_ = 0;
    GraphVariant variant_ = GraphVariant::DirectedWithLoops;
    std::vector<std::uint8_t> adj_;
    std::vector<int> in_, out_;
};

namespace detail {

inline std::vector<std::size_t> shuffled(std::size_t n, Rng& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace detail

// Greedy realization: Ryser for bipartite margins, Kleitman-Wang without loops,
// Havel-Hakimi for undirected. The seed only breaks ties.
inline LabeledDigraph realize(const BidegreeSequence& seq, GraphVariant variant, std::uint64_t seed = 0) {
    if (!is_graphical(seq, variant)) throw Error(ErrorCode::NotGraphical, "sequence has no realization");
    Rng rng(seed);
    const std::size_t n = seq.size();
    LabeledDigraph g(n, variant);
    std::vector<int> rin = seq.in_degrees(), rout = seq.out_degrees();
    const auto rank = detail::shuffled(n, rng);
    auto fail = [] { return Error(ErrorCode::NotGraphical, "greedy realization failed"); };

    if (variant == GraphVariant::UndirectedNoLoops) {
        std::vector<int> d = rin;
        while (true) {
            std::size_t u = n;
            for (std::size_t x = 0; x < n; ++x)
                if (d[x] > 0 && (u == n || d[x] > d[u] || (d[x] == d[u] && rank[x] < rank[u]))) u = x;
            if (u == n) break;
            std::vector<std::size_t> cand;
            for (std::size_t x = 0; x < n; ++x)
                if (x != u && d[x] > 0) cand.push_back(x);
            std::sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) {
                return d[x] != d[y] ? d[x] > d[y] : rank[x] < rank[y];
            });
            if (static_cast<int>(cand.size()) < d[u]) throw fail();
            for (int m = 0; m < d[u]; ++m) {
                g.add_edge(u, cand[m]);
                --d[cand[m]];
            }
            d[u] = 0;
        }
        return g;
    }

    const auto order = detail::shuffled(n, rng);
    for (std::size_t u : order) {
        if (rout[u] == 0) continue;
        std::vector<std::size_t> cand;
        for (std::size_t v = 0; v < n; ++v)
            if (rin[v] > 0 && (v != u || variant == GraphVariant::DirectedWithLoops)) cand.push_back(v);
        std::sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) {
            if (rin[x] != rin[y]) return rin[x] > rin[y];
            if (variant == GraphVariant::DirectedNoLoops && rout[x] != rout[y]) return rout[x] > rout[y];
            return rank[x] < rank[y];
        });
        if (static_cast<int>(cand.size()) < rout[u]) throw fail();
        for (int m = 0; m < rout[u]; ++m) {
            g.add_edge(u, cand[m]);
            --rin[cand[m]];
        }
        rout[u] = 0;
    }
    if (!std::all_of(rin.begin(), rin.end(), [](int x) { return x == 0; })) throw fail();
    return g;
}

struct ChainOptions {
    bool triangle_moves = false;
    static ChainOptions defaults(GraphVariant v) { return {v == GraphVariant::DirectedNoLoops}; }
};

// Lazy double-edge-swap chain; optional 3-cycle reversal for loopless digraphs.
class SwitchChain {
public:
    SwitchChain(LabeledDigraph g, std::uint64_t seed, ChainOptions opt)
        : g_(std::move(g)), rng_(seed), opt_(opt), pos_(g_.size() * g_.size(), -1) {
        for (auto [u, v] : g_.edges()) {
            pos_[index(u, v)] = static_cast<int>(edges_.size());
            edges_.emplace_back(u, v);
        }
    }
    SwitchChain(LabeledDigraph g, std::uint64_t seed) : SwitchChain(g, seed, ChainOptions::defaults(g.variant())) {}

    const LabeledDigraph& graph() const { return g_; }

    bool step() {
        if (opt_.triangle_moves && g_.variant() == GraphVariant::DirectedNoLoops && coin(rng_)) return triangle();
        return swap();
    }

    void run(long long steps) {
        for (long long s = 0; s < steps; ++s) step();
    }

private:
    std::size_t index(std::size_t u, std::size_t v) const { return u * g_.size() + v; }

    bool swap() {
        const std::size_t E = edges_.size();
        if (E < 2) return false;
        // independent picks: i == j holds, which keeps the chain aperiodic
        std::uniform_int_distribution<std::size_t> pick(0, E - 1);
        const std::size_t i = pick(rng_), j = pick(rng_);
        if (i == j) return false;
        auto [u, v] = edges_[i];
        auto [x, y] = edges_[j];
        if (g_.variant() == GraphVariant::UndirectedNoLoops && coin(rng_)) std::swap(x, y);
        if (u == x || v == y) return false;
        if (!g_.admissible(u, y) || !g_.admissible(x, v)) return false;
        g_.remove_edge(u, v);
        g_.remove_edge(x, y);
        g_.add_edge(u, y);
        g_.add_edge(x, v);
        relink(i, u, v, u, y);
        relink(j, x, y, x, v);
        return true;
    }

    void relink(std::size_t slot, int ou, int ov, int u, int v) {
        if (pos_[index(ou, ov)] == static_cast<int>(slot)) pos_[index(ou, ov)] = -1;
        if (g_.variant() == GraphVariant::UndirectedNoLoops && pos_[index(ov, ou)] == static_cast<int>(slot))
            pos_[index(ov, ou)] = -1;
        edges_[slot] = {u, v};
        pos_[index(u, v)] = static_cast<int>(slot);
        if (g_.variant() == GraphVariant::UndirectedNoLoops) pos_[index(v, u)] = static_cast<int>(slot);
    }

    bool triangle() {
        const std::size_t E = edges_.size();
        if (E == 0) return false;
        std::uniform_int_distribution<std::size_t> pick(0, E - 1), node(0, g_.size() - 1);
        const std::size_t i = pick(rng_);
        const std::size_t w = node(rng_);
        auto [u, v] = edges_[i];
        if (w == static_cast<std::size_t>(u) || w == static_cast<std::size_t>(v)) return false;
        if (!g_.has_edge(v, w) || !g_.has_edge(w, u)) return false;
        if (g_.has_edge(v, u) || g_.has_edge(w, v) || g_.has_edge(u, w)) return false;
        const int s1 = static_cast<int>(i), s2 = pos_[index(v, w)], s3 = pos_[index(w, u)];
        g_.remove_edge(u, v);
        g_.remove_edge(v, w);
        g_.remove_edge(w, u);
        g_.add_edge(v, u);
        g_.add_edge(w, v);
        g_.add_edge(u, w);
        relink(s1, u, v, v, u);
        relink(s2, v, static_cast<int>(w), static_cast<int>(w), v);
        relink(s3, static_cast<int>(w), u, u, static_cast<int>(w));
        return true;
    }

    LabeledDigraph g_;
    Rng rng_;
    ChainOptions opt_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> pos_;
    std::bernoulli_distribution coin{0.5};
};

// One chain step on g using rng; returns the (possibly unchanged) graph.
inline LabeledDigraph switch_step(const LabeledDigraph& g, Rng& rng) {
    SwitchChain chain(g, rng());
    chain.step();
    return chain.graph();
}

inline std::vector<LabeledDigraph> sample_uniform(const BidegreeSequence& seq, GraphVariant variant, long long burn_in,
                                                  long long thin, std::size_t n_samples, std::uint64_t seed,
                                                  std::optional<ChainOptions> opt = std::nullopt) {
    if (burn_in < 1 || thin < 1) throw Error(ErrorCode::BadArgument, "burn-in and thinning must be at least 1");
    auto start = realize(seq, variant, seed);
    SwitchChain chain(std::move(start), seed ^ 0x9e3779b97f4a7c15ULL, opt.value_or(ChainOptions::defaults(variant)));
    std::vector<LabeledDigraph> out;
    if (n_samples == 0) return out;
    out.reserve(n_samples);
    chain.run(burn_in);
    for (std::size_t s = 0; s < n_samples; ++s) {
        chain.run(thin);
        out.push_back(chain.graph());
    }
    return out;
}

struct NeighborHistogram {
    std::map<int, long long> counts;
    long long samples = 0;
};

inline NeighborHistogram common_neighbor_stats(std::size_t i, std::size_t j, Side direction,
                                               const std::vector<LabeledDigraph>& samples) {
    NeighborHistogram h;
    for (const auto& g : samples) {
        if (i >= g.size() || j >= g.size()) throw Error(ErrorCode::BadIndex, "node index out of range");
        int k = 0;
        for (std::size_t v = 0; v < g.size(); ++v) {
            if (direction == Side::Out ? (g.has_edge(i, v) && g.has_edge(j, v)) : (g.has_edge(v, i) && g.has_edge(v, j)))
                ++k;
        }
        ++h.counts[k];
        ++h.samples;
    }
    return h;
}

struct EmpiricalRatio {
    double estimate = 0;
    double std_error = 0;
    long long hits_i = 0, hits_j = 0, samples = 0;
};

// Samples the balanced extension (a, b) + one node with out-degree 1; the target t of its
// edge is node t's decrement, so hits at i versus j estimate count(d_{-i}) / count(d_{-j}).
inline EmpiricalRatio estimate_ratio_empirical(const BidegreeSequence& seq, std::size_t i, std::size_t j,
                                               std::size_t samples, std::uint64_t seed, long long burn_in = 1000,
                                               long long thin = 0,
                                               GraphVariant variant = GraphVariant::DirectedWithLoops) {
    if (i >= seq.size() || j >= seq.size() || i == j) throw Error(ErrorCode::BadIndex, "bad node pair");
    if (seq.form() != SequenceForm::InHeavy) throw Error(ErrorCode::WrongForm, "expected in-sum = out-sum + 1");
    if (variant == GraphVariant::UndirectedNoLoops)
        throw Error(ErrorCode::UnsupportedVariant, "empirical ratios need a directed variant");
    for (std::size_t t : {i, j}) {
        if (seq.in_degree(t) == 0 || !is_graphical(decrement(seq, t), variant))
            throw Error(ErrorCode::NotGraphical, "decremented sequence at node " + std::to_string(t) + " not graphical");
    }
    auto a = seq.in_degrees();
    auto b = seq.out_degrees();
    a.push_back(0);
    b.push_back(1);
    BidegreeSequence ext(a, b);
    const std::size_t extra = seq.size();
    if (thin <= 0) thin = std::max<long long>(10, 2 * ext.edges());
    auto draws = sample_uniform(ext, variant, burn_in, thin, samples, seed);
    EmpiricalRatio r;
    r.samples = static_cast<long long>(samples);
    for (const auto& g : draws) {
        if (g.has_edge(extra, i)) ++r.hits_i;
        if (g.has_edge(extra, j)) ++r.hits_j;
    }
    const double m = static_cast<double>(r.hits_i + r.hits_j);
    if (r.hits_j == 0) {
        r.estimate = r.hits_i ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
        r.std_error = std::numeric_limits<double>::infinity();
        return r;
    }
    const double p = r.hits_i / m;
    r.estimate = static_cast<double>(r.hits_i) / static_cast<double>(r.hits_j);
    r.std_error = std::sqrt(p * (1 - p) / m) / ((1 - p) * (1 - p));
    if (r.hits_i == 0) r.std_error = 1.0 / m / ((1 - p) * (1 - p));
    return r;
}

}  // namespace bidegree
