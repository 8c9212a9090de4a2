#pragma once

#include "bigint.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bidegree {

enum class ErrorCode {
    LengthMismatch,
    NegativeDegree,
    SumMismatch,
    UnsupportedVariant,
    ZeroDegree,
    DegenerateSequence,
    TooLarge,
    NotBalanced,
    WrongForm,
    ShapeMismatch,
    BadShape,
    EmptyX0,
    DenominatorZero,
    InsufficientMoments,
    ZeroDegreeAt,
    BadOrder,
    NotGraphical,
    BadK,
    BadIndex,
    BadArgument,
    ParseError,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NegativeDegree: return "NegativeDegree";
        case ErrorCode::SumMismatch: return "SumMismatch";
        case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
        case ErrorCode::ZeroDegree: return "ZeroDegree";
        case ErrorCode::DegenerateSequence: return "DegenerateSequence";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NotBalanced: return "NotBalanced";
        case ErrorCode::WrongForm: return "WrongForm";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::BadShape: return "BadShape";
        case ErrorCode::EmptyX0: return "EmptyX0";
        case ErrorCode::DenominatorZero: return "DenominatorZero";
        case ErrorCode::InsufficientMoments: return "InsufficientMoments";
        case ErrorCode::ZeroDegreeAt: return "ZeroDegreeAt";
        case ErrorCode::BadOrder: return "BadOrder";
        case ErrorCode::NotGraphical: return "NotGraphical";
        case ErrorCode::BadK: return "BadK";
        case ErrorCode::BadIndex: return "BadIndex";
        case ErrorCode::BadArgument: return "BadArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class GraphVariant { DirectedWithLoops, DirectedNoLoops, UndirectedNoLoops };
enum class Side { In, Out };
enum class SequenceForm { Balanced, InHeavy, OutHeavy };

inline const char* variant_name(GraphVariant v) {
    switch (v) {
        case GraphVariant::DirectedWithLoops: return "directed-loops";
        case GraphVariant::DirectedNoLoops: return "directed-noloops";
        case GraphVariant::UndirectedNoLoops: return "undirected";
    }
    return "?";
}

// Paired in-degrees a and out-degrees b. Entry i of each vector belongs to node i.
class BidegreeSequence {
public:
    BidegreeSequence() = default;

    BidegreeSequence(std::vector<int> in_degrees, std::vector<int> out_degrees)
        : a_(std::move(in_degrees)), b_(std::move(out_degrees)) {
        if (a_.size() != b_.size())
            throw Error(ErrorCode::LengthMismatch, "in/out vectors differ in length");
        if (a_.empty()) throw Error(ErrorCode::LengthMismatch, "empty sequence");
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (a_[i] < 0 || b_[i] < 0)
                throw Error(ErrorCode::NegativeDegree, "negative degree at node " + std::to_string(i));
        sa_ = std::accumulate(a_.begin(), a_.end(), 0LL);
        sb_ = std::accumulate(b_.begin(), b_.end(), 0LL);
        if (sa_ - sb_ > 1 || sb_ - sa_ > 1)
            throw Error(ErrorCode::SumMismatch,
                        "in-sum " + std::to_string(sa_) + " and out-sum " + std::to_string(sb_) +
                            " differ by more than one");
    }

    static BidegreeSequence undirected(std::vector<int> degrees) {
        auto copy = degrees;
        return BidegreeSequence(std::move(degrees), std::move(copy));
    }

    const std::vector<int>& in_degrees() const { return a_; }
    const std::vector<int>& out_degrees() const { return b_; }
    const std::vector<int>& degrees(Side s) const { return s == Side::In ? a_ : b_; }
    int in_degree(std::size_t i) const { return a_.at(i); }
    int out_degree(std::size_t i) const { return b_.at(i); }
    std::size_t size() const { return a_.size(); }
    long long in_sum() const { return sa_; }
    long long out_sum() const { return sb_; }
    long long edges() const { return sa_; }

    SequenceForm form() const {
        if (sa_ == sb_) return SequenceForm::Balanced;
        return sa_ > sb_ ? SequenceForm::InHeavy : SequenceForm::OutHeavy;
    }
    bool balanced() const { return sa_ == sb_; }

    int max_degree() const {
        int m = 0;
        for (std::size_t i = 0; i < a_.size(); ++i) m = std::max({m, a_[i], b_[i]});
        return m;
    }

    BidegreeSequence transposed() const { return BidegreeSequence(b_, a_); }

    friend bool operator==(const BidegreeSequence& x, const BidegreeSequence& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

private:
    std::vector<int> a_, b_;
    long long sa_ = 0, sb_ = 0;
};

inline const char* form_name(SequenceForm f) {
    switch (f) {
        case SequenceForm::Balanced: return "balanced";
        case SequenceForm::InHeavy:
        case SequenceForm::OutHeavy: return "ratio-form";
    }
    return "?";
}

inline BidegreeSequence validate(const std::vector<long long>& raw_in, const std::vector<long long>& raw_out) {
    if (raw_in.size() != raw_out.size())
        throw Error(ErrorCode::LengthMismatch, "in/out vectors differ in length");
    std::vector<int> a, b;
    for (std::size_t i = 0; i < raw_in.size(); ++i) {
        if (raw_in[i] < 0 || raw_out[i] < 0)
            throw Error(ErrorCode::NegativeDegree, "negative degree at node " + std::to_string(i));
        if (raw_in[i] > 1000000 || raw_out[i] > 1000000)
            throw Error(ErrorCode::TooLarge, "degree exceeds 10^6 at node " + std::to_string(i));
        a.push_back(static_cast<int>(raw_in[i]));
        b.push_back(static_cast<int>(raw_out[i]));
    }
    return BidegreeSequence(std::move(a), std::move(b));
}

inline void check_variant(const BidegreeSequence& seq, GraphVariant variant) {
    if (variant == GraphVariant::UndirectedNoLoops && seq.in_degrees() != seq.out_degrees())
        throw Error(ErrorCode::UnsupportedVariant, "undirected variant needs identical in/out degrees");
}

struct MomentProfile {
    std::vector<BigInt> alpha;  // alpha[k] = sum a_i^k, alpha[0] = N
    std::vector<BigInt> beta;
    int max_order = 0;

    MomentProfile swapped() const { return {beta, alpha, max_order}; }
};

inline BigInt power_sum(const std::vector<int>& v, int k) {
    BigInt s = 0;
    for (int x : v) s += boost::multiprecision::pow(BigInt(x), static_cast<unsigned>(k));
    return s;
}

inline MomentProfile moments(const BidegreeSequence& seq, int max_order) {
    if (max_order < 1) throw Error(ErrorCode::BadOrder, "max_order must be at least 1");
    MomentProfile p;
    p.max_order = max_order;
    for (int k = 0; k <= max_order; ++k) {
        p.alpha.push_back(power_sum(seq.in_degrees(), k));
        p.beta.push_back(power_sum(seq.out_degrees(), k));
    }
    return p;
}

namespace detail {

inline std::vector<int> sorted_desc(std::vector<int> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

// Gale-Ryser: rows b, columns a.
inline bool gale_ryser(const std::vector<int>& a, const std::vector<int>& b) {
    auto rows = sorted_desc(b);
    long long lhs = 0;
    for (std::size_t k = 1; k <= rows.size(); ++k) {
        lhs += rows[k - 1];
        long long rhs = 0;
        for (int x : a) rhs += std::min<long long>(x, static_cast<long long>(k));
        if (lhs > rhs) return false;
    }
    return true;
}

// Fulkerson-Chen-Anstee for zero-diagonal 0-1 matrices.
inline bool fulkerson(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        if (b[x] != b[y]) return b[x] > b[y];
        return a[x] > a[y];
    });
    long long lhs = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        lhs += b[idx[k - 1]];
        long long rhs = 0;
        for (std::size_t t = 0; t < n; ++t) {
            long long cap = t < k ? static_cast<long long>(k) - 1 : static_cast<long long>(k);
            rhs += std::min<long long>(a[idx[t]], cap);
        }
        if (lhs > rhs) return false;
    }
    return true;
}

inline bool erdos_gallai(const std::vector<int>& deg) {
    auto d = sorted_desc(deg);
    long long total = std::accumulate(d.begin(), d.end(), 0LL);
    if (total % 2) return false;
    const long long n = static_cast<long long>(d.size());
    long long lhs = 0;
    for (long long k = 1; k <= n; ++k) {
        lhs += d[k - 1];
        long long rhs = k * (k - 1);
        for (long long t = k; t < n; ++t) rhs += std::min<long long>(d[t], k);
        if (lhs > rhs) return false;
    }
    return true;
}

}  // namespace detail

inline bool is_graphical(const BidegreeSequence& seq, GraphVariant variant) {
    check_variant(seq, variant);
    if (!seq.balanced()) return false;
    const auto& a = seq.in_degrees();
    const auto& b = seq.out_degrees();
    const int n = static_cast<int>(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        int cap = variant == GraphVariant::DirectedWithLoops ? n : n - 1;
        if (a[i] > cap || b[i] > cap) return false;
    }
    switch (variant) {
        case GraphVariant::DirectedWithLoops: return detail::gale_ryser(a, b);
        case GraphVariant::DirectedNoLoops: return detail::fulkerson(a, b);
        case GraphVariant::UndirectedNoLoops: return detail::erdos_gallai(a);
    }
    return false;
}

inline BidegreeSequence decrement(const BidegreeSequence& seq, std::size_t node, Side side = Side::In) {
    if (node >= seq.size()) throw Error(ErrorCode::BadIndex, "node index out of range");
    auto a = seq.in_degrees();
    auto b = seq.out_degrees();
    auto& v = side == Side::In ? a : b;
    if (v[node] == 0) throw Error(ErrorCode::ZeroDegree, "degree of node " + std::to_string(node) + " is zero");
    --v[node];
    return BidegreeSequence(std::move(a), std::move(b));
}

inline BidegreeSequence increment(const BidegreeSequence& seq, std::size_t node, Side side = Side::In) {
    if (node >= seq.size()) throw Error(ErrorCode::BadIndex, "node index out of range");
    auto a = seq.in_degrees();
    auto b = seq.out_degrees();
    ++(side == Side::In ? a : b)[node];
    return BidegreeSequence(std::move(a), std::move(b));
}

inline BidegreeSequence padded(const BidegreeSequence& seq, std::size_t length) {
    auto a = seq.in_degrees();
    auto b = seq.out_degrees();
    if (length > a.size()) {
        a.resize(length, 0);
        b.resize(length, 0);
    }
    return BidegreeSequence(std::move(a), std::move(b));
}

struct SparsityDiagnostic {
    int d_max = 0;
    long long S = 0;
    double effective_tau = 0;
    long long condition_A1 = 0;
    bool in_regime = false;
};

inline SparsityDiagnostic sparsity_diagnostic(const BidegreeSequence& seq) {
    SparsityDiagnostic d;
    d.S = seq.edges();
    if (d.S < 2) throw Error(ErrorCode::DegenerateSequence, "edge total below 2");
    d.d_max = seq.max_degree();
    d.effective_tau = 0.5 - std::log(static_cast<double>(d.d_max)) / std::log(static_cast<double>(d.S));
    auto a = detail::sorted_desc(seq.in_degrees());
    auto b = detail::sorted_desc(seq.out_degrees());
    auto top = [](const std::vector<int>& v, int m) {
        long long s = 0;
        for (int k = 0; k < m && k < static_cast<int>(v.size()); ++k) s += v[k];
        return s;
    };
    d.condition_A1 = std::max(top(b, a[0]), top(a, b[0]));
    d.in_regime = d.effective_tau > 0;
    return d;
}

}  // namespace bidegree
