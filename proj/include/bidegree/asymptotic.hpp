#pragma once

#include "core.hpp"
#include "exact.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <vector>

namespace bidegree {

// Highest power sum the correction formulas touch (f^2 f(x-1) is a degree-9 polynomial).
inline constexpr int kCorrectionMoments = 9;

struct ExactCorrections {
    Rational epsilon;
    Rational epsilon1, epsilon2;
    Rational epsilon1_t9, epsilon2_t9, epsilon3;
    Rational eta1, eta2;
};

struct CorrectionTerms {
    double epsilon = 0;
    double epsilon1 = 0, epsilon2 = 0;
    double epsilon1_t9 = 0, epsilon2_t9 = 0, epsilon3 = 0;
    double eta1 = 0, eta2 = 0;
    ExactCorrections exact;
};

namespace detail {

using Poly = std::vector<Rational>;  // coefficient of x^k at index k

inline Poly poly_mul(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

inline Poly poly_shift_down(const Poly& p) {
    Poly r(p.size(), Rational(0));
    for (std::size_t m = 0; m < p.size(); ++m)
        for (std::size_t t = 0; t <= m; ++t) {
            Rational c = p[m] * Rational(binomial(static_cast<long long>(m), static_cast<long long>(t)));
            r[t] += (m - t) % 2 ? Rational(-c) : c;
        }
    return r;
}

inline Rational power_sum_eval(const Poly& p, const std::vector<BigInt>& moments) {
    Rational s = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] != 0) s += p[k] * Rational(moments.at(k));
    return s;
}

inline Rational nonzero(const Rational& q, const char* what) {
    if (q == 0) throw Error(ErrorCode::DenominatorZero, what);
    return q;
}

}  // namespace detail

// alpha/beta as in the in-side convention; side=Out swaps their roles.
inline CorrectionTerms correction_terms(const MomentProfile& profile, Side side = Side::In) {
    if (profile.max_order < kCorrectionMoments)
        throw Error(ErrorCode::InsufficientMoments,
                    "correction terms need power sums through order " + std::to_string(kCorrectionMoments));
    const auto& al = side == Side::In ? profile.alpha : profile.beta;
    const auto& be = side == Side::In ? profile.beta : profile.alpha;
    const Rational a1(al[1]), a2(al[2]), a3(al[3]);
    const Rational b1(be[1]), b2(be[2]), b3(be[3]), b4(be[4]);
    detail::nonzero(a1, "alpha_1 is zero");
    detail::nonzero(b1, "beta_1 is zero");

    ExactCorrections e;
    e.epsilon = (b2 - b1) / (b1 * b1);

    const Rational w = a2 / (a1 * a1);
    e.epsilon1 = (b2 + 2 * b3 * w) / detail::nonzero((b1 + b2 * w) * (b1 + b2 * w), "epsilon1 denominator");
    const Rational b1_4 = b1 * b1 * b1 * b1;
    e.epsilon2 = (b2 - b1) * (b2 - b1) / (2 * b1_4) + (b3 * b1 - 2 * b2 * b2) / b1_4;

    const Rational v = b2 / (a1 * a1);
    e.eta1 = (a2 + 2 * a3 * v) / detail::nonzero((a1 + a2 * v) * (a1 + a2 * v), "eta1 denominator");
    const Rational a1_4 = a1 * a1 * a1 * a1;
    e.eta2 = (a2 - a1) * (a2 - a1) / (2 * a1_4) + (a3 * a1 - 2 * a2 * a2) / a1_4;

    const detail::Poly f{Rational(0), Rational(1), e.eta1, e.eta1 * e.eta1 / 2 - e.eta2};
    const detail::Poly fm = detail::poly_shift_down(f);
    const detail::Poly ffm = detail::poly_mul(f, fm);
    const detail::Poly f2 = detail::poly_mul(f, f);
    const detail::Poly f2fm = detail::poly_mul(f2, fm);
    const Rational Ef = detail::power_sum_eval(f, be);
    const Rational Effm = detail::power_sum_eval(ffm, be);
    const Rational Ef2 = detail::power_sum_eval(f2, be);
    const Rational Ef2fm = detail::power_sum_eval(f2fm, be);
    detail::nonzero(Ef, "E_b[f] is zero");
    const Rational Ef_2 = Ef * Ef;
    const Rational Ef_4 = Ef_2 * Ef_2;
    e.epsilon1_t9 = Effm / Ef_2 + (Effm * Effm - 5 * Ef2 * Effm + 3 * Ef2fm * Ef) / Ef_4;
    e.epsilon2_t9 = (-2 * Ef2 * Effm + Effm * Effm / 2 + Ef2fm * Ef) / Ef_4;

    const Rational c107(-107, 3), c11(-11, 2);
    const Rational b1_6 = b1_4 * b1 * b1;
    e.epsilon3 = (c107 * b2 * b2 * b2 + c11 * b1 * b2 * b3 + b2 * b4) / b1_6;

    CorrectionTerms t;
    t.epsilon = to_double(e.epsilon);
    t.epsilon1 = to_double(e.epsilon1);
    t.epsilon2 = to_double(e.epsilon2);
    t.epsilon1_t9 = to_double(e.epsilon1_t9);
    t.epsilon2_t9 = to_double(e.epsilon2_t9);
    t.epsilon3 = to_double(e.epsilon3);
    t.eta1 = to_double(e.eta1);
    t.eta2 = to_double(e.eta2);
    t.exact = std::move(e);
    return t;
}

// Exponent of the correction factor exp(.) multiplying x_i/x_j.
inline Rational ratio_exponent(int xi, int xj, int order, const ExactCorrections& e) {
    const Rational di(xi), dj(xj);
    switch (order) {
        case 1: return 0;
        case 2: return (di - dj) * e.epsilon;
        case 3: return (di - dj) * e.epsilon1 - (di * di - dj * dj) * e.epsilon2;
        case 4:
            return (di - dj) * e.epsilon1_t9 - (di * di - dj * dj) * e.epsilon2_t9 +
                   (di * di * di - dj * dj * dj) * e.epsilon3;
        default: throw Error(ErrorCode::BadOrder, "order must be 1..4");
    }
}

inline void check_order(int order) {
    if (order < 1 || order > 4) throw Error(ErrorCode::BadOrder, "order must be 1..4");
}

inline double log_ratio_estimate(const BidegreeSequence& seq, std::size_t i, std::size_t j, int order,
                                 Side side = Side::In) {
    check_order(order);
    check_pair(seq, i, j);
    const SequenceForm want = side == Side::In ? SequenceForm::InHeavy : SequenceForm::OutHeavy;
    if (seq.form() != want)
        throw Error(ErrorCode::WrongForm, side == Side::In ? "expected in-sum = out-sum + 1"
                                                           : "expected out-sum = in-sum + 1");
    const int xi = seq.degrees(side)[i], xj = seq.degrees(side)[j];
    if (xi == 0) throw Error(ErrorCode::ZeroDegreeAt, "degree at i is zero");
    if (xj == 0) throw Error(ErrorCode::ZeroDegreeAt, "degree at j is zero");
    double lead = std::log(static_cast<double>(xi)) - std::log(static_cast<double>(xj));
    if (order == 1) return lead;
    auto terms = correction_terms(moments(seq, kCorrectionMoments), side);
    return lead + to_double(ratio_exponent(xi, xj, order, terms.exact));
}

inline double ratio_estimate(const BidegreeSequence& seq, std::size_t i, std::size_t j, int order,
                             Side side = Side::In) {
    return std::exp(log_ratio_estimate(seq, i, j, order, side));
}

struct LogEstimate {
    double log_value = 0;
    int order = 0;
    std::vector<Side> side_conventions;
    bool graphical = true;
    // Exact factorial prefactor and the log of the multiplicative correction applied to it.
    Rational leading = 0;
    double log_correction = 0;

    double value() const { return std::exp(log_value); }
    std::optional<Rational> exact_value() const {
        if (log_correction == 0) return leading;
        return std::nullopt;
    }
};

inline double log_factorial(long long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline LogEstimate count_estimate_closed(const BidegreeSequence& seq) {
    if (!seq.balanced()) throw Error(ErrorCode::NotBalanced, "count estimate needs equal in/out sums");
    const long long S = seq.edges();
    LogEstimate r;
    r.order = 1;
    r.graphical = is_graphical(seq, GraphVariant::DirectedWithLoops);
    BigInt den = 1;
    double log_den = 0;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        den *= factorial(seq.in_degree(n)) * factorial(seq.out_degree(n));
        log_den += log_factorial(seq.in_degree(n)) + log_factorial(seq.out_degree(n));
    }
    r.leading = Rational(factorial(static_cast<int>(S))) / Rational(den);
    auto m = moments(seq, 2);
    if (S > 0) {
        Rational corr = -Rational((m.alpha[2] - m.alpha[1]) * (m.beta[2] - m.beta[1])) / Rational(2 * BigInt(S) * S);
        r.log_correction = to_double(corr);
    }
    r.log_value = log_factorial(S) - log_den + r.log_correction;
    return r;
}

enum class MomentPolicy { Auto, Frozen, PerStep };

struct TelescopeStep {
    std::size_t donor;   // node whose out-degree drops 1 -> 0
    std::size_t raised;  // node whose out-degree rises by one
    int from;            // out-degree of the raised node before the step
};

struct TelescopePlan {
    BidegreeSequence start;  // padded, out-degrees in {0,1}
    std::vector<TelescopeStep> steps;
};

// Padded to max(N,S) nodes; start has one out-edge at every node with b_n >= 1 plus
// enough zero-target donors. Nodes are then raised 1 -> b_n in input order.
inline TelescopePlan telescope_plan(const BidegreeSequence& seq) {
    if (!seq.balanced()) throw Error(ErrorCode::NotBalanced, "telescoping needs equal in/out sums");
    const std::size_t L = std::max<std::size_t>(seq.size(), static_cast<std::size_t>(seq.edges()));
    auto target = padded(seq, L);
    const auto& b = target.out_degrees();
    std::vector<int> c(L, 0);
    long long ones = 0;
    for (std::size_t n = 0; n < L; ++n)
        if (b[n] >= 1) {
            c[n] = 1;
            ++ones;
        }
    std::vector<std::size_t> donors;
    for (std::size_t n = 0; n < L && ones < seq.edges(); ++n)
        if (b[n] == 0) {
            c[n] = 1;
            donors.push_back(n);
            ++ones;
        }
    TelescopePlan plan{BidegreeSequence(target.in_degrees(), c), {}};
    std::size_t next = 0;
    for (std::size_t n = 0; n < L; ++n)
        for (int from = 1; from < b[n]; ++from) plan.steps.push_back({donors.at(next++), n, from});
    return plan;
}

struct TelescopeOptions {
    MomentPolicy moments = MomentPolicy::Auto;
};

inline LogEstimate telescope_count(const BidegreeSequence& seq, int order, const TelescopeOptions& opt = {}) {
    check_order(order);
    auto plan = telescope_plan(seq);
    LogEstimate r;
    r.order = order;
    r.graphical = is_graphical(seq, GraphVariant::DirectedWithLoops);
    const long long S = seq.edges();
    BigInt den = 1;
    double log_base = log_factorial(S);
    for (int v : seq.in_degrees()) {
        den *= factorial(v);
        log_base -= log_factorial(v);
    }
    r.leading = Rational(factorial(static_cast<int>(S))) / Rational(den);
    for (int v : seq.out_degrees()) r.leading /= Rational(factorial(v));

    const bool frozen = opt.moments == MomentPolicy::Frozen || (opt.moments == MomentPolicy::Auto && order <= 2);
    std::optional<ExactCorrections> fixed;
    auto parent_of = [&](const std::vector<int>& c, std::size_t raised) {
        auto p = c;
        ++p[raised];
        return BidegreeSequence(plan.start.in_degrees(), std::move(p));
    };
    if (order > 1 && frozen) {
        // Out-side moments held at the target; the in side never changes.
        auto target = padded(seq, plan.start.size());
        fixed = correction_terms(moments(target, kCorrectionMoments), Side::Out).exact;
    }

    std::vector<int> c = plan.start.out_degrees();
    std::map<std::vector<int>, ExactCorrections> cache;
    double log_steps = 0, log_corr = 0;
    for (const auto& st : plan.steps) {
        const int xi = 1, xj = st.from + 1;
        log_steps += -std::log(static_cast<double>(xj));
        if (order > 1) {
            const ExactCorrections* e = nullptr;
            if (fixed) {
                e = &*fixed;
            } else {
                auto hist = c;
                ++hist[st.raised];
                std::sort(hist.begin(), hist.end());
                auto it = cache.find(hist);
                if (it == cache.end()) {
                    auto parent = parent_of(c, st.raised);
                    it = cache.emplace(hist, correction_terms(moments(parent, kCorrectionMoments), Side::Out).exact).first;
                }
                e = &it->second;
            }
            log_corr += to_double(ratio_exponent(xi, xj, order, *e));
        }
        r.side_conventions.push_back(Side::Out);
        ++c[st.raised];
        --c[st.donor];
    }
    // log(S!/prod a!) - sum log b! comes out of the step factors 1/(from+1).
    r.log_correction = log_corr;
    r.log_value = log_base + log_steps + log_corr;
    return r;
}

struct TelescopeLimits {
    std::size_t max_nodes = 6;
    long long max_edges = 10;
};

inline BigInt telescope_exact(const BidegreeSequence& seq, GraphVariant variant = GraphVariant::DirectedWithLoops,
                              const TelescopeLimits& lim = {}) {
    if (!seq.balanced()) throw Error(ErrorCode::NotBalanced, "telescoping needs equal in/out sums");
    if (seq.size() > lim.max_nodes || seq.edges() > lim.max_edges)
        throw Error(ErrorCode::TooLarge, "exact telescoping limited to desk scale");
    if (variant != GraphVariant::DirectedWithLoops)
        throw Error(ErrorCode::UnsupportedVariant, "exact telescoping is defined for directed graphs with loops");
    auto plan = telescope_plan(seq);
    Rational value(count_all_ones_base(plan.start));
    std::vector<int> c = plan.start.out_degrees();
    for (const auto& st : plan.steps) {
        auto p = c;
        ++p[st.raised];
        BidegreeSequence parent(plan.start.in_degrees(), p);
        value *= ratio_exact(parent, st.donor, st.raised, Side::Out);
        ++c[st.raised];
        --c[st.donor];
    }
    if (denominator(value) != 1) throw Error(ErrorCode::BadArgument, "telescoped product is not an integer");
    return numerator(value);
}

}  // namespace bidegree
