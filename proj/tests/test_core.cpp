#include "bidegree/core.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bidegree;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::BadArgument;
}

}  // namespace

TEST(Sequence, ValidationErrors) {
    EXPECT_EQ(code_of([] { BidegreeSequence({1, 2}, {1}); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of([] { BidegreeSequence({}, {}); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of([] { BidegreeSequence({-1, 2}, {1, 0}); }), ErrorCode::NegativeDegree);
    EXPECT_EQ(code_of([] { BidegreeSequence({3, 0}, {1, 0}); }), ErrorCode::SumMismatch);
    EXPECT_EQ(code_of([] { validate({1, 1}, {1, -1}); }), ErrorCode::NegativeDegree);
}

TEST(Sequence, FormAndAccessors) {
    BidegreeSequence s({2, 1, 2, 2}, {2, 2, 1, 1});
    EXPECT_EQ(s.form(), SequenceForm::InHeavy);
    EXPECT_EQ(s.transposed().form(), SequenceForm::OutHeavy);
    EXPECT_EQ(s.in_sum(), 7);
    EXPECT_EQ(s.out_sum(), 6);
    EXPECT_EQ(s.max_degree(), 2);
    EXPECT_FALSE(s.balanced());
    auto u = BidegreeSequence::undirected({1, 2, 1});
    EXPECT_EQ(u.in_degrees(), u.out_degrees());
    EXPECT_TRUE(u.balanced());
}

TEST(Sequence, Surgery) {
    BidegreeSequence s({1, 1}, {2, 0});
    auto d = decrement(s, 0);
    EXPECT_EQ(d.in_degrees(), (std::vector<int>{0, 1}));
    EXPECT_EQ(code_of([&] { decrement(d, 0); }), ErrorCode::ZeroDegree);
    EXPECT_EQ(code_of([&] { decrement(s, 5); }), ErrorCode::BadIndex);
    EXPECT_EQ(increment(d, 0), s);
    auto out = decrement(s, 0, Side::Out);
    EXPECT_EQ(out.out_degrees(), (std::vector<int>{1, 0}));
    auto p = padded(s, 4);
    EXPECT_EQ(p.size(), 4u);
    EXPECT_EQ(p.in_degrees(), (std::vector<int>{1, 1, 0, 0}));
}

TEST(Moments, PowerSums) {
    BidegreeSequence s({3, 1, 0}, {2, 2, 0});
    auto m = moments(s, 3);
    EXPECT_EQ(m.alpha[0], 3);
    EXPECT_EQ(m.alpha[1], 4);
    EXPECT_EQ(m.alpha[2], 10);
    EXPECT_EQ(m.alpha[3], 28);
    EXPECT_EQ(m.beta[3], 16);
    EXPECT_EQ(m.swapped().alpha, m.beta);
    EXPECT_EQ(code_of([&] { moments(s, 0); }), ErrorCode::BadOrder);
}

TEST(Graphical, AgreesWithEnumeration) {
    std::mt19937 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        std::vector<int> a(n), b(n);
        for (int& x : a) x = static_cast<int>(rng() % (n + 1));
        int sum = std::accumulate(a.begin(), a.end(), 0);
        // random composition of the same total for b
        std::fill(b.begin(), b.end(), 0);
        for (int k = 0; k < sum; ++k) ++b[rng() % n];
        BidegreeSequence s(a, b);
        EXPECT_EQ(is_graphical(s, GraphVariant::DirectedWithLoops), oracle::count_matrices(a, b, true) > 0);
        EXPECT_EQ(is_graphical(s, GraphVariant::DirectedNoLoops), oracle::count_matrices(a, b, false) > 0);
        ++checked;
    }
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        std::vector<int> d(n);
        for (int& x : d) x = static_cast<int>(rng() % n);
        auto s = BidegreeSequence::undirected(d);
        EXPECT_EQ(is_graphical(s, GraphVariant::UndirectedNoLoops), oracle::count_simple_graphs(d) > 0);
    }
    EXPECT_EQ(checked, 400);
}

TEST(Graphical, Basics) {
    EXPECT_FALSE(is_graphical(BidegreeSequence({2, 1}, {1, 1}), GraphVariant::DirectedWithLoops));
    EXPECT_TRUE(is_graphical(BidegreeSequence({1}, {1}), GraphVariant::DirectedWithLoops));
    EXPECT_FALSE(is_graphical(BidegreeSequence({1}, {1}), GraphVariant::DirectedNoLoops));
    EXPECT_EQ(code_of([] { is_graphical(BidegreeSequence({1, 0}, {0, 1}), GraphVariant::UndirectedNoLoops); }),
              ErrorCode::UnsupportedVariant);
}

TEST(Sparsity, Diagnostic) {
    BidegreeSequence s({2, 2, 2, 2}, {2, 2, 2, 2});
    auto d = sparsity_diagnostic(s);
    EXPECT_EQ(d.d_max, 2);
    EXPECT_EQ(d.S, 8);
    EXPECT_NEAR(d.effective_tau, 0.5 - std::log(2.0) / std::log(8.0), 1e-15);
    EXPECT_EQ(d.condition_A1, 4);
    EXPECT_TRUE(d.in_regime);
    EXPECT_EQ(code_of([] { sparsity_diagnostic(BidegreeSequence({1, 0}, {0, 1})); }), ErrorCode::DegenerateSequence);
}
