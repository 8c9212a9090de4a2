#pragma once

#include "bigint.hpp"

#include <cstdlib>
#include <initializer_list>
#include <string>
#include <vector>

namespace bidegree {

// Integer polynomial in the formal symbol r; coefficient of r^k at index k.
class IntPoly {
public:
    IntPoly() = default;
    IntPoly(long long c) : c_{c} { trim(); }
    IntPoly(std::initializer_list<long long> coeffs) : c_(coeffs) { trim(); }
    explicit IntPoly(std::vector<long long> coeffs) : c_(std::move(coeffs)) { trim(); }

    // r - c
    static IntPoly r_minus(long long c) { return IntPoly{-c, 1}; }

    int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    long long coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : 0; }
    const std::vector<long long>& coeffs() const { return c_; }

    BigInt eval(long long r) const {
        BigInt v = 0;
        for (std::size_t k = c_.size(); k-- > 0;) v = v * r + c_[k];
        return v;
    }

    IntPoly operator-() const {
        IntPoly p = *this;
        for (auto& x : p.c_) x = -x;
        return p;
    }

    IntPoly& operator+=(const IntPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }

    friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
    friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a += -b; }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<long long> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(r));
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

    // "1", "-3", "(r-2)", "-(4r-10)", "(2r^2-15r+21)"
    std::string str() const {
        if (c_.empty()) return "0";
        if (degree() == 0) return std::to_string(c_[0]);
        if (c_.back() < 0) return "-(" + (-*this).body() + ")";
        return "(" + body() + ")";
    }

private:
    std::string body() const {
        std::string s;
        for (std::size_t k = c_.size(); k-- > 0;) {
            long long c = c_[k];
            if (c == 0) continue;
            long long m = std::llabs(c);
            if (!s.empty())
                s += c < 0 ? "-" : "+";
            else if (c < 0)
                s += "-";
            if (k == 0 || m != 1) s += std::to_string(m);
            if (k >= 1) s += "r";
            if (k >= 2) s += "^" + std::to_string(k);
        }
        return s;
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<long long> c_;
};

}  // namespace bidegree
