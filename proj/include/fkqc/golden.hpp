#pragma once

// Exact arithmetic in Z[tau], tau = (1 + sqrt 5)/2, with tau^2 = tau + 1.
// Every element is a + b*tau with integer a, b; the representation is unique.
// Signs and comparisons are decided by integer arithmetic only, so chain
// coordinates, tau-powers and rotation numbers never touch floating point.

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fkqc {

namespace detail {

inline std::int64_t checked_narrow(__int128 v, const char* what) {
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
        throw std::overflow_error(std::string("GoldenNumber overflow in ") + what);
    return static_cast<std::int64_t>(v);
}

}  // namespace detail

class GoldenNumber {
public:
    constexpr GoldenNumber() = default;
    constexpr GoldenNumber(std::int64_t a, std::int64_t b) : a_(a), b_(b) {}

    static constexpr GoldenNumber tau() { return {0, 1}; }
    // sqrt 5 = 2*tau - 1 exactly.
    static constexpr GoldenNumber sqrt5() { return {-1, 2}; }

    constexpr std::int64_t a() const { return a_; }
    constexpr std::int64_t b() const { return b_; }

    constexpr bool is_zero() const { return a_ == 0 && b_ == 0; }

    // sign(a + b*tau) without floating point: a + b*tau = ((2a+b) + b*sqrt5)/2.
    int sign() const {
        const std::int64_t p = 2 * a_ + b_;
        const std::int64_t q = b_;
        if (p == 0 && q == 0) return 0;
        if (p >= 0 && q >= 0) return 1;
        if (p <= 0 && q <= 0) return -1;
        const __int128 p2 = static_cast<__int128>(p) * p;
        const __int128 q25 = 5 * static_cast<__int128>(q) * q;
        if (p > 0)  // q < 0: positive iff p^2 > 5 q^2
            return p2 > q25 ? 1 : (p2 < q25 ? -1 : 0);
        // p < 0, q > 0: positive iff 5 q^2 > p^2
        return q25 > p2 ? 1 : (q25 < p2 ? -1 : 0);
    }

    GoldenNumber operator-() const { return {-a_, -b_}; }

    GoldenNumber operator+(const GoldenNumber& o) const { return {a_ + o.a_, b_ + o.b_}; }
    GoldenNumber operator-(const GoldenNumber& o) const { return {a_ - o.a_, b_ - o.b_}; }

    GoldenNumber operator*(const GoldenNumber& o) const {
        // (a1 + b1 t)(a2 + b2 t) = a1 a2 + b1 b2 + (a1 b2 + a2 b1 + b1 b2) t
        const __int128 aa = static_cast<__int128>(a_) * o.a_;
        const __int128 bb = static_cast<__int128>(b_) * o.b_;
        const __int128 ab = static_cast<__int128>(a_) * o.b_ + static_cast<__int128>(o.a_) * b_;
        return {detail::checked_narrow(aa + bb, "mul"), detail::checked_narrow(ab + bb, "mul")};
    }

    GoldenNumber operator*(std::int64_t k) const {
        return {detail::checked_narrow(static_cast<__int128>(a_) * k, "scale"),
                detail::checked_narrow(static_cast<__int128>(b_) * k, "scale")};
    }

    GoldenNumber& operator+=(const GoldenNumber& o) { return *this = *this + o; }
    GoldenNumber& operator-=(const GoldenNumber& o) { return *this = *this - o; }
    GoldenNumber& operator*=(const GoldenNumber& o) { return *this = *this * o; }

    bool operator==(const GoldenNumber& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const GoldenNumber& o) const { return !(*this == o); }
    bool operator<(const GoldenNumber& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const GoldenNumber& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const GoldenNumber& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const GoldenNumber& o) const { return (*this - o).sign() >= 0; }

    // Galois conjugate a + b*(1 - tau).
    GoldenNumber conjugate() const { return {a_ + b_, -b_}; }

    // Field norm N(a + b*tau) = a^2 + a b - b^2 (an integer).
    std::int64_t norm() const {
        const __int128 n = static_cast<__int128>(a_) * a_ + static_cast<__int128>(a_) * b_ -
                           static_cast<__int128>(b_) * b_;
        return detail::checked_narrow(n, "norm");
    }

    double value() const {
        constexpr double tau_d = 1.6180339887498948482;
        return static_cast<double>(a_) + static_cast<double>(b_) * tau_d;
    }

    long double value_l() const {
        constexpr long double tau_l = 1.61803398874989484820458683436563811772L;
        return static_cast<long double>(a_) + static_cast<long double>(b_) * tau_l;
    }

    std::string str() const {
        return std::to_string(a_) + (b_ >= 0 ? "+" : "") + std::to_string(b_) + "t";
    }

private:
    std::int64_t a_ = 0;
    std::int64_t b_ = 0;
};

inline GoldenNumber operator*(std::int64_t k, const GoldenNumber& g) { return g * k; }

// tau^n for any integer n; cached over the range the chain geometry uses.
inline GoldenNumber golden_pow(int n) {
    constexpr int kLo = -48, kHi = 92;
    struct Table {
        GoldenNumber pw[kHi - kLo + 1];
        Table() {
            pw[-kLo] = GoldenNumber{1, 0};
            const GoldenNumber t = GoldenNumber::tau();
            const GoldenNumber tinv{-1, 1};  // tau^{-1} = tau - 1
            for (int i = 1; i <= kHi; ++i) pw[-kLo + i] = pw[-kLo + i - 1] * t;
            for (int i = -1; i >= kLo; --i) pw[-kLo + i] = pw[-kLo + i + 1] * tinv;
        }
    };
    static const Table table;
    if (n < kLo || n > kHi) throw std::out_of_range("golden_pow: exponent out of range");
    return table.pw[n - kLo];
}

// Exact element of Q(tau) with an integer denominator; used for values such
// as the rotation number (3*tau + 1)/2 that do not lie in Z[tau].
struct GoldenRational {
    GoldenNumber num;
    std::int64_t den = 1;

    GoldenRational() = default;
    GoldenRational(GoldenNumber n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("GoldenRational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(std::gcd(std::llabs(num.a()), std::llabs(num.b())), den);
        if (g > 1) {
            num = GoldenNumber{num.a() / g, num.b() / g};
            den /= g;
        }
    }

    bool operator==(const GoldenRational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const GoldenRational& o) const { return !(*this == o); }

    double value() const { return num.value() / static_cast<double>(den); }
    std::string str() const { return "(" + num.str() + ")/" + std::to_string(den); }
};

// Exact division in Q(tau): x / y = x * conj(y) / N(y).
inline GoldenRational golden_div(const GoldenNumber& x, const GoldenNumber& y) {
    if (y.is_zero()) throw std::invalid_argument("golden_div: division by zero");
    return GoldenRational{x * y.conjugate(), y.norm()};
}

}  // namespace fkqc
