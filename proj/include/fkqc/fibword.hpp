#pragma once

// Substitution-word combinatorics for the Fibonacci chain: the one-sided word
// u under a -> ab, b -> a, windows of the two-sided word w = ~u ba | u, the
// level-l super-words A_l/B_l with A_{l+1} = A_l B_l, B_{l+1} = A_l B_l B_l,
// the substitution matrix M = [[1,1],[1,2]] and the block frequencies.
//
// Letter access is O(log i): indices are peeled through u^{(k)} = u^{(k-1)} u^{(k-2)}
// instead of materializing giant words. Materialized words are capped.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fkqc/golden.hpp"

namespace fkqc::fibword {

enum class Letter : char { a = 'a', b = 'b' };

// Finite word over {a,b}; ref_index, when present, marks the position of the
// reference bar (number of letters to its left).
struct Word {
    std::string letters;
    std::optional<std::size_t> ref_index;

    std::size_t size() const { return letters.size(); }
    bool operator==(const Word& o) const = default;
};

inline constexpr int kDefaultLevelCap = 30;

// Fibonacci numbers with f_{-1} = 0, f_0 = 1, f_1 = 1, f_2 = 2, ...
// (f_i is the length of u^{(i)}).
inline std::int64_t fibonacci(int i) {
    if (i < -1) throw std::invalid_argument("fibonacci: index must be >= -1");
    constexpr int kMax = 89;
    if (i > kMax) throw std::out_of_range("fibonacci: index too large for 64-bit");
    static const auto table = [] {
        std::array<std::int64_t, kMax + 2> t{};
        t[0] = 0;  // f_{-1}
        t[1] = 1;  // f_0
        for (int k = 2; k < static_cast<int>(t.size()); ++k) t[k] = t[k - 1] + t[k - 2];
        return t;
    }();
    return table[i + 1];
}

// Closed form (tau^{i+1} - (1-tau)^{i+1})/sqrt5, evaluated from the exact
// integer coordinates of tau^{i+1} so the only rounding is the final one.
inline long double fibonacci_closed_form(int i) {
    if (i < -1) throw std::invalid_argument("fibonacci_closed_form: index must be >= -1");
    constexpr long double tau_l = 1.61803398874989484820458683436563811772L;
    constexpr long double sqrt5_l = 2.23606797749978969640917366873127623544L;
    const GoldenNumber tp = golden_pow(i + 1);
    const long double plus = static_cast<long double>(tp.a()) + static_cast<long double>(tp.b()) * tau_l;
    // (1-tau)^{i+1} = conj(tau^{i+1})
    const GoldenNumber tc = tp.conjugate();
    const long double minus = static_cast<long double>(tc.a()) + static_cast<long double>(tc.b()) * tau_l;
    return (plus - minus) / sqrt5_l;
}

// a -> ab, b -> a; any reference index is dropped.
inline Word substitute(const Word& w) {
    Word out;
    out.letters.reserve(w.letters.size() * 2);
    for (char c : w.letters) {
        if (c == 'a')
            out.letters += "ab";
        else if (c == 'b')
            out.letters += 'a';
        else
            throw std::invalid_argument("substitute: alphabet is {a,b}");
    }
    return out;
}

// u^{(level)}, built by iterating the substitution from u^{(1)} = a.
inline Word one_sided_word(int level, int level_cap = kDefaultLevelCap) {
    if (level < 1) throw std::invalid_argument("one_sided_word: level must be >= 1");
    if (level > level_cap) throw std::out_of_range("one_sided_word: level exceeds cap");
    Word w{"a", std::nullopt};
    for (int i = 1; i < level; ++i) w = substitute(w);
    return w;
}

// (number of a, number of b) in u^{(level)} = (f_{level-1}, f_{level-2}).
inline std::pair<std::int64_t, std::int64_t> letter_counts(int level) {
    if (level < 1) throw std::invalid_argument("letter_counts: level must be >= 1");
    return {fibonacci(level - 1), fibonacci(level - 2)};
}

// u_i for i >= 0, by descending u^{(k)} = u^{(k-1)} u^{(k-2)}.
inline Letter one_sided_letter(std::int64_t i) {
    if (i < 0) throw std::invalid_argument("one_sided_letter: index must be >= 0");
    int k = 1;
    while (fibonacci(k) <= i) {
        ++k;
        if (k > 87) throw std::out_of_range("one_sided_letter: index too large");
    }
    while (k > 2) {
        const std::int64_t left = fibonacci(k - 1);
        if (i < left) {
            --k;
        } else {
            i -= left;
            k -= 2;
        }
    }
    if (k == 1) return Letter::a;
    return i == 0 ? Letter::a : Letter::b;
}

// w_i of the two-sided word w = ~u ba | u: w_i = u_i for i >= 0, w_{-1} = a,
// w_{-2} = b and w_{-j} = u_{j-3} for j >= 3 (reading the reversal of u).
inline Letter two_sided_letter(std::int64_t i) {
    if (i >= 0) return one_sided_letter(i);
    if (i == -1) return Letter::a;
    if (i == -2) return Letter::b;
    return one_sided_letter(-i - 3);
}

// Window w_{from} .. w_{to}; the ref bar sits before w_0 when it is in range.
inline Word two_sided_window(std::int64_t from, std::int64_t to) {
    if (from > to) throw std::invalid_argument("two_sided_window: empty range");
    if (to - from > (std::int64_t{1} << 24)) throw std::out_of_range("two_sided_window: window too large");
    Word out;
    out.letters.reserve(static_cast<std::size_t>(to - from + 1));
    for (std::int64_t i = from; i <= to; ++i)
        out.letters += static_cast<char>(two_sided_letter(i));
    if (from <= 0 && to >= -1) out.ref_index = static_cast<std::size_t>(-from);
    return out;
}

// Assigned length |word| with |a| = tau, |b| = 1, exact in Z[tau].
inline GoldenNumber word_length(const Word& w) {
    std::int64_t na = 0, nb = 0;
    for (char c : w.letters) (c == 'a' ? na : nb)++;
    return GoldenNumber{nb, na};
}

// Level-l super-words: A_1 = aba, B_1 = ababa, A_{l+1} = A_l B_l,
// B_{l+1} = A_l B_l B_l. |A_l| = tau^{2l+1} and |B_l| = tau^{2l+2} exactly.
inline std::pair<Word, Word> super_words(int l) {
    if (l < 1) throw std::invalid_argument("super_words: level must be >= 1");
    if (l > 14) throw std::out_of_range("super_words: level exceeds materialization cap");
    Word A{"aba", std::nullopt}, B{"ababa", std::nullopt};
    for (int k = 1; k < l; ++k) {
        Word nextA{A.letters + B.letters, std::nullopt};
        Word nextB{A.letters + B.letters + B.letters, std::nullopt};
        A = std::move(nextA);
        B = std::move(nextB);
    }
    return {A, B};
}

struct Mat2 {
    std::int64_t m[2][2];
    bool operator==(const Mat2& o) const {
        return m[0][0] == o.m[0][0] && m[0][1] == o.m[0][1] && m[1][0] == o.m[1][0] &&
               m[1][1] == o.m[1][1];
    }
    Mat2 operator*(const Mat2& o) const {
        Mat2 r{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                __int128 s = 0;
                for (int k = 0; k < 2; ++k) s += static_cast<__int128>(m[i][k]) * o.m[k][j];
                r.m[i][j] = detail::checked_narrow(s, "Mat2 mul");
            }
        return r;
    }
};

// M^n with M = [[1,1],[1,2]] by integer binary exponentiation.
inline Mat2 substitution_matrix_power(int n) {
    if (n < 0) throw std::invalid_argument("substitution_matrix_power: n must be >= 0");
    Mat2 result{{{1, 0}, {0, 1}}};
    Mat2 base{{{1, 1}, {1, 2}}};
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

// The closed form of M^n via tau-powers, as (row-major) long doubles.
inline std::array<long double, 4> substitution_matrix_power_closed(int n) {
    constexpr long double sqrt5_l = 2.23606797749978969640917366873127623544L;
    auto tp = [](int k) { return golden_pow(k).value_l(); };
    return {(tp(-2 * n + 1) + tp(2 * n - 1)) / sqrt5_l, (-tp(-2 * n) + tp(2 * n)) / sqrt5_l,
            (-tp(-2 * n) + tp(2 * n)) / sqrt5_l, (tp(-2 * n - 1) + tp(2 * n + 1)) / sqrt5_l};
}

struct FreqPair {
    double freq_A;
    double freq_B;
};

// Absolute frequencies per unit length: 1/(sqrt5 tau^{2l+2}) for A_l and
// 1/(sqrt5 tau^{2l+1}) for B_l.
inline FreqPair absolute_frequency(int l) {
    if (l < 1) throw std::invalid_argument("absolute_frequency: level must be >= 1");
    const double sqrt5 = 2.23606797749978969640917366873127623544;
    return {1.0 / (sqrt5 * golden_pow(2 * l + 2).value()),
            1.0 / (sqrt5 * golden_pow(2 * l + 1).value())};
}

enum class BlockType : char { A = 'A', B = 'B' };

namespace detail_block {

// Block counts of sigma^k applied to a single A (n) or B (m), where
// sigma: A -> AB, B -> ABB is the level-step substitution of super-words.
inline std::pair<std::int64_t, std::int64_t> sigma_counts(int k) {
    static const auto table = [] {
        std::array<std::pair<std::int64_t, std::int64_t>, 64> t{};
        t[0] = {1, 1};
        for (std::size_t i = 1; i < t.size(); ++i) {
            auto [n, m] = t[i - 1];
            t[i] = {n + m, n + 2 * m};
        }
        return t;
    }();
    if (k < 0 || k >= 64) throw std::out_of_range("sigma_counts");
    return table[static_cast<std::size_t>(k)];
}

}  // namespace detail_block

// Type of the j-th level-l block of w. The block sequence is the same
// two-sided sigma-fixed sequence for every level (the decompositions nest
// under A_{l+1} = A_l B_l, B_{l+1} = A_l B_l B_l); block 0 starts at 0 and is
// an A block. Right of 0 the sequence is lim sigma^k(A); left of 0 it is
// lim sigma^k(B) read from the end.
inline BlockType block_type(std::int64_t j) {
    using detail_block::sigma_counts;
    if (j >= 0) {
        int k = 0;
        while (sigma_counts(k).first <= j) ++k;
        // descend sigma^k(A) = sigma^{k-1}(A) sigma^{k-1}(B)
        bool is_a = true;
        while (k > 0) {
            auto [n1, m1] = sigma_counts(k - 1);
            if (is_a) {
                if (j < n1) {
                    is_a = true;
                } else {
                    j -= n1;
                    is_a = false;
                }
            } else {
                // sigma^k(B) = sigma^{k-1}(A) sigma^{k-1}(B) sigma^{k-1}(B)
                if (j < n1) {
                    is_a = true;
                } else if (j < n1 + m1) {
                    j -= n1;
                    is_a = false;
                } else {
                    j -= n1 + m1;
                    is_a = false;
                }
            }
            --k;
        }
        return is_a ? BlockType::A : BlockType::B;
    }
    // position p >= 1 counted from the right end of lim sigma^k(B)
    std::int64_t p = -j;
    int k = 0;
    while (sigma_counts(k).second < p) ++k;
    bool is_a = false;
    while (k > 0) {
        auto [n1, m1] = sigma_counts(k - 1);
        if (is_a) {
            // sigma^k(A) = sigma^{k-1}(A) sigma^{k-1}(B), from the end
            if (p <= m1) {
                is_a = false;
            } else {
                p -= m1;
                is_a = true;
            }
        } else {
            // sigma^k(B) = sigma^{k-1}(A) sigma^{k-1}(B) sigma^{k-1}(B), from the end
            if (p <= m1) {
                is_a = false;
            } else if (p <= 2 * m1) {
                p -= m1;
                is_a = false;
            } else {
                p -= 2 * m1;
                is_a = true;
            }
        }
        --k;
    }
    return is_a ? BlockType::A : BlockType::B;
}

}  // namespace fkqc::fibword
