#pragma once

// Exact geometry of the Fibonacci chain S: point coordinates in Z[tau], the
// step functions alpha/beta via the greedy tau-power decomposition
//   0 <= x - tau^{n_1} - ... - tau^{n_r} < tau,   n_1 > n_2 > ... > n_r >= 1,
// with beta = alpha + 1 when n_r = 1 and alpha + tau otherwise, local patches,
// and the level-l super-point sets S^l with their two-valued gap structure.
//
// The fast paths are O(log) and exact; Window carries a materialized stretch
// of the chain and provides the brute-force scan oracles the fast paths are
// tested against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fkqc/fibword.hpp"
#include "fkqc/golden.hpp"

namespace fkqc::chain {

enum class IntervalTag : char { A = 'A', B = 'B' };

struct AlphaBeta {
    GoldenNumber alpha;
    GoldenNumber beta;
};

namespace detail_chain {

// (count of a, count of b) among the first i letters of u.
inline std::pair<std::int64_t, std::int64_t> prefix_counts(std::int64_t i) {
    if (i < 0) throw std::invalid_argument("prefix_counts: negative length");
    std::pair<std::int64_t, std::int64_t> acc{0, 0};
    if (i == 0) return acc;
    int k = 1;
    while (fibword::fibonacci(k) < i) ++k;
    // peel i letters off u^{(k)} = u^{(k-1)} u^{(k-2)}
    while (i > 0) {
        if (i == fibword::fibonacci(k)) {
            acc.first += fibword::fibonacci(k - 1);
            acc.second += fibword::fibonacci(k - 2);
            return acc;
        }
        if (k == 2) {  // u^{(2)} = ab, prefix of length 1
            acc.first += 1;
            return acc;
        }
        const std::int64_t left = fibword::fibonacci(k - 1);
        if (i <= left) {
            --k;
        } else {
            acc.first += fibword::fibonacci(k - 2);
            acc.second += fibword::fibonacci(k - 3);
            i -= left;
            k -= 2;
        }
    }
    return acc;
}

// Assigned length of the first i letters of u, exact.
inline GoldenNumber prefix_length(std::int64_t i) {
    auto [na, nb] = prefix_counts(i);
    return GoldenNumber{nb, na};
}

inline const std::vector<long double>& tau_powers_l() {
    static const std::vector<long double> t = [] {
        std::vector<long double> v(92);
        for (int n = 0; n < 92; ++n) v[static_cast<std::size_t>(n)] = golden_pow(n).value_l();
        return v;
    }();
    return t;
}

}  // namespace detail_chain

// S_i: S_0 = 0 and S_i = S_{i-1} + |w_{i-1}|, exact.
inline GoldenNumber point(std::int64_t i) {
    if (i >= 0) return detail_chain::prefix_length(i);
    const std::int64_t m = -i;
    GoldenNumber total = GoldenNumber::tau();  // |w_{-1}| = |a|
    if (m >= 2) total += GoldenNumber{1, 0};   // |w_{-2}| = |b|
    if (m >= 3) total += detail_chain::prefix_length(m - 2);
    return -total;
}

namespace detail_chain {

// Greedy decomposition for x = num/den >= 0 with den in {1,2}; alpha is the
// accumulated sum of tau-powers, last_exp the final exponent (0 when none),
// attained tells whether the remainder vanished (x in S).
struct GreedyResult {
    GoldenNumber alpha;
    int last_exp = 0;
    bool attained = false;
};

inline GreedyResult greedy_nonneg_exact(GoldenNumber rem, std::int64_t den) {
    if (rem.sign() < 0) throw std::invalid_argument("greedy_nonneg_exact: negative input");
    GreedyResult r;
    const GoldenNumber tau_den = GoldenNumber::tau() * den;
    while (!(rem < tau_den)) {
        // exponent estimate from doubles, then exact adjustment
        const double d = rem.value() / static_cast<double>(den);
        int n = std::max(1, static_cast<int>(std::floor(std::log(d) / 0.4812118250596034)));
        while (n + 1 <= 90 && golden_pow(n + 1) * den <= rem) ++n;
        while (n > 1 && golden_pow(n) * den > rem) --n;
        rem -= golden_pow(n) * den;
        r.alpha += golden_pow(n);
        r.last_exp = n;
    }
    r.attained = rem.is_zero();
    return r;
}

inline AlphaBeta from_greedy(const GreedyResult& g) {
    const GoldenNumber gap = (g.last_exp == 1) ? GoldenNumber{1, 0} : GoldenNumber::tau();
    return {g.alpha, g.alpha + gap};
}

// min point of S that is >= y (y = num/den >= 0).
inline GoldenNumber beta_weak_exact(const GoldenNumber& num, std::int64_t den) {
    const GreedyResult g = greedy_nonneg_exact(num, den);
    return g.attained ? g.alpha : from_greedy(g).beta;
}

// max point of S that is < y (y = num/den > 0).
inline GoldenNumber alpha_strict_exact(const GoldenNumber& num, std::int64_t den) {
    const GreedyResult g = greedy_nonneg_exact(num, den);
    if (!g.attained) return g.alpha;
    // y itself is a chain point; its predecessor is alpha(y - 1) since gaps are 1 or tau
    const GreedyResult p = greedy_nonneg_exact(num - GoldenNumber{den, 0}, den);
    return p.alpha;
}

}  // namespace detail_chain

// alpha/beta for x = two_x / 2, exact. Half-integer inputs cover the anchor
// values h(i) = (3 tau + 1)/2 * i used by the solver.
inline AlphaBeta alpha_beta_half(const GoldenNumber& two_x) {
    using namespace detail_chain;
    if (two_x.sign() >= 0) return from_greedy(greedy_nonneg_exact(two_x, 2));
    const GoldenNumber tau2 = golden_pow(2);
    const GoldenNumber y = -two_x;
    if (y <= tau2 * 2) {  // -tau^2 <= x < 0
        return {-beta_weak_exact(y, 2), -alpha_strict_exact(y, 2)};
    }
    const GoldenNumber y2 = y - tau2 * 2;  // reflect beyond -tau^2
    return {-tau2 - beta_weak_exact(y2, 2), -tau2 - alpha_strict_exact(y2, 2)};
}

inline AlphaBeta alpha_beta(const GoldenNumber& x) { return alpha_beta_half(x * 2); }

inline GoldenNumber alpha(const GoldenNumber& x) { return alpha_beta(x).alpha; }
inline GoldenNumber beta(const GoldenNumber& x) { return alpha_beta(x).beta; }

namespace detail_chain {

// Float greedy with a guard band: inputs within 1e-9 of a decomposition
// boundary are snapped onto it, which is the right-continuous choice.
inline constexpr double kGuard = 1e-9;

inline GreedyResult greedy_nonneg_float(double x) {
    GreedyResult r;
    long double rem = x < 0 ? 0.0L : static_cast<long double>(x);
    const auto& pw = tau_powers_l();
    const long double tau_l = pw[1];
    while (rem >= tau_l - kGuard) {
        int n = std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(rem)) /
                                                        0.4812118250596034)));
        while (n + 1 <= 90 && pw[static_cast<std::size_t>(n + 1)] <= rem + kGuard) ++n;
        while (n > 1 && pw[static_cast<std::size_t>(n)] > rem + kGuard) --n;
        rem -= pw[static_cast<std::size_t>(n)];
        if (rem < 0) rem = 0;
        r.alpha += golden_pow(n);
        r.last_exp = n;
    }
    r.attained = rem <= kGuard;
    return r;
}

inline GoldenNumber beta_weak_float(double y) {
    const GreedyResult g = greedy_nonneg_float(y);
    return g.attained ? g.alpha : from_greedy(g).beta;
}

inline GoldenNumber alpha_strict_float(double y) {
    const GreedyResult g = greedy_nonneg_float(y);
    if (!g.attained) return g.alpha;
    // exact predecessor of the snapped chain point
    const GoldenNumber p = g.alpha - GoldenNumber{1, 0};
    return greedy_nonneg_exact(p, 1).alpha;
}

}  // namespace detail_chain

inline AlphaBeta alpha_beta(double x) {
    using namespace detail_chain;
    if (x >= -kGuard) return from_greedy(greedy_nonneg_float(x));
    const GoldenNumber tau2 = golden_pow(2);
    const double y = -x;
    if (y <= tau2.value() + kGuard) {
        return {-beta_weak_float(y), -alpha_strict_float(y)};
    }
    const double y2 = y - tau2.value();
    return {-tau2 - beta_weak_float(y2), -tau2 - alpha_strict_float(y2)};
}

inline GoldenNumber alpha(double x) { return alpha_beta(x).alpha; }
inline GoldenNumber beta(double x) { return alpha_beta(x).beta; }

// beta - alpha, always 1 or tau.
inline GoldenNumber gap(double x) {
    const AlphaBeta ab = alpha_beta(x);
    return ab.beta - ab.alpha;
}
inline GoldenNumber gap(const GoldenNumber& x) {
    const AlphaBeta ab = alpha_beta(x);
    return ab.beta - ab.alpha;
}

// A materialized stretch of the chain: letters w_i for i in [i_min, i_max)
// and exact points S_i for i in [i_min, i_max]. Carries the scan oracles.
class Window {
public:
    Window(std::int64_t i_min, std::int64_t i_max) : i_min_(i_min) {
        if (i_min >= i_max) throw std::invalid_argument("Window: empty index range");
        if (i_max - i_min > (std::int64_t{1} << 23))
            throw std::out_of_range("Window: materialization cap exceeded");
        const std::size_t n = static_cast<std::size_t>(i_max - i_min);
        letters_.reserve(n);
        pts_.reserve(n + 1);
        pts_d_.reserve(n + 1);
        GoldenNumber s = point(i_min);
        pts_.push_back(s);
        for (std::int64_t i = i_min; i < i_max; ++i) {
            const char c = static_cast<char>(fibword::two_sided_letter(i));
            letters_.push_back(c);
            s += (c == 'a') ? GoldenNumber::tau() : GoldenNumber{1, 0};
            pts_.push_back(s);
        }
        for (const auto& p : pts_) pts_d_.push_back(p.value());
    }

    // Smallest window whose coordinate coverage strictly contains [lo, hi].
    static Window covering(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("Window::covering: empty range");
        std::int64_t i_lo = static_cast<std::int64_t>(std::floor(lo / 1.2)) - 4;
        std::int64_t i_hi = static_cast<std::int64_t>(std::ceil(hi / 1.2)) + 4;
        Window w(i_lo, i_hi);
        while (w.pts_d_.front() > lo || w.pts_d_.back() < hi) {
            i_lo -= 16 + (i_hi - i_lo) / 4;
            i_hi += 16 + (i_hi - i_lo) / 4;
            w = Window(i_lo, i_hi);
        }
        return w;
    }

    std::int64_t i_min() const { return i_min_; }
    std::int64_t i_max() const { return i_min_ + static_cast<std::int64_t>(letters_.size()); }

    const GoldenNumber& point_at(std::int64_t i) const { return pts_[index_of(i)]; }
    double point_d(std::int64_t i) const { return pts_d_[index_of(i)]; }
    char letter(std::int64_t i) const {
        if (i < i_min_ || i >= i_max()) throw std::out_of_range("Window::letter");
        return letters_[static_cast<std::size_t>(i - i_min_)];
    }
    std::size_t size() const { return pts_.size(); }

    // Brute-force alpha/beta by scanning the enumerated points (oracle).
    AlphaBeta alpha_beta_scan(const GoldenNumber& x) const {
        if (x < pts_.front() || !(x < pts_.back()))
            throw std::out_of_range("Window::alpha_beta_scan: outside coverage");
        auto it = std::upper_bound(pts_.begin(), pts_.end(), x);  // first > x
        return {*std::prev(it), *it};
    }

    AlphaBeta alpha_beta_scan(double x) const {
        if (x < pts_d_.front() || x >= pts_d_.back())
            throw std::out_of_range("Window::alpha_beta_scan: outside coverage");
        auto it = std::upper_bound(pts_d_.begin(), pts_d_.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - pts_d_.begin());
        return {pts_[k - 1], pts_[k]};
    }

    // Exact patch (S - x) over a ball of the given radius; closed balls are
    // used by the super-point definition, open balls by equivariance.
    std::vector<GoldenNumber> patch(const GoldenNumber& x, const GoldenNumber& radius,
                                    bool closed) const {
        require_coverage(x - radius, x + radius);
        std::vector<GoldenNumber> out;
        for (const auto& p : pts_) {
            const GoldenNumber off = p - x;
            const int lo = (off + radius).sign();
            const int hi = (radius - off).sign();
            const bool in = closed ? (lo >= 0 && hi >= 0) : (lo > 0 && hi > 0);
            if (in) out.push_back(off);
        }
        return out;
    }

    // Float patch over an open ball, with tolerance 1e-12 at the boundary.
    std::vector<double> patch(double x, double radius) const {
        if (x - radius < pts_d_.front() || x + radius > pts_d_.back())
            throw std::out_of_range("Window::patch: outside coverage");
        std::vector<double> out;
        for (double p : pts_d_) {
            const double off = p - x;
            if (std::abs(off) < radius - 1e-12) out.push_back(off);
        }
        return out;
    }

    // Patch-matching oracle for S^l: indices i with
    // (S - S_i) cap [-tau^{2l}, tau^{2l}] equal to the patch at 0.
    std::vector<std::int64_t> super_point_indices_scan(int l) const {
        if (l < 1) throw std::invalid_argument("super_point_indices_scan: level >= 1");
        const GoldenNumber radius = golden_pow(2 * l);
        const std::vector<GoldenNumber> ref = patch(GoldenNumber{0, 0}, radius, true);
        std::vector<std::int64_t> out;
        for (std::int64_t i = i_min(); i <= i_max(); ++i) {
            const GoldenNumber& x = pts_[index_of(i)];
            if (x - radius < pts_.front() || pts_.back() < x + radius) continue;
            if (patch(x, radius, true) == ref) out.push_back(i);
        }
        return out;
    }

private:
    std::size_t index_of(std::int64_t i) const {
        if (i < i_min_ || i > i_max()) throw std::out_of_range("Window: index outside");
        return static_cast<std::size_t>(i - i_min_);
    }
    void require_coverage(const GoldenNumber& lo, const GoldenNumber& hi) const {
        if (lo < pts_.front() || pts_.back() < hi)
            throw std::out_of_range("Window: coordinate range outside coverage");
    }

    std::int64_t i_min_;
    std::vector<char> letters_;
    std::vector<GoldenNumber> pts_;
    std::vector<double> pts_d_;
};

// Open-ball patch around a float position, with a self-sized window.
inline std::vector<double> local_patch(double x, double radius) {
    const Window w = Window::covering(x - radius - 2, x + radius + 2);
    return w.patch(x, radius);
}

inline std::vector<GoldenNumber> local_patch(const GoldenNumber& x, const GoldenNumber& radius) {
    const Window w = Window::covering(x.value() - radius.value() - 2, x.value() + radius.value() + 2);
    return w.patch(x, radius, false);
}

// The level-l super-point set S^l as consecutive block starts. Block k of the
// decomposition has type block_type(k); block 0 starts at 0. An A block spans
// tau^{2l+1}, a B block tau^{2l+2}.
struct SuperWindow {
    int level = 1;
    std::int64_t k_min = 0;                 // index of the first materialized block
    std::vector<GoldenNumber> starts;       // size = blocks + 1
    std::vector<double> starts_d;
    std::vector<fibword::BlockType> tags;   // size = blocks

    static SuperWindow covering(int level, double lo, double hi) {
        if (level < 1) throw std::invalid_argument("SuperWindow: level must be >= 1");
        if (level > 20) throw std::out_of_range("SuperWindow: level too large for window");
        if (!(lo < hi)) throw std::invalid_argument("SuperWindow: empty range");
        const GoldenNumber lenA = golden_pow(2 * level + 1);
        const GoldenNumber lenB = golden_pow(2 * level + 2);
        auto len = [&](std::int64_t k) {
            return fibword::block_type(k) == fibword::BlockType::A ? lenA : lenB;
        };
        SuperWindow sw;
        sw.level = level;
        std::vector<GoldenNumber> right{GoldenNumber{0, 0}};
        std::int64_t k = 0;
        while (right.back().value() <= hi) {
            right.push_back(right.back() + len(k));
            ++k;
            if (right.size() > (1u << 22)) throw std::out_of_range("SuperWindow: window too large");
        }
        std::vector<GoldenNumber> left;  // starts of blocks -1, -2, ...
        std::int64_t j = -1;
        GoldenNumber s{0, 0};
        while (s.value() >= lo) {
            s -= len(j);
            left.push_back(s);
            --j;
            if (left.size() > (1u << 22)) throw std::out_of_range("SuperWindow: window too large");
        }
        sw.k_min = j + 1;
        sw.starts.reserve(left.size() + right.size());
        for (auto it = left.rbegin(); it != left.rend(); ++it) sw.starts.push_back(*it);
        for (const auto& r : right) sw.starts.push_back(r);
        sw.starts_d.reserve(sw.starts.size());
        for (const auto& p : sw.starts) sw.starts_d.push_back(p.value());
        sw.tags.reserve(sw.starts.size() - 1);
        for (std::int64_t kk = sw.k_min; kk < sw.k_min + static_cast<std::int64_t>(sw.starts.size()) - 1; ++kk)
            sw.tags.push_back(fibword::block_type(kk));
        return sw;
    }

    std::size_t block_count() const { return tags.size(); }

    // Index (into starts/tags) of the block containing x.
    std::size_t locate(double x) const {
        if (x < starts_d.front() || x >= starts_d.back())
            throw std::out_of_range("SuperWindow::locate: outside coverage");
        auto it = std::upper_bound(starts_d.begin(), starts_d.end(), x);
        return static_cast<std::size_t>(it - starts_d.begin()) - 1;
    }

    std::size_t locate(const GoldenNumber& x) const {
        if (x < starts.front() || !(x < starts.back()))
            throw std::out_of_range("SuperWindow::locate: outside coverage");
        auto it = std::upper_bound(starts.begin(), starts.end(), x);
        return static_cast<std::size_t>(it - starts.begin()) - 1;
    }
};

// S^l over a coordinate range, ordered.
inline std::vector<GoldenNumber> super_points(int l, double lo, double hi) {
    const SuperWindow sw = SuperWindow::covering(l, lo, hi);
    std::vector<GoldenNumber> out;
    for (const auto& s : sw.starts)
        if (s.value() >= lo && s.value() <= hi) out.push_back(s);
    return out;
}

inline GoldenNumber super_alpha(const SuperWindow& sw, double x) {
    return sw.starts[sw.locate(x)];
}
inline GoldenNumber super_beta(const SuperWindow& sw, double x) {
    return sw.starts[sw.locate(x) + 1];
}
inline IntervalTag classify_interval(const SuperWindow& sw, double x) {
    return sw.tags[sw.locate(x)] == fibword::BlockType::A ? IntervalTag::A : IntervalTag::B;
}

inline GoldenNumber super_alpha(int l, double x) {
    return super_alpha(SuperWindow::covering(l, x - golden_pow(2 * l + 2).value() - 1, x + 1), x);
}
inline GoldenNumber super_beta(int l, double x) {
    const SuperWindow sw =
        SuperWindow::covering(l, x - golden_pow(2 * l + 2).value() - 1, x + 1);
    return super_beta(sw, x);
}
inline IntervalTag classify_interval(int l, double x) {
    const SuperWindow sw =
        SuperWindow::covering(l, x - golden_pow(2 * l + 2).value() - 1, x + 1);
    return classify_interval(sw, x);
}

// f_{level-1}/f_level, the letter-a frequency estimate converging to 1/tau.
inline double letter_frequency_estimate(int level) {
    if (level < 2) throw std::invalid_argument("letter_frequency_estimate: level must be >= 2");
    return static_cast<double>(fibword::fibonacci(level - 1)) /
           static_cast<double>(fibword::fibonacci(level));
}

}  // namespace fkqc::chain
