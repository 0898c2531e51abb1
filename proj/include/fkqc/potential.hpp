#pragma once

// The bump zeta and the substrate potential V it generates on the Fibonacci
// chain:
//   zeta(x) = -64 x^2 + 160/27                      on [-1/4, 1/4],
//   zeta(x) = (64/27)(3|x|-1)^2 (96|x|-11)          on (1/4, 1/3) flanks,
//   zeta(x) = 0                                     outside,
//   V(x)    = zeta(x - alpha(x)) if 2x <= alpha(x)+beta(x), else zeta(x - beta(x)),
// scaled by lambda. zeta is C^1 everywhere and C^2 except at |x| = 1/3.
// V is S-equivariant with range 1: it depends only on the offsets to the two
// neighbouring chain points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fkqc/chain.hpp"
#include "fkqc/golden.hpp"

namespace fkqc::potential {

inline constexpr double kZetaPeak = 160.0 / 27.0;

inline double zeta(double x) {
    const double ax = std::abs(x);
    if (ax <= 0.25) return -64.0 * x * x + kZetaPeak;
    if (ax < 1.0 / 3.0) {
        const double t = 3.0 * ax - 1.0;
        return (64.0 / 27.0) * t * t * (96.0 * ax - 11.0);
    }
    return 0.0;
}

inline double zeta_prime(double x) {
    const double ax = std::abs(x);
    if (ax <= 0.25) return -128.0 * x;
    if (ax < 1.0 / 3.0) {
        const double t = 3.0 * ax - 1.0;
        const double d = (64.0 / 27.0) * (6.0 * t * (96.0 * ax - 11.0) + 96.0 * t * t);
        return x >= 0 ? d : -d;
    }
    return 0.0;
}

// Second derivative with one-sided values; `defined` is false exactly at the
// C^2 failure points |x| = 1/3.
struct ZetaSecond {
    double left;
    double right;
    bool defined;
    double value;  // two-sided value when defined
};

inline ZetaSecond zeta_second(double x) {
    auto flank = [](double ax) {
        return (64.0 / 27.0) * (18.0 * (96.0 * ax - 11.0) + 1152.0 * (3.0 * ax - 1.0));
    };
    const double ax = std::abs(x);
    constexpr double third = 1.0 / 3.0;
    if (ax == third) {
        const double inner = flank(third);  // 896 from the flank side
        const double outer = 0.0;
        if (x > 0) return {inner, outer, false, 0.0};
        return {outer, inner, false, 0.0};
    }
    double v;
    if (ax < 0.25)
        v = -128.0;
    else if (ax == 0.25)
        v = -128.0;  // the flank matches the quadratic here: zeta is C^2 at 1/4
    else if (ax < third)
        v = flank(ax);
    else
        v = 0.0;
    return {v, v, true, v};
}

inline constexpr double zeta_second_at_zero() { return -128.0; }

// Non-minimality threshold -4/zeta''(0) = 1/32.
inline constexpr double min_lambda_nonminimal() { return 1.0 / 32.0; }

// Sorted chain points over a coordinate range; lets V skip the greedy
// decomposition in hot loops. Values are bitwise identical to the greedy
// path because both round the same exact points to double.
struct SubstrateCache {
    double lo = 0, hi = 0;
    std::vector<double> pts;

    static SubstrateCache covering(double lo, double hi) {
        const chain::Window w = chain::Window::covering(lo - 2, hi + 2);
        SubstrateCache c;
        c.lo = lo;
        c.hi = hi;
        c.pts.reserve(w.size());
        for (std::int64_t i = w.i_min(); i <= w.i_max(); ++i) c.pts.push_back(w.point_d(i));
        return c;
    }

    bool covers(double x) const { return !pts.empty() && x >= lo && x <= hi; }

    // (alpha, beta) as doubles, assuming covers(x).
    std::pair<double, double> neighbors(double x) const {
        auto it = std::upper_bound(pts.begin(), pts.end(), x);  // first > x
        if (it == pts.begin() || it == pts.end())
            throw std::out_of_range("SubstrateCache: outside coverage");
        return {*std::prev(it), *it};
    }
};

struct PotentialSpec {
    double lambda = 1.0;
    const SubstrateCache* cache = nullptr;  // optional fast substrate lookup
};

namespace detail_pot {

// Signed offset to the selected chain point: x - alpha if 2x <= alpha + beta
// (ties to the alpha branch), else x - beta.
inline double branch_offset(double x, double a, double b) {
    return (2.0 * x <= a + b) ? (x - a) : (x - b);
}

inline double branch_offset(double x, const PotentialSpec& spec) {
    if (spec.cache != nullptr && spec.cache->covers(x)) {
        auto [a, b] = spec.cache->neighbors(x);
        return branch_offset(x, a, b);
    }
    const chain::AlphaBeta ab = chain::alpha_beta(x);
    return branch_offset(x, ab.alpha.value(), ab.beta.value());
}

}  // namespace detail_pot

inline double V(double x, const PotentialSpec& spec = {}) {
    return spec.lambda * zeta(detail_pot::branch_offset(x, spec));
}

inline double V_prime(double x, const PotentialSpec& spec = {}) {
    return spec.lambda * zeta_prime(detail_pot::branch_offset(x, spec));
}

// Exact-input path: the branch is selected in Z[tau] and the offset rounded
// once, so patch-equivalent exact inputs give bitwise equal values.
inline double V(const GoldenNumber& x, const PotentialSpec& spec = {}) {
    const chain::AlphaBeta ab = chain::alpha_beta(x);
    const GoldenNumber two_x = x * 2;
    const GoldenNumber off =
        (two_x <= ab.alpha + ab.beta) ? (x - ab.alpha) : (x - ab.beta);
    return spec.lambda * zeta(off.value());
}

inline double V_prime(const GoldenNumber& x, const PotentialSpec& spec = {}) {
    const chain::AlphaBeta ab = chain::alpha_beta(x);
    const GoldenNumber two_x = x * 2;
    const GoldenNumber off =
        (two_x <= ab.alpha + ab.beta) ? (x - ab.alpha) : (x - ab.beta);
    return spec.lambda * zeta_prime(off.value());
}

// Equivariance probe: if the radius-1 patches at x and y agree, V must agree.
// Returns whether the implication holds.
inline bool check_equivariance(const GoldenNumber& x, const GoldenNumber& y,
                               const PotentialSpec& spec = {}) {
    const GoldenNumber one{1, 0};
    if (chain::local_patch(x, one) != chain::local_patch(y, one)) return true;
    return V(x, spec) == V(y, spec);
}

inline bool check_equivariance(double x, double y, const PotentialSpec& spec = {}) {
    const std::vector<double> px = chain::local_patch(x, 1.0);
    const std::vector<double> py = chain::local_patch(y, 1.0);
    if (px.size() != py.size()) return true;
    for (std::size_t i = 0; i < px.size(); ++i)
        if (std::abs(px[i] - py[i]) > 1e-12) return true;
    return V(x, spec) == V(y, spec);
}

}  // namespace fkqc::potential
