#pragma once

// Invariant suites behind `fkqc verify`. Each check re-derives a property
// through an independent route (window scans, patch matching, finite
// differences, closed forms) and compares it against the fast paths.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fkqc/chain.hpp"
#include "fkqc/fibword.hpp"
#include "fkqc/golden.hpp"
#include "fkqc/minimal.hpp"
#include "fkqc/model.hpp"
#include "fkqc/potential.hpp"
#include "fkqc/solver.hpp"

namespace fkqc::verify {

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

using Suite = std::vector<Check>;

namespace detail_verify {

inline void add(Suite& s, const std::string& name, bool pass, const std::string& detail = "") {
    s.push_back({name, pass, detail});
}

template <typename T>
inline std::string str(const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// floor(b * tau) by exact comparison, |b| modest.
inline std::int64_t floor_btau(std::int64_t b) {
    std::int64_t a = static_cast<std::int64_t>(std::floor(static_cast<double>(b) * 1.6180339887498949));
    while (GoldenNumber{-(a + 1), b}.sign() >= 0) ++a;  // b*tau >= a+1
    while (GoldenNumber{-a, b}.sign() < 0) --a;         // b*tau < a
    return a;
}

// random exact element of [0, 1): frac(b * tau)
inline GoldenNumber random_unit_offset(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> bs(-60, 60);
    const std::int64_t b = bs(rng);
    return GoldenNumber{-floor_btau(b), b};
}

}  // namespace detail_verify

// Pairs of exact positions with identical local chain patterns, found by
// bucketing radius-2 patches over an enumerated window and shifting both
// centers by the same exact offset in [0, 1).
struct MatchedPair {
    GoldenNumber x, y;
};

inline std::vector<MatchedPair> find_matched_pairs(std::size_t count, std::uint64_t seed) {
    const std::int64_t half = std::max<std::int64_t>(512, static_cast<std::int64_t>(count / 4) + 64);
    const chain::Window w(-half, half);
    const GoldenNumber radius{2, 0};

    std::map<std::string, std::vector<std::int64_t>> buckets;
    for (std::int64_t i = w.i_min() + 4; i <= w.i_max() - 4; ++i) {
        std::string key;
        for (const auto& off : w.patch(w.point_at(i), radius, true))
            key += std::to_string(off.a()) + "," + std::to_string(off.b()) + ";";
        buckets[key].push_back(i);
    }
    std::vector<std::vector<std::int64_t>> classes;
    for (auto& [k, v] : buckets)
        if (v.size() >= 2) classes.push_back(std::move(v));
    if (classes.empty()) throw std::runtime_error("find_matched_pairs: no repeated patches");

    std::mt19937_64 rng(seed);
    std::vector<MatchedPair> out;
    out.reserve(count);
    std::uniform_int_distribution<std::size_t> pick_class(0, classes.size() - 1);
    while (out.size() < count) {
        const auto& cls = classes[pick_class(rng)];
        std::uniform_int_distribution<std::size_t> pick(0, cls.size() - 1);
        const std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        if (i == j) continue;
        const GoldenNumber d = detail_verify::random_unit_offset(rng);
        out.push_back({w.point_at(cls[i]) + d, w.point_at(cls[j]) + d});
    }
    return out;
}

inline Suite suite_fibword() {
    using namespace detail_verify;
    using namespace fibword;
    Suite s;

    bool concat = true;
    for (int i = 1; i + 2 <= 22 && concat; ++i)
        concat = one_sided_word(i + 2).letters ==
                 one_sided_word(i + 1).letters + one_sided_word(i).letters;
    add(s, "u^(i+2) = u^(i+1) u^(i), i <= 20", concat);

    bool counts = true;
    for (int i = 1; i <= 22 && counts; ++i) {
        std::int64_t na = 0, nb = 0;
        for (char c : one_sided_word(i).letters) (c == 'a' ? na : nb)++;
        counts = na == fibonacci(i - 1) && nb == fibonacci(i - 2);
        auto [ca, cb] = letter_counts(i);
        counts = counts && ca == na && cb == nb;
    }
    add(s, "letter counts (f_{i-1}, f_{i-2})", counts);

    bool pal = true;
    for (int i = 3; i <= 20 && pal; ++i) {
        std::string t = one_sided_word(i).letters;
        t.resize(t.size() - 2);
        pal = std::equal(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.rbegin());
    }
    add(s, "u^(i) minus last two letters is a palindrome", pal);

    const Word win = two_sided_window(-fibonacci(16), fibonacci(16));
    const bool forbidden = win.letters.find("bb") == std::string::npos &&
                           win.letters.find("aaa") == std::string::npos;
    add(s, "no 'bb' or 'aaa' in two-sided windows", forbidden);

    bool fib_cf = true;
    for (int i = -1; i <= 40 && fib_cf; ++i) {
        const long double cf = fibonacci_closed_form(i);
        fib_cf = std::llround(static_cast<double>(cf)) == fibonacci(i) &&
                 std::abs(cf - static_cast<long double>(fibonacci(i))) <= 1e-9L;
    }
    add(s, "Fibonacci closed form, i <= 40", fib_cf);

    bool mcf = true;
    for (int n = 0; n <= 20 && mcf; ++n) {
        const Mat2 m = substitution_matrix_power(n);
        const auto cf = substitution_matrix_power_closed(n);
        mcf = std::abs(cf[0] - m.m[0][0]) <= 1e-9L && std::abs(cf[1] - m.m[0][1]) <= 1e-9L &&
              std::abs(cf[2] - m.m[1][0]) <= 1e-9L && std::abs(cf[3] - m.m[1][1]) <= 1e-9L;
    }
    add(s, "M^n closed form, n <= 20", mcf);

    bool mw = true;
    for (int l = 1; l <= 6 && mw; ++l) {
        auto [A0, B0] = super_words(l);
        auto [A1, B1] = super_words(l + 1);
        auto count = [](const Word& w) {
            std::int64_t na = 0, nb = 0;
            for (char c : w.letters) (c == 'a' ? na : nb)++;
            return std::pair{na, nb};
        };
        auto [a0a, a0b] = count(A0);
        auto [b0a, b0b] = count(B0);
        auto [a1a, a1b] = count(A1);
        auto [b1a, b1b] = count(B1);
        mw = (a1a == a0a + b0a) && (a1b == a0b + b0b) && (b1a == a0a + 2 * b0a) &&
             (b1b == a0b + 2 * b0b);
        mw = mw && word_length(A0) == golden_pow(2 * l + 1) && word_length(B0) == golden_pow(2 * l + 2);
    }
    add(s, "super-word counts follow M; |A_l| = tau^{2l+1}", mw);

    // repetitivity: every (2^{i+3}-2)-letter window of w contains u^(i+3)
    bool rep = true;
    {
        const Word stretch = two_sided_window(-800, 800);
        for (int i = 1; i <= 4 && rep; ++i) {
            const std::string needle = one_sided_word(i + 3).letters;
            const std::int64_t wlen = (std::int64_t{1} << (i + 3)) - 2;
            std::vector<std::size_t> occ;
            for (std::size_t p = stretch.letters.find(needle); p != std::string::npos;
                 p = stretch.letters.find(needle, p + 1))
                occ.push_back(p);
            if (occ.empty()) {
                rep = false;
                break;
            }
            // every window [q, q + wlen) inside the stretch must contain a full occurrence
            for (std::size_t q = 0; q + static_cast<std::size_t>(wlen) <= stretch.letters.size() && rep;
                 ++q) {
                bool found = false;
                for (std::size_t p : occ)
                    if (p >= q && p + needle.size() <= q + static_cast<std::size_t>(wlen)) {
                        found = true;
                        break;
                    }
                rep = found;
            }
        }
    }
    add(s, "repetitivity windows contain u^(i+3), i <= 4", rep);

    const FreqPair f1 = absolute_frequency(1);
    bool freq = std::abs(f1.freq_B / f1.freq_A - GoldenNumber::tau().value()) < 1e-12;
    {
        // empirical block count over [0, tau^18]
        const double L = golden_pow(18).value();
        const chain::SuperWindow sw = chain::SuperWindow::covering(1, -1.0, L + 1.0);
        std::int64_t nA = 0;
        for (std::size_t k = 0; k < sw.tags.size(); ++k)
            if (sw.starts_d[k] >= 0.0 && sw.starts_d[k + 1] <= L &&
                sw.tags[k] == fibword::BlockType::A)
                ++nA;
        freq = freq && std::abs(static_cast<double>(nA) / L - f1.freq_A) < 1e-3;
    }
    add(s, "absolute frequency formula vs empirical count", freq);

    return s;
}

inline Suite suite_chain() {
    using namespace detail_verify;
    Suite s;

    const chain::Window w(-3000, 3000);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> as(-900, 900), bs(-550, 550);
    bool oracle = true;
    int tested = 0;
    for (int k = 0; k < 3000; ++k) {
        const GoldenNumber x{as(rng), bs(rng)};
        if (std::abs(x.value()) > 1000.0) continue;
        ++tested;
        const chain::AlphaBeta fast = chain::alpha_beta(x);
        const chain::AlphaBeta scan = w.alpha_beta_scan(x);
        if (!(fast.alpha == scan.alpha && fast.beta == scan.beta)) {
            oracle = false;
            break;
        }
    }
    add(s, "alpha/beta greedy equals window scan", oracle, str(tested) + " exact samples");

    bool sandwich = true, gaps = true;
    std::uniform_real_distribution<double> xs(-800.0, 800.0);
    for (int k = 0; k < 3000 && sandwich; ++k) {
        const double x = xs(rng);
        const chain::AlphaBeta ab = chain::alpha_beta(x);
        sandwich = ab.alpha.value() <= x + 1e-9 && x < ab.beta.value() + 1e-9;
        const GoldenNumber g = ab.beta - ab.alpha;
        gaps = gaps && (g == GoldenNumber{1, 0} || g == GoldenNumber::tau());
    }
    add(s, "alpha(x) <= x < beta(x), gap in {1, tau}", sandwich && gaps);

    bool rc = true;
    for (std::int64_t i = -300; i <= 300 && rc; i += 7) {
        const double x = chain::point(i).value() + 1e-10;
        rc = chain::alpha(x) == chain::point(i);
    }
    add(s, "right-continuity at chain points", rc);

    bool ulen = true;
    for (int i = 1; i <= 25 && ulen; ++i)
        ulen = fibword::word_length(fibword::one_sided_word(i)) == golden_pow(i);
    add(s, "|u^(i)| = tau^i exactly", ulen);

    bool sp = true;
    for (int l = 1; l <= 2 && sp; ++l) {
        const chain::Window win(-1200, 1200);
        const auto idx = win.super_point_indices_scan(l);
        const double lo = win.point_d(idx.front()), hi = win.point_d(idx.back());
        const auto fast = chain::super_points(l, lo - 0.5, hi + 0.5);
        sp = fast.size() == idx.size();
        for (std::size_t k = 0; k < idx.size() && sp; ++k)
            sp = fast[k] == win.point_at(idx[k]);
    }
    add(s, "super-points match the patch-matching oracle", sp);

    bool twogaps = true;
    for (int l = 1; l <= 4 && twogaps; ++l) {
        const double span = 60.0 * golden_pow(2 * l + 2).value();
        const auto pts = chain::super_points(l, -span, span);
        twogaps = pts.size() >= 50;
        for (std::size_t k = 0; k + 1 < pts.size() && twogaps; ++k) {
            const GoldenNumber g = pts[k + 1] - pts[k];
            twogaps = (g == golden_pow(2 * l + 1)) || (g == golden_pow(2 * l + 2));
        }
    }
    add(s, "super-point gaps take exactly two values", twogaps);

    {
        auto census = [](std::int64_t half) {
            const chain::Window win(-half, half);
            std::set<std::string> keys;
            const GoldenNumber radius{5, 0};
            for (std::int64_t i = win.i_min() + 8; i <= win.i_max() - 8; ++i) {
                std::string key;
                for (const auto& off : win.patch(win.point_at(i), radius, false))
                    key += std::to_string(off.a()) + "," + std::to_string(off.b()) + ";";
                keys.insert(key);
            }
            return keys;
        };
        const auto small = census(2500), large = census(5000);
        add(s, "FLC: radius-5 patch census stabilizes", small == large,
            str(small.size()) + " classes");
    }

    return s;
}

inline Suite suite_potential() {
    using namespace detail_verify;
    using potential::zeta;
    Suite s;

    add(s, "zeta(0) = 160/27", zeta(0.0) == 160.0 / 27.0);
    add(s, "zeta continuous at 1/4 (both branches give 52/27)",
        std::abs(zeta(0.25) - 52.0 / 27.0) < 1e-15 &&
            std::abs((64.0 / 27.0) * std::pow(3 * 0.25 - 1, 2) * (96 * 0.25 - 11) - 52.0 / 27.0) <
                1e-15);

    // one-sided derivatives via third-order stencils (exact for cubics)
    auto dplus = [](double x, double h) {
        return (-11 * zeta(x) + 18 * zeta(x + h) - 9 * zeta(x + 2 * h) + 2 * zeta(x + 3 * h)) /
               (6 * h);
    };
    auto dminus = [](double x, double h) {
        return (11 * zeta(x) - 18 * zeta(x - h) + 9 * zeta(x - 2 * h) - 2 * zeta(x - 3 * h)) /
               (6 * h);
    };
    bool c1 = true;
    for (double x : {0.25, -0.25, 1.0 / 3.0, -1.0 / 3.0}) {
        c1 = c1 && std::abs(dplus(x, 1e-6) - dminus(x, 1e-6)) <= 1e-9;
        c1 = c1 && std::abs(dplus(x, 1e-6) - potential::zeta_prime(x)) <= 1e-8;
    }
    add(s, "zeta is C^1 at the branch points", c1);

    bool supp = true;
    for (int k = 0; k <= 1000; ++k) {
        const double x = 1.0 / 3.0 + 4.0 * k / 1000.0;
        supp = supp && zeta(x) == 0.0 && zeta(-x) == 0.0;
    }
    add(s, "zeta vanishes outside |x| < 1/3", supp);

    add(s, "zeta''(0) = -128 and -4/zeta''(0) = 1/32",
        potential::zeta_second_at_zero() == -128.0 &&
            potential::min_lambda_nonminimal() == 1.0 / 32.0 &&
            potential::zeta_second(0.0).value == -128.0 && !potential::zeta_second(1.0 / 3).defined);

    bool scale = true;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(-50.0, 50.0);
    for (int k = 0; k < 500 && scale; ++k) {
        const double x = xs(rng);
        potential::PotentialSpec two{2.5, nullptr};
        scale = potential::V(x, two) == 2.5 * potential::V(x);
    }
    add(s, "V scales exactly with lambda", scale);

    bool fd = true;
    for (int k = 0; k < 2000 && fd; ++k) {
        const double x = xs(rng);
        const chain::AlphaBeta ab = chain::alpha_beta(x);
        const double a = ab.alpha.value(), b = ab.beta.value();
        const double off = (2 * x <= a + b) ? x - a : x - b;
        // skip the tie point and the bump edges
        if (std::abs(2 * x - a - b) < 1e-4) continue;
        bool near_edge = false;
        for (double e : {0.25, 1.0 / 3.0})
            if (std::abs(std::abs(off) - e) < 1e-4) near_edge = true;
        if (near_edge) continue;
        const double h = 1e-5;
        const double fdv = (potential::V(x + h) - potential::V(x - h)) / (2 * h);
        fd = std::abs(fdv - potential::V_prime(x)) <= 1e-6;
    }
    add(s, "V' matches central differences of V", fd);

    bool equi = true;
    const auto pairs = find_matched_pairs(2000, 99);
    for (const auto& p : pairs)
        equi = equi && potential::check_equivariance(p.x, p.y) &&
               potential::V(p.x) == potential::V(p.y);
    add(s, "V is S-equivariant (exact equality on matched pairs)", equi,
        str(pairs.size()) + " pairs");

    return s;
}

inline Suite suite_solver() {
    using namespace detail_verify;
    Suite s;

    add(s, "g(0) = 0, g(1) = tau^2, g(2) = 3 tau + 1 for the default anchor",
        solver::anchor_g(model::AnchorFn::linear_default(), 0) == GoldenNumber{0, 0} &&
            solver::anchor_g(model::AnchorFn::linear_default(), 1) == golden_pow(2) &&
            solver::anchor_g(model::AnchorFn::linear_default(), 2) == GoldenNumber{1, 3});

    solver::AILParams params;
    params.n = 200;
    params.trace = true;
    const solver::SolveResult res = solver::solve_fixed_point(params);

    bool ratios = true;
    for (std::size_t k = 1; k + 1 < res.deltas.size(); ++k)
        ratios = ratios && res.deltas[k + 1] / res.deltas[k] <= 1.0 / 32.0 + 1e-9;
    add(s, "observed contraction ratio <= 1/32 + 1e-9", ratios,
        str(res.iterations) + " iterations");

    bool mono = true;
    for (std::size_t k = 1; k + 1 < res.residual_trace.size(); ++k)
        mono = mono && res.residual_trace[k + 1] <= res.residual_trace[k] + 1e-12;
    add(s, "residual decreases monotonically after the first iterate", mono);

    potential::PotentialSpec spec{params.lambda, nullptr};
    add(s, "equilibrium residual <= 1e-9",
        model::equilibrium_residual(res.config, spec, 2) <= 1e-9);

    bool ball = true;
    const double rad = GoldenNumber::tau().value() / 62.0;
    for (std::int64_t i = -params.n; i <= params.n; ++i)
        ball = ball && std::abs(res.config.at(i) - res.g_at(i)) <= rad;
    add(s, "|u_i - g(i)| <= tau/62", ball);

    const solver::SolveResult tri = solver::solve_tridiagonal(params);
    double agree = 0.0;
    for (std::int64_t i = -params.n / 2; i <= params.n / 2; ++i)
        agree = std::max(agree, std::abs(tri.config.at(i) - res.config.at(i)));
    add(s, "tridiagonal and fixed-point solutions agree centrally", agree <= 1e-8,
        "sup diff " + str(agree));

    const double thr_lin = solver::lambda_threshold(model::AnchorFn::linear_default());
    const double thr_h1 = solver::lambda_threshold(model::AnchorFn::signed_square());
    add(s, "lambda thresholds: linear (2tau+1)/32, h1 adds sup|Dh| = 2",
        std::abs(thr_lin - (2 * GoldenNumber::tau().value() + 1) / 32.0) < 1e-15 &&
            std::abs(thr_h1 - (2 * GoldenNumber::tau().value() + 3) / 32.0) < 1e-15 &&
            thr_h1 >= thr_lin && thr_lin >= 1.0 / 32.0);

    return s;
}

inline Suite suite_minimal() {
    using namespace detail_verify;
    Suite s;

    const auto g2 = minimal::level_geometry(2);
    const auto g3 = minimal::level_geometry(3);
    add(s, "atom counts (2 f_{2l-2}, 2 f_{2l-1})",
        g2.atoms[0] == 4 && g2.atoms[1] == 6 && g3.atoms[0] == 10 && g3.atoms[1] == 16);

    bool rot = true;
    const GoldenRational expect{GoldenNumber{1, 3}, 2};
    for (int l = 1; l <= 6 && rot; ++l) rot = minimal::rotation_number_level(l) == expect;
    add(s, "rotation number is exactly (3 tau + 1)/2 for l <= 6", rot);

    bool ident = true;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(-300.0, 300.0);
    for (int l = 1; l <= 3 && ident; ++l) {
        const chain::SuperWindow swl = chain::SuperWindow::covering(l, -400.0, 400.0);
        const chain::SuperWindow swl1 = chain::SuperWindow::covering(l + 1, -400.0, 400.0);
        for (int k = 0; k < 700 && ident; ++k) {
            const double x = xs(rng);
            ident = minimal::same_point(minimal::collapse(l, minimal::project(swl1, x)),
                                        minimal::project(swl, x), 1e-9);
        }
    }
    add(s, "collapse(project(l+1, x)) = project(l, x)", ident);

    minimal::OptimizeSettings fast;
    fast.restarts = 6;
    const minimal::LevelOptimum opt1 = minimal::optimize_level(1, fast);
    const double c1 = opt1.geometry.circumference[0], c2 = opt1.geometry.circumference[1];
    const bool anti = std::abs(opt1.circle[0].arcs[0] - c1 / 2) <= 1e-6 &&
                      std::abs(opt1.circle[1].arcs[0] - c2 / 2) <= 1e-6;
    add(s, "level-1 optimum is antipodal", anti);

    bool formula = true;
    for (int i = 0; i < 2; ++i) {
        const double c = opt1.geometry.circumference[i];
        const double d = opt1.circle[i].arcs[0];
        const double direct = d * d - c * d + potential::V(d) + c * c / 2 + potential::V(0.0);
        formula = formula && std::abs(direct - opt1.circle[i].energy) <= 1e-10;
    }
    add(s, "level-1 energy matches the explicit segment formula", formula);

    const minimal::LevelConfig cfg = minimal::lift(opt1.geometry, -120.0, 120.0);
    bool liftok = cfg.at(0) == 0.0 && cfg.at(1) == c1 / 2;
    for (std::int64_t n = cfg.n_min; n < cfg.n_max() && liftok; ++n)
        liftok = cfg.at(n) < cfg.at(n + 1);
    add(s, "lift is strictly increasing with theta_0 = 0, theta_1 = tau^3/2", liftok);

    const minimal::LevelOptimum opt2 = minimal::optimize_level(2, fast);
    const minimal::LevelConfig cfg2 = minimal::lift(opt2.geometry, -500.0, 500.0);
    const auto rep = minimal::combinatorics_certificate(cfg2, 10);
    add(s, "level-2 combinatorics: spread <= 2 and gap bound", rep.spread_pass && rep.gap_pass,
        "gap " + str(rep.max_gap) + " vs " + str(rep.gap_bound));

    return s;
}

inline std::vector<std::pair<std::string, Suite (*)()>> all_suites() {
    return {{"fibword", &suite_fibword},
            {"chain", &suite_chain},
            {"potential", &suite_potential},
            {"solver", &suite_solver},
            {"minimal", &suite_minimal}};
}

}  // namespace fkqc::verify
