#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "fkqc/chain.hpp"
#include "fkqc/fibword.hpp"
#include "fkqc/golden.hpp"

using namespace fkqc;
using namespace fkqc::chain;

TEST_CASE("GoldenNumber arithmetic is exact") {
    const GoldenNumber tau = GoldenNumber::tau();
    CHECK(tau * tau == tau + GoldenNumber{1, 0});  // tau^2 = tau + 1
    CHECK(golden_pow(0) == GoldenNumber{1, 0});
    CHECK(golden_pow(-1) == GoldenNumber{-1, 1});
    for (int n = -20; n <= 20; ++n) CHECK(golden_pow(n) * golden_pow(-n) == GoldenNumber{1, 0});
    for (int n = -20; n <= 20; ++n) CHECK(golden_pow(n + 1) == golden_pow(n) * tau);

    CHECK(GoldenNumber::sqrt5() * GoldenNumber::sqrt5() == GoldenNumber{5, 0});
    CHECK(GoldenNumber{0, 0}.sign() == 0);
    CHECK(GoldenNumber{-8, 5}.sign() > 0);   // 5 tau = 8.09 > 8
    CHECK(GoldenNumber{-9, 5}.sign() < 0);   // 5 tau < 9
    CHECK(GoldenNumber{13, -8}.sign() > 0);  // 8 tau = 12.94 < 13
    CHECK(GoldenNumber{12, -8}.sign() < 0);

    // norm and conjugate: x * conj(x) = N(x)
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> d(-50, 50);
    for (int k = 0; k < 200; ++k) {
        const GoldenNumber x{d(rng), d(rng)};
        CHECK(x * x.conjugate() == GoldenNumber{x.norm(), 0});
    }

    CHECK(GoldenRational(GoldenNumber{2, 6}, 4) == GoldenRational(GoldenNumber{1, 3}, 2));
    CHECK(golden_div(GoldenNumber{0, 1}, GoldenNumber{0, 1}) ==
          GoldenRational(GoldenNumber{1, 0}, 1));
}

TEST_CASE("chain points") {
    CHECK(point(0) == GoldenNumber{0, 0});
    CHECK(point(2) == GoldenNumber{1, 1});  // tau + 1 = tau^2
    CHECK(point(-1) == GoldenNumber{0, -1});

    // S_{i+1} - S_i = |w_i|
    for (std::int64_t i = -400; i <= 400; ++i) {
        const GoldenNumber step = point(i + 1) - point(i);
        if (fibword::two_sided_letter(i) == fibword::Letter::a)
            CHECK(step == GoldenNumber::tau());
        else
            CHECK(step == GoldenNumber{1, 0});
    }
}

TEST_CASE("alpha/beta on floats: worked examples") {
    const double tau = GoldenNumber::tau().value();

    auto ab = alpha_beta(0.5);
    CHECK(ab.alpha == GoldenNumber{0, 0});
    CHECK(ab.beta == GoldenNumber{0, 1});

    ab = alpha_beta(4.0);
    CHECK(ab.alpha == golden_pow(2));
    CHECK(ab.beta == golden_pow(3));

    ab = alpha_beta(-1.0);
    CHECK(ab.alpha == GoldenNumber{0, -1});
    CHECK(ab.beta == GoldenNumber{0, 0});

    CHECK(gap(0.0) == GoldenNumber::tau());
    CHECK(gap(tau) == GoldenNumber{1, 0});
}

TEST_CASE("alpha/beta greedy equals brute-force scan on exact inputs") {
    const Window w(-2300, 2300);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> as(-1000, 1000), bs(-1000, 1000);
    int tested = 0;
    for (int k = 0; k < 6000; ++k) {
        const GoldenNumber x{as(rng), bs(rng)};
        if (std::abs(x.value()) > 2500.0) continue;
        ++tested;
        const AlphaBeta fast = alpha_beta(x);
        const AlphaBeta scan = w.alpha_beta_scan(x);
        REQUIRE(fast.alpha == scan.alpha);
        REQUIRE(fast.beta == scan.beta);
        // attainment: alpha(x) = x iff x is a chain point
        if (fast.alpha == x) CHECK(w.alpha_beta_scan(x).alpha == x);
    }
    CHECK(tested > 3000);
}

TEST_CASE("alpha/beta sandwich and two-valued gaps on floats") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> xs(-900.0, 900.0);
    for (int k = 0; k < 5000; ++k) {
        const double x = xs(rng);
        const AlphaBeta ab = alpha_beta(x);
        CHECK(ab.alpha.value() <= x + 1e-9);
        CHECK(x < ab.beta.value() + 1e-9);
        const GoldenNumber g = ab.beta - ab.alpha;
        CHECK((g == GoldenNumber{1, 0} || g == GoldenNumber::tau()));
    }
}

TEST_CASE("right-continuity at chain points") {
    for (std::int64_t i = -200; i <= 200; ++i) {
        const GoldenNumber s = point(i);
        CHECK(alpha(s.value() + 1e-10) == s);
        // exact attainment
        CHECK(alpha(s) == s);
    }
}

TEST_CASE("gap at a point checked against an enumerated window") {
    const double x = golden_pow(2).value() + 1.2;
    const Window w(-64, 64);
    const AlphaBeta scan = w.alpha_beta_scan(x);
    CHECK(gap(x) == scan.beta - scan.alpha);
}

TEST_CASE("assigned word lengths are tau powers") {
    for (int i = 1; i <= 30; ++i)
        CHECK(fibword::word_length(fibword::one_sided_word(i)) == golden_pow(i));
}

TEST_CASE("local patches") {
    const double tau = GoldenNumber::tau().value();
    const auto p0 = local_patch(0.0, 1.1);
    REQUIRE(p0.size() == 1);
    CHECK(p0[0] == Catch::Approx(0.0).margin(1e-12));

    const auto p1 = local_patch(tau, 1.1);
    REQUIRE(p1.size() == 2);
    CHECK(p1[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(p1[1] == Catch::Approx(1.0).margin(1e-12));

    // identical letter context gives identical exact patches
    const GoldenNumber r{1, 0};
    const auto ref = local_patch(GoldenNumber{0, 0}, r);
    const auto other = local_patch(golden_pow(3), r);  // tau^3 is in S^1
    CHECK(ref == other);
}

TEST_CASE("super-points against the patch-matching oracle") {
    const Window w(-1400, 1400);
    for (int l = 1; l <= 3; ++l) {
        const auto idx = w.super_point_indices_scan(l);
        REQUIRE(idx.size() >= 4);
        const auto fast = super_points(l, w.point_d(idx.front()) - 0.5, w.point_d(idx.back()) + 0.5);
        REQUIRE(fast.size() == idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) CHECK(fast[k] == w.point_at(idx[k]));
    }
}

TEST_CASE("super-point structure") {
    // 0 is in S^l for every level; the first positive level-1 point is tau^3
    for (int l = 1; l <= 4; ++l) {
        const auto pts = super_points(l, -1.0, golden_pow(2 * l + 2).value() + 1.0);
        REQUIRE_FALSE(pts.empty());
        bool has_zero = false;
        for (const auto& p : pts) has_zero = has_zero || p.is_zero();
        CHECK(has_zero);
    }
    const auto s1 = super_points(1, 0.5, 100.0);
    CHECK(s1.front() == golden_pow(3));

    // gaps take exactly the two values tau^{2l+1}, tau^{2l+2}
    for (int l = 1; l <= 4; ++l) {
        const double span = 56.0 * golden_pow(2 * l + 2).value();
        const auto pts = super_points(l, -span, span);
        REQUIRE(pts.size() >= 50);
        std::set<std::pair<std::int64_t, std::int64_t>> gaps;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const GoldenNumber g = pts[k + 1] - pts[k];
            CHECK((g == golden_pow(2 * l + 1) || g == golden_pow(2 * l + 2)));
            gaps.insert({g.a(), g.b()});
        }
        CHECK(gaps.size() == 2);
    }

    // S^{l+1} = tau^2 S^l
    const auto lvl1 = super_points(1, -200.0, 200.0);
    const auto lvl2 = super_points(2, -500.0, 500.0);
    const GoldenNumber tau2 = golden_pow(2);
    for (const auto& p : lvl1) {
        const GoldenNumber q = p * tau2;
        if (std::abs(q.value()) < 450.0)
            CHECK(std::count(lvl2.begin(), lvl2.end(), q) == 1);
    }
}

TEST_CASE("super alpha/beta/classification") {
    const SuperWindow sw = SuperWindow::covering(1, -60.0, 60.0);
    CHECK(super_alpha(sw, 0.5) == GoldenNumber{0, 0});
    CHECK(super_beta(sw, 0.5) == golden_pow(3));
    CHECK(classify_interval(sw, 0.5) == IntervalTag::A);

    // alpha_1 = 0 on [0, tau^3)
    for (double x = 0.0; x < golden_pow(3).value() - 1e-9; x += 0.37)
        CHECK(super_alpha(sw, x) == GoldenNumber{0, 0});

    // x in S^l attains alpha_l(x) = x
    for (const auto& p : super_points(2, -300.0, 300.0)) {
        const SuperWindow sw2 = SuperWindow::covering(2, -400.0, 400.0);
        CHECK(sw2.starts[sw2.locate(p)] == p);
    }

    // tag A <=> gap tau^{2l+1}
    for (int l = 1; l <= 3; ++l) {
        const SuperWindow swl = SuperWindow::covering(l, -300.0, 300.0);
        for (double x = -250.0; x < 250.0; x += 3.1) {
            const GoldenNumber g = super_beta(swl, x) - super_alpha(swl, x);
            if (classify_interval(swl, x) == IntervalTag::A)
                CHECK(g == golden_pow(2 * l + 1));
            else
                CHECK(g == golden_pow(2 * l + 2));
        }
    }

    CHECK_THROWS_AS(SuperWindow::covering(0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sw.locate(1e9), std::out_of_range);
}

TEST_CASE("letter frequency estimates") {
    CHECK(letter_frequency_estimate(2) == 0.5);
    CHECK(letter_frequency_estimate(5) == 0.625);
    CHECK(fibword::fibonacci(19) == 6765);
    CHECK(fibword::fibonacci(20) == 10946);
    CHECK(letter_frequency_estimate(20) == 6765.0 / 10946.0);
    CHECK(letter_frequency_estimate(20) == Catch::Approx(0.6180339887).margin(1e-8));
    CHECK_THROWS_AS(letter_frequency_estimate(1), std::invalid_argument);

    const double inv_tau = 1.0 / GoldenNumber::tau().value();
    for (int l = 2; l <= 25; ++l) {
        const double bound = std::pow(GoldenNumber::tau().value(), -2.0 * (l - 1));
        CHECK(std::abs(letter_frequency_estimate(l) - inv_tau) <= bound);
    }
}

TEST_CASE("finite local complexity: patch census stabilizes") {
    auto census = [](std::int64_t half) {
        const Window w(-half, half);
        std::set<std::string> keys;
        const GoldenNumber radius{5, 0};
        for (std::int64_t i = w.i_min() + 8; i <= w.i_max() - 8; ++i) {
            std::string key;
            for (const auto& off : w.patch(w.point_at(i), radius, false))
                key += std::to_string(off.a()) + "," + std::to_string(off.b()) + ";";
            keys.insert(key);
        }
        return keys;
    };
    const auto small = census(3000);
    const auto large = census(6000);
    CHECK(small == large);
    CHECK(small.size() > 0);
    CHECK(small.size() < 200);  // finite, and small
}

TEST_CASE("window preconditions") {
    CHECK_THROWS_AS(Window(5, 5), std::invalid_argument);
    const Window w(-32, 32);
    CHECK_THROWS_AS(w.alpha_beta_scan(1e6), std::out_of_range);
    CHECK_THROWS_AS(w.patch(1e6, 1.0), std::out_of_range);
}
