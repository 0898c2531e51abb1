#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fkqc/chain.hpp"
#include "fkqc/golden.hpp"
#include "fkqc/potential.hpp"
#include "fkqc/verify.hpp"

using namespace fkqc;
using namespace fkqc::potential;

TEST_CASE("zeta: values at the seams") {
    CHECK(zeta(0.0) == 160.0 / 27.0);
    CHECK(zeta(1.0 / 3.0) == 0.0);
    CHECK(zeta(-1.0 / 3.0) == 0.0);

    // 1/4 from both branch formulas: 52/27
    const double quad = -64.0 * 0.25 * 0.25 + 160.0 / 27.0;
    const double flank = (64.0 / 27.0) * std::pow(3 * 0.25 - 1, 2) * (96 * 0.25 - 11);
    CHECK(quad == Catch::Approx(52.0 / 27.0).epsilon(1e-15));
    CHECK(flank == Catch::Approx(52.0 / 27.0).epsilon(1e-15));
    CHECK(zeta(0.25) == Catch::Approx(52.0 / 27.0).epsilon(1e-15));
    CHECK(zeta(-0.25) == zeta(0.25));
}

TEST_CASE("zeta: compact support") {
    for (int k = 0; k <= 1000; ++k) {
        const double x = 1.0 / 3.0 + 5.0 * k / 1000.0;
        CHECK(zeta(x) == 0.0);
        CHECK(zeta(-x) == 0.0);
        CHECK(zeta_prime(x) == 0.0);
    }
}

TEST_CASE("zeta is C^1 at the branch points") {
    // third-order one-sided stencils are exact for the piecewise cubic
    auto dplus = [](double x, double h) {
        return (-11 * zeta(x) + 18 * zeta(x + h) - 9 * zeta(x + 2 * h) + 2 * zeta(x + 3 * h)) /
               (6 * h);
    };
    auto dminus = [](double x, double h) {
        return (11 * zeta(x) - 18 * zeta(x - h) + 9 * zeta(x - 2 * h) - 2 * zeta(x - 3 * h)) /
               (6 * h);
    };
    const double h = 1e-6;
    for (double x : {0.25, -0.25, 1.0 / 3.0, -1.0 / 3.0}) {
        CHECK(std::abs(dplus(x, h) - dminus(x, h)) <= 1e-9);
        CHECK(std::abs(dplus(x, h) - zeta_prime(x)) <= 1e-8);
    }
    // derivative elsewhere against central differences
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> xs(-0.45, 0.45);
    for (int k = 0; k < 2000; ++k) {
        const double x = xs(rng);
        bool near_seam = false;
        for (double s : {0.25, 1.0 / 3.0})
            if (std::abs(std::abs(x) - s) < 1e-4) near_seam = true;
        if (near_seam) continue;
        const double fd = (zeta(x + 1e-6) - zeta(x - 1e-6)) / 2e-6;
        CHECK(std::abs(fd - zeta_prime(x)) <= 1e-6);
    }
}

TEST_CASE("zeta second derivative and the non-minimality constants") {
    CHECK(zeta_second_at_zero() == -128.0);
    CHECK(min_lambda_nonminimal() == 1.0 / 32.0);
    CHECK(1.0 > min_lambda_nonminimal());
    CHECK(-4.0 / zeta_second_at_zero() == 1.0 / 32.0);

    CHECK(zeta_second(0.0).defined);
    CHECK(zeta_second(0.0).value == -128.0);
    CHECK(zeta_second(0.1).value == -128.0);

    // C^2 fails exactly at |x| = 1/3: one-sided values with a marker
    const ZetaSecond at_third = zeta_second(1.0 / 3.0);
    CHECK_FALSE(at_third.defined);
    CHECK(at_third.left == Catch::Approx(896.0).epsilon(1e-12));
    CHECK(at_third.right == 0.0);
    const ZetaSecond at_neg = zeta_second(-1.0 / 3.0);
    CHECK_FALSE(at_neg.defined);
    CHECK(at_neg.right == Catch::Approx(896.0).epsilon(1e-12));
    CHECK(at_neg.left == 0.0);

    // zeta is C^2 at 1/4 (both pieces give -128 there)
    CHECK(zeta_second(0.25).defined);
    CHECK(zeta_second(0.25).value == -128.0);
}

TEST_CASE("V: worked examples") {
    const double tau = GoldenNumber::tau().value();
    CHECK(V(0.0) == 160.0 / 27.0);
    CHECK(V(tau / 2) == 0.0);
    CHECK(V(golden_pow(2).value() + 0.1) ==
          Catch::Approx(5.285925925925926).epsilon(1e-14));
}

TEST_CASE("V vanishes whenever the nearest chain point is at distance >= 1/3") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(-200.0, 200.0);
    for (int k = 0; k < 4000; ++k) {
        const double x = xs(rng);
        const chain::AlphaBeta ab = chain::alpha_beta(x);
        const double d = std::min(x - ab.alpha.value(), ab.beta.value() - x);
        if (d >= 1.0 / 3.0 + 1e-9) CHECK(V(x) == 0.0);
        CHECK(V(x) >= 0.0);
        CHECK(V(x) <= 160.0 / 27.0 + 1e-12);
    }
}

TEST_CASE("V scales exactly with lambda") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> xs(-100.0, 100.0);
    for (double lambda : {0.25, 1.0, 3.5}) {
        const PotentialSpec spec{lambda, nullptr};
        for (int k = 0; k < 500; ++k) {
            const double x = xs(rng);
            CHECK(V(x, spec) == lambda * V(x));
            CHECK(V_prime(x, spec) == lambda * V_prime(x));
        }
    }
}

TEST_CASE("V' matches central finite differences away from ties and edges") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(-300.0, 300.0);
    int tested = 0;
    for (int k = 0; k < 6000; ++k) {
        const double x = xs(rng);
        const chain::AlphaBeta ab = chain::alpha_beta(x);
        const double a = ab.alpha.value(), b = ab.beta.value();
        if (std::abs(2 * x - a - b) < 1e-4) continue;  // branch tie
        const double off = (2 * x <= a + b) ? x - a : x - b;
        bool near_edge = false;
        for (double e : {0.25, 1.0 / 3.0})
            if (std::abs(std::abs(off) - e) < 1e-4) near_edge = true;
        if (near_edge) continue;
        ++tested;
        const double h = 1e-5;
        const double fd = (V(x + h) - V(x - h)) / (2 * h);
        CHECK(std::abs(fd - V_prime(x)) <= 1e-6);
    }
    CHECK(tested > 4000);
}

TEST_CASE("V depends only on the offsets to the neighbouring chain points") {
    // matched pairs built from exact positions give bitwise-equal values
    const auto pairs = verify::find_matched_pairs(3000, 17);
    for (const auto& p : pairs) {
        CHECK(V(p.x) == V(p.y));
        CHECK(V_prime(p.x) == V_prime(p.y));
    }
}

TEST_CASE("equivariance probe") {
    CHECK(check_equivariance(0.3, 0.3));
    // 0 and tau^3 are both centers of the c_1 patch
    const GoldenNumber zero{0, 0};
    CHECK(check_equivariance(zero, golden_pow(3)));
    CHECK(V(zero) == V(golden_pow(3)));

    const auto pairs = verify::find_matched_pairs(1000, 23);
    for (const auto& p : pairs) CHECK(check_equivariance(p.x, p.y));
}

TEST_CASE("substrate cache agrees bitwise with the greedy path") {
    const SubstrateCache cache = SubstrateCache::covering(-50.0, 50.0);
    const PotentialSpec fast{1.0, &cache};
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> xs(-50.0, 50.0);
    for (int k = 0; k < 4000; ++k) {
        const double x = xs(rng);
        CHECK(V(x, fast) == V(x));
        CHECK(V_prime(x, fast) == V_prime(x));
    }
}
