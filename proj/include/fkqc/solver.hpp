#pragma once

// Anti-integrable-limit equilibrium solver. The anchor g(i) is the chain
// point nearest to h(i) (ties to alpha); the contraction
//   Phi_lambda(u)_i = (Delta u)_i / (lambda zeta''(0)) + g(i)
// maps the sup-ball Pi of radius (2 tau + sup|Delta h|)/(-lambda zeta''(0) - 4)
// around g into itself and contracts by 4/(-lambda zeta''(0)) = 1/(32 lambda);
// for lambda = 1 the radius is tau/62 and the rate 1/32. The fixed point is an
// equilibrium of H_lambda because every coordinate stays in the quadratic part
// of V. The same equations truncate to the tridiagonal system
//   alpha u_{i-1} + (1-2 alpha) u_i + alpha u_{i+1} = g(i),  alpha = 1/(128 lambda),
// solved directly by elimination.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fkqc/chain.hpp"
#include "fkqc/golden.hpp"
#include "fkqc/model.hpp"
#include "fkqc/potential.hpp"

namespace fkqc::solver {

// g(i) = argmin_{x in S} |x - h(i)|, ties resolved to alpha(h(i)).
inline GoldenNumber anchor_g(const model::AnchorFn& h, std::int64_t i) {
    if (h.exact()) {
        const GoldenNumber two = h.two_h(i);
        const chain::AlphaBeta ab = chain::alpha_beta_half(two);
        return (two <= ab.alpha + ab.beta) ? ab.alpha : ab.beta;
    }
    const double hd = h(i);
    const chain::AlphaBeta ab = chain::alpha_beta(hd);
    return (2.0 * hd <= ab.alpha.value() + ab.beta.value()) ? ab.alpha : ab.beta;
}

// Radius of the invariant ball Pi around g.
inline double pi_radius(double lambda, double sup_dh) {
    const double denom = 128.0 * lambda - 4.0;
    if (denom <= 0.0) throw std::invalid_argument("pi_radius: lambda too small for contraction");
    const double tau = GoldenNumber::tau().value();
    return (2.0 * tau + sup_dh) / denom;
}

// max(1/32, (2 tau + 1 + sup|Delta h|)/32): above this the fixed point is a
// genuine (and non-minimal) equilibrium.
inline double lambda_threshold(const model::AnchorFn& h, std::int64_t half_window = 1000) {
    const double sup_dh = h.sup_abs_laplacian(half_window);
    if (!std::isfinite(sup_dh)) throw std::invalid_argument("lambda_threshold: unbounded Delta h");
    const double tau = GoldenNumber::tau().value();
    return std::max(potential::min_lambda_nonminimal(), (2.0 * tau + 1.0 + sup_dh) / 32.0);
}

struct AILParams {
    double lambda = 1.0;
    model::AnchorFn anchor = model::AnchorFn::linear_default();
    std::int64_t n = 500;  // solve on i in [-n, n]
    double tol = 1e-12;
    int max_iter = 60;
    bool trace = false;  // record per-iteration residuals
};

struct SolveResult {
    model::Configuration config;        // i in [-n, n]
    std::vector<GoldenNumber> g_exact;  // g(i) for i in [-n-1, n+1]
    int iterations = 0;
    double final_delta = 0.0;
    std::vector<double> deltas;          // sup|u^k - u^{k-1}|, k = 1..iterations
    std::vector<double> residual_trace;  // linearized residual per iterate (when traced)

    double g_at(std::int64_t i) const {
        const std::int64_t n = (static_cast<std::int64_t>(g_exact.size()) - 3) / 2;
        if (i < -n - 1 || i > n + 1) throw std::out_of_range("SolveResult::g_at");
        return g_exact[static_cast<std::size_t>(i + n + 1)].value();
    }
};

// One application of Phi_lambda on a window; g_ext supplies g over
// [i_min - 1, i_max + 1] so the boundary sites see pinned ghost neighbors.
// Inputs outside the ball Pi are rejected.
inline model::Configuration contraction_step(const model::Configuration& u,
                                             const std::vector<double>& g_ext, double lambda,
                                             double sup_dh = 0.0) {
    if (g_ext.size() != u.size() + 2)
        throw std::invalid_argument("contraction_step: g must cover the window plus ghosts");
    const double radius = pi_radius(lambda, sup_dh);
    for (std::size_t k = 0; k < u.size(); ++k)
        if (std::abs(u.positions[k] - g_ext[k + 1]) > radius + 1e-12)
            throw std::domain_error("contraction_step: input configuration is outside Pi");
    const double c = -1.0 / (128.0 * lambda);
    model::Configuration out = u;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double left = (k == 0) ? g_ext.front() : u.positions[k - 1];
        const double right = (k + 1 == u.size()) ? g_ext.back() : u.positions[k + 1];
        const double lap = left - 2.0 * u.positions[k] + right;
        out.positions[k] = c * lap + g_ext[k + 1];
    }
    return out;
}

// Fixed-point iteration of Phi_lambda starting from u = g. Internally long
// double so the observed step ratios track the 1/(32 lambda) bound down to
// the stopping tolerance.
inline SolveResult solve_fixed_point(const AILParams& params) {
    if (params.n < 2) throw std::invalid_argument("solve_fixed_point: window too small");
    if (params.tol <= 0) throw std::invalid_argument("solve_fixed_point: tolerance must be positive");
    const double threshold = lambda_threshold(params.anchor, params.n);
    if (params.lambda < threshold)
        throw std::invalid_argument("solve_fixed_point: lambda below the guaranteed-contraction threshold " +
                                    std::to_string(threshold));

    const std::int64_t n = params.n;
    const std::size_t m = static_cast<std::size_t>(2 * n + 3);  // [-n-1, n+1]

    SolveResult res;
    res.g_exact.reserve(m);
    for (std::int64_t i = -n - 1; i <= n + 1; ++i)
        res.g_exact.push_back(anchor_g(params.anchor, i));

    std::vector<long double> g(m), u(m), next(m);
    for (std::size_t k = 0; k < m; ++k) g[k] = static_cast<long double>(res.g_exact[k].value());
    u = g;
    next = g;

    const long double c = -1.0L / (128.0L * static_cast<long double>(params.lambda));
    const long double curb = -128.0L * static_cast<long double>(params.lambda);

    auto linearized_residual = [&]() {
        long double r = 0.0L;
        for (std::size_t k = 1; k + 1 < m; ++k) {
            const long double lap = u[k - 1] - 2.0L * u[k] + u[k + 1];
            const long double v = -lap + curb * (u[k] - g[k]);
            r = std::max(r, std::abs(v));
        }
        return static_cast<double>(r);
    };

    bool converged = false;
    for (int it = 1; it <= params.max_iter; ++it) {
        long double delta = 0.0L;
        for (std::size_t k = 1; k + 1 < m; ++k) {
            const long double lap = u[k - 1] - 2.0L * u[k] + u[k + 1];
            next[k] = c * lap + g[k];
            delta = std::max(delta, std::abs(next[k] - u[k]));
        }
        std::swap(u, next);
        res.iterations = it;
        res.final_delta = static_cast<double>(delta);
        res.deltas.push_back(res.final_delta);
        if (params.trace) res.residual_trace.push_back(linearized_residual());
        if (res.final_delta <= params.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::runtime_error("solve_fixed_point: max_iter exceeded");

    res.config.i_min = -n;
    res.config.positions.assign(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (std::int64_t i = -n; i <= n; ++i)
        res.config.positions[static_cast<std::size_t>(i + n)] =
            static_cast<double>(u[static_cast<std::size_t>(i + n + 1)]);
    res.config.anchor = params.anchor;
    res.config.lambda = params.lambda;
    return res;
}

// Direct solve of the symmetric tridiagonal system with diagonal 1 - 2 alpha
// and off-diagonal alpha, size 2n+1. Strict diagonal dominance (alpha < 1/4,
// the regime the model uses) makes pivotless elimination safe.
inline std::vector<double> tridiagonal_solve(std::int64_t n, double alpha,
                                             const std::vector<double>& rhs) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("tridiagonal_solve: alpha out of (0, 1/2)");
    if (rhs.size() != static_cast<std::size_t>(2 * n + 1))
        throw std::invalid_argument("tridiagonal_solve: rhs must have length 2n+1");
    const std::size_t m = rhs.size();
    const long double d0 = 1.0L - 2.0L * static_cast<long double>(alpha);
    const long double a = static_cast<long double>(alpha);
    std::vector<long double> diag(m, d0), b(rhs.begin(), rhs.end());
    for (std::size_t k = 1; k < m; ++k) {
        const long double w = a / diag[k - 1];
        diag[k] -= w * a;
        b[k] -= w * b[k - 1];
    }
    std::vector<double> x(m);
    long double xk = b[m - 1] / diag[m - 1];
    x[m - 1] = static_cast<double>(xk);
    for (std::size_t k = m - 1; k-- > 0;) {
        xk = (b[k] - a * xk) / diag[k];
        x[k] = static_cast<double>(xk);
    }
    return x;
}

// Tridiagonal route for the same window: T_{2n+1} u = (g(-n), ..., g(n)).
inline SolveResult solve_tridiagonal(const AILParams& params) {
    if (params.n < 2) throw std::invalid_argument("solve_tridiagonal: window too small");
    const double alpha = 1.0 / (128.0 * params.lambda);
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("solve_tridiagonal: lambda incompatible with truncation solve");
    const std::int64_t n = params.n;
    SolveResult res;
    res.g_exact.reserve(static_cast<std::size_t>(2 * n + 3));
    for (std::int64_t i = -n - 1; i <= n + 1; ++i)
        res.g_exact.push_back(anchor_g(params.anchor, i));
    std::vector<double> rhs(static_cast<std::size_t>(2 * n + 1));
    for (std::int64_t i = -n; i <= n; ++i)
        rhs[static_cast<std::size_t>(i + n)] = res.g_exact[static_cast<std::size_t>(i + n + 1)].value();
    res.config.i_min = -n;
    res.config.positions = tridiagonal_solve(n, alpha, rhs);
    res.config.anchor = params.anchor;
    res.config.lambda = params.lambda;
    res.iterations = 1;
    res.final_delta = 0.0;
    return res;
}

}  // namespace fkqc::solver
