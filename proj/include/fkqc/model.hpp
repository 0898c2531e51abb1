#pragma once

// Configurations of the Frenkel-Kontorova model with pair energy
// H_lambda(xi, eta) = (xi - eta)^2 / 2 + lambda V(xi): segment energies,
// equilibrium residuals 2x_i - x_{i-1} - x_{i+1} + lambda V'(x_i), rotation
// number and type-h diagnostics, the three-case single-site improvement from
// the non-minimality argument, and a grid oracle for segment minimality.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fkqc/chain.hpp"
#include "fkqc/golden.hpp"
#include "fkqc/potential.hpp"

namespace fkqc::model {

// Anchor function h: Z -> R. The linear default is h(i) = (3 tau + 1)/2 * i;
// the signed square is h_1(i) = i^2 for i >= 0, -i^2 otherwise. Exact kinds
// expose 2 h(i) in Z[tau] so the solver can snap anchors without floats.
class AnchorFn {
public:
    enum class Kind { Linear, SignedSquare, Table };

    static AnchorFn linear_default() {
        AnchorFn a;
        a.kind_ = Kind::Linear;
        a.two_theta_ = GoldenNumber{1, 3};  // 2 theta = 1 + 3 tau
        a.exact_ = true;
        a.name_ = "theta-default";
        return a;
    }

    static AnchorFn linear(double theta) {
        AnchorFn a;
        a.kind_ = Kind::Linear;
        a.theta_d_ = theta;
        a.exact_ = false;
        a.name_ = "theta-" + std::to_string(theta);
        return a;
    }

    static AnchorFn signed_square() {
        AnchorFn a;
        a.kind_ = Kind::SignedSquare;
        a.exact_ = true;
        a.name_ = "h1";
        return a;
    }

    static AnchorFn table(std::vector<double> values, std::int64_t i0) {
        if (values.empty()) throw std::invalid_argument("AnchorFn::table: empty table");
        AnchorFn a;
        a.kind_ = Kind::Table;
        a.table_ = std::move(values);
        a.i0_ = i0;
        a.exact_ = false;
        a.name_ = "table";
        return a;
    }

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool exact() const { return exact_; }

    double operator()(std::int64_t i) const {
        switch (kind_) {
            case Kind::Linear:
                if (exact_) return (two_theta_ * i).value() / 2.0;
                return theta_d_ * static_cast<double>(i);
            case Kind::SignedSquare: {
                const double q = static_cast<double>(i) * static_cast<double>(i);
                return i >= 0 ? q : -q;
            }
            case Kind::Table: {
                const std::int64_t k = i - i0_;
                if (k < 0 || k >= static_cast<std::int64_t>(table_.size()))
                    throw std::out_of_range("AnchorFn::table: index outside table");
                return table_[static_cast<std::size_t>(k)];
            }
        }
        throw std::logic_error("AnchorFn: bad kind");
    }

    // 2 h(i) in Z[tau]; only for exact kinds.
    GoldenNumber two_h(std::int64_t i) const {
        if (!exact_) throw std::logic_error("AnchorFn::two_h: anchor is not exact");
        if (kind_ == Kind::Linear) return two_theta_ * i;
        const std::int64_t q = 2 * i * i;
        return GoldenNumber{i >= 0 ? q : -q, 0};
    }

    // sup |(Delta h)_i| over |i| <= half_window (analytic for the built-ins).
    double sup_abs_laplacian(std::int64_t half_window) const {
        switch (kind_) {
            case Kind::Linear:
                return 0.0;
            case Kind::SignedSquare:
                return half_window >= 1 ? 2.0 : 0.0;
            case Kind::Table: {
                double m = 0.0;
                for (std::int64_t i = i0_ + 1; i + 1 < i0_ + static_cast<std::int64_t>(table_.size()); ++i)
                    m = std::max(m, std::abs((*this)(i - 1) - 2 * (*this)(i) + (*this)(i + 1)));
                return m;
            }
        }
        throw std::logic_error("AnchorFn: bad kind");
    }

private:
    Kind kind_ = Kind::Linear;
    GoldenNumber two_theta_{1, 3};
    double theta_d_ = 0.0;
    std::vector<double> table_;
    std::int64_t i0_ = 0;
    bool exact_ = true;
    std::string name_;
};

// Finite window of a configuration, indexed i in [i_min, i_max].
struct Configuration {
    std::int64_t i_min = 0;
    std::vector<double> positions;
    std::optional<AnchorFn> anchor;
    double lambda = 1.0;

    std::int64_t i_max() const { return i_min + static_cast<std::int64_t>(positions.size()) - 1; }
    std::size_t size() const { return positions.size(); }

    double at(std::int64_t i) const {
        if (i < i_min || i > i_max()) throw std::out_of_range("Configuration::at");
        return positions[static_cast<std::size_t>(i - i_min)];
    }
    double& at(std::int64_t i) {
        if (i < i_min || i > i_max()) throw std::out_of_range("Configuration::at");
        return positions[static_cast<std::size_t>(i - i_min)];
    }
};

inline double pair_energy(double xi, double eta, const potential::PotentialSpec& spec = {}) {
    return 0.5 * (xi - eta) * (xi - eta) + potential::V(xi, spec);
}

inline double segment_energy(const Configuration& c, std::int64_t j, std::int64_t k,
                             const potential::PotentialSpec& spec = {}) {
    if (j >= k || j < c.i_min || k > c.i_max())
        throw std::invalid_argument("segment_energy: bad range");
    double e = 0.0;
    for (std::int64_t i = j; i < k; ++i) e += pair_energy(c.at(i), c.at(i + 1), spec);
    return e;
}

// max over i in [i_min + edge_margin, i_max - edge_margin] of
// |2 x_i - x_{i-1} - x_{i+1} + lambda V'(x_i)|.
inline double equilibrium_residual(const Configuration& c, const potential::PotentialSpec& spec,
                                   int edge_margin = 1) {
    if (edge_margin < 1) throw std::invalid_argument("equilibrium_residual: margin must be >= 1");
    if (c.size() < 2 * static_cast<std::size_t>(edge_margin) + 1)
        throw std::invalid_argument("equilibrium_residual: window too small");
    double r = 0.0;
    for (std::int64_t i = c.i_min + edge_margin; i <= c.i_max() - edge_margin; ++i) {
        const double v = 2 * c.at(i) - c.at(i - 1) - c.at(i + 1) + potential::V_prime(c.at(i), spec);
        r = std::max(r, std::abs(v));
    }
    return r;
}

struct RotationEstimate {
    double estimate;      // symmetric two-sided slope
    double error_bound;   // 2 sup|x - h| / window span, when anchored
    double plus;          // x_{i_max} / i_max
    double minus;         // x_{i_min} / i_min
    bool anchored;
    bool anchor_slopes_converge;  // h(i_max)/i_max vs h(i_min)/i_min at this window
};

inline double type_distance(const Configuration& c, const AnchorFn& h) {
    double m = 0.0;
    for (std::int64_t i = c.i_min; i <= c.i_max(); ++i)
        m = std::max(m, std::abs(c.at(i) - h(i)));
    return m;
}

inline RotationEstimate rotation_number_estimate(const Configuration& c) {
    if (c.i_min != -c.i_max() || c.i_max() < 10)
        throw std::invalid_argument("rotation_number_estimate: need symmetric window, |i_max| >= 10");
    RotationEstimate r{};
    const double span = static_cast<double>(c.i_max() - c.i_min);
    r.estimate = (c.at(c.i_max()) - c.at(c.i_min)) / span;
    r.plus = c.at(c.i_max()) / static_cast<double>(c.i_max());
    r.minus = c.at(c.i_min) / static_cast<double>(c.i_min);
    r.anchored = c.anchor.has_value();
    r.anchor_slopes_converge = true;
    if (r.anchored) {
        const AnchorFn& h = *c.anchor;
        r.error_bound = 2.0 * type_distance(c, h) / span;
        // x has a rotation number iff h(i)/i settles: the one-sided slopes
        // must agree with each other and with their half-window values
        // (h_1(i)/i = |i| agrees across sides but keeps growing).
        auto slope_at = [&](std::int64_t i) { return h(i) / static_cast<double>(i); };
        const double hp = slope_at(c.i_max());
        const double hm = slope_at(c.i_min);
        const double hp_half = slope_at(std::max<std::int64_t>(c.i_max() / 2, 1));
        const double hm_half = slope_at(std::min<std::int64_t>(c.i_min / 2, -1));
        const double scale = std::max({1.0, std::abs(hp), std::abs(hm)});
        r.anchor_slopes_converge = std::abs(hp - hm) <= 1e-6 * scale &&
                                   std::abs(hp - hp_half) <= 1e-6 * scale &&
                                   std::abs(hm - hm_half) <= 1e-6 * scale;
    } else {
        r.error_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

struct Improvement {
    double new_position;
    double energy_decrease;
    int improvement_case;  // 1, 2 or 3, matching the non-minimality argument
};

// Single-site competitor at interior site i. Requires x_i to lie in the
// quadratic part of V (distance to the nearest chain point <= 1/4); violations
// are reported, not ignored. Returns the strict decrease of
// H(x_{i-1}, .) + H(., x_{i+1}) when positive.
inline std::optional<Improvement> single_site_improvement(const Configuration& c, std::int64_t i,
                                                          const potential::PotentialSpec& spec = {}) {
    if (i <= c.i_min || i >= c.i_max())
        throw std::invalid_argument("single_site_improvement: site must be interior");
    const double x = c.at(i);
    const chain::AlphaBeta ab = chain::alpha_beta(x);
    const double a = ab.alpha.value(), b = ab.beta.value();
    const double g0 = (2.0 * x <= a + b) ? a : b;
    if (std::abs(x - g0) > 0.25)
        throw std::domain_error("single_site_improvement: site is outside the quadratic part of V");

    const double ubar = 0.5 * (c.at(i - 1) + c.at(i + 1));
    double candidate;
    int which;
    if (ubar - g0 > 0.5) {
        candidate = g0 + 1.0 / 3.0;
        which = 2;
    } else if (ubar - g0 < -0.5) {
        candidate = g0 - 1.0 / 3.0;
        which = 3;
    } else {
        candidate = ubar;
        which = 1;
    }

    const double before = pair_energy(c.at(i - 1), x, spec) + pair_energy(x, c.at(i + 1), spec);
    const double after =
        pair_energy(c.at(i - 1), candidate, spec) + pair_energy(candidate, c.at(i + 1), spec);
    const double decrease = before - after;
    if (decrease > 0.0) return Improvement{candidate, decrease, which};
    return std::nullopt;
}

// Grid oracle for the minimality of the segment (x_j, ..., x_k) with fixed
// endpoints: every interior site is varied over [x_i - 1, x_i + 1] at
// grid_step, then refined at refine_step around the best grid point. Returns
// true iff no competitor beats the current energy by more than 1e-12.
inline bool brute_force_segment_check(const Configuration& c, std::int64_t j, std::int64_t k,
                                      double grid_step, const potential::PotentialSpec& spec = {},
                                      double refine_step = 1e-3) {
    if (j >= k || k - j > 4) throw std::invalid_argument("brute_force_segment_check: need j < k <= j+4");
    if (j < c.i_min || k > c.i_max())
        throw std::invalid_argument("brute_force_segment_check: range outside window");
    if (grid_step <= 0 || refine_step <= 0)
        throw std::invalid_argument("brute_force_segment_check: steps must be positive");

    const int m = static_cast<int>(k - j - 1);
    Configuration work = c;
    const double current = segment_energy(c, j, k, spec);

    std::vector<double> base(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) base[static_cast<std::size_t>(t)] = c.at(j + 1 + t);

    double best = current;
    std::vector<double> best_pt = base;

    auto scan = [&](const std::vector<double>& center, double range, double step) {
        const int half = static_cast<int>(std::round(range / step));
        std::vector<int> idx(static_cast<std::size_t>(m), -half);
        while (true) {
            for (int t = 0; t < m; ++t)
                work.at(j + 1 + t) =
                    center[static_cast<std::size_t>(t)] + idx[static_cast<std::size_t>(t)] * step;
            const double e = segment_energy(work, j, k, spec);
            if (e < best) {
                best = e;
                for (int t = 0; t < m; ++t) best_pt[static_cast<std::size_t>(t)] = work.at(j + 1 + t);
            }
            int t = 0;
            while (t < m && ++idx[static_cast<std::size_t>(t)] > half) {
                idx[static_cast<std::size_t>(t)] = -half;
                ++t;
            }
            if (t == m) break;
        }
    };

    scan(base, 1.0, grid_step);
    scan(best_pt, grid_step, refine_step);
    return !(best < current - 1e-12);
}

}  // namespace fkqc::model
