#pragma once

// Branched-manifold construction of minimal configurations. The level-l
// manifold is two circles of circumference tau^{2l+1} (type A) and tau^{2l+2}
// (type B) tangent at R_l; the covering pi_l sends x to the arc x - alpha_l(x)
// on the circle of its interval type, and kappa_l collapses level l+1 onto
// level l along the block decompositions A_{l+1} = A_l B_l, B_{l+1} = A_l B_l B_l.
// V descends to the circles by S-equivariance. Each circle receives
// N_{l,i} - 1 free atoms ((N_{l,1}, N_{l,2}) = (2 f_{2l-2}, 2 f_{2l-1}));
// their arcs are chosen to minimize the cyclic segment energy, and the lift
// of {R_l, free atoms} back to the line, ordered increasingly with
// theta_{l,0} = 0, is the level-l configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "fkqc/chain.hpp"
#include "fkqc/fibword.hpp"
#include "fkqc/golden.hpp"
#include "fkqc/model.hpp"
#include "fkqc/potential.hpp"

namespace fkqc::minimal {

// A point on the level-l manifold: circle 1 or 2 plus an oriented arc from
// R_l. Arc 0 on either circle is R_l (the circles are tangent there).
struct CirclePoint {
    int circle;
    double arc;
};

struct CirclePointExact {
    int circle;
    GoldenNumber arc;
};

inline bool same_point(const CirclePoint& p, const CirclePoint& q, double tol = 0.0) {
    if (p.arc <= tol && q.arc <= tol) return true;  // both are R_l
    return p.circle == q.circle && std::abs(p.arc - q.arc) <= tol;
}

inline bool same_point(const CirclePointExact& p, const CirclePointExact& q) {
    if (p.arc.is_zero() && q.arc.is_zero()) return true;
    return p.circle == q.circle && p.arc == q.arc;
}

struct LevelGeometry {
    int level = 1;
    GoldenNumber circumference_exact[2];
    double circumference[2];
    std::int64_t atoms[2];                // N_{l,1}, N_{l,2}
    std::vector<double> free_points[2];   // N_i - 1 strictly increasing arcs in (0, c_i)
};

// Circumferences (tau^{2l+1}, tau^{2l+2}) and atom counts N_{l+1} = M N_l
// from N_1 = (2, 2); equivalently (2 f_{2l-2}, 2 f_{2l-1}).
inline LevelGeometry level_geometry(int l) {
    if (l < 1) throw std::invalid_argument("level_geometry: level must be >= 1");
    if (l > 12) throw std::out_of_range("level_geometry: level too large");
    LevelGeometry g;
    g.level = l;
    g.circumference_exact[0] = golden_pow(2 * l + 1);
    g.circumference_exact[1] = golden_pow(2 * l + 2);
    g.circumference[0] = g.circumference_exact[0].value();
    g.circumference[1] = g.circumference_exact[1].value();
    std::int64_t n1 = 2, n2 = 2;
    for (int k = 1; k < l; ++k) {
        const std::int64_t m1 = n1 + n2;
        const std::int64_t m2 = n1 + 2 * n2;
        n1 = m1;
        n2 = m2;
    }
    g.atoms[0] = n1;
    g.atoms[1] = n2;
    return g;
}

// pi_l(x): the circle of the interval type at x, at arc x - alpha_l(x).
inline CirclePoint project(const chain::SuperWindow& sw, double x) {
    const std::size_t k = sw.locate(x);
    const int circle = sw.tags[k] == fibword::BlockType::A ? 1 : 2;
    return {circle, x - sw.starts_d[k]};
}

inline CirclePoint project(int l, double x) {
    const double pad = golden_pow(2 * l + 2).value() + 1.0;
    return project(chain::SuperWindow::covering(l, x - pad, x + 1.0), x);
}

inline CirclePointExact project_exact(const chain::SuperWindow& sw, const GoldenNumber& x) {
    const std::size_t k = sw.locate(x);
    const int circle = sw.tags[k] == fibword::BlockType::A ? 1 : 2;
    return {circle, x - sw.starts[k]};
}

inline CirclePointExact project_exact(int l, const GoldenNumber& x) {
    const double pad = golden_pow(2 * l + 2).value() + 1.0;
    const double xd = x.value();
    return project_exact(chain::SuperWindow::covering(l, xd - pad, xd + 1.0), x);
}

// kappa_l: a point of the level-(l+1) manifold lands in one of the level-l
// blocks of its circle's word decomposition.
inline CirclePointExact collapse_exact(int l, const CirclePointExact& p) {
    if (l < 1) throw std::invalid_argument("collapse: level must be >= 1");
    if (p.circle != 1 && p.circle != 2) throw std::invalid_argument("collapse: circle must be 1 or 2");
    const GoldenNumber lenA = golden_pow(2 * l + 1);
    const GoldenNumber lenB = golden_pow(2 * l + 2);
    const GoldenNumber hi = p.circle == 1 ? golden_pow(2 * l + 3) : golden_pow(2 * l + 4);
    if (p.arc.sign() < 0 || !(p.arc < hi)) throw std::invalid_argument("collapse: arc outside circle");
    // A_{l+1} = A_l B_l;  B_{l+1} = A_l B_l B_l
    if (p.arc < lenA) return {1, p.arc};
    if (p.circle == 1 || p.arc < lenA + lenB) return {2, p.arc - lenA};
    return {2, p.arc - lenA - lenB};
}

inline CirclePoint collapse(int l, const CirclePoint& p) {
    if (l < 1) throw std::invalid_argument("collapse: level must be >= 1");
    if (p.circle != 1 && p.circle != 2) throw std::invalid_argument("collapse: circle must be 1 or 2");
    const double lenA = golden_pow(2 * l + 1).value();
    const double lenB = golden_pow(2 * l + 2).value();
    const double hi = (p.circle == 1 ? golden_pow(2 * l + 3) : golden_pow(2 * l + 4)).value();
    if (p.arc < 0 || p.arc >= hi) throw std::invalid_argument("collapse: arc outside circle");
    if (p.arc < lenA) return {1, p.arc};
    if (p.circle == 1 || p.arc < lenA + lenB) return {2, p.arc - lenA};
    return {2, p.arc - lenA - lenB};
}

// V on the manifold via the canonical preimage: block 0 (an A block) starts
// at 0 and block 1 (a B block) at tau^{2l+1}, so circle-1 arcs lift to arc
// and circle-2 arcs to tau^{2l+1} + arc. Well-defined by S-equivariance.
inline double potential_on_level(int l, const CirclePoint& p,
                                 const potential::PotentialSpec& spec = {}) {
    if (l < 1) throw std::invalid_argument("potential_on_level: level must be >= 1");
    const double x = p.circle == 1 ? p.arc : golden_pow(2 * l + 1).value() + p.arc;
    return potential::V(x, spec);
}

struct OptimizeSettings {
    std::uint64_t seed = 7;
    int restarts = 20;
    int cd_sweeps = 40;       // coordinate-descent sweeps before polishing
    int scan_points = 48;     // slice scan resolution for the line search bracket
    double coord_tol = 1e-11;
    double grad_tol = 1e-9;   // stationarity target after polish
    int polish_iters = 80;
    double jitter = 0.25;     // restart jitter, fraction of the mean gap
    double lambda = 1.0;
};

struct CircleOptimum {
    std::vector<double> arcs;
    double energy = 0.0;
    double uniform_energy = 0.0;
    double grad_norm = 0.0;
    int distinct_minima = 0;
    bool converged = false;
};

struct LevelOptimum {
    LevelGeometry geometry;
    CircleOptimum circle[2];
};

namespace detail_min {

// Cyclic tour energy on one circle: atoms (R=0, b_1, ..., b_{N-1}, R=c),
// energy = sum of spring halves plus V-hat at every left endpoint.
class CircleProblem {
public:
    CircleProblem(int level, int circle, double circumference, std::int64_t atoms, double lambda,
                  const potential::SubstrateCache* cache)
        : offset_(circle == 1 ? 0.0 : golden_pow(2 * level + 1).value()),
          c_(circumference),
          n_atoms_(atoms),
          spec_{lambda, cache} {}

    double c() const { return c_; }
    std::int64_t atoms() const { return n_atoms_; }

    double vhat(double arc) const { return potential::V(offset_ + arc, spec_); }
    double vhat_prime(double arc) const { return potential::V_prime(offset_ + arc, spec_); }
    double vhat_second(double arc) const {
        const double off = potential::detail_pot::branch_offset(offset_ + arc, spec_);
        const potential::ZetaSecond zs = potential::zeta_second(off);
        const double v = zs.defined ? zs.value : 0.5 * (zs.left + zs.right);
        return spec_.lambda * v;
    }

    double energy(const std::vector<double>& arcs) const {
        double e = 0.5 * arcs.front() * arcs.front() + vhat(0.0);
        for (std::size_t j = 0; j + 1 < arcs.size(); ++j) {
            const double d = arcs[j + 1] - arcs[j];
            e += 0.5 * d * d + vhat(arcs[j]);
        }
        const double dlast = c_ - arcs.back();
        e += 0.5 * dlast * dlast + vhat(arcs.back());
        return e;
    }

    // gradient of the energy in the free arcs
    void gradient(const std::vector<double>& arcs, std::vector<double>& grad) const {
        const std::size_t m = arcs.size();
        grad.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double prev = j == 0 ? 0.0 : arcs[j - 1];
            const double next = j + 1 == m ? c_ : arcs[j + 1];
            grad[j] = 2.0 * arcs[j] - prev - next + vhat_prime(arcs[j]);
        }
    }

private:
    double offset_;
    double c_;
    std::int64_t n_atoms_;
    potential::PotentialSpec spec_;
};

inline double golden_section(const CircleProblem& pb, double prev, double next, double lo,
                             double hi) {
    auto slice = [&](double t) {
        return 0.5 * (t - prev) * (t - prev) + 0.5 * (next - t) * (next - t) + pb.vhat(t);
    };
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = slice(x1), f2 = slice(x2);
    for (int it = 0; it < 80 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = slice(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = slice(x2);
        }
    }
    return 0.5 * (a + b);
}

// One cyclic coordinate-descent sweep; returns the largest coordinate move.
inline double cd_sweep(const CircleProblem& pb, std::vector<double>& arcs, int scan_points) {
    const std::size_t m = arcs.size();
    double max_move = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double prev = j == 0 ? 0.0 : arcs[j - 1];
        const double next = j + 1 == m ? pb.c() : arcs[j + 1];
        const double margin = 1e-9 * (next - prev);
        const double lo = prev + margin, hi = next - margin;
        if (!(lo < hi)) continue;
        auto slice = [&](double t) {
            return 0.5 * (t - prev) * (t - prev) + 0.5 * (next - t) * (next - t) + pb.vhat(t);
        };
        // bracket the slice minimum on a coarse grid, then refine
        double best_t = arcs[j], best_f = slice(arcs[j]);
        for (int k = 0; k <= scan_points; ++k) {
            const double t = lo + (hi - lo) * static_cast<double>(k) / scan_points;
            const double f = slice(t);
            if (f < best_f) {
                best_f = f;
                best_t = t;
            }
        }
        const double h = (hi - lo) / scan_points;
        const double t =
            golden_section(pb, prev, next, std::max(lo, best_t - h), std::min(hi, best_t + h));
        if (slice(t) <= best_f) best_t = t;
        max_move = std::max(max_move, std::abs(best_t - arcs[j]));
        arcs[j] = best_t;
    }
    return max_move;
}

// Damped Newton polish on the smooth pieces; the tridiagonal Jacobian has
// diagonal 2 + Vhat'' and off-diagonal -1. Steps are accepted only when they
// keep the ordering and decrease the energy.
inline void newton_polish(const CircleProblem& pb, std::vector<double>& arcs,
                          const OptimizeSettings& s) {
    const std::size_t m = arcs.size();
    std::vector<double> grad, diag(m), step(m), work(m), cand(m);
    double mu = 0.0;
    double energy = pb.energy(arcs);
    for (int it = 0; it < s.polish_iters; ++it) {
        pb.gradient(arcs, grad);
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax < s.grad_tol) return;

        for (std::size_t j = 0; j < m; ++j) diag[j] = 2.0 + pb.vhat_second(arcs[j]) + mu;
        // Thomas elimination with -1 off-diagonals; bail to damping on tiny pivots
        bool ok = true;
        work = diag;
        for (std::size_t j = 0; j < m; ++j) step[j] = -grad[j];
        for (std::size_t j = 1; j < m && ok; ++j) {
            if (std::abs(work[j - 1]) < 1e-8) ok = false;
            const double w = -1.0 / work[j - 1];
            work[j] -= w * -1.0;
            step[j] -= w * step[j - 1];
        }
        if (ok && std::abs(work[m - 1]) < 1e-8) ok = false;
        if (ok) {
            step[m - 1] /= work[m - 1];
            for (std::size_t j = m - 1; j-- > 0;) step[j] = (step[j] + step[j + 1]) / work[j];
        }
        bool accepted = false;
        if (ok) {
            double scale = 1.0;
            for (int ls = 0; ls < 30; ++ls, scale *= 0.5) {
                bool ordered = true;
                double prev = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    cand[j] = arcs[j] + scale * step[j];
                    if (cand[j] <= prev || cand[j] >= pb.c()) {
                        ordered = false;
                        break;
                    }
                    prev = cand[j];
                }
                if (!ordered) continue;
                const double e = pb.energy(cand);
                if (e <= energy) {
                    arcs = cand;
                    energy = e;
                    accepted = true;
                    break;
                }
            }
        }
        if (accepted) {
            mu *= 0.25;
        } else {
            mu = mu * 4.0 + 1.0;
            if (mu > 1e9) break;
        }
    }

    // Energy comparisons bottom out at the ulp of the total energy while the
    // gradient can still be reduced; finish with full damped steps accepted
    // on gradient-norm decrease alone.
    std::vector<double> gcand;
    for (int it = 0; it < 12; ++it) {
        pb.gradient(arcs, grad);
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax < 1e-12) return;
        for (std::size_t j = 0; j < m; ++j) diag[j] = std::max(2.0 + pb.vhat_second(arcs[j]), 0.5);
        work = diag;
        for (std::size_t j = 0; j < m; ++j) step[j] = -grad[j];
        for (std::size_t j = 1; j < m; ++j) {
            const double w = -1.0 / work[j - 1];
            work[j] -= w * -1.0;
            step[j] -= w * step[j - 1];
        }
        step[m - 1] /= work[m - 1];
        for (std::size_t j = m - 1; j-- > 0;) step[j] = (step[j] + step[j + 1]) / work[j];
        bool improved = false;
        double scale = 1.0;
        for (int ls = 0; ls < 8 && !improved; ++ls, scale *= 0.5) {
            bool ordered = true;
            double prev = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                cand[j] = arcs[j] + scale * step[j];
                if (cand[j] <= prev || cand[j] >= pb.c()) {
                    ordered = false;
                    break;
                }
                prev = cand[j];
            }
            if (!ordered) continue;
            pb.gradient(cand, gcand);
            double gnew = 0.0;
            for (double g : gcand) gnew = std::max(gnew, std::abs(g));
            if (gnew < gmax) {
                arcs = cand;
                improved = true;
            }
        }
        if (!improved) return;
    }
}

inline CircleOptimum optimize_circle(const CircleProblem& pb, const OptimizeSettings& s,
                                     std::uint64_t stream) {
    const std::size_t m = static_cast<std::size_t>(pb.atoms() - 1);
    const double mean_gap = pb.c() / static_cast<double>(pb.atoms());

    std::vector<double> uniform(m);
    for (std::size_t j = 0; j < m; ++j) uniform[j] = mean_gap * static_cast<double>(j + 1);

    CircleOptimum out;
    out.uniform_energy = pb.energy(uniform);

    std::mt19937_64 rng(s.seed * 1000003ull + stream);
    std::uniform_real_distribution<double> noise(-s.jitter * mean_gap, s.jitter * mean_gap);

    std::vector<double> energies;
    std::vector<double> best;
    double best_e = 0.0;
    double best_g = 0.0;
    bool best_conv = false;

    for (int r = 0; r < std::max(1, s.restarts); ++r) {
        std::vector<double> arcs = uniform;
        if (r > 0) {
            for (double& a : arcs) a += noise(rng);
            std::sort(arcs.begin(), arcs.end());
            const double sep = 1e-3 * mean_gap;
            double prev = 0.0;
            for (double& a : arcs) {
                a = std::clamp(a, prev + sep, pb.c() - sep);
                prev = a;
            }
            for (std::size_t j = m; j-- > 0;) {
                const double next = (j + 1 == m) ? pb.c() : arcs[j + 1];
                arcs[j] = std::min(arcs[j], next - sep);
            }
        }
        bool conv = false;
        for (int sweep = 0; sweep < s.cd_sweeps; ++sweep) {
            if (cd_sweep(pb, arcs, s.scan_points) < s.coord_tol) {
                conv = true;
                break;
            }
        }
        newton_polish(pb, arcs, s);
        std::vector<double> grad;
        pb.gradient(arcs, grad);
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        const double e = pb.energy(arcs);
        energies.push_back(e);
        if (best.empty() || e < best_e) {
            best = arcs;
            best_e = e;
            best_g = gmax;
            best_conv = conv || gmax < s.grad_tol;
        }
    }

    std::sort(energies.begin(), energies.end());
    int distinct = energies.empty() ? 0 : 1;
    for (std::size_t k = 1; k < energies.size(); ++k)
        if (energies[k] - energies[k - 1] > 1e-9) ++distinct;

    out.arcs = std::move(best);
    out.energy = best_e;
    out.grad_norm = best_g;
    out.distinct_minima = distinct;
    out.converged = best_conv;
    return out;
}

}  // namespace detail_min

// Per-circle constrained minimization; the two circles are independent.
inline LevelOptimum optimize_level(int l, const OptimizeSettings& settings = {}) {
    LevelOptimum out;
    out.geometry = level_geometry(l);
    const double hi = golden_pow(2 * l + 1).value() + golden_pow(2 * l + 2).value();
    static thread_local std::vector<std::pair<double, potential::SubstrateCache>> cache_pool;
    potential::SubstrateCache* cache = nullptr;
    for (auto& [h, c] : cache_pool)
        if (h >= hi) cache = &c;
    if (cache == nullptr) {
        cache_pool.emplace_back(hi, potential::SubstrateCache::covering(-2.0, hi + 2.0));
        cache = &cache_pool.back().second;
    }
    for (int circle = 1; circle <= 2; ++circle) {
        detail_min::CircleProblem pb(l, circle, out.geometry.circumference[circle - 1],
                                     out.geometry.atoms[circle - 1], settings.lambda, cache);
        const auto opt =
            detail_min::optimize_circle(pb, settings, static_cast<std::uint64_t>(l * 2 + circle));
        out.circle[circle - 1] = opt;
        out.geometry.free_points[circle - 1] = out.circle[circle - 1].arcs;
    }
    return out;
}

// The lifted configuration: all preimages of R_l and the free atoms over a
// coordinate range, increasing, with theta_0 = 0 at the block-0 boundary.
struct LevelConfig {
    int level = 1;
    std::int64_t n_min = 0;
    std::vector<double> theta;
    LevelGeometry geometry;
    std::vector<GoldenNumber> block_starts_exact;  // covered block boundaries
    std::vector<double> block_starts;
    std::vector<fibword::BlockType> block_tags;

    std::int64_t n_max() const { return n_min + static_cast<std::int64_t>(theta.size()) - 1; }
    double at(std::int64_t n) const {
        if (n < n_min || n > n_max()) throw std::out_of_range("LevelConfig::at");
        return theta[static_cast<std::size_t>(n - n_min)];
    }

    // symmetric window view for the model diagnostics
    model::Configuration as_configuration(std::int64_t half_window, double lambda = 1.0) const {
        if (n_min > -half_window || n_max() < half_window)
            throw std::out_of_range("LevelConfig::as_configuration: window not covered");
        model::Configuration c;
        c.i_min = -half_window;
        c.lambda = lambda;
        c.positions.reserve(static_cast<std::size_t>(2 * half_window + 1));
        for (std::int64_t n = -half_window; n <= half_window; ++n) c.positions.push_back(at(n));
        return c;
    }
};

inline LevelConfig lift(const LevelGeometry& geom, double lo, double hi) {
    if (!(lo < 0.0 && hi > 0.0)) throw std::invalid_argument("lift: range must straddle 0");
    const chain::SuperWindow sw = chain::SuperWindow::covering(geom.level, lo, hi);
    LevelConfig cfg;
    cfg.level = geom.level;
    cfg.geometry = geom;
    cfg.block_starts_exact = sw.starts;
    cfg.block_starts = sw.starts_d;
    cfg.block_tags = sw.tags;

    std::vector<double> atoms;
    std::size_t zero_pos = 0;
    for (std::size_t k = 0; k < sw.tags.size(); ++k) {
        const double s = sw.starts_d[k];
        if (sw.starts[k].is_zero()) zero_pos = atoms.size();
        atoms.push_back(s);
        const int circle = sw.tags[k] == fibword::BlockType::A ? 0 : 1;
        for (double arc : geom.free_points[circle]) atoms.push_back(s + arc);
    }
    cfg.theta = std::move(atoms);
    cfg.n_min = -static_cast<std::int64_t>(zero_pos);
    return cfg;
}

// Exact rotation number 1/(freq_0(A_l) N_{l,1} + freq_0(B_l) N_{l,2})
//   = sqrt5 tau^{2l+2} / (N_{l,1} + N_{l,2} tau),
// which collapses to (3 tau + 1)/2 for every level.
inline GoldenRational rotation_number_level(int l) {
    const LevelGeometry g = level_geometry(l);
    const GoldenNumber num = GoldenNumber::sqrt5() * golden_pow(2 * l + 2);
    const GoldenNumber den{g.atoms[0], g.atoms[1]};
    return golden_div(num, den);
}

struct CombinatoricsReport {
    std::int64_t min_atoms[2] = {0, 0};
    std::int64_t max_atoms[2] = {0, 0};
    int full_blocks[2] = {0, 0};
    double max_gap = 0.0;
    double gap_bound = 0.0;  // 2 tau^{2l+3}
    bool spread_pass = false;
    bool gap_pass = false;
};

// Counts atoms per full super-interval of each type; the spread per type must
// not exceed 2, and gaps must stay below 2 tau^{2l+3}.
inline CombinatoricsReport combinatorics_certificate(const LevelConfig& cfg, int min_blocks = 10) {
    CombinatoricsReport rep;
    if (cfg.theta.size() < 2) throw std::invalid_argument("combinatorics_certificate: empty config");
    const double theta_lo = cfg.theta.front(), theta_hi = cfg.theta.back();
    for (std::size_t k = 0; k < cfg.block_tags.size(); ++k) {
        const double s0 = cfg.block_starts[k], s1 = cfg.block_starts[k + 1];
        if (s0 < theta_lo || s1 > theta_hi) continue;
        const auto lo = std::lower_bound(cfg.theta.begin(), cfg.theta.end(), s0);
        const auto hi = std::lower_bound(cfg.theta.begin(), cfg.theta.end(), s1);
        const std::int64_t count = hi - lo;
        const int t = cfg.block_tags[k] == fibword::BlockType::A ? 0 : 1;
        if (rep.full_blocks[t] == 0) {
            rep.min_atoms[t] = rep.max_atoms[t] = count;
        } else {
            rep.min_atoms[t] = std::min(rep.min_atoms[t], count);
            rep.max_atoms[t] = std::max(rep.max_atoms[t], count);
        }
        ++rep.full_blocks[t];
    }
    if (rep.full_blocks[0] < min_blocks || rep.full_blocks[1] < min_blocks)
        throw std::invalid_argument("combinatorics_certificate: insufficient window");
    for (std::size_t k = 0; k + 1 < cfg.theta.size(); ++k)
        rep.max_gap = std::max(rep.max_gap, cfg.theta[k + 1] - cfg.theta[k]);
    rep.gap_bound = 2.0 * golden_pow(2 * cfg.level + 3).value();
    rep.spread_pass = (rep.max_atoms[0] - rep.min_atoms[0] <= 2) &&
                      (rep.max_atoms[1] - rep.min_atoms[1] <= 2);
    rep.gap_pass = rep.max_gap <= rep.gap_bound;
    return rep;
}

// Programmatic sandwich bound for the slope theta_n / n between indices
// n_lo < 0 < n_hi: complete windings of each circle within the span give
//   (n1 c1 + n2 c2) / (n1 N1 + n2 N2 + 2 N2) <= slope
//   slope <= (n1 c1 + n2 c2 + 2 c2) / (number of atoms spanned).
struct SandwichBound {
    double lo = 0.0, hi = 0.0;
    std::int64_t windings[2] = {0, 0};
};

inline SandwichBound rotation_sandwich(const LevelConfig& cfg, std::int64_t n_lo, std::int64_t n_hi) {
    if (n_lo >= n_hi) throw std::invalid_argument("rotation_sandwich: empty index range");
    const double xlo = cfg.at(n_lo), xhi = cfg.at(n_hi);
    SandwichBound b;
    for (std::size_t k = 0; k < cfg.block_tags.size(); ++k) {
        if (cfg.block_starts[k] >= xlo && cfg.block_starts[k + 1] <= xhi)
            ++b.windings[cfg.block_tags[k] == fibword::BlockType::A ? 0 : 1];
    }
    const double c1 = cfg.geometry.circumference[0], c2 = cfg.geometry.circumference[1];
    const double n1 = static_cast<double>(b.windings[0]), n2 = static_cast<double>(b.windings[1]);
    const double N1 = static_cast<double>(cfg.geometry.atoms[0]);
    const double N2 = static_cast<double>(cfg.geometry.atoms[1]);
    b.lo = (n1 * c1 + n2 * c2) / (n1 * N1 + n2 * N2 + 2.0 * N2);
    b.hi = (n1 * c1 + n2 * c2 + 2.0 * c2) / static_cast<double>(n_hi - n_lo);
    return b;
}

struct StabilizeResult {
    std::vector<LevelConfig> levels;   // l = 1..l_max
    std::vector<double> sup_diffs;     // sup_n |theta_{l+1,n} - theta_{l,n}| over the window
};

// Desk-scale surrogate for the accumulation step: build every level on a
// common index window and report the per-level sup differences.
inline StabilizeResult stabilize_across_levels(int l_max, std::int64_t half_window,
                                               const OptimizeSettings& settings = {}) {
    if (l_max < 2) throw std::invalid_argument("stabilize_across_levels: l_max must be >= 2");
    StabilizeResult out;
    for (int l = 1; l <= l_max; ++l) {
        const LevelOptimum opt = optimize_level(l, settings);
        double span = 3.2 * static_cast<double>(half_window) + 2.0 * golden_pow(2 * l + 2).value() + 8.0;
        LevelConfig cfg = lift(opt.geometry, -span, span);
        while (cfg.n_min > -half_window || cfg.n_max() < half_window) {
            span *= 1.5;
            cfg = lift(opt.geometry, -span, span);
        }
        out.levels.push_back(std::move(cfg));
    }
    for (int l = 0; l + 1 < l_max; ++l) {
        double d = 0.0;
        for (std::int64_t n = -half_window; n <= half_window; ++n)
            d = std::max(d, std::abs(out.levels[static_cast<std::size_t>(l + 1)].at(n) -
                                     out.levels[static_cast<std::size_t>(l)].at(n)));
        out.sup_diffs.push_back(d);
    }
    return out;
}

}  // namespace fkqc::minimal
