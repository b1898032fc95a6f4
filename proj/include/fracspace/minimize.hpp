#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracspace/catalog.hpp"
#include "fracspace/exponents.hpp"
#include "fracspace/fft.hpp"
#include "fracspace/grid.hpp"
#include "fracspace/norms.hpp"
#include "fracspace/rng.hpp"

namespace fracspace {

struct MinimizeProblem {
    double alpha = 1.0;
    double q = 4.0;
    GridSpec grid;
    std::optional<GridFunction> weight_b;  // penalty mode when present
    double b_infinity = 0.0;               // limit value of b; requires min b > b_inf > 0
    double tau = 0.0;                      // flow step; 0 selects 0.5/(1+|xi_max|^2)^alpha
    double tol_el = 1e-8;
    long max_iter = 400000;
    bool allow_q2_diagnostic = false;      // q = 2 is a boundary diagnostic, not a theorem case

    void validate() const {
        grid.validate();
        if (!(alpha > 0.0)) throw DomainError("smoothness alpha must be positive");
        const double crit = ExponentBook::critical_exponent(alpha, 2.0, grid.dim);
        if (q == 2.0) {
            if (!allow_q2_diagnostic)
                throw PreconditionError("q = 2 is outside (2, 2*_alpha); enable diagnostic mode");
        } else if (!(q > 2.0 && q < crit)) {
            throw PreconditionError("constraint exponent must satisfy 2 < q < 2*_alpha = " +
                                    std::to_string(crit));
        }
        if (!(tol_el > 0.0)) throw DomainError("tol_el must be positive");
        if (max_iter < 1) throw DomainError("max_iter must be positive");
        if (weight_b) {
            weight_b->validate();
            if (!(weight_b->grid == grid)) throw PreconditionError("weight grid mismatch");
            if (!(b_infinity > 0.0))
                throw PreconditionError("penalty problem needs b_infinity > 0");
            double bmin = inf_exponent;
            for (const cplx& z : weight_b->values) bmin = std::min(bmin, z.real());
            if (!(bmin > b_infinity))
                throw PreconditionError("penalty weight must satisfy b(x) > b_infinity pointwise");
        }
    }
};

struct MinimizerResult {
    GridFunction u;
    double energy = 0.0;       // kappa-hat = ||u||_{H^alpha}^2 at the constraint
    double lambda = 0.0;       // Lagrange multiplier, read off the normalization
    double el_residual = 0.0;  // ||Lambda^alpha u - lambda b |u|^{q-2} u||_2 / ||Lambda^alpha u||_2
    long iterations = 0;
    std::vector<double> energy_trace;
    bool converged = false;
};

// Default seed: a gaussian bump at the box center plus a 1% deterministic
// pseudo-random perturbation to break symmetry degeneracies reproducibly.
inline GridFunction default_seed(const GridSpec& grid) {
    double min_len = grid.length[0];
    for (int a = 1; a < grid.dim; ++a) min_len = std::min(min_len, grid.length[a]);
    GridFunction seed = catalog_function(CatalogName::gaussian_bump, {min_len / 12.0}, grid);
    GaussianStream rng(0x5eedf00dULL);
    double peak = max_abs(seed);
    for (cplx& z : seed.values) z += 0.01 * peak * rng.gaussian();
    settle_kind(seed);
    return seed;
}

namespace detail {

struct FlowEngine {
    const MinimizeProblem& prob;
    FrequencyGrid freq;
    std::vector<double> lamb;  // (1+|xi|^2)^alpha per mode
    std::vector<double> b;     // constraint weight (1 when absent)
    double vol, cellvol;

    explicit FlowEngine(const MinimizeProblem& p)
        : prob(p), freq(p.grid), vol(p.grid.volume()), cellvol(p.grid.cell_volume()) {
        const std::size_t n = p.grid.size();
        lamb.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            lamb[i] = std::pow(1.0 + freq.norm_sq(i), p.alpha);
        b.assign(n, 1.0);
        if (p.weight_b)
            for (std::size_t i = 0; i < n; ++i) b[i] = p.weight_b->values[i].real();
    }

    double step_size() const {
        if (prob.tau > 0.0) return prob.tau;
        double lmax = 0.0;
        for (double l : lamb) lmax = std::max(lmax, l);
        return 0.5 / lmax;
    }

    // F(u) = integral of b |u|^q.
    double constraint(const GridFunction& u) const {
        std::vector<double> buf(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            buf[i] = b[i] * std::pow(std::abs(u.values[i]), prob.q);
        return cellvol * pairwise_sum(buf);
    }

    // E(u) = ||u||_{H^alpha}^2 via the spectral sum; also returns Lambda^alpha u.
    double energy(const GridFunction& uhat, GridFunction& lam_u) const {
        std::vector<double> buf(uhat.size());
        GridFunction ghat = uhat;
        for (std::size_t i = 0; i < uhat.size(); ++i) {
            buf[i] = lamb[i] * std::norm(uhat.values[i]);
            ghat.values[i] *= lamb[i];
        }
        lam_u = inverse_transform(ghat);
        return vol * pairwise_sum(buf);
    }

    MinimizerResult run(GridFunction u) const {
        u.validate();
        if (!(u.grid == prob.grid)) throw PreconditionError("seed grid mismatch");
        if (max_abs(u) == 0.0) throw DomainError("seed must be nonzero");

        const double tau = step_size();
        MinimizerResult res;

        // Project the seed onto {F = 1}.
        double F = constraint(u);
        if (F <= 0.0) throw DomainError("seed has vanishing constraint functional");
        double scale = std::pow(F, -1.0 / prob.q);
        for (cplx& z : u.values) z *= scale;

        int rises = 0;
        double prev_energy = inf_exponent;
        for (long it = 1; it <= prob.max_iter; ++it) {
            GridFunction uhat = forward_transform(u);
            GridFunction lam_u;
            const double E = energy(uhat, lam_u);
            const double lambda = E;  // F(u) = 1 after each projection

            // Euler-Lagrange residual of Lambda^alpha u = lambda b |u|^{q-2} u.
            GridFunction grad = GridFunction::zeros(prob.grid, Kind::complex);
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double mod = std::abs(u.values[i]);
                const cplx nl = (prob.q == 2.0)
                                    ? u.values[i]
                                    : std::pow(mod, prob.q - 2.0) * u.values[i];
                grad.values[i] = lam_u.values[i] - lambda * b[i] * nl;
            }
            settle_kind(grad);
            const double g2 = lp_norm(grad, 2.0);
            const double l2 = lp_norm(lam_u, 2.0);
            res.el_residual = (l2 > 0.0) ? g2 / l2 : 0.0;
            res.energy = E;
            res.lambda = lambda;
            res.iterations = it;
            res.energy_trace.push_back(E);

            if (!std::isfinite(E))
                throw NumericalError("flow energy diverged; reduce the step tau");
            if (E > prev_energy * (1.0 + 1e-12)) {
                if (++rises >= 2 || E > 10.0 * prev_energy)
                    throw NumericalError(
                        "flow energy increased twice consecutively; reduce the step tau");
            } else {
                rises = 0;
            }
            prev_energy = E;

            if (res.el_residual <= prob.tol_el) {
                res.converged = true;
                break;
            }

            // Descent step on the constrained quotient, then multiplicative
            // projection back onto {F = 1}.
            for (std::size_t i = 0; i < u.size(); ++i) u.values[i] -= tau * grad.values[i];
            F = constraint(u);
            if (!(F > 0.0) || !std::isfinite(F))
                throw NumericalError("flow left the constraint manifold; reduce the step tau");
            scale = std::pow(F, -1.0 / prob.q);
            for (cplx& z : u.values) z *= scale;
            if (!std::isfinite(max_abs(u)))
                throw NumericalError("flow state diverged; reduce the step tau");
        }

        settle_kind(u);
        res.u = u;
        return res;
    }
};

} // namespace detail

// Isoperimetric ground state: minimize ||u||^2_{H^alpha} on {||u||_q = 1}.
inline MinimizerResult solve_kappa(const MinimizeProblem& problem, const GridFunction& seed) {
    if (problem.weight_b)
        throw PreconditionError("solve_kappa takes an unweighted problem; use solve_penalty");
    problem.validate();
    return detail::FlowEngine(problem).run(seed);
}

// Penalty-weight problem: minimize ||u||^2_{H^alpha} on {int b |u|^q = 1}.
// When a companion kappa result is supplied the strict improvement
// kappa-tilde < kappa is checked and reported.
struct PenaltyResult : MinimizerResult {
    bool improves_on_kappa = false;
    double kappa_reference = 0.0;
};

inline PenaltyResult solve_penalty(const MinimizeProblem& problem, const GridFunction& seed,
                                   const MinimizerResult* kappa_companion = nullptr) {
    if (!problem.weight_b)
        throw PreconditionError("solve_penalty needs a weight function b");
    problem.validate();
    MinimizerResult base = detail::FlowEngine(problem).run(seed);
    PenaltyResult res;
    static_cast<MinimizerResult&>(res) = std::move(base);
    if (kappa_companion) {
        res.kappa_reference = kappa_companion->energy;
        res.improves_on_kappa = res.energy < kappa_companion->energy;
    }
    return res;
}

// Distance of a converged minimizer from radial symmetry: recenter at the
// L^2 barycenter (circular mean per axis), average over classes of grid
// points with equal distance from the center, and return the relative L^2
// defect.
inline double symmetry_diagnostic(const MinimizerResult& result, double tol_el = 1e-6) {
    if (!result.converged || result.el_residual > tol_el)
        throw PreconditionError("symmetry diagnostic needs a converged minimizer");
    const GridFunction& u = result.u;
    const GridSpec& g = u.grid;

    // Circular mean of the L^2 mass per axis.
    std::array<double, 3> center{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
        cplx z{0.0, 0.0};
        for (std::size_t i = 0; i < u.size(); ++i) {
            const auto c = g.coords(i);
            const double angle = two_pi * g.coordinate(a, c[a]) / g.length[a];
            z += std::norm(u.values[i]) * std::polar(1.0, angle);
        }
        double angle = std::arg(z);
        if (angle < 0.0) angle += two_pi;
        center[a] = g.length[a] * angle / two_pi;
    }

    // Move the barycenter to the origin (exact for band-limited samples).
    std::array<double, 3> disp{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) disp[a] = -center[a];
    GridFunction v = fractional_shift(u, disp);

    // Orbit averages over classes of equal min-image radius from the origin.
    std::map<double, std::pair<cplx, std::size_t>> classes;
    std::vector<double> r2(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = g.coords(i);
        double rr = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double d = g.coordinate(a, c[a]);
            if (d > 0.5 * g.length[a]) d -= g.length[a];
            rr += d * d;
        }
        r2[i] = rr;
        auto& slot = classes[rr];
        slot.first += v.values[i];
        slot.second += 1;
    }

    std::vector<double> diff(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& slot = classes[r2[i]];
        const cplx mean = slot.first / static_cast<double>(slot.second);
        diff[i] = std::norm(v.values[i] - mean);
    }
    const double num = std::sqrt(g.cell_volume() * pairwise_sum(diff));
    const double den = lp_norm(v, 2.0);
    return den > 0.0 ? num / den : 0.0;
}

} // namespace fracspace
